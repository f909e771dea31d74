#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "eemimo/atas.hpp"
#include "eemimo/solver.hpp"
#include "eemimo/types.hpp"

namespace eemimo {

enum class Scenario {
  DistanceSweep,
  RateConstraintSweep,
  AntennaSweep,
  UserSweep,
  Single,
};

const char* to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

/// Flat key=value experiment description. Defaults reproduce the reference
/// simulation setup: 5 MHz bandwidth, -110 dBm noise, 83 W dynamic and
/// 45.5 W static power, PA efficiency 0.38, 46 dBm power cap, pathloss
/// 128.1 + 37.6 log10(d).
struct ExperimentConfig {
  Scenario scenario = Scenario::Single;
  std::vector<double> sweep;  // strictly increasing sweep values
  int m = 4;
  int n = 2;
  int k = 2;
  double distance_km = 1.0;
  double w_hz = 5e6;
  double noise_dbm = -110.0;
  double eta = 0.38;
  double p_dyn_w = 83.0;
  double p_sta_w = 45.5;
  double p_max_dbm = 46.0;
  double c_min_bps_hz = 0.0;
  std::vector<std::string> schemes = {"ee-exh-as", "ee-norm-as", "ee-wo-as",
                                      "se"};
  int trials = 20;
  std::uint64_t seed = 1;
  double delta = 1e-6;

  void validate() const;
  PowerModel power_model(double bandwidth_hz) const;
  SolverOptions solver_options() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);
std::string canonical_config(const ExperimentConfig& cfg);

/// Deterministic per-trial seed: splitmix64 chain over (seed, sweep index,
/// trial index). Every scheme in a (sweep value, trial) cell sees the same
/// channels.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t sweep_index,
                          std::uint64_t trial);

struct SweepRow {
  double sweep_var = 0.0;
  std::string scheme;
  double mean_ee = 0.0;           // bits/J
  double mean_rate_bps_hz = 0.0;  // bandwidth-normalized
  double mean_active = 0.0;
  double feasible_fraction = 0.0;
  int n_trials = 0;
};

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);

/// CSV with the fixed header
/// sweep_var,scheme,mean_ee_bits_per_joule,mean_rate_bps_hz,mean_active_antennas,feasible_fraction,n_trials
std::string to_csv(const std::vector<SweepRow>& rows);

/// One scheme applied to one channel instance.
struct SchemeOutcome {
  EESolution solution;
  AntennaSet active;
  long candidates_evaluated = 0;
};

SchemeOutcome run_scheme(const UserChannels& ch, const PowerModel& model,
                         const std::string& scheme,
                         const SolverOptions& opts);

/// JSON report for a single solve; field names follow the solution fields
/// (Q, sum_rate, sum_power, ee, trace, branch, feasible).
nlohmann::json solve_single(const UserChannels& ch,
                            const ExperimentConfig& cfg,
                            const std::string& scheme);

}  // namespace eemimo
