#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "eemimo/atas.hpp"
#include "eemimo/capacity.hpp"
#include "eemimo/channel.hpp"
#include "eemimo/experiment.hpp"
#include "eemimo/numerics.hpp"
#include "eemimo/power.hpp"
#include "eemimo/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("cannot open output file: " + path);
  }
  out << text;
}

int run_solve(const std::string& channel_path, const std::string& config_path,
              const std::string& scheme, const std::string& out_path) {
  const eemimo::UserChannels ch = eemimo::load_channels_file(channel_path);
  eemimo::ExperimentConfig cfg;
  if (!config_path.empty()) cfg = eemimo::load_config_file(config_path);
  const nlohmann::json report = eemimo::solve_single(ch, cfg, scheme);
  write_output(out_path, report.dump(2) + "\n");
  return kExitOk;
}

int run_sweep_cmd(const std::string& config_path,
                  const std::string& out_path) {
  const eemimo::ExperimentConfig cfg = eemimo::load_config_file(config_path);
  const std::vector<eemimo::SweepRow> rows = eemimo::run_sweep(cfg);
  write_output(out_path, eemimo::to_csv(rows));
  return kExitOk;
}

bool check(std::ostream& os, const std::string& name, bool ok) {
  os << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
  return ok;
}

// Fast built-in sanity checks covering each subsystem once.
int run_selftest() {
  using namespace eemimo;
  bool all = true;
  std::ostream& os = std::cout;

  {
    Matrix a(2, 2);
    a << Complex(4.0, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0),
        Complex(9.0, 0.0);
    const Matrix r = inv_sqrt_psd(a);
    all &= check(os, "numerics: inv_sqrt_psd(diag(4,9)) = diag(1/2,1/3)",
                 std::abs(r(0, 0).real() - 0.5) < 1e-12 &&
                     std::abs(r(1, 1).real() - 1.0 / 3.0) < 1e-12);
    all &= check(os, "numerics: logdet_psd(diag(2,4), base 2) = 3",
                 std::abs(logdet_psd((Matrix(2, 2) << 2.0, 0.0, 0.0, 4.0)
                                         .finished()) -
                          3.0) < 1e-12);
  }

  const UserChannels ch = generate_channels(7, 4, 2, 2, 1.0, 5e6, -110.0);
  {
    const UserChannels again = generate_channels(7, 4, 2, 2, 1.0, 5e6,
                                                 -110.0);
    bool same = true;
    for (int i = 0; i < ch.K; ++i) same &= (ch.H[i] == again.H[i]);
    all &= check(os, "channel: identical seeds give identical channels",
                 same);
  }

  PowerModel model;
  model.eta = 0.38;
  model.p_dyn = 83.0;
  model.p_sta = 45.5;
  model.p_max = dbm_to_watt(46.0);
  model.c_min = 0.0;

  {
    const EESolution sol = ee_iterative_waterfilling(ch, model);
    bool monotone = true;
    for (size_t j = 1; j < sol.trace.size(); ++j) {
      monotone &= sol.trace[j] >= sol.trace[j - 1] - 1e-12;
    }
    all &= check(os, "solver: EE iterative water-filling converged",
                 sol.converged);
    all &= check(os, "solver: EE trace nondecreasing", monotone);
    all &= check(os, "solver: EE consistent with rate and power",
                 std::abs(sol.ee - energy_efficiency(sol.sum_rate,
                                                     sol.sum_power, ch.M,
                                                     model)) <=
                     1e-12 * sol.ee);
  }

  {
    const SEResult p2 = se_iterative_waterfilling(ch, model.p_max);
    all &= check(os, "solver: P2 hits the power budget",
                 std::abs(sum_power_of(p2.Q) - model.p_max) <=
                     1e-9 * model.p_max);
  }

  {
    const SelectionResult exh = exhaustive_atas(ch, model);
    const SelectionResult norm = norm_based_atas(ch, model);
    all &= check(os, "atas: exhaustive evaluates 2^M - 1 candidates",
                 exh.candidates_evaluated == (1L << ch.M) - 1);
    all &= check(os, "atas: exhaustive dominates norm-based",
                 exh.solution.ee >= norm.solution.ee - 1e-9);
    all &= check(os, "atas: norm-based dominates the full set",
                 norm.solution.ee >=
                     solve_constrained(ch, model).ee - 1e-9);
  }

  os << (all ? "selftest: all checks passed\n"
             : "selftest: FAILURES detected\n");
  return all ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "eemimo: energy-efficiency-optimal transmit covariances and antenna "
      "selection for MIMO broadcast channels"};
  app.require_subcommand(1);

  std::string channel_path, solve_config, scheme = "ee-wo-as", solve_out;
  CLI::App* solve = app.add_subcommand("solve",
                                       "Solve one channel-file instance");
  solve->add_option("--channel", channel_path, "Channel JSON file")
      ->required();
  solve->add_option("--config", solve_config,
                    "Experiment config (power model, tolerances)");
  solve->add_option("--scheme", scheme,
                    "One of ee-exh-as, ee-norm-as, ee-wo-as, se");
  solve->add_option("--out", solve_out, "Output JSON file (default stdout)");

  std::string sweep_config, sweep_out;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a Monte-Carlo sweep");
  sweep->add_option("--config", sweep_config, "Experiment config file")
      ->required();
  sweep->add_option("--out", sweep_out, "Output CSV file (default stdout)");

  CLI::App* selftest = app.add_subcommand("selftest",
                                          "Run built-in sanity checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (solve->parsed()) {
      return run_solve(channel_path, solve_config, scheme, solve_out);
    }
    if (sweep->parsed()) return run_sweep_cmd(sweep_config, sweep_out);
    if (selftest->parsed()) return run_selftest();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitValidation;
}
