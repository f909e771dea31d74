#include "eemimo/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "eemimo/channel.hpp"
#include "eemimo/power.hpp"

namespace eemimo {

namespace {

const char* kCsvHeader =
    "sweep_var,scheme,mean_ee_bits_per_joule,mean_rate_bps_hz,"
    "mean_active_antennas,feasible_fraction,n_trials";

const std::vector<std::string> kKnownSchemes = {"ee-exh-as", "ee-norm-as",
                                                "ee-wo-as", "se"};

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key +
                                "': cannot parse number '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key +
                                "': cannot parse integer '" + value + "'");
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::DistanceSweep: return "distance-sweep";
    case Scenario::RateConstraintSweep: return "rate-constraint-sweep";
    case Scenario::AntennaSweep: return "antenna-sweep";
    case Scenario::UserSweep: return "user-sweep";
    case Scenario::Single: return "single";
  }
  return "unknown";
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "distance-sweep") return Scenario::DistanceSweep;
  if (s == "rate-constraint-sweep") return Scenario::RateConstraintSweep;
  if (s == "antenna-sweep") return Scenario::AntennaSweep;
  if (s == "user-sweep") return Scenario::UserSweep;
  if (s == "single") return Scenario::Single;
  throw std::invalid_argument("config: unknown scenario '" + s + "'");
}

void ExperimentConfig::validate() const {
  if (m < 1 || n < 1 || k < 1) {
    throw std::invalid_argument("config: m, n, k must be >= 1");
  }
  if (!(distance_km > 0.0)) {
    throw std::invalid_argument("config: distance_km must be > 0");
  }
  if (!(w_hz > 0.0)) throw std::invalid_argument("config: w_hz must be > 0");
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("config: delta must be > 0");
  if (c_min_bps_hz < 0.0) {
    throw std::invalid_argument("config: c_min_bps_hz must be >= 0");
  }
  power_model(w_hz).validate();

  if (schemes.empty()) {
    throw std::invalid_argument("config: schemes must be non-empty");
  }
  for (const std::string& s : schemes) {
    if (std::find(kKnownSchemes.begin(), kKnownSchemes.end(), s) ==
        kKnownSchemes.end()) {
      throw std::invalid_argument("config: unknown scheme '" + s + "'");
    }
  }

  if (scenario == Scenario::Single) {
    if (!sweep.empty()) {
      throw std::invalid_argument(
          "config: scenario 'single' takes no sweep values");
    }
    return;
  }
  if (sweep.empty()) {
    throw std::invalid_argument("config: sweep values required");
  }
  for (size_t i = 1; i < sweep.size(); ++i) {
    if (!(sweep[i] > sweep[i - 1])) {
      throw std::invalid_argument(
          "config: sweep values must be strictly increasing");
    }
  }
  const bool integer_sweep = scenario == Scenario::AntennaSweep ||
                             scenario == Scenario::UserSweep;
  for (double v : sweep) {
    if (scenario == Scenario::DistanceSweep && !(v > 0.0)) {
      throw std::invalid_argument("config: distances must be > 0");
    }
    if (scenario == Scenario::RateConstraintSweep && v < 0.0) {
      throw std::invalid_argument("config: rate constraints must be >= 0");
    }
    if (integer_sweep && (v < 1.0 || v != std::floor(v))) {
      throw std::invalid_argument(
          "config: antenna/user sweep values must be positive integers");
    }
  }
}

PowerModel ExperimentConfig::power_model(double bandwidth_hz) const {
  PowerModel model;
  model.eta = eta;
  model.p_dyn = p_dyn_w;
  model.p_sta = p_sta_w;
  model.p_max = dbm_to_watt(p_max_dbm);
  model.c_min = c_min_bps_hz * bandwidth_hz;
  return model;
}

SolverOptions ExperimentConfig::solver_options() const {
  SolverOptions opts;
  opts.delta = delta;
  return opts;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "scenario") {
      cfg.scenario = scenario_from_string(value);
    } else if (key == "sweep") {
      cfg.sweep.clear();
      for (const std::string& item : split_list(value)) {
        cfg.sweep.push_back(parse_double(key, item));
      }
    } else if (key == "m") {
      cfg.m = static_cast<int>(parse_int(key, value));
    } else if (key == "n") {
      cfg.n = static_cast<int>(parse_int(key, value));
    } else if (key == "k") {
      cfg.k = static_cast<int>(parse_int(key, value));
    } else if (key == "distance_km") {
      cfg.distance_km = parse_double(key, value);
    } else if (key == "w_hz") {
      cfg.w_hz = parse_double(key, value);
    } else if (key == "noise_dbm") {
      cfg.noise_dbm = parse_double(key, value);
    } else if (key == "eta") {
      cfg.eta = parse_double(key, value);
    } else if (key == "p_dyn_w") {
      cfg.p_dyn_w = parse_double(key, value);
    } else if (key == "p_sta_w") {
      cfg.p_sta_w = parse_double(key, value);
    } else if (key == "p_max_dbm") {
      cfg.p_max_dbm = parse_double(key, value);
    } else if (key == "c_min_bps_hz") {
      cfg.c_min_bps_hz = parse_double(key, value);
    } else if (key == "schemes") {
      cfg.schemes = split_list(value);
    } else if (key == "trials") {
      cfg.trials = static_cast<int>(parse_int(key, value));
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "delta") {
      cfg.delta = parse_double(key, value);
    } else {
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  ": unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config(text);
}

std::string canonical_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "scenario = " << to_string(cfg.scenario) << "\n";
  out << "sweep =";
  for (size_t i = 0; i < cfg.sweep.size(); ++i) {
    out << (i == 0 ? " " : ", ") << fmt_double(cfg.sweep[i]);
  }
  out << "\n";
  out << "m = " << cfg.m << "\n";
  out << "n = " << cfg.n << "\n";
  out << "k = " << cfg.k << "\n";
  out << "distance_km = " << fmt_double(cfg.distance_km) << "\n";
  out << "w_hz = " << fmt_double(cfg.w_hz) << "\n";
  out << "noise_dbm = " << fmt_double(cfg.noise_dbm) << "\n";
  out << "eta = " << fmt_double(cfg.eta) << "\n";
  out << "p_dyn_w = " << fmt_double(cfg.p_dyn_w) << "\n";
  out << "p_sta_w = " << fmt_double(cfg.p_sta_w) << "\n";
  out << "p_max_dbm = " << fmt_double(cfg.p_max_dbm) << "\n";
  out << "c_min_bps_hz = " << fmt_double(cfg.c_min_bps_hz) << "\n";
  out << "schemes =";
  for (size_t i = 0; i < cfg.schemes.size(); ++i) {
    out << (i == 0 ? " " : ", ") << cfg.schemes[i];
  }
  out << "\n";
  out << "trials = " << cfg.trials << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "delta = " << fmt_double(cfg.delta) << "\n";
  return out.str();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t sweep_index,
                          std::uint64_t trial) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ splitmix64(sweep_index));
  h = splitmix64(h ^ splitmix64(trial));
  return h;
}

SchemeOutcome run_scheme(const UserChannels& ch, const PowerModel& model,
                         const std::string& scheme,
                         const SolverOptions& opts) {
  SchemeOutcome out;
  if (scheme == "ee-exh-as") {
    SelectionResult r = exhaustive_atas(ch, model, opts);
    out.solution = std::move(r.solution);
    out.active = std::move(r.chosen);
    out.candidates_evaluated = r.candidates_evaluated;
    return out;
  }
  if (scheme == "ee-norm-as") {
    SelectionResult r = norm_based_atas(ch, model, opts);
    out.solution = std::move(r.solution);
    out.active = std::move(r.chosen);
    out.candidates_evaluated = r.candidates_evaluated;
    return out;
  }
  if (scheme == "ee-wo-as") {
    out.solution = solve_constrained(ch, model, opts);
    out.active = AntennaSet::full(ch.M);
    out.candidates_evaluated = 1;
    return out;
  }
  if (scheme == "se") {
    const SEResult p2 = se_iterative_waterfilling(ch, model.p_max,
                                                  opts.se_tol,
                                                  opts.se_max_rounds);
    EESolution s;
    s.Q = p2.Q;
    s.sum_rate = p2.sum_rate;
    s.sum_power = sum_power_of(p2.Q);
    s.ee = energy_efficiency(p2.sum_rate, s.sum_power, ch.M, model);
    s.branch = Branch::P2PowerCapped;
    s.feasible = p2.sum_rate >= model.c_min * (1.0 - 1e-9);
    s.converged = p2.converged;
    s.outer_iterations = p2.rounds;
    out.solution = std::move(s);
    out.active = AntennaSet::full(ch.M);
    out.candidates_evaluated = 1;
    return out;
  }
  throw std::invalid_argument("unknown scheme '" + scheme + "'");
}

namespace {

struct CellParams {
  int m, n, k;
  double distance_km;
  double c_min_bps_hz;
};

CellParams cell_params(const ExperimentConfig& cfg, double value) {
  CellParams p{cfg.m, cfg.n, cfg.k, cfg.distance_km, cfg.c_min_bps_hz};
  switch (cfg.scenario) {
    case Scenario::DistanceSweep: p.distance_km = value; break;
    case Scenario::RateConstraintSweep: p.c_min_bps_hz = value; break;
    case Scenario::AntennaSweep: p.m = static_cast<int>(value); break;
    case Scenario::UserSweep: p.k = static_cast<int>(value); break;
    case Scenario::Single: break;
  }
  return p;
}

}  // namespace

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<double> values = cfg.sweep;
  if (cfg.scenario == Scenario::Single) values = {cfg.distance_km};

  const SolverOptions opts = cfg.solver_options();
  std::vector<SweepRow> rows;
  for (size_t sv = 0; sv < values.size(); ++sv) {
    const CellParams p = cell_params(cfg, values[sv]);

    PowerModel model = cfg.power_model(cfg.w_hz);
    model.c_min = p.c_min_bps_hz * cfg.w_hz;

    struct Acc {
      double ee = 0.0, rate = 0.0, active = 0.0;
      int feasible = 0;
    };
    std::vector<Acc> acc(cfg.schemes.size());

    for (int t = 0; t < cfg.trials; ++t) {
      const UserChannels ch = generate_channels(
          derive_seed(cfg.seed, sv, static_cast<std::uint64_t>(t)), p.m, p.n,
          p.k, p.distance_km, cfg.w_hz, cfg.noise_dbm);
      for (size_t s = 0; s < cfg.schemes.size(); ++s) {
        const SchemeOutcome o = run_scheme(ch, model, cfg.schemes[s], opts);
        acc[s].ee += o.solution.ee;
        acc[s].rate += o.solution.sum_rate;
        acc[s].active += o.active.size();
        acc[s].feasible += o.solution.feasible ? 1 : 0;
      }
    }

    for (size_t s = 0; s < cfg.schemes.size(); ++s) {
      SweepRow row;
      row.sweep_var = values[sv];
      row.scheme = cfg.schemes[s];
      row.mean_ee = acc[s].ee / cfg.trials;
      row.mean_rate_bps_hz = acc[s].rate / cfg.trials / cfg.w_hz;
      row.mean_active = acc[s].active / cfg.trials;
      row.feasible_fraction =
          static_cast<double>(acc[s].feasible) / cfg.trials;
      row.n_trials = cfg.trials;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const SweepRow& r : rows) {
    out << fmt_double(r.sweep_var) << ',' << r.scheme << ','
        << fmt_double(r.mean_ee) << ',' << fmt_double(r.mean_rate_bps_hz)
        << ',' << fmt_double(r.mean_active) << ','
        << fmt_double(r.feasible_fraction) << ',' << r.n_trials << "\n";
  }
  return out.str();
}

nlohmann::json solve_single(const UserChannels& ch,
                            const ExperimentConfig& cfg,
                            const std::string& scheme) {
  ch.validate();
  const PowerModel model = cfg.power_model(ch.bandwidth_hz);
  const SchemeOutcome o = run_scheme(ch, model, scheme,
                                     cfg.solver_options());

  nlohmann::json j;
  j["scheme"] = scheme;
  j["branch"] = to_string(o.solution.branch);
  j["feasible"] = o.solution.feasible;
  j["converged"] = o.solution.converged;
  j["ee"] = o.solution.ee;
  j["sum_rate"] = o.solution.sum_rate;
  j["sum_rate_bps_hz"] = o.solution.sum_rate / ch.bandwidth_hz;
  j["sum_power"] = o.solution.sum_power;
  j["M_a"] = o.active.size();
  j["active_antennas"] = o.active.indices;
  j["candidates_evaluated"] = o.candidates_evaluated;
  j["trace"] = o.solution.trace;

  nlohmann::json q_users = nlohmann::json::array();
  for (const Matrix& qi : o.solution.Q) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < qi.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < qi.cols(); ++c) {
        row.push_back({qi(r, c).real(), qi(r, c).imag()});
      }
      rows.push_back(std::move(row));
    }
    q_users.push_back(std::move(rows));
  }
  j["Q"] = std::move(q_users);
  return j;
}

}  // namespace eemimo
