#include "eemimo/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "eemimo/power.hpp"

namespace eemimo {

double pathloss_db(double distance_km) {
  if (!(distance_km > 0.0)) {
    throw std::invalid_argument("distance must be > 0 km");
  }
  return 128.1 + 37.6 * std::log10(distance_km);
}

Complex ComplexGaussianSource::sample(double variance) {
  // u1 in (0,1], u2 in [0,1); 53-bit mantissas off the raw engine words.
  const double u1 = ((eng_() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = (eng_() >> 11) * 0x1.0p-53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  const double scale = std::sqrt(variance / 2.0);
  return {scale * radius * std::cos(angle), scale * radius * std::sin(angle)};
}

UserChannels generate_channels(std::uint64_t seed, int m, int n, int k,
                               double distance_km, double bandwidth_hz,
                               double noise_dbm) {
  if (m < 1 || n < 1 || k < 1) {
    throw std::invalid_argument("channel dimensions must satisfy M,N,K >= 1");
  }
  const double variance = std::pow(10.0, -pathloss_db(distance_km) / 10.0);

  UserChannels ch;
  ch.M = m;
  ch.N = n;
  ch.K = k;
  ch.sigma2 = dbm_to_watt(noise_dbm);
  ch.bandwidth_hz = bandwidth_hz;
  ch.H.resize(k);

  ComplexGaussianSource src(seed);
  for (int i = 0; i < k; ++i) {
    ch.H[i].resize(n, m);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < m; ++c) ch.H[i](r, c) = src.sample(variance);
    }
  }
  ch.validate();
  return ch;
}

UserChannels restrict(const UserChannels& ch, const AntennaSet& t) {
  ch.validate();
  t.validate(ch.M);
  UserChannels out;
  out.M = t.size();
  out.N = ch.N;
  out.K = ch.K;
  out.sigma2 = ch.sigma2;
  out.bandwidth_hz = ch.bandwidth_hz;
  out.H.resize(ch.K);
  for (int i = 0; i < ch.K; ++i) {
    out.H[i].resize(ch.N, out.M);
    for (int j = 0; j < out.M; ++j) {
      out.H[i].col(j) = ch.H[i].col(t.indices[j] - 1);
    }
  }
  return out;
}

std::vector<double> column_norms(const UserChannels& ch) {
  ch.validate();
  std::vector<double> norms(ch.M, 0.0);
  for (int c = 0; c < ch.M; ++c) {
    double s = 0.0;
    for (int i = 0; i < ch.K; ++i) s += ch.H[i].col(c).squaredNorm();
    norms[c] = std::sqrt(s);
  }
  return norms;
}

std::vector<int> column_norm_order(const UserChannels& ch) {
  const std::vector<double> norms = column_norms(ch);
  std::vector<int> pi(ch.M);
  for (int j = 0; j < ch.M; ++j) pi[j] = j + 1;
  std::stable_sort(pi.begin(), pi.end(), [&](int a, int b) {
    if (norms[a - 1] != norms[b - 1]) return norms[a - 1] > norms[b - 1];
    return a < b;
  });
  return pi;
}

std::string dump_channels(const UserChannels& ch) {
  ch.validate();
  nlohmann::json j;
  j["M"] = ch.M;
  j["N"] = ch.N;
  j["K"] = ch.K;
  j["sigma2"] = ch.sigma2;
  j["W"] = ch.bandwidth_hz;
  nlohmann::json users = nlohmann::json::array();
  for (const Matrix& h : ch.H) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < h.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < h.cols(); ++c) {
        row.push_back({h(r, c).real(), h(r, c).imag()});
      }
      rows.push_back(std::move(row));
    }
    users.push_back(std::move(rows));
  }
  j["H"] = std::move(users);
  return j.dump(2) + "\n";
}

namespace {

[[noreturn]] void channel_parse_error(const std::string& field,
                                      const std::string& detail) {
  throw std::invalid_argument("channel file: field '" + field + "': " +
                              detail);
}

double require_number(const nlohmann::json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_number()) {
    channel_parse_error(field, "missing or not a number");
  }
  return j[field].get<double>();
}

}  // namespace

UserChannels load_channels(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("channel file: ") + e.what());
  }

  UserChannels ch;
  ch.M = static_cast<int>(require_number(j, "M"));
  ch.N = static_cast<int>(require_number(j, "N"));
  ch.K = static_cast<int>(require_number(j, "K"));
  ch.sigma2 = require_number(j, "sigma2");
  ch.bandwidth_hz = require_number(j, "W");

  if (!j.contains("H") || !j["H"].is_array() ||
      static_cast<int>(j["H"].size()) != ch.K) {
    channel_parse_error("H", "expected an array of K matrices");
  }
  ch.H.resize(ch.K);
  for (int i = 0; i < ch.K; ++i) {
    const nlohmann::json& rows = j["H"][i];
    if (!rows.is_array() || static_cast<int>(rows.size()) != ch.N) {
      channel_parse_error("H[" + std::to_string(i) + "]",
                          "expected N rows");
    }
    ch.H[i].resize(ch.N, ch.M);
    for (int r = 0; r < ch.N; ++r) {
      const nlohmann::json& row = rows[r];
      if (!row.is_array() || static_cast<int>(row.size()) != ch.M) {
        channel_parse_error(
            "H[" + std::to_string(i) + "][" + std::to_string(r) + "]",
            "expected M entries");
      }
      for (int c = 0; c < ch.M; ++c) {
        const nlohmann::json& e = row[c];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
            !e[1].is_number()) {
          channel_parse_error("H[" + std::to_string(i) + "][" +
                                  std::to_string(r) + "][" +
                                  std::to_string(c) + "]",
                              "expected a [re, im] pair");
        }
        ch.H[i](r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      }
    }
  }
  ch.validate();
  return ch;
}

void save_channels_file(const UserChannels& ch, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open for writing: " + path);
  out << dump_channels(ch);
}

UserChannels load_channels_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open channel file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return load_channels(text);
}

}  // namespace eemimo
