#include "eemimo/types.hpp"

#include <stdexcept>

namespace eemimo {

void UserChannels::validate() const {
  if (M < 1 || N < 1 || K < 1) {
    throw std::invalid_argument("channel dimensions must satisfy M,N,K >= 1");
  }
  if (static_cast<int>(H.size()) != K) {
    throw std::invalid_argument("expected " + std::to_string(K) +
                                " user channel matrices, got " +
                                std::to_string(H.size()));
  }
  for (int i = 0; i < K; ++i) {
    if (H[i].rows() != N || H[i].cols() != M) {
      throw std::invalid_argument("channel matrix of user " +
                                  std::to_string(i + 1) +
                                  " has wrong dimensions");
    }
    if (!H[i].allFinite()) {
      throw std::invalid_argument("channel matrix of user " +
                                  std::to_string(i + 1) +
                                  " has non-finite entries");
    }
  }
  if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be > 0");
  if (!(bandwidth_hz > 0.0)) {
    throw std::invalid_argument("bandwidth must be > 0");
  }
}

AntennaSet AntennaSet::full(int m) {
  AntennaSet t;
  t.indices.resize(m);
  for (int j = 0; j < m; ++j) t.indices[j] = j + 1;
  return t;
}

void AntennaSet::validate(int m) const {
  if (indices.empty()) throw std::invalid_argument("antenna set is empty");
  int prev = 0;
  for (int idx : indices) {
    if (idx < 1 || idx > m) {
      throw std::invalid_argument("antenna index " + std::to_string(idx) +
                                  " out of range 1.." + std::to_string(m));
    }
    if (idx <= prev) {
      throw std::invalid_argument(
          "antenna indices must be strictly increasing");
    }
    prev = idx;
  }
}

void PowerModel::validate() const {
  if (!(eta > 0.0) || eta > 1.0) {
    throw std::invalid_argument("eta must lie in (0, 1]");
  }
  if (p_dyn < 0.0) throw std::invalid_argument("p_dyn must be >= 0");
  if (p_sta < 0.0) throw std::invalid_argument("p_sta must be >= 0");
  if (!(p_max > 0.0)) throw std::invalid_argument("p_max must be > 0");
  if (c_min < 0.0) throw std::invalid_argument("c_min must be >= 0");
}

double sum_power_of(const CovarianceSet& q) {
  double p = 0.0;
  for (const Matrix& qi : q) p += qi.trace().real();
  return p;
}

const char* to_string(Branch b) {
  switch (b) {
    case Branch::P1Interior: return "P1-interior";
    case Branch::P2PowerCapped: return "P2-power-capped";
    case Branch::P3RatePinned: return "P3-rate-pinned";
    case Branch::InfeasibleFallback: return "infeasible-fallback";
  }
  return "unknown";
}

Branch branch_from_string(const std::string& s) {
  if (s == "P1-interior") return Branch::P1Interior;
  if (s == "P2-power-capped") return Branch::P2PowerCapped;
  if (s == "P3-rate-pinned") return Branch::P3RatePinned;
  if (s == "infeasible-fallback") return Branch::InfeasibleFallback;
  throw std::invalid_argument("unknown branch label: " + s);
}

}  // namespace eemimo
