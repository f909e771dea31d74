#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace eemimo {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Per-user downlink channels H_i (N x M each) plus link constants.
struct UserChannels {
  int M = 0;  // transmit antennas
  int N = 0;  // receive antennas per user
  int K = 0;  // users
  std::vector<Matrix> H;  // K matrices, each N x M
  double sigma2 = 0.0;    // noise power per receive antenna [W]
  double bandwidth_hz = 0.0;

  void validate() const;  // throws std::invalid_argument on malformed fields
};

/// Ordered subset of transmit antenna indices, 1-based, strictly increasing.
struct AntennaSet {
  std::vector<int> indices;

  AntennaSet() = default;
  explicit AntennaSet(std::vector<int> idx) : indices(std::move(idx)) {}

  static AntennaSet full(int m);
  int size() const { return static_cast<int>(indices.size()); }
  void validate(int m) const;  // indices within {1,..,m}, strictly increasing

  friend bool operator==(const AntennaSet& a, const AntennaSet& b) {
    return a.indices == b.indices;
  }
};

/// Affine total-power model and the two solution constraints.
struct PowerModel {
  double eta = 1.0;    // PA efficiency, (0,1]
  double p_dyn = 0.0;  // dynamic power per active antenna [W]
  double p_sta = 0.0;  // static power [W]
  double p_max = 1.0;  // sum transmit power cap [W]
  double c_min = 0.0;  // minimum sum rate [bits/s], 0 disables the constraint

  void validate() const;
};

/// One Hermitian PSD transmit covariance per user (dual-MAC side: N x N).
using CovarianceSet = std::vector<Matrix>;

double sum_power_of(const CovarianceSet& q);

enum class Branch {
  P1Interior,
  P2PowerCapped,
  P3RatePinned,
  InfeasibleFallback,
};

const char* to_string(Branch b);
Branch branch_from_string(const std::string& s);

/// Outcome of a covariance optimization at a fixed antenna set.
struct EESolution {
  CovarianceSet Q;
  double sum_rate = 0.0;   // bits/s
  double sum_power = 0.0;  // W
  double ee = 0.0;         // bits/J
  std::vector<double> trace;  // per-outer-iteration EE of the unconstrained
                              // iterative solve (interior branch only)
  Branch branch = Branch::P1Interior;
  bool feasible = false;
  bool converged = true;
  int outer_iterations = 0;
};

}  // namespace eemimo
