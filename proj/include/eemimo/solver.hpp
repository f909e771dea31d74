#pragma once

#include "eemimo/types.hpp"

namespace eemimo {

/// Per-user energy-efficient water-filling output. The water-level parameter
/// lambda_star equals the maximized per-user EE objective
///   (b + W log2|I + G^H Q G|) / (Tr(Q)/eta + a).
struct WaterfillResult {
  RealVector S_diag;   // mode powers in the eigenbasis, zero on null modes
  Matrix U;            // eigenbasis of the N x N Gram G G^H
  double lambda_star = 0.0;  // bits/J
  Matrix Q;            // U diag(S) U^H, N x N Hermitian PSD
};

/// Maximizes (b + W log2|I + G^H Q G|) / (Tr(Q)/eta + a) over Q >= 0.
/// Modes come from the N x N Gram G G^H, whose nonzero spectrum matches
/// G^H G; the N x N basis is the one in which Q is a MAC covariance. The
/// water level solves F(lambda) = 0 by bisection with mode powers
///   S_kk = [W eta / (ln2 lambda) - 1/D_kk]^+.
WaterfillResult waterfill_ee_user(const Matrix& g, double a, double b,
                                  const PowerModel& model,
                                  double bandwidth_hz);

struct SolverOptions {
  double delta = 1e-6;      // P1 stop: relative EE improvement per sweep
  int p1_max_outer = 1000;
  double se_tol = 1e-9;     // P2 stop: relative sum-rate change per round
  int se_max_rounds = 20000;
  double p3_tol = 1e-8;     // P3 stop: |f(P) - C_min| relative to C_min
};

/// P1: unconstrained EE maximization by cyclic per-user water-filling from
/// the all-zero start (or `start` when given). The returned trace holds the
/// EE after each outer sweep and is nondecreasing.
EESolution ee_iterative_waterfilling(const UserChannels& ch,
                                     const PowerModel& model,
                                     double delta = 1e-6,
                                     int max_outer = 1000,
                                     const CovarianceSet* start = nullptr);

struct SEResult {
  CovarianceSet Q;
  double sum_rate = 0.0;  // bits/s
  bool converged = true;
  int rounds = 0;
};

/// P2: sum-rate maximization at sum power exactly p_budget. Each round
/// water-fills all users' eigenmodes against the previous iterate with one
/// common water level, then averages with weight 1/K on the new iterate.
SEResult se_iterative_waterfilling(const UserChannels& ch, double p_budget,
                                   double tol = 1e-9, int max_rounds = 20000);

struct PminResult {
  CovarianceSet Q;
  double p_bar = 0.0;     // minimum sum power meeting the rate floor
  double rate = 0.0;      // achieved sum rate at p_bar
  bool unbounded = false; // c_min unreachable; callers treat p_bar as +inf
};

/// P3: minimum sum power with sum rate >= c_min, by bisection on the power
/// of the rate curve f(P). p_hint seeds the upper-bound doubling search.
PminResult min_power_for_rate(const UserChannels& ch, double c_min,
                              double tol = 1e-8, double p_hint = 1.0);

/// Constrained EE solve: picks between the P1 optimum, P2 at p_max and P3
/// at the rate floor from the positions of P*, Pbar and p_max; falls back
/// to P2 at p_max (flagged infeasible) when Pbar > p_max.
EESolution solve_constrained(const UserChannels& ch, const PowerModel& model,
                             const SolverOptions& opts = {});

}  // namespace eemimo
