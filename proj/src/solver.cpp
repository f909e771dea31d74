#include "eemimo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "eemimo/capacity.hpp"
#include "eemimo/numerics.hpp"
#include "eemimo/power.hpp"

namespace eemimo {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kLambdaFloor = 1e-290;

// Relative slack when reporting whether a solution meets the constraints.
constexpr double kFeasSlack = 1e-9;

bool meets_constraints(double rate, double power, const PowerModel& model) {
  return power <= model.p_max * (1.0 + kFeasSlack) &&
         rate >= model.c_min * (1.0 - kFeasSlack);
}

}  // namespace

WaterfillResult waterfill_ee_user(const Matrix& g, double a, double b,
                                  const PowerModel& model,
                                  double bandwidth_hz) {
  model.validate();
  if (!(a > 0.0)) {
    throw std::invalid_argument(
        "waterfill: transmit-independent power a must be > 0");
  }
  if (b < 0.0) throw std::invalid_argument("waterfill: b must be >= 0");
  if (!(bandwidth_hz > 0.0)) {
    throw std::invalid_argument("waterfill: bandwidth must be > 0");
  }

  const int n = static_cast<int>(g.rows());
  EigResult eig = hermitian_eig(hermitianize(g * g.adjoint()));

  RealVector d = eig.eigenvalues.cwiseMax(0.0);
  const double d_max = (n > 0) ? d(0) : 0.0;
  int active_modes = 0;
  for (int k = 0; k < n; ++k) {
    if (d(k) > kRankEps * d_max && d(k) > 0.0) ++active_modes;
  }

  WaterfillResult out;
  out.U = eig.U;
  out.S_diag = RealVector::Zero(n);

  if (active_modes == 0) {
    // Zero channel: the objective is (b - lambda a), maximized at S = 0.
    out.lambda_star = b / a;
    out.Q = Matrix::Zero(n, n);
    return out;
  }
  const int L = active_modes;

  const double level_scale = bandwidth_hz * model.eta / kLn2;
  auto mode_power = [&](double lambda, int k) {
    const double s = level_scale / lambda - 1.0 / d(k);
    return s > 0.0 ? s : 0.0;
  };
  auto objective_gap = [&](double lambda) {
    double rate = b;
    double power_term = a;
    for (int k = 0; k < L; ++k) {
      const double s = mode_power(lambda, k);
      if (s > 0.0) {
        rate += bandwidth_hz * std::log2(1.0 + s * d(k));
        power_term += s / model.eta;
      }
    }
    return rate - lambda * power_term;  // F(lambda), strictly decreasing
  };

  // Bracket the unique root of F, then bisect.
  double t0 = 0.0;
  for (int k = 0; k < L; ++k) t0 += std::log2(1.0 + d(k) * model.eta * a);
  double hi = (b + bandwidth_hz * t0) / a;
  double lo = 0.0;
  if (objective_gap(hi) > 0.0) {
    int guard = 0;
    do {
      lo = hi;
      hi *= 2.0;
      if (++guard > 2000) {
        std::ostringstream msg;
        msg << "waterfill: failed to bracket water level from above; "
            << "lambda=" << hi << " F=" << objective_gap(hi);
        throw std::runtime_error(msg.str());
      }
    } while (objective_gap(hi) > 0.0);
  } else {
    while (objective_gap(hi * 0.5) <= 0.0) {
      hi *= 0.5;
      if (hi < kLambdaFloor) {
        std::ostringstream msg;
        msg << "waterfill: failed to bracket water level from below; "
            << "lambda=" << hi << " F=" << objective_gap(hi);
        throw std::runtime_error(msg.str());
      }
    }
    lo = hi * 0.5;
  }

  for (int it = 0; it < 500 && (hi - lo) > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (objective_gap(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double lambda_star = 0.5 * (lo + hi);

  out.lambda_star = lambda_star;
  for (int k = 0; k < L; ++k) out.S_diag(k) = mode_power(lambda_star, k);
  out.Q = hermitianize(out.U * out.S_diag.asDiagonal() * out.U.adjoint());
  return out;
}

EESolution ee_iterative_waterfilling(const UserChannels& ch,
                                     const PowerModel& model, double delta,
                                     int max_outer,
                                     const CovarianceSet* start) {
  ch.validate();
  model.validate();
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  if (max_outer < 1) throw std::invalid_argument("max_outer must be >= 1");

  CovarianceSet q(ch.K, Matrix::Zero(ch.N, ch.N));
  if (start != nullptr) {
    if (static_cast<int>(start->size()) != ch.K) {
      throw std::invalid_argument("start covariances: wrong user count");
    }
    for (const Matrix& qi : *start) {
      if (qi.rows() != ch.N || qi.cols() != ch.N) {
        throw std::invalid_argument("start covariances: wrong dimensions");
      }
      if (!is_psd(qi)) {
        throw std::invalid_argument("start covariances: not PSD");
      }
    }
    q = *start;
  }

  EESolution sol;
  sol.branch = Branch::P1Interior;
  double xi_prev = 0.0;
  bool converged = false;
  for (int outer = 1; outer <= max_outer; ++outer) {
    for (int i = 0; i < ch.K; ++i) {
      const EffectiveChannel eff = effective_channel(ch, q, i, model, ch.M);
      q[i] = waterfill_ee_user(eff.G, eff.a, eff.b, model, ch.bandwidth_hz).Q;
    }
    const double rate = mac_sum_rate(ch, q);
    const double power = sum_power_of(q);
    const double xi = energy_efficiency(rate, power, ch.M, model);
    sol.trace.push_back(xi);
    sol.sum_rate = rate;
    sol.sum_power = power;
    sol.ee = xi;
    if (xi - xi_prev <= delta * xi) {
      converged = true;
      break;
    }
    xi_prev = xi;
  }
  sol.Q = std::move(q);
  sol.converged = converged;
  sol.outer_iterations = static_cast<int>(sol.trace.size());
  sol.feasible = meets_constraints(sol.sum_rate, sol.sum_power, model);
  return sol;
}

namespace {

// Common water level mu with sum_k [mu - c_k]^+ = p_budget, by bisection.
double common_water_level(const std::vector<double>& inverse_gains,
                          double p_budget) {
  const double c_min = *std::min_element(inverse_gains.begin(),
                                         inverse_gains.end());
  double lo = c_min;
  double hi = c_min + p_budget;  // allocates >= p_budget to the best mode
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    double total = 0.0;
    for (double c : inverse_gains) {
      if (mid > c) total += mid - c;
    }
    if (total < p_budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SEResult se_iterative_waterfilling(const UserChannels& ch, double p_budget,
                                   double tol, int max_rounds) {
  ch.validate();
  if (!(p_budget > 0.0)) {
    throw std::invalid_argument("power budget must be > 0");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");

  const int k_users = ch.K;
  const int n = ch.N;
  CovarianceSet q(k_users,
                  (p_budget / (k_users * n)) * Matrix::Identity(n, n));

  SEResult out;
  out.sum_rate = mac_sum_rate(ch, q);
  double rate_prev = out.sum_rate;

  std::vector<EigResult> modes(k_users);
  for (int round = 1; round <= max_rounds; ++round) {
    out.rounds = round;

    double d_max = 0.0;
    for (int i = 0; i < k_users; ++i) {
      Matrix a_mat = ch.sigma2 * Matrix::Identity(ch.M, ch.M);
      for (int j = 0; j < k_users; ++j) {
        if (j != i) a_mat += ch.H[j].adjoint() * q[j] * ch.H[j];
      }
      const Matrix g = ch.H[i] * inv_sqrt_psd(hermitianize(a_mat));
      modes[i] = hermitian_eig(hermitianize(g * g.adjoint()));
      modes[i].eigenvalues = modes[i].eigenvalues.cwiseMax(0.0);
      d_max = std::max(d_max, modes[i].eigenvalues(0));
    }

    if (d_max <= 0.0) {
      // Zero channel: rate is 0 for any allocation; the uniform start
      // already meets the power budget exactly.
      out.sum_rate = 0.0;
      out.converged = true;
      out.Q = std::move(q);
      return out;
    }

    std::vector<double> inverse_gains;
    inverse_gains.reserve(k_users * n);
    for (int i = 0; i < k_users; ++i) {
      for (int m = 0; m < n; ++m) {
        const double d = modes[i].eigenvalues(m);
        if (d > kRankEps * d_max) inverse_gains.push_back(1.0 / d);
      }
    }
    const double mu = common_water_level(inverse_gains, p_budget);

    for (int i = 0; i < k_users; ++i) {
      RealVector s = RealVector::Zero(n);
      for (int m = 0; m < n; ++m) {
        const double d = modes[i].eigenvalues(m);
        if (d > kRankEps * d_max) s(m) = std::max(mu - 1.0 / d, 0.0);
      }
      const Matrix q_wf =
          hermitianize(modes[i].U * s.asDiagonal() * modes[i].U.adjoint());
      q[i] = (1.0 / k_users) * q_wf +
             (static_cast<double>(k_users - 1) / k_users) * q[i];
    }

    const double rate = mac_sum_rate(ch, q);
    out.sum_rate = rate;
    if (std::abs(rate - rate_prev) <=
        tol * std::max(rate, std::numeric_limits<double>::min())) {
      out.converged = true;
      out.Q = std::move(q);
      return out;
    }
    rate_prev = rate;
  }

  out.converged = false;
  out.Q = std::move(q);
  return out;
}

PminResult min_power_for_rate(const UserChannels& ch, double c_min,
                              double tol, double p_hint) {
  ch.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  if (!(p_hint > 0.0)) throw std::invalid_argument("p_hint must be > 0");
  if (c_min < 0.0) throw std::invalid_argument("c_min must be >= 0");

  PminResult out;
  if (c_min == 0.0) {
    out.Q.assign(ch.K, Matrix::Zero(ch.N, ch.N));
    return out;
  }

  const double inner_tol = std::min(1e-10, tol * 1e-2);
  auto rate_at = [&](double p) {
    return se_iterative_waterfilling(ch, p, inner_tol);
  };

  // Expand the upper bound until the rate floor is reachable.
  double hi = p_hint;
  SEResult at_hi = rate_at(hi);
  for (int doublings = 0; at_hi.sum_rate < c_min && doublings < 20;
       ++doublings) {
    hi *= 2.0;
    at_hi = rate_at(hi);
  }
  if (at_hi.sum_rate < c_min) {
    out.unbounded = true;
    out.p_bar = std::numeric_limits<double>::infinity();
    out.Q = std::move(at_hi.Q);
    out.rate = at_hi.sum_rate;
    return out;
  }

  double lo = 0.0;
  SEResult best = std::move(at_hi);
  for (int it = 0; it < 200; ++it) {
    if (std::abs(best.sum_rate - c_min) <= tol * c_min) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    SEResult at_mid = rate_at(mid);
    if (at_mid.sum_rate >= c_min) {
      hi = mid;
      best = std::move(at_mid);
    } else {
      lo = mid;
    }
  }

  out.p_bar = sum_power_of(best.Q);
  out.rate = best.sum_rate;
  out.Q = std::move(best.Q);
  return out;
}

EESolution solve_constrained(const UserChannels& ch, const PowerModel& model,
                             const SolverOptions& opts) {
  ch.validate();
  model.validate();

  EESolution p1 = ee_iterative_waterfilling(ch, model, opts.delta,
                                            opts.p1_max_outer);
  const double p_star = p1.sum_power;

  double p_bar = 0.0;
  PminResult p3;
  if (model.c_min > 0.0) {
    p3 = min_power_for_rate(ch, model.c_min, opts.p3_tol, model.p_max);
    p_bar = p3.p_bar;
  }

  auto p2_solution = [&](bool feasible) {
    const SEResult p2 = se_iterative_waterfilling(ch, model.p_max,
                                                  opts.se_tol,
                                                  opts.se_max_rounds);
    EESolution s;
    s.Q = p2.Q;
    s.sum_rate = p2.sum_rate;
    s.sum_power = sum_power_of(p2.Q);
    s.ee = energy_efficiency(p2.sum_rate, s.sum_power, ch.M, model);
    s.branch = feasible ? Branch::P2PowerCapped : Branch::InfeasibleFallback;
    s.feasible = feasible;
    s.converged = p2.converged;
    s.outer_iterations = p2.rounds;
    return s;
  };

  // Case selection on the positions of Pbar, P* and p_max.
  if (p_bar > model.p_max) return p2_solution(false);
  if (p_bar <= p_star && p_star <= model.p_max) {
    p1.feasible = true;
    return p1;
  }
  if (p_star >= model.p_max) return p2_solution(true);

  // P* < Pbar <= p_max: pin the rate floor at minimum power.
  EESolution s;
  s.Q = p3.Q;
  s.sum_rate = p3.rate;
  s.sum_power = p3.p_bar;
  s.ee = energy_efficiency(p3.rate, p3.p_bar, ch.M, model);
  s.branch = Branch::P3RatePinned;
  s.feasible = true;
  s.converged = p1.converged;
  s.outer_iterations = p1.outer_iterations;
  return s;
}

}  // namespace eemimo
