#pragma once

#include "eemimo/types.hpp"

namespace eemimo {

/// Dual-MAC sum rate W log2|I + (1/sigma2) sum_i H_i^H Q_i H_i| [bits/s].
/// Q_i are N x N.
double mac_sum_rate(const UserChannels& ch, const CovarianceSet& q);

/// DPC sum rate of the broadcast channel with encoding order 1..K;
/// covariances sigma_i are M x M. Provided for verification.
double bc_sum_rate(const UserChannels& ch, const CovarianceSet& sigma);

/// Per-user decomposition feeding the water-filling step: with interference
/// A = sigma2 I + sum_{j != i} H_j^H Q_j H_j,
///   G = H_i A^{-1/2},
///   b = W log2|A / sigma2|            (rate earned by the other users),
///   a = sum_{j != i} Tr(Q_j)/eta + m_active p_dyn + p_sta.
struct EffectiveChannel {
  Matrix G;       // N x M
  double a = 0.0; // W
  double b = 0.0; // bits/s
};

EffectiveChannel effective_channel(const UserChannels& ch,
                                   const CovarianceSet& q, int user,
                                   const PowerModel& model, int m_active);

}  // namespace eemimo
