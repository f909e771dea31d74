#include "eemimo/capacity.hpp"

#include <cmath>
#include <stdexcept>

#include "eemimo/numerics.hpp"

namespace eemimo {

namespace {

void check_covariances(const UserChannels& ch, const CovarianceSet& q,
                       int dim) {
  if (static_cast<int>(q.size()) != ch.K) {
    throw std::invalid_argument("expected " + std::to_string(ch.K) +
                                " covariance matrices, got " +
                                std::to_string(q.size()));
  }
  for (int i = 0; i < ch.K; ++i) {
    if (q[i].rows() != dim || q[i].cols() != dim) {
      throw std::invalid_argument("covariance of user " +
                                  std::to_string(i + 1) +
                                  " has wrong dimensions");
    }
  }
}

}  // namespace

double mac_sum_rate(const UserChannels& ch, const CovarianceSet& q) {
  ch.validate();
  check_covariances(ch, q, ch.N);
  Matrix b = Matrix::Identity(ch.M, ch.M);
  for (int i = 0; i < ch.K; ++i) {
    b += (ch.H[i].adjoint() * q[i] * ch.H[i]) / ch.sigma2;
  }
  return ch.bandwidth_hz * logdet_psd(hermitianize(b), /*base2=*/true);
}

double bc_sum_rate(const UserChannels& ch, const CovarianceSet& sigma) {
  ch.validate();
  check_covariances(ch, sigma, ch.M);
  double rate = 0.0;
  Matrix partial = Matrix::Zero(ch.M, ch.M);  // sum of covariances 1..i
  for (int i = 0; i < ch.K; ++i) {
    Matrix den = Matrix::Identity(ch.N, ch.N) +
                 (ch.H[i] * partial * ch.H[i].adjoint()) / ch.sigma2;
    partial += sigma[i];
    Matrix num = Matrix::Identity(ch.N, ch.N) +
                 (ch.H[i] * partial * ch.H[i].adjoint()) / ch.sigma2;
    rate += logdet_psd(hermitianize(num)) - logdet_psd(hermitianize(den));
  }
  return ch.bandwidth_hz * rate;
}

EffectiveChannel effective_channel(const UserChannels& ch,
                                   const CovarianceSet& q, int user,
                                   const PowerModel& model, int m_active) {
  ch.validate();
  check_covariances(ch, q, ch.N);
  if (user < 0 || user >= ch.K) {
    throw std::invalid_argument("user index out of range");
  }

  Matrix a_mat = ch.sigma2 * Matrix::Identity(ch.M, ch.M);
  double co_power = 0.0;
  for (int j = 0; j < ch.K; ++j) {
    if (j == user) continue;
    a_mat += ch.H[j].adjoint() * q[j] * ch.H[j];
    co_power += q[j].trace().real();
  }
  a_mat = hermitianize(a_mat);

  EffectiveChannel eff;
  // log2|A/sigma2| computed as log2|A| - M log2 sigma2 keeps the Cholesky on
  // the well-scaled aggregate.
  eff.b = ch.bandwidth_hz *
          (logdet_psd(a_mat) - ch.M * std::log2(ch.sigma2));
  eff.G = ch.H[user] * inv_sqrt_psd(a_mat);
  eff.a = co_power / model.eta + m_active * model.p_dyn + model.p_sta;
  return eff;
}

}  // namespace eemimo
