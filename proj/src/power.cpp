#include "eemimo/power.hpp"

#include <cmath>
#include <stdexcept>

namespace eemimo {

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watt_to_dbm(double watt) {
  if (!(watt > 0.0)) throw std::invalid_argument("power must be > 0 W");
  return 10.0 * std::log10(watt) + 30.0;
}

double total_power(double p_tx, int m_active, const PowerModel& model) {
  model.validate();
  if (p_tx < 0.0) throw std::invalid_argument("transmit power must be >= 0");
  if (m_active < 0) throw std::invalid_argument("antenna count must be >= 0");
  return p_tx / model.eta + m_active * model.p_dyn + model.p_sta;
}

double energy_efficiency(double rate, double p_tx, int m_active,
                         const PowerModel& model) {
  if (rate < 0.0) throw std::invalid_argument("rate must be >= 0");
  const double denom = total_power(p_tx, m_active, model);
  if (!(denom > 0.0)) {
    throw std::domain_error("total consumed power is zero; EE is undefined");
  }
  return rate / denom;
}

}  // namespace eemimo
