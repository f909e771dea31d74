#pragma once

#include "eemimo/types.hpp"

namespace eemimo {

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

/// Total consumed power p_tx/eta + m_active * p_dyn + p_sta [W].
double total_power(double p_tx, int m_active, const PowerModel& model);

/// rate / total_power(p_tx, m_active, model) [bits/J].
double energy_efficiency(double rate, double p_tx, int m_active,
                         const PowerModel& model);

}  // namespace eemimo
