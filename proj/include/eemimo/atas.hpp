#pragma once

#include <utility>
#include <vector>

#include "eemimo/solver.hpp"
#include "eemimo/types.hpp"

namespace eemimo {

/// Antenna-selection outcome. Infeasible candidates score zero; when every
/// candidate is infeasible the full set is chosen to maximize the sum rate.
struct SelectionResult {
  AntennaSet chosen;
  EESolution solution;
  long candidates_evaluated = 0;
  std::vector<std::pair<AntennaSet, double>> per_candidate;  // (set, score)
};

/// Evaluates every non-empty antenna subset. Ties break toward fewer
/// antennas, then lexicographically. M above m_cap is rejected with a
/// pointer at norm_based_atas.
SelectionResult exhaustive_atas(const UserChannels& ch,
                                const PowerModel& model,
                                const SolverOptions& opts = {},
                                int m_cap = 12);

/// Sweeps the M prefixes of the descending column-norm order; the first
/// candidate attaining the best score wins.
SelectionResult norm_based_atas(const UserChannels& ch,
                                const PowerModel& model,
                                const SolverOptions& opts = {});

}  // namespace eemimo
