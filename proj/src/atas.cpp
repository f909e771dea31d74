#include "eemimo/atas.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "eemimo/channel.hpp"

namespace eemimo {

namespace {

// Candidate accumulator; strict improvement keeps the first-seen winner so
// the enumeration order fixes the tie-break.
struct Scan {
  SelectionResult res;
  double best_score = 0.0;
  bool found = false;
  EESolution full_set_solution;

  void consider(const AntennaSet& t, EESolution sol, int m_total) {
    const double score = sol.feasible ? sol.ee : 0.0;
    res.per_candidate.emplace_back(t, score);
    ++res.candidates_evaluated;
    if (t.size() == m_total) full_set_solution = sol;
    if (score > best_score) {
      best_score = score;
      res.chosen = t;
      res.solution = std::move(sol);
      found = true;
    }
  }

  SelectionResult finish(int m_total) {
    if (!found) {
      // Every candidate infeasible (or zero-rate): fall back to the full
      // set, which maximizes the achievable sum rate.
      res.chosen = AntennaSet::full(m_total);
      res.solution = std::move(full_set_solution);
    }
    return std::move(res);
  }
};

}  // namespace

SelectionResult exhaustive_atas(const UserChannels& ch,
                                const PowerModel& model,
                                const SolverOptions& opts, int m_cap) {
  ch.validate();
  model.validate();
  if (ch.M > m_cap) {
    throw std::invalid_argument(
        "exhaustive search over " + std::to_string(ch.M) +
        " antennas exceeds the cap of " + std::to_string(m_cap) +
        "; use norm_based_atas");
  }

  Scan scan;
  // Subsets by size, lexicographic within a size: ties then resolve toward
  // fewer antennas first.
  for (int size = 1; size <= ch.M; ++size) {
    std::vector<int> idx(size);
    std::iota(idx.begin(), idx.end(), 1);
    while (true) {
      AntennaSet t(idx);
      scan.consider(t, solve_constrained(restrict(ch, t), model, opts),
                    ch.M);

      int j = size - 1;
      while (j >= 0 && idx[j] == ch.M - size + 1 + j) --j;
      if (j < 0) break;
      ++idx[j];
      for (int l = j + 1; l < size; ++l) idx[l] = idx[l - 1] + 1;
    }
  }
  return scan.finish(ch.M);
}

SelectionResult norm_based_atas(const UserChannels& ch,
                                const PowerModel& model,
                                const SolverOptions& opts) {
  ch.validate();
  model.validate();

  const std::vector<int> pi = column_norm_order(ch);
  Scan scan;
  for (int m_a = 1; m_a <= ch.M; ++m_a) {
    std::vector<int> prefix(pi.begin(), pi.begin() + m_a);
    std::sort(prefix.begin(), prefix.end());
    AntennaSet t(std::move(prefix));
    scan.consider(t, solve_constrained(restrict(ch, t), model, opts), ch.M);
  }
  return scan.finish(ch.M);
}

}  // namespace eemimo
