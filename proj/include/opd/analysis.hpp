#ifndef OPD_ANALYSIS_HPP
#define OPD_ANALYSIS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "opd/dynamics.hpp"
#include "opd/game.hpp"
#include "opd/init.hpp"
#include "opd/series.hpp"

namespace opd {

// Closed-form stationary cooperator fraction for the coexistence regime:
//   r_C0 * (1 - sum_{m=0}^{k} C(4,m) r_L0^m r_D0^(4-m)),  k = ceil(A / l) - 1.
// Only cooperators without cooperator neighbours are counted as dissatisfied.
// Throws std::domain_error for A outside (0, 1.2].
double predicted_cooperator_fraction(double initial_aspiration, const InitialFractions& f,
                                     double loner_payoff = 0.3);

enum class OracleScope {
  AllCompositions,         // every neighbourhood
  NoCooperatorNeighbors,   // only neighbourhoods with n_C = 0
};

// Probability that a cooperator in a randomly initialised lattice starts
// dissatisfied (payoff < A), by enumerating all 81 ordered neighbourhoods and
// summing their probabilities.
double dissatisfaction_oracle(double initial_aspiration, const InitialFractions& f,
                              const GameParams& params = GameParams{},
                              OracleScope scope = OracleScope::AllCompositions);

Fractions fractions(std::span<const Strategy> grid);
inline Fractions fractions(const LatticeState& state) { return fractions(state.strategies); }

struct ClusterReport {
  Strategy strategy = Strategy::Cooperator;
  std::vector<std::size_t> sizes;  // descending
  std::size_t largest() const { return sizes.empty() ? 0 : sizes.front(); }
  std::size_t count() const { return sizes.size(); }
  std::size_t total() const;
};

// Connected components of one strategy under periodic 4-adjacency.
ClusterReport cluster_report(const StrategyGrid& grid, Strategy strategy);
inline ClusterReport cluster_report(const LatticeState& state, Strategy strategy) {
  return cluster_report(state.grid(), strategy);
}

enum class Outcome {
  StableCoexistence,
  DefectionSuppression,
  LonerExtinctionTakeover,
  CooperatorExtinction,
  AllLoner,
  Unclassified,
};

std::string to_string(Outcome outcome);

struct OutcomeThresholds {
  double coexistence = 0.05;  // every stable fraction above this
  double suppression = 0.10;  // stable r_D below this, r_C and r_L above it
};

// Extinction labels take precedence (whichever of C or L vanished first),
// then suppression, then coexistence.
Outcome classify_outcome(const FractionSeries& series, const OutcomeThresholds& thresholds = {});

}  // namespace opd

#endif  // OPD_ANALYSIS_HPP
