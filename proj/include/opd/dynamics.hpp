#ifndef OPD_DYNAMICS_HPP
#define OPD_DYNAMICS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "opd/game.hpp"
#include "opd/init.hpp"
#include "opd/lattice.hpp"
#include "opd/rng.hpp"
#include "opd/series.hpp"

namespace opd {

// Which kernel variant runs the per-cell phases. Both give identical results.
enum class Execution { Serial, Parallel };

// Full mutable state of one simulation.
struct LatticeState {
  Lattice lattice;
  std::vector<Strategy> strategies;
  std::vector<double> aspirations;  // A_i
  std::vector<double> payoffs;      // P_i, valid after evaluate_payoffs()
  std::size_t step = 0;

  // Uniform initial aspiration; payoffs are evaluated immediately.
  LatticeState(const StrategyGrid& grid, double initial_aspiration, const GameParams& params);

  const LatticeDim& dim() const noexcept { return lattice.dim(); }
  StrategyGrid grid() const { return StrategyGrid(dim(), strategies); }
};

void evaluate_payoffs(LatticeState& state, const GameParams& params,
                      Execution exec = Execution::Parallel);

// Probability that i adopts j's strategy: 1 / (1 + exp((p_i - p_j) / K)).
// Evaluated without overflow for any finite inputs; saturates to 0 or 1.
// Throws std::domain_error for non-finite input or K <= 0.
double fermi_probability(double p_i, double p_j, double noise);

// (1 - rate) * a_i + rate * p_i, clamped to the closed interval between a_i and p_i.
double aspiration_update(double a_i, double p_i, double rate);

struct StepStats {
  std::size_t dissatisfied = 0;  // cells with P_i < A_i
  std::size_t changed = 0;       // cells whose strategy differs after the step
};

// One synchronous step: payoffs at t, strategy updates (row-major; each
// dissatisfied cell draws a neighbour then a uniform variate), aspiration
// relaxation for every cell, then t -> t + 1.
StepStats step(LatticeState& state, const GameParams& params, Rng& rng,
               Execution exec = Execution::Parallel);

struct RunConfig {
  LatticeDim dim{100};
  GameParams params;
  double initial_aspiration = 0.0;
  InitSpec init;
  std::size_t steps = 5000;
  std::size_t measure_window = 1000;
  std::uint64_t seed = 0;
  std::vector<std::size_t> snapshot_steps;

  void validate() const;
};

struct Snapshot {
  std::size_t step = 0;
  StrategyGrid grid;
  std::vector<double> aspirations;
};

struct RunResult {
  FractionSeries series;
  std::vector<std::size_t> strategy_changes;  // entry t-1: cells changed by step t
  LatticeState final_state;
  std::vector<Snapshot> snapshots;
};

// Deterministic in config: the same config gives the same result bit for bit.
RunResult run(const RunConfig& config, Execution exec = Execution::Parallel);

}  // namespace opd

#endif  // OPD_DYNAMICS_HPP
