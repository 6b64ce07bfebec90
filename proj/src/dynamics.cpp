#include "opd/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "opd/kernels.hpp"

namespace opd {

namespace {

StrategyCounts count(const LatticeState& state, Execution exec) {
  return exec == Execution::Serial ? kernels::serial::count_strategies(state.strategies)
                                   : kernels::omp::count_strategies(state.strategies);
}

}  // namespace

LatticeState::LatticeState(const StrategyGrid& grid, double initial_aspiration,
                           const GameParams& params)
    : lattice(grid.dim),
      strategies(grid.cells),
      aspirations(grid.cells.size(), initial_aspiration),
      payoffs(grid.cells.size(), 0.0) {
  if (!std::isfinite(initial_aspiration)) throw std::invalid_argument("initial aspiration must be finite");
  evaluate_payoffs(*this, params, Execution::Serial);
}

void evaluate_payoffs(LatticeState& state, const GameParams& params, Execution exec) {
  const PayoffTable table(params);
  if (exec == Execution::Serial) {
    kernels::serial::compute_payoffs(state.strategies, state.lattice, table, state.payoffs);
  } else {
    kernels::omp::compute_payoffs(state.strategies, state.lattice, table, state.payoffs);
  }
}

double fermi_probability(double p_i, double p_j, double noise) {
  if (!std::isfinite(p_i) || !std::isfinite(p_j) || !std::isfinite(noise)) {
    throw std::domain_error("fermi_probability: non-finite input");
  }
  if (!(noise > 0.0)) throw std::domain_error("fermi_probability: K must be > 0");
  const double x = (p_i - p_j) / noise;
  if (x > 0.0) {
    const double e = std::exp(-x);  // in (0, 1]
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

double aspiration_update(double a_i, double p_i, double rate) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("aspiration_rate out of [0,1]");
  return kernels::relax_one(a_i, p_i, rate);
}

StepStats step(LatticeState& state, const GameParams& params, Rng& rng, Execution exec) {
  evaluate_payoffs(state, params, exec);

  StepStats stats;
  const auto& current = state.strategies;
  std::vector<Strategy> next = current;
  for (std::size_t i = 0; i < current.size(); ++i) {
    const double p_i = state.payoffs[i];
    if (p_i >= state.aspirations[i]) continue;
    ++stats.dissatisfied;
    const std::size_t j = state.lattice.neighbors(i)[rng.neighbor_pick()];
    const double u = rng.uniform01();
    // Imitating an identical strategy is a no-op; the draw is still consumed.
    if (current[j] == current[i]) continue;
    if (u < fermi_probability(p_i, state.payoffs[j], params.noise)) {
      next[i] = current[j];
      ++stats.changed;
    }
  }

  if (exec == Execution::Serial) {
    kernels::serial::relax_aspirations(state.aspirations, state.payoffs, params.aspiration_rate);
  } else {
    kernels::omp::relax_aspirations(state.aspirations, state.payoffs, params.aspiration_rate);
  }
  state.strategies.swap(next);
  ++state.step;
  return stats;
}

void RunConfig::validate() const {
  params.validate();
  init.validate();
  if (!std::isfinite(initial_aspiration)) throw std::invalid_argument("initial aspiration A must be finite");
  if (measure_window > steps) {
    throw std::invalid_argument("measure_window (" + std::to_string(measure_window) +
                                ") exceeds steps (" + std::to_string(steps) + ")");
  }
  for (std::size_t t : snapshot_steps) {
    if (t > steps) {
      throw std::invalid_argument("snapshot step " + std::to_string(t) + " beyond run length " +
                                  std::to_string(steps));
    }
  }
  if (init.kind == InitKind::Explicit && init.explicit_grid->dim != dim) {
    throw std::invalid_argument("explicit grid side does not match lattice side");
  }
}

RunResult run(const RunConfig& config, Execution exec) {
  config.validate();

  Rng rng(config.seed);
  const StrategyGrid initial = make_initial_grid(config.init, config.dim, rng);
  RunResult result{FractionSeries(config.dim.cell_count(), config.measure_window),
                   {},
                   LatticeState(initial, config.initial_aspiration, config.params),
                   {}};
  LatticeState& state = result.final_state;

  std::vector<std::size_t> wanted = config.snapshot_steps;
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  auto next_snapshot = wanted.begin();
  auto maybe_snapshot = [&] {
    if (next_snapshot != wanted.end() && *next_snapshot == state.step) {
      result.snapshots.push_back({state.step, state.grid(), state.aspirations});
      ++next_snapshot;
    }
  };

  result.strategy_changes.reserve(config.steps);
  result.series.record(count(state, exec));
  maybe_snapshot();
  for (std::size_t t = 0; t < config.steps; ++t) {
    const StepStats stats = step(state, config.params, rng, exec);
    result.strategy_changes.push_back(stats.changed);
    result.series.record(count(state, exec));
    maybe_snapshot();
  }
  evaluate_payoffs(state, config.params, exec);
  return result;
}

}  // namespace opd
