#ifndef OPD_SWEEP_HPP
#define OPD_SWEEP_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "opd/dynamics.hpp"
#include "opd/series.hpp"

namespace opd {

// Step count used when a run does not pin one: 5,000 steps in the
// coexistence regime (A <= 1.2), 20,000 above it.
std::size_t desk_scale_steps(double initial_aspiration);
inline constexpr std::size_t kPaperSteps = 100000;
inline constexpr std::size_t kDefaultWindow = 1000;

struct SweepConfig {
  RunConfig base;  // everything except A, b, seed and (optionally) steps
  std::vector<double> A_values;
  std::vector<double> b_values;
  std::size_t replicates = 20;
  std::uint64_t base_seed = 0;
  bool desk_scale = false;  // when set, steps come from desk_scale_steps(A)

  void validate() const;
};

// base_seed + mix(A index, b index, replicate). Distinct for distinct triples
// in practice; run_sweep verifies it.
std::uint64_t replicate_seed(std::uint64_t base_seed, std::size_t a_index, std::size_t b_index,
                             std::size_t replicate);

// The fully resolved configuration of one run in the sweep.
RunConfig cell_run_config(const SweepConfig& config, std::size_t a_index, std::size_t b_index,
                          std::size_t replicate);

struct SweepCell {
  double A = 0.0;
  double b = 0.0;
  Fractions mean;
  Fractions stddev;  // sample standard deviation; 0 for a single replicate
  std::vector<Fractions> replicate_means;
  std::vector<std::uint64_t> seeds;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // A-major, b-minor (input order)
  std::size_t a_count = 0;
  std::size_t b_count = 0;
  std::size_t replicates = 0;
  std::uint64_t config_hash = 0;

  const SweepCell& at(std::size_t a_index, std::size_t b_index) const {
    return cells.at(a_index * b_count + b_index);
  }
};

// Mean and sample standard deviation of a set of replicate fractions.
void aggregate(SweepCell& cell);

// Runs |A| x |b| x replicates independent simulations on up to `parallelism`
// threads. The result does not depend on the thread count. A failing run
// aborts the sweep with a std::runtime_error naming the (A, b, replicate).
SweepResult run_sweep(const SweepConfig& config, std::size_t parallelism = 1);

struct TransitionScan {
  double b = 0.0;
  std::vector<SweepCell> columns;  // one per A, ascending
  std::vector<Fractions> jumps;    // |column[i+1].mean - column[i].mean|
};

// Sweep over a sorted A grid at fixed b, reporting adjacent jumps.
// Throws std::invalid_argument if A_values is empty or not ascending.
TransitionScan transition_scan(std::span<const double> A_values, double b,
                               const SweepConfig& config, std::size_t parallelism = 1);

// Inclusive decimal grid lo, lo+step, ..., each value snapped to the nearest
// double of its 12-digit decimal so that e.g. 0.9 is exactly the literal 0.9.
std::vector<double> decimal_grid(double lo, double hi, double step);

}  // namespace opd

#endif  // OPD_SWEEP_HPP
