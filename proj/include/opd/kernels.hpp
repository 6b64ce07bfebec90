#ifndef OPD_KERNELS_HPP
#define OPD_KERNELS_HPP

#include <array>
#include <cstddef>
#include <span>

#include "opd/game.hpp"
#include "opd/lattice.hpp"

// Data-parallel per-cell kernels of the synchronous step.
//
// Every kernel exists twice: a plain loop in `serial` that serves as the
// reference, and an OpenMP version in `omp`. The OpenMP versions evaluate the
// same per-cell expression in the same operand order, so their output is
// bitwise identical to the reference for any thread count.
namespace opd::kernels {

using StrategyCounts = std::array<std::size_t, 3>;  // indexed by Strategy

namespace serial {

void compute_payoffs(std::span<const Strategy> grid, const Lattice& lattice,
                     const PayoffTable& table, std::span<double> payoffs);

void relax_aspirations(std::span<double> aspirations, std::span<const double> payoffs, double rate);

StrategyCounts count_strategies(std::span<const Strategy> grid);

}  // namespace serial

namespace omp {

void compute_payoffs(std::span<const Strategy> grid, const Lattice& lattice,
                     const PayoffTable& table, std::span<double> payoffs);

void relax_aspirations(std::span<double> aspirations, std::span<const double> payoffs, double rate);

StrategyCounts count_strategies(std::span<const Strategy> grid);

}  // namespace omp

// Single-cell aspiration relaxation shared by both variants.
inline double relax_one(double aspiration, double payoff, double rate) noexcept {
  double next = (1.0 - rate) * aspiration + rate * payoff;
  // keep the result inside [min, max] of the two inputs despite rounding
  const double lo = aspiration < payoff ? aspiration : payoff;
  const double hi = aspiration < payoff ? payoff : aspiration;
  if (next < lo) next = lo;
  if (next > hi) next = hi;
  return next;
}

inline double payoff_of(std::span<const Strategy> grid, const Lattice& lattice,
                        const PayoffTable& table, std::size_t i) noexcept {
  const Strategy self = grid[i];
  const auto& nb = lattice.neighbors(i);
  double sum = 0.0;
  sum += table(self, grid[nb[0]]);
  sum += table(self, grid[nb[1]]);
  sum += table(self, grid[nb[2]]);
  sum += table(self, grid[nb[3]]);
  return canonical_payoff(sum);
}

}  // namespace opd::kernels

#endif  // OPD_KERNELS_HPP
