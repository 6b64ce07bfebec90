#include <omp.h>

#include "opd/kernels.hpp"

namespace opd::kernels::omp {

void compute_payoffs(std::span<const Strategy> grid, const Lattice& lattice,
                     const PayoffTable& table, std::span<double> payoffs) {
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    payoffs[i] = payoff_of(grid, lattice, table, static_cast<std::size_t>(i));
  }
}

void relax_aspirations(std::span<double> aspirations, std::span<const double> payoffs,
                       double rate) {
  const auto n = static_cast<std::ptrdiff_t>(aspirations.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    aspirations[i] = relax_one(aspirations[i], payoffs[i], rate);
  }
}

StrategyCounts count_strategies(std::span<const Strategy> grid) {
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  std::size_t c = 0, d = 0, l = 0;
#pragma omp parallel for schedule(static) reduction(+ : c, d, l)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    // branch-free: the grid is close to random, so a switch mispredicts constantly
    c += grid[i] == Strategy::Cooperator;
    d += grid[i] == Strategy::Defector;
    l += grid[i] == Strategy::Loner;
  }
  return {c, d, l};
}

}  // namespace opd::kernels::omp
