#include "opd/kernels.hpp"

namespace opd::kernels::serial {

void compute_payoffs(std::span<const Strategy> grid, const Lattice& lattice,
                     const PayoffTable& table, std::span<double> payoffs) {
  for (std::size_t i = 0; i < grid.size(); ++i) payoffs[i] = payoff_of(grid, lattice, table, i);
}

void relax_aspirations(std::span<double> aspirations, std::span<const double> payoffs,
                       double rate) {
  for (std::size_t i = 0; i < aspirations.size(); ++i) {
    aspirations[i] = relax_one(aspirations[i], payoffs[i], rate);
  }
}

StrategyCounts count_strategies(std::span<const Strategy> grid) {
  StrategyCounts counts{};
  for (Strategy s : grid) ++counts[static_cast<std::size_t>(s)];
  return counts;
}

}  // namespace opd::kernels::serial
