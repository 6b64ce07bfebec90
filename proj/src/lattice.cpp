#include "opd/lattice.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace opd {

LatticeDim::LatticeDim(std::size_t side) : side_(side) {
  if (side < kMinSide) {
    throw std::invalid_argument("lattice side length must be >= 3, got " + std::to_string(side));
  }
  if (side > 46340) {  // cell_count must fit the 32-bit neighbour table
    throw std::invalid_argument("lattice side length too large: " + std::to_string(side));
  }
}

Neighborhood neighbors(const LatticeDim& dim, CellIndex i) {
  if (i >= dim.cell_count()) {
    throw std::out_of_range("cell index " + std::to_string(i) + " out of range for L=" +
                            std::to_string(dim.side()));
  }
  const std::size_t L = dim.side();
  const std::size_t r = dim.row(i);
  const std::size_t c = dim.col(i);
  return {dim.index((r + L - 1) % L, c), dim.index((r + 1) % L, c), dim.index(r, (c + L - 1) % L),
          dim.index(r, (c + 1) % L)};
}

Lattice::Lattice(LatticeDim dim) : dim_(dim), table_(dim.cell_count()) {
  for (CellIndex i = 0; i < table_.size(); ++i) {
    const auto nb = opd::neighbors(dim_, i);
    for (std::size_t k = 0; k < 4; ++k) table_[i][k] = static_cast<std::uint32_t>(nb[k]);
  }
}

}  // namespace opd
