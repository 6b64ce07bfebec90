#ifndef OPD_LATTICE_HPP
#define OPD_LATTICE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace opd {

using CellIndex = std::size_t;

// Side length of an L x L periodic square lattice.
class LatticeDim {
 public:
  static constexpr std::size_t kMinSide = 3;

  // Throws std::invalid_argument for side < 3.
  explicit LatticeDim(std::size_t side);

  std::size_t side() const noexcept { return side_; }
  std::size_t cell_count() const noexcept { return side_ * side_; }

  std::size_t row(CellIndex i) const noexcept { return i / side_; }
  std::size_t col(CellIndex i) const noexcept { return i % side_; }
  CellIndex index(std::size_t row, std::size_t col) const noexcept { return row * side_ + col; }

  bool operator==(const LatticeDim&) const = default;

 private:
  std::size_t side_;
};

enum class Direction : std::uint8_t { North = 0, South = 1, West = 2, East = 3 };

using Neighborhood = std::array<CellIndex, 4>;

// Von Neumann neighbours of cell i, ordered N, S, W, E, wrapped modulo L.
// Throws std::out_of_range when i >= cell_count.
Neighborhood neighbors(const LatticeDim& dim, CellIndex i);

// Precomputed neighbour table for a fixed dimension. Entry order matches neighbors().
class Lattice {
 public:
  explicit Lattice(LatticeDim dim);

  const LatticeDim& dim() const noexcept { return dim_; }
  std::size_t cell_count() const noexcept { return dim_.cell_count(); }

  const std::array<std::uint32_t, 4>& neighbors(CellIndex i) const noexcept { return table_[i]; }

 private:
  LatticeDim dim_;
  std::vector<std::array<std::uint32_t, 4>> table_;
};

}  // namespace opd

#endif  // OPD_LATTICE_HPP
