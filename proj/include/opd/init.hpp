#ifndef OPD_INIT_HPP
#define OPD_INIT_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "opd/game.hpp"
#include "opd/lattice.hpp"
#include "opd/rng.hpp"

namespace opd {

// Row-major strategy field on an L x L lattice.
struct StrategyGrid {
  LatticeDim dim;
  std::vector<Strategy> cells;

  explicit StrategyGrid(LatticeDim d, Strategy fill = Strategy::Defector)
      : dim(d), cells(d.cell_count(), fill) {}
  StrategyGrid(LatticeDim d, std::vector<Strategy> c);

  Strategy& at(std::size_t row, std::size_t col) { return cells[dim.index(row, col)]; }
  Strategy at(std::size_t row, std::size_t col) const { return cells[dim.index(row, col)]; }
  bool operator==(const StrategyGrid&) const = default;
};

struct InitialFractions {
  double cooperators = 1.0 / 3.0;
  double defectors = 1.0 / 3.0;
  double loners = 1.0 / 3.0;

  // Throws std::invalid_argument unless each lies in [0,1] and they sum to 1 within 1e-12.
  void validate() const;
};

enum class InitKind { RandomFractions, SeparatedBands, MixedClusters, Explicit };

std::string to_string(InitKind kind);
InitKind init_kind_from_string(const std::string& name);

struct InitSpec {
  InitKind kind = InitKind::RandomFractions;
  InitialFractions fractions;
  std::size_t cluster_count = 5;            // MixedClusters only
  std::optional<StrategyGrid> explicit_grid;  // Explicit only
  std::string grid_source;                    // where explicit_grid was read from, if a file

  void validate() const;
};

StrategyGrid init_random_fractions(const LatticeDim& dim, const InitialFractions& f, Rng& rng);

// Cooperator band centred in the top half, loner band centred in the bottom
// half, defectors elsewhere. The two bands never share an edge.
StrategyGrid init_separated_bands(const LatticeDim& dim, const InitialFractions& f);

// `cluster_count` disjoint square patches of well-mixed C/L on a defector background.
StrategyGrid init_mixed_clusters(const LatticeDim& dim, const InitialFractions& f,
                                 std::size_t cluster_count, Rng& rng);

StrategyGrid init_explicit(const LatticeDim& dim, const StrategyGrid& grid);

// Dispatch on spec.kind. Only RandomFractions and MixedClusters draw from rng.
StrategyGrid make_initial_grid(const InitSpec& spec, const LatticeDim& dim, Rng& rng);

}  // namespace opd

#endif  // OPD_INIT_HPP
