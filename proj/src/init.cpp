#include "opd/init.hpp"

#include <cmath>
#include <stdexcept>

namespace opd {

StrategyGrid::StrategyGrid(LatticeDim d, std::vector<Strategy> c) : dim(d), cells(std::move(c)) {
  if (cells.size() != dim.cell_count()) {
    throw std::invalid_argument("strategy grid has " + std::to_string(cells.size()) +
                                " cells, expected " + std::to_string(dim.cell_count()));
  }
}

void InitialFractions::validate() const {
  for (double v : {cooperators, defectors, loners}) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("initial fraction out of [0,1]");
  }
  if (std::abs(cooperators + defectors + loners - 1.0) > 1e-12) {
    throw std::invalid_argument("initial fractions must sum to 1");
  }
}

std::string to_string(InitKind kind) {
  switch (kind) {
    case InitKind::RandomFractions: return "random";
    case InitKind::SeparatedBands: return "bands";
    case InitKind::MixedClusters: return "clusters";
    case InitKind::Explicit: return "explicit";
  }
  return "?";
}

InitKind init_kind_from_string(const std::string& name) {
  if (name == "random") return InitKind::RandomFractions;
  if (name == "bands") return InitKind::SeparatedBands;
  if (name == "clusters") return InitKind::MixedClusters;
  if (name == "explicit") return InitKind::Explicit;
  throw std::invalid_argument("unknown init kind '" + name +
                              "' (expected random, bands, clusters or explicit)");
}

void InitSpec::validate() const {
  fractions.validate();
  if (kind == InitKind::MixedClusters && cluster_count < 1) {
    throw std::invalid_argument("cluster_count must be >= 1");
  }
  if (kind == InitKind::Explicit && !explicit_grid) {
    throw std::invalid_argument("explicit init requires a grid");
  }
}

StrategyGrid init_random_fractions(const LatticeDim& dim, const InitialFractions& f, Rng& rng) {
  f.validate();
  StrategyGrid grid(dim);
  const double c_cut = f.cooperators;
  const double d_cut = f.cooperators + f.defectors;
  for (Strategy& s : grid.cells) {
    const double u = rng.uniform01();
    if (u < c_cut) {
      s = Strategy::Cooperator;
    } else if (u < d_cut) {
      s = Strategy::Defector;
    } else {
      s = Strategy::Loner;
    }
  }
  return grid;
}

namespace {

// Fill `count` cells row-major starting at the first cell of `first_row`.
void fill_band(StrategyGrid& grid, std::size_t first_row, std::size_t count, Strategy s) {
  const std::size_t start = grid.dim.index(first_row, 0);
  for (std::size_t k = 0; k < count; ++k) grid.cells[start + k] = s;
}

std::size_t count_cl_edges(const StrategyGrid& grid) {
  std::size_t edges = 0;
  for (CellIndex i = 0; i < grid.cells.size(); ++i) {
    if (grid.cells[i] != Strategy::Cooperator) continue;
    for (CellIndex j : neighbors(grid.dim, i)) edges += grid.cells[j] == Strategy::Loner;
  }
  return edges;
}

}  // namespace

StrategyGrid init_separated_bands(const LatticeDim& dim, const InitialFractions& f) {
  f.validate();
  const std::size_t L = dim.side();
  const auto n = static_cast<double>(dim.cell_count());
  const auto n_c = static_cast<std::size_t>(std::llround(f.cooperators * n));
  const auto n_l = static_cast<std::size_t>(std::llround(f.loners * n));
  const std::size_t rows_c = (n_c + L - 1) / L;
  const std::size_t rows_l = (n_l + L - 1) / L;
  const std::size_t top = L / 2;
  const std::size_t bottom = L - top;

  // Each band needs at least one defector row inside its own half.
  if ((rows_c > 0 && rows_c + 1 > top) || (rows_l > 0 && rows_l + 1 > bottom)) {
    throw std::invalid_argument("separated bands do not fit: cooperator and loner bands would touch");
  }

  StrategyGrid grid(dim, Strategy::Defector);
  fill_band(grid, (top - rows_c) / 2, n_c, Strategy::Cooperator);
  fill_band(grid, top + (bottom - rows_l) / 2, n_l, Strategy::Loner);

  if (count_cl_edges(grid) != 0) {
    throw std::logic_error("separated bands produced cooperator-loner contact");
  }
  return grid;
}

StrategyGrid init_mixed_clusters(const LatticeDim& dim, const InitialFractions& f,
                                 std::size_t cluster_count, Rng& rng) {
  f.validate();
  if (cluster_count < 1) throw std::invalid_argument("cluster_count must be >= 1");

  const std::size_t L = dim.side();
  const double mixed = f.cooperators + f.loners;
  StrategyGrid grid(dim, Strategy::Defector);
  if (mixed <= 0.0) return grid;

  const double area = mixed * static_cast<double>(dim.cell_count()) / static_cast<double>(cluster_count);
  const auto patch = static_cast<std::size_t>(std::llround(std::sqrt(area)));
  if (patch == 0) throw std::invalid_argument("cluster patches would be empty");

  const auto slots_per_side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(cluster_count))));
  const std::size_t slot = L / slots_per_side;
  const bool whole_grid = cluster_count == 1 && patch >= L;
  if (!whole_grid && patch >= slot) {
    throw std::invalid_argument("cannot place " + std::to_string(cluster_count) +
                                " disjoint patches of side " + std::to_string(patch) +
                                " on L=" + std::to_string(L));
  }

  const double c_share = f.cooperators / mixed;
  const std::size_t total_slots = slots_per_side * slots_per_side;
  const std::size_t side = whole_grid ? L : patch;
  for (std::size_t k = 0; k < cluster_count; ++k) {
    const std::size_t s = k * total_slots / cluster_count;
    const std::size_t r0 = whole_grid ? 0 : (s / slots_per_side) * slot + (slot - patch) / 2;
    const std::size_t c0 = whole_grid ? 0 : (s % slots_per_side) * slot + (slot - patch) / 2;
    for (std::size_t r = r0; r < r0 + side; ++r) {
      for (std::size_t c = c0; c < c0 + side; ++c) {
        grid.at(r, c) = rng.uniform01() < c_share ? Strategy::Cooperator : Strategy::Loner;
      }
    }
  }
  return grid;
}

StrategyGrid init_explicit(const LatticeDim& dim, const StrategyGrid& grid) {
  if (grid.dim != dim) {
    throw std::invalid_argument("explicit grid has side " + std::to_string(grid.dim.side()) +
                                ", expected " + std::to_string(dim.side()));
  }
  return grid;
}

StrategyGrid make_initial_grid(const InitSpec& spec, const LatticeDim& dim, Rng& rng) {
  spec.validate();
  switch (spec.kind) {
    case InitKind::RandomFractions: return init_random_fractions(dim, spec.fractions, rng);
    case InitKind::SeparatedBands: return init_separated_bands(dim, spec.fractions);
    case InitKind::MixedClusters:
      return init_mixed_clusters(dim, spec.fractions, spec.cluster_count, rng);
    case InitKind::Explicit: return init_explicit(dim, *spec.explicit_grid);
  }
  throw std::logic_error("unhandled init kind");
}

}  // namespace opd
