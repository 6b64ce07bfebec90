#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>

#include "opd/analysis.hpp"
#include "opd/init.hpp"

using namespace opd;

namespace {

constexpr Strategy C = Strategy::Cooperator;
constexpr Strategy D = Strategy::Defector;
constexpr Strategy L = Strategy::Loner;

std::size_t count(const StrategyGrid& g, Strategy s) {
  return static_cast<std::size_t>(std::count(g.cells.begin(), g.cells.end(), s));
}

std::size_t cl_edges(const StrategyGrid& g) {
  std::size_t edges = 0;
  for (std::size_t i = 0; i < g.cells.size(); ++i) {
    if (g.cells[i] != C) continue;
    for (std::size_t j : neighbors(g.dim, i)) edges += g.cells[j] == L;
  }
  return edges;
}

}  // namespace

TEST_CASE("InitialFractions validation") {
  CHECK_NOTHROW(InitialFractions{}.validate());
  CHECK_NOTHROW((InitialFractions{1, 0, 0}.validate()));
  CHECK_THROWS_AS((InitialFractions{0.3, 0.3, 0.3}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((InitialFractions{1.2, -0.2, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((InitialFractions{NAN, 0.5, 0.5}.validate()), std::invalid_argument);
}

TEST_CASE("init kind names round-trip") {
  for (InitKind k : {InitKind::RandomFractions, InitKind::SeparatedBands, InitKind::MixedClusters,
                     InitKind::Explicit}) {
    CHECK(init_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(init_kind_from_string("stripes"), std::invalid_argument);
}

TEST_CASE("random fractions") {
  Rng rng(1);
  const LatticeDim dim(100);

  SUBCASE("degenerate fractions give uniform grids") {
    CHECK(count(init_random_fractions(dim, {1, 0, 0}, rng), C) == dim.cell_count());
    CHECK(count(init_random_fractions(dim, {0, 1, 0}, rng), D) == dim.cell_count());
    CHECK(count(init_random_fractions(dim, {0, 0, 1}, rng), L) == dim.cell_count());
  }
  SUBCASE("thirds concentrate around 1/3") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng r(seed);
      const Fractions f = fractions(init_random_fractions(dim, {}, r).cells);
      CHECK(std::abs(f.cooperators - 1.0 / 3) < 0.02);
      CHECK(std::abs(f.defectors - 1.0 / 3) < 0.02);
      CHECK(std::abs(f.loners - 1.0 / 3) < 0.02);
    }
  }
  SUBCASE("skewed fractions") {
    Rng r(7);
    const Fractions f = fractions(init_random_fractions(dim, {0.09, 0.9, 0.01}, r).cells);
    CHECK(f.cooperators == doctest::Approx(0.09).epsilon(0.02 / 0.09));
    CHECK(f.defectors == doctest::Approx(0.9).epsilon(0.02));
    CHECK(f.loners < 0.03);
  }
  SUBCASE("deterministic in the seed") {
    Rng a(42), b(42), c(43);
    const auto ga = init_random_fractions(dim, {}, a);
    CHECK(ga == init_random_fractions(dim, {}, b));
    CHECK_FALSE(ga == init_random_fractions(dim, {}, c));
  }
  SUBCASE("invalid fractions are rejected") {
    CHECK_THROWS_AS(init_random_fractions(dim, {0.5, 0.5, 0.5}, rng), std::invalid_argument);
  }
}

TEST_CASE("separated bands") {
  const LatticeDim dim(100);
  const StrategyGrid g = init_separated_bands(dim, {0.1, 0.8, 0.1});
  CHECK(count(g, C) == 1000);
  CHECK(count(g, L) == 1000);
  CHECK(cl_edges(g) == 0);
  for (std::size_t r = 0; r < 100; ++r) {
    for (std::size_t c = 0; c < 100; ++c) {
      if (g.at(r, c) == C) CHECK(r < 50);
      if (g.at(r, c) == L) CHECK(r >= 50);
    }
  }
  // each band is a single full-width component; the defector strips between them split the torus in two
  CHECK(cluster_report(g, C).count() == 1);
  CHECK(cluster_report(g, L).count() == 1);
  CHECK(cluster_report(g, D).count() == 2);

  CHECK(count(init_separated_bands(dim, {0, 1, 0}), D) == dim.cell_count());
  CHECK(init_separated_bands(dim, {0.1, 0.8, 0.1}) == g);

  SUBCASE("no C-L edge across many fraction choices and sizes") {
    for (std::size_t side : {8u, 11u, 30u, 64u}) {
      for (double rc : {0.0, 0.05, 0.2, 0.3}) {
        for (double rl : {0.0, 0.1, 0.25}) {
          CAPTURE(side);
          CAPTURE(rc);
          CAPTURE(rl);
          try {
            const StrategyGrid b = init_separated_bands(LatticeDim(side), {rc, 1 - rc - rl, rl});
            CHECK(cl_edges(b) == 0);
            CHECK(b.cells.size() == side * side);
          } catch (const std::invalid_argument&) {
            // too large for this side; rejection is the documented behaviour
          }
        }
      }
    }
  }
  SUBCASE("bands that would touch are rejected") {
    CHECK_THROWS_AS(init_separated_bands(dim, {0.5, 0.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(init_separated_bands(dim, {0.495, 0.01, 0.495}), std::invalid_argument);
    CHECK(cl_edges(init_separated_bands(dim, {0.49, 0.02, 0.49})) == 0);
  }
}

TEST_CASE("mixed clusters") {
  const LatticeDim dim(100);
  Rng rng(9);
  const StrategyGrid g = init_mixed_clusters(dim, {0.1, 0.8, 0.1}, 5, rng);
  const std::size_t mixed = count(g, C) + count(g, L);
  CHECK(mixed == 5 * 20 * 20);
  CHECK(count(g, C) == doctest::Approx(1000).epsilon(0.1));
  CHECK(cluster_report(g, D).count() == 1);

  // recover the patches as components of the non-defector cells
  StrategyGrid mask(dim, D);
  for (std::size_t i = 0; i < g.cells.size(); ++i) {
    if (g.cells[i] != D) mask.cells[i] = C;
  }
  const ClusterReport patches = cluster_report(mask, C);
  REQUIRE(patches.count() == 5);
  for (std::size_t s : patches.sizes) CHECK(s == 400);
  CHECK(cl_edges(g) > 5 * 100);

  SUBCASE("every patch contains C-L contacts") {
    // walk each 20x20 patch via its top-left corner
    std::vector<bool> seen(g.cells.size(), false);
    std::size_t found = 0;
    for (std::size_t r = 0; r < 100; ++r) {
      for (std::size_t c = 0; c < 100; ++c) {
        const std::size_t i = dim.index(r, c);
        if (g.cells[i] == D || seen[i]) continue;
        ++found;
        std::size_t edges = 0;
        for (std::size_t dr = 0; dr < 20; ++dr) {
          for (std::size_t dc = 0; dc < 20; ++dc) {
            const std::size_t k = dim.index((r + dr) % 100, (c + dc) % 100);
            REQUIRE(g.cells[k] != D);
            seen[k] = true;
            if (g.cells[k] == C) {
              for (std::size_t j : neighbors(dim, k)) edges += g.cells[j] == L;
            }
          }
        }
        CHECK(edges > 0);
      }
    }
    CHECK(found == 5);
  }
  SUBCASE("one cluster covering the whole grid") {
    Rng r(3);
    const StrategyGrid whole = init_mixed_clusters(LatticeDim(50), {0.5, 0, 0.5}, 1, r);
    CHECK(count(whole, D) == 0);
    CHECK(count(whole, C) == doctest::Approx(1250).epsilon(0.1));
  }
  SUBCASE("deterministic in the seed") {
    Rng a(5), b(5);
    CHECK(init_mixed_clusters(dim, {0.1, 0.8, 0.1}, 5, a) ==
          init_mixed_clusters(dim, {0.1, 0.8, 0.1}, 5, b));
  }
  SUBCASE("impossible placements are rejected") {
    Rng r(1);
    CHECK_THROWS_AS(init_mixed_clusters(dim, {0.5, 0, 0.5}, 5, r), std::invalid_argument);
    CHECK_THROWS_AS(init_mixed_clusters(dim, {0.1, 0.8, 0.1}, 0, r), std::invalid_argument);
  }
  SUBCASE("background connected and patches disjoint across counts") {
    for (std::size_t k : {1u, 2u, 3u, 4u, 7u, 9u}) {
      CAPTURE(k);
      Rng r(k);
      const StrategyGrid m = init_mixed_clusters(dim, {0.05, 0.85, 0.1}, k, r);
      CHECK(cluster_report(m, D).count() == 1);
      StrategyGrid mk(dim, D);
      for (std::size_t i = 0; i < m.cells.size(); ++i) {
        if (m.cells[i] != D) mk.cells[i] = C;
      }
      CHECK(cluster_report(mk, C).count() == k);
    }
  }
}

TEST_CASE("explicit grids") {
  const LatticeDim dim(3);
  const StrategyGrid all_l(dim, L);
  CHECK(init_explicit(dim, all_l) == all_l);

  StrategyGrid checker(LatticeDim(4), C);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) checker.at(r, c) = (r + c) % 2 ? D : C;
  }
  CHECK(init_explicit(LatticeDim(4), checker) == checker);
  CHECK_THROWS_AS(init_explicit(LatticeDim(5), checker), std::invalid_argument);
  CHECK_THROWS_AS(StrategyGrid(dim, std::vector<Strategy>(8, C)), std::invalid_argument);

  InitSpec spec;
  spec.kind = InitKind::Explicit;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.explicit_grid = checker;
  Rng rng(0);
  CHECK(make_initial_grid(spec, LatticeDim(4), rng) == checker);
}

TEST_CASE("make_initial_grid dispatches and draws only where documented") {
  const LatticeDim dim(40);
  InitSpec spec;
  spec.fractions = {0.1, 0.8, 0.1};

  spec.kind = InitKind::SeparatedBands;
  Rng a(1), untouched(1);
  CHECK(make_initial_grid(spec, dim, a) == init_separated_bands(dim, spec.fractions));
  CHECK(a.next_u64() == untouched.next_u64());

  spec.kind = InitKind::MixedClusters;
  spec.cluster_count = 4;
  Rng b(2), c(2);
  CHECK(make_initial_grid(spec, dim, b) == init_mixed_clusters(dim, spec.fractions, 4, c));

  spec.kind = InitKind::RandomFractions;
  Rng d(3), e(3);
  CHECK(make_initial_grid(spec, dim, d) == init_random_fractions(dim, spec.fractions, e));
}
