#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <set>

#include "opd/lattice.hpp"

using opd::LatticeDim;
using opd::Neighborhood;

TEST_CASE("neighbors: interior and wrapped cells") {
  CHECK(opd::neighbors(LatticeDim(3), 4) == Neighborhood{1, 7, 3, 5});
  CHECK(opd::neighbors(LatticeDim(3), 0) == Neighborhood{6, 3, 2, 1});
  CHECK(opd::neighbors(LatticeDim(100), 0) == Neighborhood{9900, 100, 99, 1});
  CHECK(opd::neighbors(LatticeDim(100), 9999) == Neighborhood{9899, 99, 9998, 9900});
}

TEST_CASE("neighbors: out of range index and undersized lattice") {
  CHECK_THROWS_AS(opd::neighbors(LatticeDim(3), 9), std::out_of_range);
  CHECK_THROWS_AS(LatticeDim(2), std::invalid_argument);
  CHECK_THROWS_AS(LatticeDim(0), std::invalid_argument);
}

TEST_CASE("neighbors: distinct, irreflexive, symmetric, translation invariant") {
  for (std::size_t L : {3u, 4u, 5u, 8u, 17u}) {
    const LatticeDim dim(L);
    CAPTURE(L);
    for (std::size_t i = 0; i < dim.cell_count(); ++i) {
      const auto nb = opd::neighbors(dim, i);
      std::set<std::size_t> unique(nb.begin(), nb.end());
      CHECK(unique.size() == 4);
      CHECK(unique.count(i) == 0);
      for (std::size_t j : nb) {
        const auto back = opd::neighbors(dim, j);
        CHECK(std::find(back.begin(), back.end(), i) != back.end());
      }
      // shifting the cell by (dr, dc) shifts each neighbour by the same amount
      for (std::size_t dr : {1u, 2u}) {
        for (std::size_t dc : {0u, 1u}) {
          auto shift = [&](std::size_t k) {
            return dim.index((dim.row(k) + dr) % L, (dim.col(k) + dc) % L);
          };
          const auto moved = opd::neighbors(dim, shift(i));
          for (std::size_t k = 0; k < 4; ++k) CHECK(moved[k] == shift(nb[k]));
        }
      }
    }
  }
}

TEST_CASE("Lattice table matches neighbors()") {
  const LatticeDim dim(6);
  const opd::Lattice lattice(dim);
  for (std::size_t i = 0; i < dim.cell_count(); ++i) {
    const auto nb = opd::neighbors(dim, i);
    for (std::size_t k = 0; k < 4; ++k) CHECK(lattice.neighbors(i)[k] == nb[k]);
  }
}
