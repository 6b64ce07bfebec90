#ifndef OPD_SERIES_HPP
#define OPD_SERIES_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "opd/game.hpp"

namespace opd {

struct Fractions {
  double cooperators = 0.0;
  double defectors = 0.0;
  double loners = 0.0;

  double of(Strategy s) const noexcept {
    switch (s) {
      case Strategy::Cooperator: return cooperators;
      case Strategy::Defector: return defectors;
      case Strategy::Loner: return loners;
    }
    return 0.0;
  }
  bool operator==(const Fractions&) const = default;
};

using StrategyCounts = std::array<std::size_t, 3>;  // indexed by Strategy

Fractions to_fractions(const StrategyCounts& counts);

// Per-step strategy counts of one run; row t holds the state after t steps.
//
// Counts are kept as integers so that each row sums to the cell count
// exactly; fractions are derived on demand.
class FractionSeries {
 public:
  FractionSeries(std::size_t cell_count, std::size_t window) : cell_count_(cell_count), window_(window) {}

  void record(const StrategyCounts& counts);

  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  std::size_t cell_count() const noexcept { return cell_count_; }
  std::size_t window() const noexcept { return window_; }

  const StrategyCounts& counts(std::size_t step) const { return rows_.at(step); }
  Fractions at(std::size_t step) const { return to_fractions(rows_.at(step)); }
  Fractions back() const { return to_fractions(rows_.back()); }

  // Mean fractions over the trailing window of steps 1..T. Falls back to the
  // final row when the window is empty (no steps taken, or window 0).
  Fractions stable_means() const;

  // First step at which the strategy's count is zero, if any.
  std::optional<std::size_t> first_zero(Strategy s) const;

 private:
  std::size_t cell_count_;
  std::size_t window_;
  std::vector<StrategyCounts> rows_;
};

}  // namespace opd

#endif  // OPD_SERIES_HPP
