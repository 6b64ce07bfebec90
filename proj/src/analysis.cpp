#include "opd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace opd {

Fractions to_fractions(const StrategyCounts& counts) {
  const auto n = static_cast<double>(counts[0] + counts[1] + counts[2]);
  if (n == 0.0) return {};
  return {static_cast<double>(counts[0]) / n, static_cast<double>(counts[1]) / n,
          static_cast<double>(counts[2]) / n};
}

void FractionSeries::record(const StrategyCounts& counts) {
  if (counts[0] + counts[1] + counts[2] != cell_count_) {
    throw std::logic_error("strategy counts do not sum to the cell count");
  }
  rows_.push_back(counts);
}

Fractions FractionSeries::stable_means() const {
  if (rows_.empty()) return {};
  const std::size_t stepped = rows_.size() - 1;
  const std::size_t w = std::min(window_, stepped);
  if (w == 0) return back();
  StrategyCounts sum{};
  for (std::size_t t = rows_.size() - w; t < rows_.size(); ++t) {
    for (std::size_t k = 0; k < 3; ++k) sum[k] += rows_[t][k];
  }
  const double denom = static_cast<double>(w) * static_cast<double>(cell_count_);
  return {static_cast<double>(sum[0]) / denom, static_cast<double>(sum[1]) / denom,
          static_cast<double>(sum[2]) / denom};
}

std::optional<std::size_t> FractionSeries::first_zero(Strategy s) const {
  const auto k = static_cast<std::size_t>(s);
  for (std::size_t t = 0; t < rows_.size(); ++t) {
    if (rows_[t][k] == 0) return t;
  }
  return std::nullopt;
}

double predicted_cooperator_fraction(double initial_aspiration, const InitialFractions& f,
                                     double loner_payoff) {
  if (!(initial_aspiration > 0.0 && initial_aspiration <= 1.2)) {
    throw std::domain_error("predicted_cooperator_fraction: A must lie in (0, 1.2]");
  }
  f.validate();
  // A / l is taken at its decimal value (0.9 / 0.3 is 3, not 3.0000000000000004).
  // Only snap onto positive integers: any A > 0 exceeds the all-defector payoff 0.
  const double q = initial_aspiration / loner_payoff;
  const double nearest = std::round(q);
  const double snapped = nearest >= 1.0 && std::abs(q - nearest) < 1e-9 ? nearest : q;
  const int k = static_cast<int>(std::ceil(snapped)) - 1;
  static constexpr double kBinom[5] = {1.0, 4.0, 6.0, 4.0, 1.0};
  double dissatisfied = 0.0;
  for (int m = 0; m <= std::min(k, 4); ++m) {
    dissatisfied += kBinom[m] * std::pow(f.loners, m) * std::pow(f.defectors, 4 - m);
  }
  return f.cooperators * (1.0 - dissatisfied);
}

double dissatisfaction_oracle(double initial_aspiration, const InitialFractions& f,
                              const GameParams& params, OracleScope scope) {
  const double weight[3] = {f.cooperators, f.defectors, f.loners};
  double total = 0.0;
  for (int code = 0; code < 81; ++code) {
    int rest = code;
    double probability = 1.0;
    double payoff = 0.0;
    bool has_cooperator = false;
    for (int slot = 0; slot < 4; ++slot) {
      const auto s = static_cast<Strategy>(rest % 3);
      rest /= 3;
      probability *= weight[static_cast<int>(s)];
      payoff += pair_payoff(Strategy::Cooperator, s, params);
      has_cooperator = has_cooperator || s == Strategy::Cooperator;
    }
    payoff = canonical_payoff(payoff);
    if (scope == OracleScope::NoCooperatorNeighbors && has_cooperator) continue;
    if (payoff < initial_aspiration) total += probability;
  }
  return total;
}

Fractions fractions(std::span<const Strategy> grid) {
  StrategyCounts counts{};
  for (Strategy s : grid) ++counts[static_cast<std::size_t>(s)];
  return to_fractions(counts);
}

std::size_t ClusterReport::total() const {
  std::size_t t = 0;
  for (std::size_t s : sizes) t += s;
  return t;
}

ClusterReport cluster_report(const StrategyGrid& grid, Strategy strategy) {
  ClusterReport report;
  report.strategy = strategy;
  const std::size_t n = grid.cells.size();
  std::vector<char> seen(n, 0);
  std::vector<CellIndex> stack;
  for (CellIndex start = 0; start < n; ++start) {
    if (seen[start] || grid.cells[start] != strategy) continue;
    std::size_t size = 0;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const CellIndex i = stack.back();
      stack.pop_back();
      ++size;
      for (CellIndex j : neighbors(grid.dim, i)) {
        if (!seen[j] && grid.cells[j] == strategy) {
          seen[j] = 1;
          stack.push_back(j);
        }
      }
    }
    report.sizes.push_back(size);
  }
  std::sort(report.sizes.begin(), report.sizes.end(), std::greater<>());
  return report;
}

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::StableCoexistence: return "StableCoexistence";
    case Outcome::DefectionSuppression: return "DefectionSuppression";
    case Outcome::LonerExtinctionTakeover: return "LonerExtinctionTakeover";
    case Outcome::CooperatorExtinction: return "CooperatorExtinction";
    case Outcome::AllLoner: return "AllLoner";
    case Outcome::Unclassified: return "Unclassified";
  }
  return "?";
}

Outcome classify_outcome(const FractionSeries& series, const OutcomeThresholds& thresholds) {
  if (series.empty()) return Outcome::Unclassified;
  const StrategyCounts& last = series.counts(series.size() - 1);
  if (last[0] == 0 && last[1] == 0) return Outcome::AllLoner;

  const auto c_gone = series.first_zero(Strategy::Cooperator);
  const auto l_gone = series.first_zero(Strategy::Loner);
  if (c_gone && (!l_gone || *c_gone <= *l_gone)) return Outcome::CooperatorExtinction;
  if (l_gone) return Outcome::LonerExtinctionTakeover;

  const Fractions stable = series.stable_means();
  if (stable.defectors < thresholds.suppression && stable.cooperators > thresholds.suppression &&
      stable.loners > thresholds.suppression) {
    return Outcome::DefectionSuppression;
  }
  if (stable.cooperators > thresholds.coexistence && stable.defectors > thresholds.coexistence &&
      stable.loners > thresholds.coexistence) {
    return Outcome::StableCoexistence;
  }
  return Outcome::Unclassified;
}

}  // namespace opd
