#ifndef OPD_GAME_HPP
#define OPD_GAME_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <span>

#include "opd/lattice.hpp"

namespace opd {

enum class Strategy : std::uint8_t { Cooperator = 0, Defector = 1, Loner = 2 };

inline constexpr std::array<Strategy, 3> kAllStrategies = {Strategy::Cooperator, Strategy::Defector,
                                                            Strategy::Loner};

char to_char(Strategy s) noexcept;
// Throws std::invalid_argument for anything other than 'C', 'D', 'L'.
Strategy strategy_from_char(char c);

// Optional Prisoner's Dilemma payoffs plus the update-rule constants.
struct GameParams {
  double reward = 1.0;       // R
  double sucker = 0.0;       // S
  double temptation = 1.6;   // T (= b)
  double punishment = 0.0;   // P
  double loner_payoff = 0.3; // l
  double noise = 0.1;        // K
  double aspiration_rate = 0.05;

  // Boundary game R=1, P=S=0, T=b with the remaining defaults.
  static GameParams boundary(double b);

  // Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

// Payoff sums are rounded to 9 decimal places, so a sum of pair payoffs equals
// its decimal value: 0.3 + 0.3 + 0.3 gives the same double as the literal 0.9.
inline double canonical_payoff(double sum) noexcept { return std::round(sum * 1e9) / 1e9; }

// Row player's payoff for one pairwise game.
double pair_payoff(Strategy row, Strategy col, const GameParams& params) noexcept;

// Dense 3x3 lookup of pair_payoff, indexed [row][col].
class PayoffTable {
 public:
  explicit PayoffTable(const GameParams& params) noexcept;
  double operator()(Strategy row, Strategy col) const noexcept {
    return table_[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
  }

 private:
  std::array<std::array<double, 3>, 3> table_{};
};

struct NeighborComposition {
  int cooperators = 0;
  int defectors = 0;
  int loners = 0;
  bool operator==(const NeighborComposition&) const = default;
};

// Sum of pair payoffs against the four neighbours (N, S, W, E order), canonicalised.
double total_payoff(std::span<const Strategy> grid, const LatticeDim& dim, CellIndex i,
                    const GameParams& params);

NeighborComposition composition_of(std::span<const Strategy> grid, const LatticeDim& dim,
                                   CellIndex i);

}  // namespace opd

#endif  // OPD_GAME_HPP
