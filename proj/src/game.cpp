#include "opd/game.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace opd {

char to_char(Strategy s) noexcept {
  switch (s) {
    case Strategy::Cooperator: return 'C';
    case Strategy::Defector: return 'D';
    case Strategy::Loner: return 'L';
  }
  return '?';
}

Strategy strategy_from_char(char c) {
  switch (c) {
    case 'C': return Strategy::Cooperator;
    case 'D': return Strategy::Defector;
    case 'L': return Strategy::Loner;
    default: throw std::invalid_argument(std::string("invalid strategy character '") + c + "'");
  }
}

GameParams GameParams::boundary(double b) {
  GameParams p;
  p.temptation = b;
  return p;
}

void GameParams::validate() const {
  for (double v : {reward, sucker, temptation, punishment, loner_payoff, noise, aspiration_rate}) {
    if (!std::isfinite(v)) throw std::invalid_argument("game parameters must be finite");
  }
  // S <= P rather than S < P so that the boundary game (P = S = 0) is accepted.
  if (!(sucker <= punishment && punishment < reward && reward < temptation)) {
    throw std::invalid_argument("payoffs must satisfy S <= P < R < T");
  }
  if (!(loner_payoff > 0.0 && loner_payoff < 1.0)) {
    throw std::invalid_argument("loner_payoff out of (0,1)");
  }
  if (!(noise > 0.0)) throw std::invalid_argument("noise K must be > 0");
  if (!(aspiration_rate >= 0.0 && aspiration_rate <= 1.0)) {
    throw std::invalid_argument("aspiration_rate out of [0,1]");
  }
}

double pair_payoff(Strategy row, Strategy col, const GameParams& params) noexcept {
  if (row == Strategy::Loner || col == Strategy::Loner) return params.loner_payoff;
  if (row == Strategy::Cooperator) {
    return col == Strategy::Cooperator ? params.reward : params.sucker;
  }
  return col == Strategy::Cooperator ? params.temptation : params.punishment;
}

PayoffTable::PayoffTable(const GameParams& params) noexcept {
  for (Strategy r : kAllStrategies) {
    for (Strategy c : kAllStrategies) {
      table_[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = pair_payoff(r, c, params);
    }
  }
}

double total_payoff(std::span<const Strategy> grid, const LatticeDim& dim, CellIndex i,
                    const GameParams& params) {
  if (grid.size() != dim.cell_count()) throw std::invalid_argument("grid size does not match lattice");
  double sum = 0.0;
  for (CellIndex j : neighbors(dim, i)) sum += pair_payoff(grid[i], grid[j], params);
  return canonical_payoff(sum);
}

NeighborComposition composition_of(std::span<const Strategy> grid, const LatticeDim& dim,
                                   CellIndex i) {
  if (grid.size() != dim.cell_count()) throw std::invalid_argument("grid size does not match lattice");
  NeighborComposition n;
  for (CellIndex j : neighbors(dim, i)) {
    switch (grid[j]) {
      case Strategy::Cooperator: ++n.cooperators; break;
      case Strategy::Defector: ++n.defectors; break;
      case Strategy::Loner: ++n.loners; break;
    }
  }
  return n;
}

}  // namespace opd
