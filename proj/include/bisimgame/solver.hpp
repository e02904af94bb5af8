#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bisimgame/arena.hpp"

namespace bisimgame {

struct WinningRegions {
  std::vector<Player> winner;  // per config

  bool duplicator_wins(std::uint32_t c) const { return winner[c] == Player::Duplicator; }
  std::vector<std::uint32_t> region(Player p) const;
};

// Positional: choice[c] is an index into arena.edges(c), or -1 where the
// strategy is undefined (configs the player does not own, does not win, or
// that have no moves).
struct Strategy {
  Player player = Player::Duplicator;
  std::vector<std::int32_t> choice;

  std::optional<std::size_t> at(std::uint32_t c) const {
    if (choice[c] < 0) return std::nullopt;
    return static_cast<std::size_t>(choice[c]);
  }
};

struct Solution {
  WinningRegions regions;
  Strategy duplicator;
  Strategy spoiler;

  const Strategy& strategy(Player p) const { return p == Player::Spoiler ? spoiler : duplicator; }
};

// Büchi objective for Duplicator: infinitely many configs with reward check,
// or a finite play on which Spoiler is stuck.
Solution solve(const Arena& arena);

std::string solution_to_json(const Solution& sol);

struct SolvedGame {
  Arena arena;
  Solution solution;
};

inline std::shared_ptr<const SolvedGame> solve_game(Arena arena) {
  auto sol = solve(arena);
  return std::make_shared<const SolvedGame>(SolvedGame{std::move(arena), std::move(sol)});
}

}  // namespace bisimgame
