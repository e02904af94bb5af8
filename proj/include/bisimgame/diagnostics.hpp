#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bisimgame/solver.hpp"

namespace bisimgame {

enum class Side : std::uint8_t { Spoiler, Duplicator, None };

class SessionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HistoryEntry {
  std::uint32_t from;
  std::size_t move;  // index into arena.edges(from)
};

struct Outcome {
  Player winner;
  bool lasso;  // ended by revisiting a config rather than by a dead end
};

class GameSession {
 public:
  GameSession(std::shared_ptr<const SolvedGame> game, std::uint32_t start, Side human);

  const SolvedGame& game() const { return *game_; }
  std::shared_ptr<const SolvedGame> game_ptr() const { return game_; }
  Side human_side() const { return human_; }
  std::uint32_t start() const { return start_; }
  std::uint32_t current() const { return current_; }
  const std::vector<HistoryEntry>& history() const { return history_; }
  std::size_t check_count() const { return checks_; }

  bool human_turn() const;
  // Set once the current config has no moves or repeats an earlier one.
  std::optional<Outcome> outcome() const;
  bool finished() const { return outcome().has_value(); }

  // Explicit moves are only accepted on the human's turn. Auto plays the
  // owner's winning strategy when it has one, else the first legal move.
  void step(std::optional<std::size_t> move = std::nullopt);
  std::size_t auto_choice() const;
  // Auto-steps until finished or `limit` moves were made.
  void play_out(std::size_t limit = 1'000'000);

 private:
  std::shared_ptr<const SolvedGame> game_;
  Side human_;
  std::uint32_t start_, current_;
  std::vector<HistoryEntry> history_;
  std::vector<std::uint8_t> visited_;
  bool repeated_ = false;
  std::size_t checks_ = 0;
};

// Throws SessionError when (s,t) has no initial config in the arena.
GameSession new_session(std::shared_ptr<const SolvedGame> game, StateId s, StateId t, Side human);

// Text of a single half-move from the perspective of `viewer`.
std::string describe_move(const Arena& a, std::uint32_t from, const ArenaEdge& edge, Player viewer);

struct TranscriptOptions {
  bool header = false;
};
std::string transcript(const GameSession& session, TranscriptOptions opt = {});

struct ExplanationGraph {
  Player winner;
  std::uint32_t root;
  ArenaView view;
};

ExplanationGraph explain(const SolvedGame& game, StateId s, StateId t);

}  // namespace bisimgame
