#include "bisimgame/diagnostics.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace bisimgame {

GameSession::GameSession(std::shared_ptr<const SolvedGame> game, std::uint32_t start, Side human)
    : game_(std::move(game)), human_(human), start_(start), current_(start) {
  if (start >= game_->arena.size()) throw SessionError("start config not in arena");
  visited_.assign(game_->arena.size(), 0);
  visited_[start] = 1;
}

GameSession new_session(std::shared_ptr<const SolvedGame> game, StateId s, StateId t, Side human) {
  auto idx = game->arena.find_initial(s, t);
  if (!idx) throw SessionError("no initial configuration for this pair in the arena");
  return GameSession(std::move(game), *idx, human);
}

bool GameSession::human_turn() const {
  if (human_ == Side::None) return false;
  const Player owner = game_->arena.configs[current_].owner;
  return (human_ == Side::Spoiler) == (owner == Player::Spoiler);
}

std::optional<Outcome> GameSession::outcome() const {
  const auto& a = game_->arena;
  if (a.edges(current_).empty()) return Outcome{opponent(a.configs[current_].owner), false};
  if (!repeated_) return std::nullopt;
  // The cycle runs from the earlier visit of `current_` to now.
  bool check = false;
  for (auto it = history_.rbegin(); it != history_.rend(); ++it) {
    if (a.accepting(it->from)) check = true;
    if (it->from == current_) break;
  }
  return Outcome{check ? Player::Duplicator : Player::Spoiler, true};
}

std::size_t GameSession::auto_choice() const {
  const auto& sol = game_->solution;
  const Player owner = game_->arena.configs[current_].owner;
  if (auto k = sol.strategy(owner).at(current_)) return *k;
  return 0;
}

void GameSession::step(std::optional<std::size_t> move) {
  if (finished()) throw SessionError("the game is over");
  const auto edges = game_->arena.edges(current_);
  std::size_t k;
  if (move) {
    if (!human_turn()) throw SessionError("it is not the human player's turn");
    if (*move >= edges.size()) throw SessionError("illegal move index " + std::to_string(*move));
    k = *move;
  } else {
    k = auto_choice();
  }
  history_.push_back({current_, k});
  current_ = edges[k].to;
  if (game_->arena.accepting(current_)) ++checks_;
  if (visited_[current_]) repeated_ = true;
  visited_[current_] = 1;
}

void GameSession::play_out(std::size_t limit) {
  for (std::size_t i = 0; i < limit && !finished(); ++i) step();
}

std::string describe_move(const Arena& a, std::uint32_t from, const ArenaEdge& edge, Player viewer) {
  const Lts& lts = *a.lts;
  const Config& src = a.configs[from];
  const Config& dst = a.configs[edge.to];
  auto arrow = [&](StateId x, LabelId l, StateId y) {
    return lts.state_name(x) + " --" + lts.label_text(l) + "--> " + lts.state_name(y);
  };
  std::string out;
  if (src.owner == Player::Spoiler) {
    const bool you = viewer == Player::Spoiler;
    if (edge.rule == Rule::S1) {
      out = you ? "You repeat the challenge --" : "Spoiler repeats the challenge --";
      return out + lts.label_text(dst.challenge.action) + "--> " + lts.state_name(dst.challenge.target);
    }
    if (is_switch(a.variant, edge.rule))
      out = you ? "You switch positions and move " : "Spoiler switches positions and moves ";
    else
      out = you ? "You move " : "Spoiler moves ";
    return out + arrow(dst.s, dst.challenge.action, dst.challenge.target);
  }
  out = viewer == Player::Duplicator ? "You respond " : "Duplicator responds ";
  if (edge.rule == Rule::D1) return out + "by not moving";
  const StateId answering = src.match.present() ? src.match.state : src.t;
  const StateId reached = dst.match.present() ? dst.match.state : dst.t;
  const bool tau_step = edge.rule == Rule::D3 || edge.rule == Rule::D3a || edge.rule == Rule::D3b || edge.rule == Rule::D3c;
  return out + "with " + arrow(answering, tau_step ? kTau : src.challenge.action, reached);
}

std::string transcript(const GameSession& session, TranscriptOptions opt) {
  const auto& a = session.game().arena;
  const Player viewer = session.human_side() == Side::Spoiler ? Player::Spoiler : Player::Duplicator;
  std::ostringstream o;
  if (opt.header) {
    const auto& c = a.configs[session.start()];
    o << "Game " << a.variant.name() << " on (" << a.lts->state_name(c.s) << "," << a.lts->state_name(c.t)
      << "), you play " << to_string(viewer) << "\n";
  }
  for (const auto& h : session.history()) o << describe_move(a, h.from, a.edges(h.from)[h.move], viewer) << "\n";
  if (auto out = session.outcome()) {
    if (out->winner == viewer) o << "You win.\n";
    else o << "You explored all options. You lose.\n";
  }
  return o.str();
}

ExplanationGraph explain(const SolvedGame& game, StateId s, StateId t) {
  const auto& a = game.arena;
  auto root = a.find_initial(s, t);
  if (!root) throw SessionError("no initial configuration for this pair in the arena");
  ExplanationGraph g;
  g.root = *root;
  g.winner = game.solution.regions.winner[*root];
  const auto& strat = game.solution.strategy(g.winner);
  std::vector<std::uint8_t> seen(a.size(), 0);
  std::deque<std::uint32_t> queue{*root};
  seen[*root] = 1;
  while (!queue.empty()) {
    auto c = queue.front();
    queue.pop_front();
    g.view.nodes.push_back(c);
    auto edges = a.edges(c);
    for (std::size_t k = 0; k < edges.size(); ++k) {
      if (a.configs[c].owner == g.winner && strat.at(c) != k) continue;
      g.view.edges.emplace_back(c, edges[k].rule, edges[k].to);
      if (!seen[edges[k].to]) {
        seen[edges[k].to] = 1;
        queue.push_back(edges[k].to);
      }
    }
  }
  std::sort(g.view.nodes.begin(), g.view.nodes.end());
  g.view.initials = {*root};
  return g;
}

}  // namespace bisimgame
