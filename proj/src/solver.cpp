#include "bisimgame/solver.hpp"

#include <deque>
#include <algorithm>
#include <limits>
#include <tuple>

#include <json.hpp>

namespace bisimgame {

std::vector<std::uint32_t> WinningRegions::region(Player p) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t c = 0; c < winner.size(); ++c)
    if (winner[c] == p) out.push_back(c);
  return out;
}

namespace {

constexpr std::uint32_t kUnranked = std::numeric_limits<std::uint32_t>::max();

class Solver {
 public:
  explicit Solver(const Arena& a) : a_(a), n_(static_cast<std::uint32_t>(a.size())) {
    pred_offsets_.assign(n_ + 1, 0);
    for (std::uint32_t c = 0; c < n_; ++c)
      for (const auto& e : a.edges(c)) ++pred_offsets_[e.to + 1];
    for (std::uint32_t c = 0; c < n_; ++c) pred_offsets_[c + 1] += pred_offsets_[c];
    preds_.resize(pred_offsets_[n_]);
    auto fill = pred_offsets_;
    for (std::uint32_t c = 0; c < n_; ++c)
      for (const auto& e : a.edges(c)) preds_[fill[e.to]++] = c;
  }

  Solution run() {
    // Spoiler's region, tagged by (iteration, attractor rank).
    std::vector<std::uint8_t> spoiler_won(n_, 0);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> s_tag(n_, {kUnranked, kUnranked});
    std::vector<std::uint32_t> d_rank(n_, kUnranked);

    std::vector<std::uint32_t> seeds;
    for (std::uint32_t c = 0; c < n_; ++c)
      if (a_.edges(c).empty() && a_.configs[c].owner == Player::Duplicator) seeds.push_back(c);
    std::vector<std::uint8_t> everywhere(n_, 1);
    attract(Player::Spoiler, everywhere, spoiler_won, seeds, [&](std::uint32_t c, std::uint32_t r) {
      s_tag[c] = {0, r};
    });

    for (std::uint32_t iteration = 1;; ++iteration) {
      std::vector<std::uint8_t> game(n_, 0);
      std::size_t game_size = 0;
      for (std::uint32_t c = 0; c < n_; ++c)
        if (!spoiler_won[c]) game[c] = 1, ++game_size;
      std::vector<std::uint32_t> targets;
      for (std::uint32_t c = 0; c < n_; ++c)
        if (game[c] && (a_.accepting(c) || (a_.edges(c).empty() && a_.configs[c].owner == Player::Spoiler)))
          targets.push_back(c);
      std::vector<std::uint8_t> reach(n_, 0);
      std::fill(d_rank.begin(), d_rank.end(), kUnranked);
      std::size_t reached =
          attract(Player::Duplicator, game, reach, targets, [&](std::uint32_t c, std::uint32_t r) { d_rank[c] = r; });
      if (reached == game_size) break;
      // Whatever cannot reach an accepting config is lost for Duplicator.
      std::vector<std::uint32_t> trapped;
      for (std::uint32_t c = 0; c < n_; ++c)
        if (game[c] && !reach[c]) trapped.push_back(c);
      attract(Player::Spoiler, everywhere, spoiler_won, trapped, [&](std::uint32_t c, std::uint32_t r) {
        s_tag[c] = {iteration, r};
      });
    }

    Solution sol;
    sol.regions.winner.resize(n_);
    for (std::uint32_t c = 0; c < n_; ++c) sol.regions.winner[c] = spoiler_won[c] ? Player::Spoiler : Player::Duplicator;
    sol.duplicator = extract(Player::Duplicator, sol.regions.winner, [&](std::uint32_t from, std::uint32_t to) {
      return d_rank[to] < d_rank[from] || d_rank[from] == 0;
    });
    sol.spoiler = extract(Player::Spoiler, sol.regions.winner, [&](std::uint32_t from, std::uint32_t to) {
      // Within a trapped set (rank 0, iteration >= 1) staying put is progress.
      return s_tag[to] < s_tag[from] || (s_tag[from].second == 0 && s_tag[from].first > 0 && s_tag[to] == s_tag[from]);
    });
    return sol;
  }

 private:
  // Extends `set` with `player`'s attractor of `seeds` inside `within`,
  // reporting each newly added config with its rank. Opponent configs with no
  // move inside `within` are attracted vacuously. Returns the size of the
  // resulting set restricted to `within`.
  template <class OnAdd>
  std::size_t attract(Player player, const std::vector<std::uint8_t>& within, std::vector<std::uint8_t>& set,
                      const std::vector<std::uint32_t>& seeds, OnAdd on_add) {
    std::vector<std::uint32_t> count(n_, 0);
    std::deque<std::pair<std::uint32_t, std::uint32_t>> queue;
    auto add = [&](std::uint32_t c, std::uint32_t r) {
      set[c] = 1;
      on_add(c, r);
      queue.emplace_back(c, r);
    };
    // Earlier members still discharge their predecessors' counters.
    for (std::uint32_t c = 0; c < n_; ++c)
      if (within[c] && set[c]) queue.emplace_back(c, 0);
    for (auto c : seeds)
      if (within[c] && !set[c]) add(c, 0);
    for (std::uint32_t c = 0; c < n_; ++c) {
      if (!within[c] || a_.configs[c].owner == player) continue;
      for (const auto& e : a_.edges(c))
        if (within[e.to]) ++count[c];
      if (count[c] == 0 && !set[c]) add(c, 0);
    }
    while (!queue.empty()) {
      auto [v, r] = queue.front();
      queue.pop_front();
      for (auto k = pred_offsets_[v]; k < pred_offsets_[v + 1]; ++k) {
        const auto u = preds_[k];
        if (!within[u] || set[u]) continue;
        if (a_.configs[u].owner == player || --count[u] == 0) add(u, r + 1);
      }
    }
    std::size_t size = 0;
    for (std::uint32_t c = 0; c < n_; ++c)
      if (within[c] && set[c]) ++size;
    return size;
  }

  // Each won config first takes its lowest (rule, target) move that stays in
  // the region. Such greedy choices may close a cycle that is bad for the
  // player (one through a check for Spoiler, one avoiding checks for
  // Duplicator); greedy configs on such cycles fall back to the lowest
  // rank-decreasing move, which can never close a bad cycle on its own.
  template <class Progress>
  Strategy extract(Player p, const std::vector<Player>& winner, Progress progress) {
    Strategy st{p, std::vector<std::int32_t>(n_, -1)};
    std::vector<std::uint8_t> greedy(n_, 0);
    auto pick = [&](std::uint32_t c, bool require_progress) {
      auto es = a_.edges(c);
      std::int32_t best = -1;
      for (std::size_t k = 0; k < es.size(); ++k) {
        if (winner[es[k].to] != p || (require_progress && !progress(c, es[k].to))) continue;
        if (best < 0 || std::tie(es[k].rule, es[k].to) < std::tie(es[best].rule, es[best].to))
          best = static_cast<std::int32_t>(k);
      }
      st.choice[c] = best;
    };
    for (std::uint32_t c = 0; c < n_; ++c)
      if (winner[c] == p && a_.configs[c].owner == p && !a_.edges(c).empty()) {
        pick(c, false);
        greedy[c] = 1;
      }
    for (int round = 0;; ++round) {
      auto bad = bad_components(p, winner, st);
      bool any = false;
      for (std::uint32_t c = 0; c < n_; ++c)
        if (greedy[c] && (bad[c] || round >= kMaxRepairRounds)) {
          greedy[c] = 0;
          st.choice[c] = -1;
          pick(c, true);
          any = true;
        }
      if (!any) break;
    }
    return st;
  }

  // Flags configs lying on a cycle of p's solitaire game that is losing for
  // p: a cycle through a check for Spoiler, a check-free cycle for Duplicator.
  std::vector<std::uint8_t> bad_components(Player p, const std::vector<Player>& winner, const Strategy& st) const {
    // Duplicator's bad cycles live in the subgraph without checks.
    auto in_graph = [&](std::uint32_t c) {
      return winner[c] == p && (p == Player::Spoiler || !a_.accepting(c));
    };
    auto succ = [&](std::uint32_t c, auto&& f) {
      auto es = a_.edges(c);
      if (a_.configs[c].owner == p) {
        if (st.choice[c] >= 0) f(es[static_cast<std::size_t>(st.choice[c])].to);
      } else {
        for (const auto& e : es) f(e.to);
      }
    };
    // Iterative Tarjan.
    std::vector<std::int64_t> index(n_, -1), low(n_, 0);
    std::vector<std::uint8_t> on_stack(n_, 0), bad(n_, 0);
    std::vector<std::uint32_t> stack;
    std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>> frames;
    std::int64_t counter = 0;
    for (std::uint32_t root = 0; root < n_; ++root) {
      if (!in_graph(root) || index[root] >= 0) continue;
      auto open = [&](std::uint32_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
        std::vector<std::uint32_t> next;
        succ(v, [&](std::uint32_t w) {
          if (in_graph(w)) next.push_back(w);
        });
        std::reverse(next.begin(), next.end());
        frames.emplace_back(v, std::move(next));
      };
      open(root);
      while (!frames.empty()) {
        auto& [v, next] = frames.back();
        if (!next.empty()) {
          auto w = next.back();
          next.pop_back();
          if (index[w] < 0) open(w);
          else if (on_stack[w]) low[v] = std::min(low[v], index[w]);
          continue;
        }
        const auto done = v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
        if (low[done] != index[done]) continue;
        std::vector<std::uint32_t> comp;
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != done);
        bool cyclic = comp.size() > 1;
        if (!cyclic) succ(done, [&](std::uint32_t x) { cyclic = cyclic || x == done; });
        if (!cyclic) continue;
        bool is_bad = p == Player::Duplicator;
        if (p == Player::Spoiler)
          for (auto x : comp) is_bad = is_bad || a_.accepting(x);
        if (is_bad)
          for (auto x : comp) bad[x] = 1;
      }
    }
    return bad;
  }

  static constexpr int kMaxRepairRounds = 64;

  const Arena& a_;
  std::uint32_t n_;
  std::vector<std::size_t> pred_offsets_;
  std::vector<std::uint32_t> preds_;
};

}  // namespace

Solution solve(const Arena& arena) { return Solver(arena).run(); }

std::string solution_to_json(const Solution& sol) {
  nlohmann::json j;
  j["duplicator"] = sol.regions.region(Player::Duplicator);
  j["spoiler"] = sol.regions.region(Player::Spoiler);
  for (const auto* st : {&sol.duplicator, &sol.spoiler}) {
    nlohmann::json m = nlohmann::json::object();
    for (std::uint32_t c = 0; c < st->choice.size(); ++c)
      if (st->choice[c] >= 0) m[std::to_string(c)] = st->choice[c];
    j[st == &sol.duplicator ? "strategy_d" : "strategy_s"] = std::move(m);
  }
  return j.dump();
}

}  // namespace bisimgame
