#include <doctest.h>

#include <sstream>

#include "bisimgame/diagnostics.hpp"
#include "support/fixtures.hpp"
#include "support/strategy_check.hpp"

using namespace bisimgame;

namespace {

std::shared_ptr<const SolvedGame> solved(GameVariant v, std::shared_ptr<const Lts> lts,
                                         std::vector<std::pair<StateId, StateId>> pairs) {
  return solve_game(build_arena(v, std::move(lts), pairs));
}

std::shared_ptr<const SolvedGame> abp_game(GameKind kind) {
  auto joined = fixtures::buffer_abp();
  const auto zero = static_cast<StateId>(joined.offset);
  return solved({kind, {}}, std::make_shared<const Lts>(std::move(joined.lts)), {{0, zero}});
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("ABP against the buffer, human as Duplicator") {
  for (auto kind : {GameKind::Bbed, GameKind::Gbed}) {
    auto game = abp_game(kind);
    auto session = new_session(game, 0, 3, Side::Duplicator);
    CHECK(game->solution.regions.winner[session.current()] == Player::Spoiler);
    CHECK_FALSE(session.human_turn());
    session.play_out();
    REQUIRE(session.finished());
    CHECK(session.outcome()->winner == Player::Spoiler);
    auto lines = lines_of(transcript(session));
    REQUIRE(lines.size() >= 3);
    CHECK(lines.front() == "Spoiler moves A --r(d1)--> B");
    CHECK(lines[1] == "You respond with file2:0 --r(d1)--> file2:1");
    CHECK(lines.back() == "You explored all options. You lose.");
    bool idles = false;
    for (const auto& l : lines) idles = idles || l == "You respond by not moving";
    CHECK(idles);
  }
}

TEST_CASE("transcript is a function of the history") {
  auto game = abp_game(GameKind::Gbed);
  auto one = new_session(game, 0, 3, Side::Duplicator), two = new_session(game, 0, 3, Side::Duplicator);
  one.play_out();
  two.play_out();
  CHECK(transcript(one) == transcript(two));
  auto fresh = new_session(game, 0, 3, Side::Duplicator);
  CHECK(transcript(fresh).empty());
  CHECK(transcript(fresh, {true}) == "Game Gbed{} on (A,file2:0), you play duplicator\n");
}

TEST_CASE("session errors") {
  auto fig2 = fixtures::load_shared("fig2");
  auto game = solved({GameKind::Gb, {}}, fig2, {{0, 5}});
  CHECK_THROWS_AS(new_session(game, 1, 2, Side::None), SessionError);
  CHECK_THROWS_AS(GameSession(game, 999999, Side::None), SessionError);
  auto session = new_session(game, 0, 5, Side::Duplicator);
  CHECK_THROWS_AS(session.step(0), SessionError);  // Spoiler's turn
  session.step();
  REQUIRE(session.human_turn());
  CHECK_THROWS_AS(session.step(1000), SessionError);
  session.play_out();
  CHECK(session.finished());
  CHECK_THROWS_AS(session.step(), SessionError);
}

TEST_CASE("Spoiler stuck gives a Duplicator win") {
  auto lone = std::make_shared<const Lts>(parse_aut("des (0,0,1)\n"));
  auto game = solved({GameKind::Gb, {}}, lone, {{0, 0}});
  auto session = new_session(game, 0, 0, Side::Duplicator);
  REQUIRE(session.finished());
  CHECK(session.outcome()->winner == Player::Duplicator);
  CHECK_FALSE(session.outcome()->lasso);
  CHECK(transcript(session) == "You win.\n");
}

TEST_CASE("lasso endings decide by the checks on the cycle") {
  auto loop = std::make_shared<const Lts>(parse_aut("des (0,1,1)\n(0,a,0)\n"));
  auto game = solved({GameKind::Gb, {}}, loop, {{0, 0}});
  auto session = new_session(game, 0, 0, Side::None);
  session.play_out();
  REQUIRE(session.finished());
  CHECK(session.outcome()->lasso);
  CHECK(session.outcome()->winner == Player::Duplicator);

  auto spin = std::make_shared<const Lts>(parse_aut("des (0,1,2)\n(0,tau,0)\n"));
  auto ed = solved({GameKind::Gbed, {}}, spin, {{0, 1}});
  auto lost = new_session(ed, 0, 1, Side::Spoiler);
  // The human owns Spoiler's turns here; auto still drives them.
  lost.play_out();
  REQUIRE(lost.finished());
  CHECK(lost.outcome()->winner == Player::Spoiler);
  auto lines = lines_of(transcript(lost));
  CHECK(lines.front() == "You move 0 --tau--> 0");
  CHECK(lines[1] == "Duplicator responds by not moving");
  CHECK(lines.back() == "You win.");
}

TEST_CASE("check count follows the visited configs") {
  auto game = abp_game(GameKind::Gb);
  auto session = new_session(game, 0, 3, Side::None);
  for (int i = 0; i < 40 && !session.finished(); ++i) {
    session.step();
    std::size_t checks = 0;
    for (std::size_t k = 1; k < session.history().size(); ++k) checks += game->arena.accepting(session.history()[k].from);
    checks += game->arena.accepting(session.current());
    CHECK(session.check_count() == checks);
  }
}

TEST_CASE("engine on a winning side stays in its region") {
  for (auto kind : {GameKind::Gb, GameKind::Gbed}) {
    auto game = abp_game(kind);
    const auto& sol = game->solution;
    auto start = *game->arena.find_initial(0, 3);
    const Player engine = sol.regions.winner[start];
    const Side human = engine == Player::Spoiler ? Side::Duplicator : Side::Spoiler;
    // The human tries every first answer; the engine must keep winning.
    auto probe = GameSession(game, start, human);
    if (!probe.human_turn()) probe.step();
    const auto options = game->arena.edges(probe.current()).size();
    for (std::size_t k = 0; k < options; ++k) {
      auto s = GameSession(game, start, human);
      if (!s.human_turn()) s.step();
      s.step(k);
      for (int i = 0; i < 200 && !s.finished(); ++i) {
        if (s.human_turn()) s.step(s.history().size() % game->arena.edges(s.current()).size());
        else {
          s.step();
          CHECK(sol.regions.winner[s.current()] == engine);
        }
      }
    }
  }
}

TEST_CASE("Ex. 5.2: explanation chain for A and C") {
  auto fig5 = fixtures::load_shared("fig5");
  auto game = solved({GameKind::Gb, {}}, fig5, {{0, 2}});
  auto g = explain(*game, 0, 2);
  CHECK(g.winner == Player::Spoiler);
  std::vector<std::string> texts;
  for (auto c : g.view.nodes) texts.push_back(describe(game->arena.configs[c], *fig5, game->arena.variant));
  CHECK(std::find(texts.begin(), texts.end(), "⟨(A,D),(b,B),(D,☹),✓⟩D") != texts.end());
  CHECK(g.view.nodes.size() == 4);
  for (auto c : g.view.nodes) CHECK(game->solution.regions.winner[c] == Player::Spoiler);
}

TEST_CASE("Fig. 6: Duplicator's solitaire graph in the weak game") {
  auto fig5 = fixtures::load_shared("fig5");
  auto game = solved({GameKind::Gb, {true, true}}, fig5, {{0, 2}});
  auto g = explain(*game, 0, 2);
  CHECK(g.winner == Player::Duplicator);
  for (auto c : g.view.nodes) CHECK(game->solution.regions.duplicator_wins(c));
  std::size_t duplicator_edges = 0;
  for (auto [from, rule, to] : g.view.edges)
    if (game->arena.configs[from].owner == Player::Duplicator) ++duplicator_edges;
  std::size_t duplicator_nodes = 0;
  for (auto c : g.view.nodes) duplicator_nodes += game->arena.configs[c].owner == Player::Duplicator;
  CHECK(duplicator_edges == duplicator_nodes);
}

TEST_CASE("identical states are explained by Duplicator") {
  auto fig2 = fixtures::load_shared("fig2");
  for (auto kind : {GameKind::Gb, GameKind::Bbed, GameKind::Lbb}) {
    auto game = solved({kind, {}}, fig2, {{5, 5}});
    auto g = explain(*game, 5, 5);
    CHECK(g.winner == Player::Duplicator);
    for (auto c : g.view.nodes) CHECK(game->solution.regions.duplicator_wins(c));
  }
  CHECK_THROWS_AS(explain(*solved({GameKind::Gb, {}}, fig2, {{5, 5}}), 0, 1), SessionError);
}

TEST_CASE("Spoiler's explanation leaves Duplicator no escape") {
  auto game = abp_game(GameKind::Gbed);
  auto g = explain(*game, 0, 3);
  REQUIRE(g.winner == Player::Spoiler);
  // Re-solve the explanation on its own: every node must still be Spoiler's.
  Solution sub;
  sub.regions.winner.assign(game->arena.size(), Player::Duplicator);
  sub.duplicator.choice.assign(game->arena.size(), -1);
  sub.spoiler = game->solution.spoiler;
  sub.spoiler.choice.assign(game->arena.size(), -1);
  for (auto c : g.view.nodes) {
    sub.regions.winner[c] = Player::Spoiler;
    sub.spoiler.choice[c] = game->solution.spoiler.choice[c];
  }
  std::vector<std::vector<std::uint32_t>> succ;
  CHECK(certify::solitaire(game->arena, sub, Player::Spoiler, succ) == "");
  auto comps = certify::components(succ);
  for (auto c : g.view.nodes)
    if (game->arena.accepting(c)) CHECK_FALSE(comps.cyclic[comps.id[c]]);
}

}
