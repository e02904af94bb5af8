// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "bisimgame/diagnostics.hpp"
#include "support/criteria.hpp"

using namespace bisimgame;

namespace {

constexpr std::uint64_t kSeeds = 200;

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) ok = false, detail = what;
  }
};

bool game_related(GameVariant v, const std::shared_ptr<const Lts>& lts, StateId s, StateId t) {
  auto arena = build_arena(v, lts, {{s, t}});
  return solve(arena).regions.duplicator_wins(*arena.find_initial(s, t));
}

bool generic_game(XyParam p, bool ed, const std::shared_ptr<const Lts>& lts, StateId s, StateId t) {
  return game_related({ed ? GameKind::Gbed : GameKind::Gb, faces_for(p)}, lts, s, t);
}

// Runs the CLI and captures stdout.
std::string cli_output(const std::string& args) {
  std::string cmd = std::string(BISIMGAME_CLI) + " " + args;
  std::string out;
  if (FILE* pipe = popen(cmd.c_str(), "r")) {
    std::array<char, 4096> buf;
    while (auto n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    pclose(pipe);
  }
  return out;
}

Verdict fig2_abstractions() {
  Verdict v;
  auto fig2 = fixtures::load_shared("fig2");
  auto fig5 = fixtures::load_shared("fig5");
  const std::pair<XyParam, bool> expect[] = {{kWeak, true}, {kDelay, true}, {kBranching, false}, {kEta, false}};
  for (auto [p, related] : expect) {
    v.require(generic_game(p, false, fig2, 0, 5) == related, "Fig. 2 game " + to_string(p));
    v.require(generic_bisim(*fig2, p).contains(0, 5) == related, "Fig. 2 oracle " + to_string(p));
    v.require(generic_game(p, false, fig5, 0, 2) == related, "Fig. 5 game " + to_string(p));
    v.require(generic_bisim(*fig5, p).contains(0, 2) == related, "Fig. 5 oracle " + to_string(p));
  }
  return v;
}

Verdict strong_example() {
  Verdict v;
  auto lts = fixtures::load_shared("strong_example");
  const auto A = fixtures::state(*lts, "A"), B = fixtures::state(*lts, "B"), C = fixtures::state(*lts, "C");
  auto r = strong_bisim(*lts);
  v.require(r.contains(A, C) && !r.contains(A, B), "strong oracle");
  v.require(game_related({GameKind::Sb, {}}, lts, A, C), "Sb game (A,C)");
  v.require(!game_related({GameKind::Sb, {}}, lts, A, B), "Sb game (A,B)");
  return v;
}

Verdict lbb_unsound() {
  Verdict v;
  auto lts = fixtures::load_shared("ex37");
  const auto t = fixtures::state(*lts, "t"), u = fixtures::state(*lts, "u");
  v.require(game_related({GameKind::Lbb, {}}, lts, t, u), "Lbb game should let Duplicator win (t,u)");
  v.require(!generic_bisim(*lts, kBranching).contains(t, u), "branching oracle should separate t and u");
  v.require(!generic_game(kBranching, false, lts, t, u), "Gb(∅) should separate t and u");
  return v;
}

Verdict fig3() {
  Verdict v;
  auto left = fixtures::load_shared("fig3_left");
  const auto s0 = fixtures::state(*left, "s0"), t0 = fixtures::state(*left, "t0"), t1 = fixtures::state(*left, "t1");
  auto plain = generic_bisim(*left, kBranching), ed = generic_bisim(*left, kBranching, Divergence::D4);
  v.require(plain.contains(s0, t0) && generic_game(kBranching, false, left, s0, t0), "(s0,t0) branching");
  v.require(plain.contains(s0, t1) && generic_game(kBranching, false, left, s0, t1), "(s0,t1) branching");
  v.require(!ed.contains(s0, t1) && !generic_game(kBranching, true, left, s0, t1), "(s0,t1) branching-ed");
  auto right = fixtures::load_shared("fig3_right");
  auto classes = equivalence_classes(generic_bisim(*right, kBranching));
  const auto v0 = fixtures::state(*right, "v0"), v1 = fixtures::state(*right, "v1"), v2 = fixtures::state(*right, "v2");
  v.require(classes[v0] == classes[v1] && classes[v1] == classes[v2], "v0, v1, v2 one class");
  v.require(generic_game(kBranching, false, right, v0, v1) && generic_game(kBranching, false, right, v1, v2),
            "v0, v1, v2 by the game");
  return v;
}

Verdict fig9() {
  Verdict v;
  auto lts = fixtures::load_shared("fig9");
  v.require(generic_bisim(*lts, kWeak, Divergence::D4).contains(0, 5), "D4 relates 0 and 5");
  v.require(!generic_bisim(*lts, kWeak, Divergence::D2).contains(0, 5), "D2 separates 0 and 5");
  v.require(generic_game(kWeak, true, lts, 0, 5), "Gbed(frown,smile) relates 0 and 5");
  return v;
}

Verdict abp() {
  Verdict v;
  auto joined = fixtures::buffer_abp();
  auto lts = std::make_shared<const Lts>(joined.lts);
  const auto zero = static_cast<StateId>(joined.offset);
  v.require(generic_bisim(*lts, kBranching).contains(0, zero), "branching oracle (A,0)");
  v.require(generic_game(kBranching, false, lts, 0, zero), "branching game (A,0)");
  v.require(!generic_bisim(*lts, kBranching, Divergence::D4).contains(0, zero), "branching-ed oracle (A,0)");
  v.require(!generic_game(kBranching, true, lts, 0, zero), "branching-ed game (A,0)");
  const std::string fx = BISIMGAME_FIXTURES;
  auto text = cli_output("--variant branching-ed explain " + fx + "/buffer.aut " + fx + "/abp.aut A 0");
  auto golden = fixtures::read_text(std::string(BISIMGAME_GOLDEN) + "/abp_explain.txt");
  v.require(text.rfind("Spoiler moves A --r(d1)--> B\n", 0) == 0, "transcript opening");
  v.require(text.ends_with("You lose.\n"), "transcript ending");
  v.require(text == golden, "transcript differs from the golden file");
  return v;
}

Verdict branching_sim() {
  Verdict v;
  auto fig2 = fixtures::load_shared("fig2");
  auto sim = generic_sim(*fig2, kBranching);
  v.require(sim.contains(5, 0) && !sim.contains(0, 5), "sim oracle");
  v.require(game_related({GameKind::GbSim, {}}, fig2, 5, 0), "GbSim game (5,0)");
  v.require(!game_related({GameKind::GbSim, {}}, fig2, 0, 5), "GbSim game (0,5)");
  return v;
}

Verdict each_seed(const std::function<std::string(std::uint64_t)>& check) {
  Verdict v;
  for (std::uint64_t seed = 0; seed < kSeeds && v.ok; ++seed) {
    auto err = check(seed);
    v.require(err.empty(), "seed " + std::to_string(seed) + ": " + err);
  }
  return v;
}

Verdict dual() {
  Verdict v;
  std::ostringstream counts;
  for (auto e : kAllFaceSets) {
    std::size_t bad = 0;
    std::string first;
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed)
      if (auto err = criteria::dual_matches_gb(seed, e); !err.empty()) {
        if (!bad) first = "seed " + std::to_string(seed) + ": " + err;
        ++bad;
      }
    counts << " E=" << GameVariant{GameKind::Gb, e}.name().substr(2) << ":" << bad;
    v.require(bad == 0, first);
  }
  if (!v.ok) v.detail += "; disagreeing instances per E" + counts.str();
  return v;
}

Verdict reward() {
  Verdict v = each_seed(criteria::reward_invariance);
  for (auto e : kAllFaceSets) {
    if (!v.ok) break;
    auto sub = each_seed([e](std::uint64_t s) { return criteria::strengthening(s, e, false); });
    v.require(sub.ok, sub.detail);
  }
  auto lts = fixtures::load_shared("remark");
  const auto a = *lts->find_label("a");
  const Config plain{Player::Spoiler, 0, 0, {}, {}, Reward::Check, false};
  const Config pending{Player::Spoiler, 0, 0, {a, 1}, {1, Face::Frown}, Reward::Star, false};
  auto arena = build_arena_from({GameKind::Gb, {}}, lts, {plain, pending});
  auto sol = solve(arena);
  v.require(sol.regions.duplicator_wins(*arena.find(plain)), "converse: Duplicator should win ⟨(s,s),†,†,✓⟩");
  v.require(!sol.regions.duplicator_wins(*arena.find(pending)), "converse: Duplicator should lose the pending config");
  return v;
}

Verdict eager() {
  Verdict v = each_seed([](std::uint64_t s) { return criteria::eager_preserves(s, FaceSet{}); });
  // Other face sets are outside the lemma; report what happens.
  std::ostringstream note;
  for (auto e : kAllFaceSets) {
    if (!e.frown && !e.smile) continue;
    std::size_t bad = 0;
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed) bad += !criteria::eager_preserves(seed, e).empty();
    note << " " << GameVariant{GameKind::Gb, e}.name() << ":" << bad;
  }
  if (v.ok) v.detail = "instances with a changed winner for larger E:" + note.str();
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Verdict()> run;
    double limit_seconds;
  };
  const Criterion criteria_list[] = {
      {1, "Fig. 2 and Fig. 5 abstraction verdicts", fig2_abstractions, 1},
      {2, "strong bisimilarity example", strong_example, 1},
      {3, "Lbb game unsound on Ex. 3.7", lbb_unsound, 1},
      {4, "Fig. 3 branching and divergence", fig3, 1},
      {5, "Fig. 9 D4 against D2", fig9, 1},
      {6, "buffer against ABP with golden transcript", abp, 5},
      {7, "branching simulation on Fig. 2", branching_sim, 1},
      {8, "game equals oracle for all (x,y), with and without D4", [] { return each_seed(criteria::game_matches_oracle); }, 0},
      {9, "Gb(∅) equals Bb, Gbed(∅) equals Bbed", [] { return each_seed(criteria::gb_matches_bb); }, 0},
      {10, "DualGb(E) equals Gb(E) for all E", dual, 0},
      {11, "lattice inclusions and strong within branching", [] { return each_seed(criteria::lattice); }, 0},
      {12, "reward invariance, strengthening and its converse", reward, 0},
      {13, "eager arenas keep initial winners", eager, 0},
      {14, "stuttering property", [] { return each_seed(criteria::stuttering); }, 0},
      {15, "sim(z,o) equals sim(z,b)", [] { return each_seed(criteria::sim_ignores_y); }, 0},
      {16, "Lbb equals branching without divergence", [] { return each_seed(criteria::lbb_nondivergent); }, 0},
  };
  using clock = std::chrono::steady_clock;
  int failures = 0;
  double property_seconds = 0;
  for (const auto& c : criteria_list) {
    auto start = clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(clock::now() - start).count();
    if (c.limit_seconds > 0) v.require(secs < c.limit_seconds, "took " + std::to_string(secs) + " s");
    else property_seconds += secs;
    failures += !v.ok;
    std::printf("%s %2d %s (%.3f s)%s%s\n", v.ok ? "PASS" : "FAIL", c.id, c.title, secs, v.detail.empty() ? "" : ": ",
                v.detail.c_str());
  }
  const bool fast = property_seconds < 60;
  std::printf("%s property suites total %.1f s (limit 60 s)\n", fast ? "PASS" : "FAIL", property_seconds);
  failures += !fast;
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
