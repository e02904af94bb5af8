#include "bisimgame/arena.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>

namespace bisimgame {

const char* to_string(Player p) { return p == Player::Spoiler ? "spoiler" : "duplicator"; }
const char* to_string(Face f) { return f == Face::Frown ? "frown" : "smile"; }

namespace {
constexpr const char* kRuleNames[] = {"D1", "D2", "D2a", "D2b", "D2c", "D3", "D3a", "D3b", "D3c",
                                      "S1", "S2a", "S2b", "S3", "S3a", "S3b", "S4a", "S4b"};
}

const char* to_string(Rule r) { return kRuleNames[static_cast<int>(r)]; }

std::optional<Rule> rule_from_string(std::string_view s) {
  for (int i = 0; i < static_cast<int>(std::size(kRuleNames)); ++i)
    if (s == kRuleNames[i]) return static_cast<Rule>(i);
  return std::nullopt;
}

bool is_switch(GameVariant v, Rule r) {
  if (v.kind == GameKind::DualGb) return r == Rule::S2b || r == Rule::S3b || r == Rule::S4b;
  return r == Rule::S3;
}

std::size_t ConfigHash::operator()(const Config& c) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  auto mix = [&](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  mix(static_cast<std::uint64_t>(c.owner) | static_cast<std::uint64_t>(c.reward) << 1 |
      static_cast<std::uint64_t>(c.match.face) << 2 | static_cast<std::uint64_t>(c.first_round) << 3);
  mix(static_cast<std::uint64_t>(c.s) << 32 | c.t);
  mix(static_cast<std::uint64_t>(c.challenge.action) << 32 | c.challenge.target);
  mix(c.match.state);
  return static_cast<std::size_t>(h);
}

std::string GameVariant::name() const {
  auto faces_text = [&] {
    std::string e = "{";
    if (faces.frown) e += "frown";
    if (faces.frown && faces.smile) e += ",";
    if (faces.smile) e += "smile";
    return e + "}";
  };
  std::string base;
  switch (kind) {
    case GameKind::Sb: base = "Sb"; break;
    case GameKind::Lbb: base = "Lbb"; break;
    case GameKind::Bb: base = "Bb"; break;
    case GameKind::Bbed: base = "Bbed"; break;
    case GameKind::Gb: base = "Gb" + faces_text(); break;
    case GameKind::Gbed: base = "Gbed" + faces_text(); break;
    case GameKind::DualGb: base = "DualGb" + faces_text(); break;
    case GameKind::GbSim: base = "GbSim" + faces_text(); break;
    case GameKind::GbSimEq: base = "GbSimEq" + faces_text(); break;
  }
  return eager ? base + "+eager" : base;
}

bool GameVariant::generic() const {
  switch (kind) {
    case GameKind::Gb:
    case GameKind::Gbed:
    case GameKind::DualGb:
    case GameKind::GbSim:
    case GameKind::GbSimEq:
      return true;
    default:
      return false;
  }
}

Config initial_config(GameVariant v, StateId s, StateId t) {
  Config c;
  c.owner = Player::Spoiler;
  c.s = s;
  c.t = t;
  c.first_round = v.kind == GameKind::GbSimEq;
  return c;
}

namespace {

Config spoiler_at(StateId s, StateId t, Challenge c, Pebble m, Reward r) {
  return {Player::Spoiler, s, t, c, m, r, false};
}

Config duplicator_at(StateId s, StateId t, Challenge c, Pebble m, Reward r) {
  return {Player::Duplicator, s, t, c, m, r, false};
}

// Generic family: Gb, Gbed, GbSim, GbSimEq.
void generic_spoiler(GameVariant v, const Lts& lts, const Config& c, std::vector<Move>& out) {
  const bool ch = c.challenge.present();
  if (ch) out.push_back({Rule::S1, duplicator_at(c.s, c.t, c.challenge, c.match, Reward::Star)});
  for (const auto& e : lts.out(c.s)) {
    Challenge fresh{e.label, e.state};
    if (!ch)
      out.push_back({Rule::S2a, duplicator_at(c.s, c.t, fresh, {c.t, Face::Frown}, Reward::Star)});
    else if (fresh != c.challenge)
      out.push_back({Rule::S2b, duplicator_at(c.s, c.t, fresh, {c.t, Face::Frown}, Reward::Check)});
  }
  bool switch_allowed = v.kind == GameKind::Gb || v.kind == GameKind::Gbed ||
                        (v.kind == GameKind::GbSimEq && c.first_round);
  if (switch_allowed)
    for (const auto& e : lts.out(c.t))
      out.push_back({Rule::S3, duplicator_at(c.t, c.s, {e.label, e.state}, {c.s, Face::Frown}, Reward::Check)});
}

void generic_duplicator(GameVariant v, const Lts& lts, const Config& c, std::vector<Move>& out) {
  const StateId u = c.s, v0 = c.t, u1 = c.challenge.target;
  const LabelId a = c.challenge.action;
  const StateId peb = c.match.state;
  const Face f = c.match.face;
  const FaceSet e = v.faces;
  if (Lts::is_tau(a))
    out.push_back({Rule::D1, spoiler_at(u1, peb, {}, {}, v.kind == GameKind::Gbed ? Reward::Star : Reward::Check)});
  for (const auto& edge : lts.out(peb)) {
    if (edge.label == a && f == Face::Frown) {
      const StateId v1 = edge.state;
      if (!v.eager) out.push_back({Rule::D2a, spoiler_at(u1, v1, c.challenge, {v1, Face::Smile}, Reward::Star)});
      out.push_back({Rule::D2b, spoiler_at(u1, v1, {}, {}, Reward::Check)});
      if (e.smile) out.push_back({Rule::D2c, spoiler_at(u, v0, c.challenge, {v1, Face::Smile}, Reward::Star)});
    }
    if (Lts::is_tau(edge.label)) {
      const StateId v1 = edge.state;
      out.push_back({Rule::D3a, spoiler_at(u, v1, c.challenge, {v1, f}, Reward::Star)});
      if (f == Face::Smile) out.push_back({Rule::D3b, spoiler_at(u1, v1, {}, {}, Reward::Check)});
      if (e.has(f)) out.push_back({Rule::D3c, spoiler_at(u, v0, c.challenge, {v1, f}, Reward::Star)});
    }
  }
}

void dual_spoiler(GameVariant v, const Lts& lts, const Config& c, std::vector<Move>& out) {
  const FaceSet e = v.faces;
  if (!c.challenge.present()) {
    for (const auto& edge : lts.out(c.s))
      out.push_back({Rule::S2a, duplicator_at(c.s, c.t, {edge.label, edge.state}, {c.t, Face::Frown}, Reward::Star)});
    for (const auto& edge : lts.out(c.t))
      out.push_back({Rule::S2b, duplicator_at(c.t, c.s, {edge.label, edge.state}, {c.s, Face::Frown}, Reward::Check)});
    return;
  }
  out.push_back({Rule::S1, duplicator_at(c.s, c.t, c.challenge, c.match, c.reward)});
  const StateId peb = c.match.state;
  if (c.match.face == Face::Frown && !e.frown) {
    for (const auto& edge : lts.out(c.s))
      out.push_back({Rule::S3a, duplicator_at(c.s, peb, {edge.label, edge.state}, {peb, Face::Frown}, Reward::Check)});
    for (const auto& edge : lts.out(peb))
      out.push_back({Rule::S3b, duplicator_at(peb, c.s, {edge.label, edge.state}, {c.s, Face::Frown}, Reward::Check)});
  }
  if (c.match.face == Face::Smile && !e.smile) {
    const StateId s1 = c.challenge.target;
    for (const auto& edge : lts.out(s1))
      out.push_back({Rule::S4a, duplicator_at(s1, peb, {edge.label, edge.state}, {peb, Face::Frown}, Reward::Check)});
    for (const auto& edge : lts.out(peb))
      out.push_back({Rule::S4b, duplicator_at(peb, s1, {edge.label, edge.state}, {s1, Face::Frown}, Reward::Check)});
  }
}

void dual_duplicator(const Lts& lts, const Config& c, std::vector<Move>& out) {
  const LabelId a = c.challenge.action;
  const StateId peb = c.match.state;
  const Face f = c.match.face;
  if (Lts::is_tau(a) || f == Face::Smile)
    out.push_back({Rule::D1, spoiler_at(c.challenge.target, peb, {}, {}, Reward::Check)});
  for (const auto& edge : lts.out(peb)) {
    if (edge.label == a && f == Face::Frown)
      out.push_back({Rule::D2, spoiler_at(c.s, c.t, c.challenge, {edge.state, Face::Smile}, Reward::Star)});
    if (Lts::is_tau(edge.label))
      out.push_back({Rule::D3, spoiler_at(c.s, c.t, c.challenge, {edge.state, f}, Reward::Star)});
  }
}

// Bb and Bbed: no pebble; the answering state is the position itself.
void bb_spoiler(const Lts& lts, const Config& c, std::vector<Move>& out) {
  for (const auto& e : lts.out(c.s)) {
    Challenge fresh{e.label, e.state};
    if (c.challenge.present() && fresh == c.challenge)
      out.push_back({Rule::S1, duplicator_at(c.s, c.t, fresh, {}, Reward::Star)});
    else if (!c.challenge.present())
      out.push_back({Rule::S2a, duplicator_at(c.s, c.t, fresh, {}, Reward::Star)});
    else
      out.push_back({Rule::S2b, duplicator_at(c.s, c.t, fresh, {}, Reward::Check)});
  }
  for (const auto& e : lts.out(c.t))
    out.push_back({Rule::S3, duplicator_at(c.t, c.s, {e.label, e.state}, {}, Reward::Check)});
}

void bb_duplicator(bool explicit_divergence, const Lts& lts, const Config& c, std::vector<Move>& out) {
  const LabelId a = c.challenge.action;
  const StateId u1 = c.challenge.target;
  if (Lts::is_tau(a))
    out.push_back({Rule::D1, spoiler_at(u1, c.t, {}, {}, explicit_divergence ? Reward::Star : Reward::Check)});
  for (const auto& e : lts.out(c.t)) {
    if (e.label == a) out.push_back({Rule::D2b, spoiler_at(u1, e.state, {}, {}, Reward::Check)});
    if (Lts::is_tau(e.label)) out.push_back({Rule::D3a, spoiler_at(c.s, e.state, c.challenge, {}, Reward::Star)});
  }
}

// Sb and Lbb: every move earns a check, so only finite plays can be lost by
// Duplicator.
void sb_spoiler(const Lts& lts, const Config& c, std::vector<Move>& out) {
  for (const auto& e : lts.out(c.s))
    out.push_back({Rule::S2a, duplicator_at(c.s, c.t, {e.label, e.state}, {}, Reward::Check)});
  for (const auto& e : lts.out(c.t))
    out.push_back({Rule::S3, duplicator_at(c.t, c.s, {e.label, e.state}, {}, Reward::Check)});
}

void sb_duplicator(bool lbb, const Lts& lts, const Config& c, std::vector<Move>& out) {
  const LabelId a = c.challenge.action;
  const StateId u1 = c.challenge.target;
  if (lbb && Lts::is_tau(a)) out.push_back({Rule::D1, spoiler_at(u1, c.t, {}, {}, Reward::Check)});
  for (const auto& e : lts.out(c.t)) {
    if (e.label == a) out.push_back({Rule::D2b, spoiler_at(u1, e.state, {}, {}, Reward::Check)});
    if (lbb && Lts::is_tau(e.label)) out.push_back({Rule::D3a, spoiler_at(c.s, e.state, {}, {}, Reward::Check)});
  }
}

}  // namespace

std::vector<Move> moves(GameVariant v, const Lts& lts, const Config& c) {
  std::vector<Move> out;
  const bool spoiler = c.owner == Player::Spoiler;
  switch (v.kind) {
    case GameKind::Sb:
    case GameKind::Lbb:
      if (spoiler) sb_spoiler(lts, c, out);
      else sb_duplicator(v.kind == GameKind::Lbb, lts, c, out);
      break;
    case GameKind::Bb:
    case GameKind::Bbed:
      if (spoiler) bb_spoiler(lts, c, out);
      else bb_duplicator(v.kind == GameKind::Bbed, lts, c, out);
      break;
    case GameKind::DualGb:
      if (spoiler) dual_spoiler(v, lts, c, out);
      else dual_duplicator(lts, c, out);
      break;
    default:
      if (spoiler) generic_spoiler(v, lts, c, out);
      else generic_duplicator(v, lts, c, out);
      break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t default_arena_cap() {
  if (const char* env = std::getenv("BISIMGAME_MAX_ARENA")) {
    char* end = nullptr;
    auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultArenaCap;
}

std::optional<std::uint32_t> Arena::find(const Config& c) const {
  auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

class ArenaBuilder {
 public:
  static Arena build(GameVariant v, std::shared_ptr<const Lts> lts, const std::vector<Config>& starts,
                     ArenaOptions opt) {
    Arena a;
    a.variant = v;
    a.lts = std::move(lts);
    auto intern = [&](const Config& c) -> std::uint32_t {
      auto [it, fresh] = a.index_.try_emplace(c, static_cast<std::uint32_t>(a.configs.size()));
      if (fresh) {
        if (a.configs.size() >= opt.max_configs) throw ArenaLimitError(opt.max_configs);
        a.configs.push_back(c);
      }
      return it->second;
    };
    for (const auto& c : starts) {
      if (c.s >= a.lts->num_states() || c.t >= a.lts->num_states())
        throw std::out_of_range("state index out of range");
      a.initials.push_back(intern(c));
    }
    // Configs are expanded in interning order, which is BFS order.
    for (std::uint32_t i = 0; i < a.configs.size(); ++i) {
      auto ms = moves(v, *a.lts, a.configs[i]);
      for (const auto& m : ms) {
        auto to = intern(m.target);
        a.edges_.push_back({m.rule, to});
      }
      a.offsets_.push_back(a.edges_.size());
    }
    return a;
  }
};

Arena build_arena_from(GameVariant v, std::shared_ptr<const Lts> lts, const std::vector<Config>& starts,
                       ArenaOptions opt) {
  return ArenaBuilder::build(v, std::move(lts), starts, opt);
}

Arena build_arena(GameVariant v, std::shared_ptr<const Lts> lts, const std::vector<std::pair<StateId, StateId>>& starts,
                  ArenaOptions opt) {
  std::vector<Config> init;
  for (auto [s, t] : starts) init.push_back(initial_config(v, s, t));
  return ArenaBuilder::build(v, std::move(lts), init, opt);
}

Arena build_arena(GameVariant v, std::shared_ptr<const Lts> lts, AllPairs, ArenaOptions opt) {
  std::vector<Config> init;
  const auto n = static_cast<StateId>(lts->num_states());
  for (StateId s = 0; s < n; ++s)
    for (StateId t = 0; t < n; ++t) init.push_back(initial_config(v, s, t));
  return ArenaBuilder::build(v, std::move(lts), init, opt);
}

}  // namespace bisimgame
