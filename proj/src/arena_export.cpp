#include <sstream>

#include "bisimgame/arena.hpp"
#include "bisimgame/json_io.hpp"

namespace bisimgame {

std::string describe(const Config& c, const Lts& lts, GameVariant v) {
  std::ostringstream o;
  o << "⟨(" << lts.state_name(c.s) << "," << lts.state_name(c.t) << ")";
  const bool sb = v.kind == GameKind::Sb || v.kind == GameKind::Lbb;
  const bool bb = v.kind == GameKind::Bb || v.kind == GameKind::Bbed;
  if (!sb || c.challenge.present()) {
    if (c.challenge.present())
      o << ",(" << lts.label_text(c.challenge.action) << "," << lts.state_name(c.challenge.target) << ")";
    else
      o << ",†";
  }
  if (!sb && !bb) {
    if (c.match.present())
      o << ",(" << lts.state_name(c.match.state) << "," << (c.match.face == Face::Frown ? "☹" : "☺") << ")";
    else
      o << ",†";
  }
  if (!sb) o << "," << (c.reward == Reward::Check ? "✓" : "*");
  o << "⟩" << (c.owner == Player::Spoiler ? "S" : "D");
  if (c.first_round) o << "¹";
  return o.str();
}

ArenaView full_view(const Arena& a) {
  ArenaView view;
  for (std::uint32_t i = 0; i < a.size(); ++i) {
    view.nodes.push_back(i);
    for (const auto& e : a.edges(i)) view.edges.emplace_back(i, e.rule, e.to);
  }
  view.initials = a.initials;
  return view;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

}  // namespace

std::string to_dot(const Arena& a, const ArenaView& view) {
  std::ostringstream o;
  o << "digraph arena {\n  label=\"" << dot_escape(a.variant.name()) << "\";\n  node [fontname=\"monospace\"];\n";
  for (auto i : view.nodes) {
    const auto& c = a.configs[i];
    o << "  c" << i << " [label=\"" << dot_escape(describe(c, *a.lts, a.variant)) << "\", shape="
      << (a.accepting(i) ? "doublecircle" : "ellipse");
    if (c.owner == Player::Duplicator) o << ", style=dashed";
    o << "];\n";
  }
  for (auto [from, rule, to] : view.edges) o << "  c" << from << " -> c" << to << " [label=\"" << to_string(rule) << "\"];\n";
  o << "}\n";
  return o.str();
}

nlohmann::json config_to_json(const Lts& lts, const Config& c) {
  nlohmann::json j;
  j["owner"] = to_string(c.owner);
  j["position"] = {c.s, c.t};
  j["position_names"] = {lts.state_name(c.s), lts.state_name(c.t)};
  if (c.challenge.present())
    j["challenge"] = {{"action", lts.label_text(c.challenge.action)},
                      {"target", c.challenge.target},
                      {"target_name", lts.state_name(c.challenge.target)}};
  else
    j["challenge"] = nullptr;
  if (c.match.present())
    j["match"] = {{"state", c.match.state}, {"state_name", lts.state_name(c.match.state)}, {"face", to_string(c.match.face)}};
  else
    j["match"] = nullptr;
  j["reward"] = c.reward == Reward::Check ? "check" : "star";
  j["first_round"] = c.first_round;
  return j;
}

nlohmann::json arena_to_json(const Arena& a, const ArenaView& view) {
  nlohmann::json j;
  j["variant"] = a.variant.name();
  j["configs"] = nlohmann::json::array();
  for (auto i : view.nodes) {
    auto cj = config_to_json(*a.lts, a.configs[i]);
    cj["id"] = i;
    cj["text"] = describe(a.configs[i], *a.lts, a.variant);
    j["configs"].push_back(std::move(cj));
  }
  j["edges"] = nlohmann::json::array();
  for (auto [from, rule, to] : view.edges) j["edges"].push_back({{"from", from}, {"rule", to_string(rule)}, {"to", to}});
  j["initials"] = view.initials;
  return j;
}

std::string to_json(const Arena& a, const ArenaView& view) { return arena_to_json(a, view).dump(); }

nlohmann::json lts_to_json(const Lts& lts) {
  nlohmann::json j;
  j["initial"] = lts.initial();
  j["tau"] = lts.tau_text();
  j["states"] = nlohmann::json::array();
  for (StateId s = 0; s < lts.num_states(); ++s) j["states"].push_back({{"id", s}, {"name", lts.state_name(s)}});
  j["edges"] = nlohmann::json::array();
  for (const auto& t : lts.transitions())
    j["edges"].push_back({{"src", t.src}, {"label", lts.label_text(t.label)}, {"dst", t.dst}, {"tau", Lts::is_tau(t.label)}});
  return j;
}

}  // namespace bisimgame
