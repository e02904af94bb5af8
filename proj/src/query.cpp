#include "bisimgame/query.hpp"

namespace bisimgame {

namespace {

XyParam parse_xy(std::string_view s, std::string_view whole) {
  if (s.size() != 2) throw SpecError("expected two letters from {o,b} in variant \"" + std::string(whole) + "\"");
  auto flex = [&](char c) {
    if (c == 'o') return Flex::o;
    if (c == 'b') return Flex::b;
    throw SpecError("expected two letters from {o,b} in variant \"" + std::string(whole) + "\"");
  };
  return {flex(s[0]), flex(s[1])};
}

FaceSet parse_faces(std::string_view s, std::string_view whole) {
  FaceSet e;
  if (s == "none" || s.empty()) return e;
  while (!s.empty()) {
    auto plus = s.find('+');
    auto tok = s.substr(0, plus);
    if (tok == "frown") e.frown = true;
    else if (tok == "smile") e.smile = true;
    else throw SpecError("unknown face \"" + std::string(tok) + "\" in variant \"" + std::string(whole) + "\"");
    s = plus == std::string_view::npos ? std::string_view{} : s.substr(plus + 1);
  }
  return e;
}

}  // namespace

VariantSpec parse_variant(std::string_view text) {
  VariantSpec v;
  v.text = std::string(text);
  std::string_view name = text;
  if (name.ends_with("-ed")) {
    v.divergence = true;
    name.remove_suffix(3);
  }
  if (name == "strong" && !v.divergence) return v.kind = VariantSpec::Kind::Strong, v;
  if (name == "lbb" && !v.divergence) return v.kind = VariantSpec::Kind::Lbb, v;
  if (name == "bb") return v.kind = VariantSpec::Kind::Bb, v;
  if (name == "branching") return v.xy = kBranching, v;
  if (name == "eta") return v.xy = kEta, v;
  if (name == "delay") return v.xy = kDelay, v;
  if (name == "weak") return v.xy = kWeak, v;
  if (v.divergence) throw SpecError("unknown variant \"" + std::string(text) + "\"");

  auto colon = name.find(':');
  if (colon == std::string_view::npos) throw SpecError("unknown variant \"" + std::string(text) + "\"");
  auto family = name.substr(0, colon);
  auto arg = name.substr(colon + 1);
  if (family == "sim") return v.kind = VariantSpec::Kind::Sim, v.xy = parse_xy(arg, text), v;
  if (family == "simeq") return v.kind = VariantSpec::Kind::SimEq, v.xy = parse_xy(arg, text), v;
  if (family == "dual") return v.kind = VariantSpec::Kind::Dual, v.xy = parse_xy(arg, text), v;
  if (family == "raw") {
    std::optional<FaceSet> faces;
    std::optional<bool> div;
    while (!arg.empty()) {
      auto comma = arg.find(',');
      auto item = arg.substr(0, comma);
      arg = comma == std::string_view::npos ? std::string_view{} : arg.substr(comma + 1);
      if (item.starts_with("E=")) faces = parse_faces(item.substr(2), text);
      else if (item == "div=true") div = true;
      else if (item == "div=false") div = false;
      else throw SpecError("unexpected \"" + std::string(item) + "\" in variant \"" + std::string(text) + "\"");
    }
    if (!faces) throw SpecError("raw variant needs E=<faces>");
    v.xy = xy_for(*faces);
    v.divergence = div.value_or(false);
    return v;
  }
  throw SpecError("unknown variant \"" + std::string(text) + "\"");
}

GameVariant VariantSpec::game(bool eager) const {
  GameVariant g;
  g.faces = faces_for(xy);
  g.eager = eager;
  switch (kind) {
    case Kind::Strong: g.kind = GameKind::Sb; break;
    case Kind::Lbb: g.kind = GameKind::Lbb; break;
    case Kind::Bb: g.kind = divergence ? GameKind::Bbed : GameKind::Bb; break;
    case Kind::Generic: g.kind = divergence ? GameKind::Gbed : GameKind::Gb; break;
    case Kind::Sim: g.kind = GameKind::GbSim; break;
    case Kind::SimEq: g.kind = GameKind::GbSimEq; break;
    case Kind::Dual: g.kind = GameKind::DualGb; break;
  }
  return g;
}

PairRelation oracle_relation(const Lts& lts, const VariantSpec& spec) {
  const Divergence div = spec.divergence ? Divergence::D4 : Divergence::None;
  switch (spec.kind) {
    case VariantSpec::Kind::Strong: return strong_bisim(lts);
    case VariantSpec::Kind::Lbb: return generic_bisim(lts, kBranching);
    case VariantSpec::Kind::Bb: return generic_bisim(lts, kBranching, div);
    case VariantSpec::Kind::Generic:
    case VariantSpec::Kind::Dual: return generic_bisim(lts, spec.xy, div);
    case VariantSpec::Kind::Sim: return generic_sim(lts, spec.xy);
    case VariantSpec::Kind::SimEq: return generic_sim(lts, spec.xy).intersect_inverse();
  }
  return {};
}

}  // namespace bisimgame
