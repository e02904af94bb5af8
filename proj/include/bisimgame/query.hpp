#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bisimgame/arena.hpp"
#include "bisimgame/relations.hpp"
#include "bisimgame/solver.hpp"

namespace bisimgame {

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A named relation: which game decides it and which oracle cross-checks it.
struct VariantSpec {
  enum class Kind : std::uint8_t { Strong, Lbb, Bb, Generic, Sim, SimEq, Dual };
  Kind kind = Kind::Generic;
  XyParam xy = kBranching;
  bool divergence = false;  // explicit divergence (D4)
  std::string text;

  GameVariant game(bool eager = false) const;
  // Whether the decided relation is an equivalence (for partitions).
  bool equivalence() const { return kind != Kind::Sim; }
};

// strong | lbb | bb | bb-ed | branching | eta | delay | weak | <name>-ed |
// sim:<xy> | simeq:<xy> | dual:<xy> | raw:E=<faces>,div=<bool>
// where <xy> is two letters from {o,b} and <faces> is none, frown, smile or
// frown+smile.
VariantSpec parse_variant(std::string_view text);

// The relation the oracle computes for this spec. For sim the result is the
// preorder (s,t) meaning t simulates s.
PairRelation oracle_relation(const Lts& lts, const VariantSpec& spec);

}  // namespace bisimgame
