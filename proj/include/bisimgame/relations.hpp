#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bisimgame/lts.hpp"

namespace bisimgame {

// Whether states before (x) and after (y) the matched action must stay related.
enum class Flex : std::uint8_t { o, b };

struct XyParam {
  Flex x = Flex::b;
  Flex y = Flex::b;

  friend bool operator==(const XyParam&, const XyParam&) = default;
};

inline constexpr XyParam kBranching{Flex::b, Flex::b};
inline constexpr XyParam kEta{Flex::b, Flex::o};
inline constexpr XyParam kDelay{Flex::o, Flex::b};
inline constexpr XyParam kWeak{Flex::o, Flex::o};
inline constexpr XyParam kAllXy[] = {kBranching, kEta, kDelay, kWeak};

std::string to_string(XyParam p);  // "bb", "bo", ...

enum class Divergence : std::uint8_t { None, D4, D2 };

class PairRelation {
 public:
  PairRelation() = default;
  PairRelation(std::size_t num_states, bool symmetric, bool full = false);

  std::size_t num_states() const { return n_; }
  bool symmetric() const { return symmetric_; }
  bool contains(StateId s, StateId t) const { return bits_[s * n_ + t] != 0; }
  // Symmetric relations insert and erase both orientations.
  void insert(StateId s, StateId t);
  void erase(StateId s, StateId t);
  std::size_t size() const;
  std::vector<std::pair<StateId, StateId>> pairs() const;
  bool subset_of(const PairRelation& other) const;
  PairRelation intersect_inverse() const;

  std::string to_json() const;

  friend bool operator==(const PairRelation& a, const PairRelation& b) {
    return a.n_ == b.n_ && a.bits_ == b.bits_;
  }

 private:
  std::size_t n_ = 0;
  bool symmetric_ = true;
  std::vector<std::uint8_t> bits_;
};

// Strengthened transfer: every state on the tau-path before the action is
// related to s when x = b, every state after it related to s' when y = b.
bool weak_match_exists(const Lts& lts, const PairRelation& r, StateId s, LabelId a, StateId s_prime, StateId t,
                       XyParam p);

PairRelation generic_bisim(const Lts& lts, XyParam p, Divergence div = Divergence::None);
PairRelation strong_bisim(const Lts& lts);
PairRelation generic_sim(const Lts& lts, XyParam p);
bool has_stuttering_property(const Lts& lts, const PairRelation& r);

// Block index per state of the equivalence relation, blocks numbered by least member.
std::vector<std::size_t> equivalence_classes(const PairRelation& r);

}  // namespace bisimgame
