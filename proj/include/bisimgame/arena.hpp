#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "bisimgame/lts.hpp"
#include "bisimgame/relations.hpp"

namespace bisimgame {

enum class Player : std::uint8_t { Spoiler, Duplicator };
enum class Face : std::uint8_t { Frown, Smile };
enum class Reward : std::uint8_t { Star, Check };

inline Player opponent(Player p) { return p == Player::Spoiler ? Player::Duplicator : Player::Spoiler; }
const char* to_string(Player p);  // "spoiler" / "duplicator"
const char* to_string(Face f);    // "frown" / "smile"

inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();

// Pending challenge (action, target); absent when target == kNoState.
struct Challenge {
  LabelId action = 0;
  StateId target = kNoState;

  bool present() const { return target != kNoState; }
  friend auto operator<=>(const Challenge&, const Challenge&) = default;
};

// Pebble on the answering side; absent when state == kNoState.
struct Pebble {
  StateId state = kNoState;
  Face face = Face::Frown;

  bool present() const { return state != kNoState; }
  friend auto operator<=>(const Pebble&, const Pebble&) = default;
};

struct Config {
  Player owner = Player::Spoiler;
  StateId s = 0, t = 0;
  Challenge challenge;
  Pebble match;
  Reward reward = Reward::Star;
  bool first_round = false;

  friend auto operator<=>(const Config&, const Config&) = default;
};

struct ConfigHash {
  std::size_t operator()(const Config& c) const noexcept;
};

// Subset of {frown, smile}.
struct FaceSet {
  bool frown = false;
  bool smile = false;

  bool has(Face f) const { return f == Face::Frown ? frown : smile; }
  friend bool operator==(const FaceSet&, const FaceSet&) = default;
};

// frown iff x = o, smile iff y = o.
inline FaceSet faces_for(XyParam p) { return {p.x == Flex::o, p.y == Flex::o}; }
inline XyParam xy_for(FaceSet e) { return {e.frown ? Flex::o : Flex::b, e.smile ? Flex::o : Flex::b}; }
inline constexpr FaceSet kAllFaceSets[] = {{false, false}, {true, false}, {false, true}, {true, true}};

enum class GameKind : std::uint8_t { Sb, Lbb, Bb, Bbed, Gb, Gbed, DualGb, GbSim, GbSimEq };

struct GameVariant {
  GameKind kind = GameKind::Gb;
  FaceSet faces;       // only read by the generic families
  bool eager = false;  // drop rule D2a

  std::string name() const;
  bool generic() const;
  friend bool operator==(const GameVariant&, const GameVariant&) = default;
};

// Listed in lexicographic order of their names, so sorting by enum value
// sorts by rule id.
enum class Rule : std::uint8_t {
  D1, D2, D2a, D2b, D2c, D3, D3a, D3b, D3c,
  S1, S2a, S2b, S3, S3a, S3b, S4a, S4b,
};
const char* to_string(Rule r);
std::optional<Rule> rule_from_string(std::string_view s);
// Spoiler rules that swap the sides of the position.
bool is_switch(GameVariant v, Rule r);

struct Move {
  Rule rule;
  Config target;

  friend auto operator<=>(const Move&, const Move&) = default;
};

Config initial_config(GameVariant v, StateId s, StateId t);
// Sorted by rule id, then target.
std::vector<Move> moves(GameVariant v, const Lts& lts, const Config& c);

struct ArenaEdge {
  Rule rule;
  std::uint32_t to;
};

class ArenaLimitError : public std::runtime_error {
 public:
  explicit ArenaLimitError(std::size_t cap)
      : std::runtime_error("arena exceeds the configured cap of " + std::to_string(cap) + " configurations"),
        cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

inline constexpr std::size_t kDefaultArenaCap = 5'000'000;
// BISIMGAME_MAX_ARENA if set to a positive integer, else kDefaultArenaCap.
std::size_t default_arena_cap();

class Arena {
 public:
  GameVariant variant;
  std::shared_ptr<const Lts> lts;
  std::vector<Config> configs;
  std::vector<std::uint32_t> initials;

  std::size_t size() const { return configs.size(); }
  std::span<const ArenaEdge> edges(std::uint32_t c) const {
    return {edges_.data() + offsets_[c], edges_.data() + offsets_[c + 1]};
  }
  std::size_t num_edges() const { return edges_.size(); }
  bool accepting(std::uint32_t c) const { return configs[c].reward == Reward::Check; }
  std::optional<std::uint32_t> find(const Config& c) const;
  std::optional<std::uint32_t> find_initial(StateId s, StateId t) const { return find(initial_config(variant, s, t)); }

 private:
  friend class ArenaBuilder;
  std::vector<std::size_t> offsets_{0};
  std::vector<ArenaEdge> edges_;
  std::unordered_map<Config, std::uint32_t, ConfigHash> index_;
};

struct ArenaOptions {
  std::size_t max_configs = default_arena_cap();
};

// Every ordered pair of states.
struct AllPairs {};

Arena build_arena(GameVariant v, std::shared_ptr<const Lts> lts, const std::vector<std::pair<StateId, StateId>>& starts,
                  ArenaOptions opt = {});
Arena build_arena(GameVariant v, std::shared_ptr<const Lts> lts, AllPairs, ArenaOptions opt = {});
Arena build_arena_from(GameVariant v, std::shared_ptr<const Lts> lts, const std::vector<Config>& starts,
                       ArenaOptions opt = {});
inline Arena build_arena(GameVariant v, const Lts& lts, AllPairs all, ArenaOptions opt = {}) {
  return build_arena(v, std::make_shared<const Lts>(lts), all, opt);
}
inline Arena build_arena(GameVariant v, const Lts& lts, const std::vector<std::pair<StateId, StateId>>& starts,
                         ArenaOptions opt = {}) {
  return build_arena(v, std::make_shared<const Lts>(lts), starts, opt);
}

// Paper-style rendering, e.g. "⟨(A,C),(a,B),(C,☹),*⟩D".
std::string describe(const Config& c, const Lts& lts, GameVariant v);

// Restricted to `nodes` (all configs when empty) and the given edge subset.
struct ArenaView {
  std::vector<std::uint32_t> nodes;
  std::vector<std::tuple<std::uint32_t, Rule, std::uint32_t>> edges;
  std::vector<std::uint32_t> initials;
};
ArenaView full_view(const Arena& a);
std::string to_dot(const Arena& a, const ArenaView& view);
std::string to_json(const Arena& a, const ArenaView& view);

}  // namespace bisimgame
