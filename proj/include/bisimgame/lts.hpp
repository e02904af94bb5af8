#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bisimgame {

using StateId = std::uint32_t;
using LabelId = std::uint32_t;

// The internal action always occupies label slot 0.
inline constexpr LabelId kTau = 0;

struct Transition {
  StateId src;
  LabelId label;
  StateId dst;

  friend auto operator<=>(const Transition&, const Transition&) = default;
};

// Adjacency entry: for out-lists `state` is the target, for in-lists the source.
struct Edge {
  LabelId label;
  StateId state;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class Lts;

class LtsBuilder {
 public:
  explicit LtsBuilder(std::size_t num_states, StateId initial = 0, std::string tau_text = "tau");

  // Returns the id of `text`, registering it on first use.
  LabelId label(std::string_view text);
  void add(StateId src, LabelId label, StateId dst);
  void add(StateId src, std::string_view label, StateId dst) { add(src, this->label(label), dst); }
  void name_state(StateId s, std::string name);

  std::size_t num_states() const { return num_states_; }
  Lts build() &&;

 private:
  friend class Lts;
  std::size_t num_states_;
  StateId initial_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, LabelId> label_index_;
  std::vector<Transition> transitions_;
  std::vector<std::string> names_;
};

// Immutable once built. Transitions are sorted by (src, label, dst) and unique.
class Lts {
 public:
  Lts() = default;

  std::size_t num_states() const { return out_offsets_.empty() ? 0 : out_offsets_.size() - 1; }
  StateId initial() const { return initial_; }
  std::size_t num_labels() const { return labels_.size(); }
  const std::string& label_text(LabelId l) const { return labels_.at(l); }
  const std::string& tau_text() const { return labels_[kTau]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<LabelId> find_label(std::string_view text) const;
  static bool is_tau(LabelId l) { return l == kTau; }

  const std::vector<Transition>& transitions() const { return transitions_; }
  std::size_t num_transitions() const { return transitions_.size(); }

  // Sorted by (label, state); tau edges therefore come first.
  std::span<const Edge> out(StateId s) const;
  std::span<const Edge> in(StateId s) const;
  std::span<const Edge> tau_out(StateId s) const;
  bool has_transition(StateId src, LabelId label, StateId dst) const;

  bool has_names() const { return !names_.empty(); }
  std::string state_name(StateId s) const;
  // Resolves a state by display name or decimal index.
  std::optional<StateId> find_state(std::string_view text) const;
  Lts with_state_names(std::vector<std::string> names) const;

 private:
  friend class LtsBuilder;
  StateId initial_ = 0;
  std::vector<std::string> labels_;
  std::vector<Transition> transitions_;
  std::vector<std::size_t> out_offsets_, in_offsets_;
  std::vector<Edge> out_edges_, in_edges_;
  std::vector<std::size_t> tau_end_;
  std::vector<std::string> names_;
};

// Aldebaran text. Lines starting with '#' are comments; "#name <index> <text>"
// attaches a display name to a state.
Lts parse_aut(std::string_view text, std::string_view tau_label = "tau");
std::string serialize_aut(const Lts& lts);

std::vector<StateId> tau_reach(const Lts& lts, StateId s, bool strict);
bool is_divergent(const Lts& lts, StateId s);
// One flag per state; computed once via Tarjan SCCs on the tau graph.
std::vector<bool> divergent_states(const Lts& lts);

struct UnionResult {
  Lts lts;
  std::size_t offset;
};
UnionResult disjoint_union(const Lts& l1, const Lts& l2);
// As disjoint_union, with l2's states displayed as "file2:<name>".
UnionResult disjoint_union_named(const Lts& l1, const Lts& l2);

Lts random_lts(std::uint64_t seed, std::size_t n_states, std::size_t n_labels, double edge_density,
               double tau_fraction);

}  // namespace bisimgame
