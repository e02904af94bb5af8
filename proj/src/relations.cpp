#include "bisimgame/relations.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <json.hpp>

namespace bisimgame {

std::string to_string(XyParam p) {
  std::string s;
  s += p.x == Flex::b ? 'b' : 'o';
  s += p.y == Flex::b ? 'b' : 'o';
  return s;
}

PairRelation::PairRelation(std::size_t num_states, bool symmetric, bool full)
    : n_(num_states), symmetric_(symmetric), bits_(num_states * num_states, full ? 1 : 0) {}

void PairRelation::insert(StateId s, StateId t) {
  bits_[s * n_ + t] = 1;
  if (symmetric_) bits_[t * n_ + s] = 1;
}

void PairRelation::erase(StateId s, StateId t) {
  bits_[s * n_ + t] = 0;
  if (symmetric_) bits_[t * n_ + s] = 0;
}

std::size_t PairRelation::size() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1)); }

std::vector<std::pair<StateId, StateId>> PairRelation::pairs() const {
  std::vector<std::pair<StateId, StateId>> out;
  for (StateId s = 0; s < n_; ++s)
    for (StateId t = 0; t < n_; ++t)
      if (contains(s, t)) out.emplace_back(s, t);
  return out;
}

bool PairRelation::subset_of(const PairRelation& other) const {
  if (n_ != other.n_) return false;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && !other.bits_[i]) return false;
  return true;
}

PairRelation PairRelation::intersect_inverse() const {
  PairRelation r(n_, true);
  for (StateId s = 0; s < n_; ++s)
    for (StateId t = 0; t < n_; ++t)
      if (contains(s, t) && contains(t, s)) r.insert(s, t);
  return r;
}

std::string PairRelation::to_json() const {
  nlohmann::json j;
  j["symmetric"] = symmetric_;
  j["pairs"] = nlohmann::json::array();
  for (auto [s, t] : pairs()) j["pairs"].push_back({s, t});
  return j.dump();
}

namespace {

// Reflexive tau-closure per state, as a dense bit matrix.
class TauClosure {
 public:
  explicit TauClosure(const Lts& lts) : n_(lts.num_states()), bits_(n_ * n_, 0), lists_(n_) {
    for (StateId s = 0; s < n_; ++s) {
      lists_[s] = tau_reach(lts, s, false);
      for (auto u : lists_[s]) bits_[s * n_ + u] = 1;
    }
  }
  bool reaches(StateId s, StateId u) const { return bits_[s * n_ + u] != 0; }
  const std::vector<StateId>& from(StateId s) const { return lists_[s]; }

 private:
  std::size_t n_;
  std::vector<std::uint8_t> bits_;
  std::vector<std::vector<StateId>> lists_;
};

class Matcher {
 public:
  explicit Matcher(const Lts& lts) : lts_(lts), closure_(lts), seen_(lts.num_states()) {}

  bool match(const PairRelation& r, StateId s, LabelId a, StateId s_prime, StateId t, XyParam p) {
    if (Lts::is_tau(a) && r.contains(s_prime, t)) return true;
    // Tau-paths from t, confined to states related to s when x = b.
    std::fill(seen_.begin(), seen_.end(), 0);
    stack_.clear();
    if (p.x == Flex::o || r.contains(s, t)) {
      seen_[t] = 1;
      stack_.push_back(t);
    }
    while (!stack_.empty()) {
      StateId t1 = stack_.back();
      stack_.pop_back();
      for (const auto& e : lts_.out(t1)) {
        if (e.label == a && after(r, s_prime, e.state, p.y)) return true;
        if (e.label == kTau && !seen_[e.state] && (p.x == Flex::o || r.contains(s, e.state))) {
          seen_[e.state] = 1;
          stack_.push_back(e.state);
        }
      }
    }
    return false;
  }

  const TauClosure& closure() const { return closure_; }

 private:
  // With y = b every state after the action must be related to s', including
  // t2 itself, so the empty path is the only one worth checking.
  bool after(const PairRelation& r, StateId s_prime, StateId t2, Flex y) const {
    if (y == Flex::b) return r.contains(s_prime, t2);
    for (auto u : closure_.from(t2))
      if (r.contains(s_prime, u)) return true;
    return false;
  }

  const Lts& lts_;
  TauClosure closure_;
  std::vector<std::uint8_t> seen_;
  std::vector<StateId> stack_;
};

bool transfer(const Lts& lts, Matcher& m, const PairRelation& r, StateId s, StateId t, XyParam p) {
  for (const auto& e : lts.out(s))
    if (!m.match(r, s, e.label, e.state, t, p)) return false;
  return true;
}

// Divergence clause for the orientation (s,t). `targets` are the states t'
// that may answer a divergence: t's strict tau-closure (D4) or its immediate
// tau-successors (D2). The clause fails iff some tau-successor of s starts an
// infinite tau-path avoiding every state related to one of those targets.
bool divergence_ok(const Lts& lts, const PairRelation& r, StateId s, const std::vector<StateId>& targets) {
  const std::size_t n = lts.num_states();
  if (lts.tau_out(s).empty()) return true;
  std::vector<std::uint8_t> alive(n, 1);
  for (StateId u = 0; u < n; ++u)
    for (auto tp : targets)
      if (r.contains(u, tp)) {
        alive[u] = 0;
        break;
      }
  // Greatest set of bad states each having a tau-successor in the set.
  bool changed = true;
  while (changed) {
    changed = false;
    for (StateId u = 0; u < n; ++u) {
      if (!alive[u]) continue;
      bool keep = false;
      for (const auto& e : lts.tau_out(u))
        if (alive[e.state]) {
          keep = true;
          break;
        }
      if (!keep) alive[u] = 0, changed = true;
    }
  }
  for (const auto& e : lts.tau_out(s))
    if (alive[e.state]) return false;
  return true;
}

std::vector<StateId> divergence_targets(const Lts& lts, StateId t, Divergence div) {
  if (div == Divergence::D4) return tau_reach(lts, t, true);
  std::vector<StateId> succ;
  for (const auto& e : lts.tau_out(t)) succ.push_back(e.state);
  return succ;
}

}  // namespace

bool weak_match_exists(const Lts& lts, const PairRelation& r, StateId s, LabelId a, StateId s_prime, StateId t,
                       XyParam p) {
  Matcher m(lts);
  return m.match(r, s, a, s_prime, t, p);
}

PairRelation generic_bisim(const Lts& lts, XyParam p, Divergence div) {
  const auto n = static_cast<StateId>(lts.num_states());
  PairRelation r(n, true, true);
  Matcher m(lts);
  std::vector<std::vector<StateId>> targets(n);
  if (div != Divergence::None)
    for (StateId t = 0; t < n; ++t) targets[t] = divergence_targets(lts, t, div);

  auto ok = [&](StateId s, StateId t) {
    if (!transfer(lts, m, r, s, t, p) || !transfer(lts, m, r, t, s, p)) return false;
    if (div == Divergence::None) return true;
    return divergence_ok(lts, r, s, targets[t]) && divergence_ok(lts, r, t, targets[s]);
  };
  // Full sweeps until nothing changes; each sweep removes every pair whose
  // clause fails against the current relation.
  bool changed = true;
  while (changed) {
    changed = false;
    for (StateId s = 0; s < n; ++s)
      for (StateId t = s; t < n; ++t)
        if (r.contains(s, t) && !ok(s, t)) {
          r.erase(s, t);
          changed = true;
        }
  }
  return r;
}

PairRelation generic_sim(const Lts& lts, XyParam p) {
  const auto n = static_cast<StateId>(lts.num_states());
  PairRelation r(n, false, true);
  Matcher m(lts);
  bool changed = true;
  while (changed) {
    changed = false;
    for (StateId s = 0; s < n; ++s)
      for (StateId t = 0; t < n; ++t)
        if (r.contains(s, t) && !transfer(lts, m, r, s, t, p)) {
          r.erase(s, t);
          changed = true;
        }
  }
  return r;
}

PairRelation strong_bisim(const Lts& lts) {
  const auto n = static_cast<StateId>(lts.num_states());
  std::vector<std::size_t> block(n, 0);
  std::size_t nblocks = 1;
  for (;;) {
    std::map<std::pair<std::size_t, std::vector<std::pair<LabelId, std::size_t>>>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (StateId s = 0; s < n; ++s) {
      std::vector<std::pair<LabelId, std::size_t>> sig;
      for (const auto& e : lts.out(s)) sig.emplace_back(e.label, block[e.state]);
      std::sort(sig.begin(), sig.end());
      sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
      next[s] = ids.try_emplace({block[s], std::move(sig)}, ids.size()).first->second;
    }
    block = std::move(next);
    if (ids.size() == nblocks) break;
    nblocks = ids.size();
  }
  PairRelation r(n, true);
  for (StateId s = 0; s < n; ++s)
    for (StateId t = s; t < n; ++t)
      if (block[s] == block[t]) r.insert(s, t);
  return r;
}

bool has_stuttering_property(const Lts& lts, const PairRelation& r) {
  const auto n = static_cast<StateId>(lts.num_states());
  TauClosure c(lts);
  for (StateId t0 = 0; t0 < n; ++t0)
    for (StateId tk = 0; tk < n; ++tk) {
      if (!r.contains(t0, tk) || !c.reaches(t0, tk)) continue;
      for (auto u : c.from(t0)) {
        if (!c.reaches(u, tk)) continue;
        for (auto w : c.from(u))
          if (c.reaches(w, tk) && (!r.contains(u, w) || !r.contains(w, u))) return false;
      }
    }
  return true;
}

std::vector<std::size_t> equivalence_classes(const PairRelation& r) {
  const auto n = static_cast<StateId>(r.num_states());
  std::vector<StateId> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](StateId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (StateId s = 0; s < n; ++s)
    for (StateId t = 0; t < n; ++t)
      if (r.contains(s, t)) {
        auto a = find(s), b = find(t);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
  std::vector<std::size_t> block(n);
  std::map<StateId, std::size_t> ids;
  for (StateId s = 0; s < n; ++s) block[s] = ids.try_emplace(find(s), ids.size()).first->second;
  return block;
}

}  // namespace bisimgame
