#include "bisimgame/lts.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <random>
#include <sstream>

namespace bisimgame {

LtsBuilder::LtsBuilder(std::size_t num_states, StateId initial, std::string tau_text)
    : num_states_(num_states), initial_(initial) {
  if (tau_text.empty()) throw std::invalid_argument("tau label text must be non-empty");
  if (num_states > 0 && initial >= num_states) throw std::out_of_range("initial state out of range");
  label_index_.emplace(tau_text, kTau);
  labels_.push_back(std::move(tau_text));
}

LabelId LtsBuilder::label(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("action labels must be non-empty");
  auto it = label_index_.find(std::string(text));
  if (it != label_index_.end()) return it->second;
  auto id = static_cast<LabelId>(labels_.size());
  labels_.emplace_back(text);
  label_index_.emplace(labels_.back(), id);
  return id;
}

void LtsBuilder::add(StateId src, LabelId label, StateId dst) {
  if (src >= num_states_ || dst >= num_states_) throw std::out_of_range("state index out of range");
  if (label >= labels_.size()) throw std::out_of_range("unknown label id");
  transitions_.push_back({src, label, dst});
}

void LtsBuilder::name_state(StateId s, std::string name) {
  if (s >= num_states_) throw std::out_of_range("state index out of range");
  if (names_.empty()) {
    names_.resize(num_states_);
    for (std::size_t i = 0; i < num_states_; ++i) names_[i] = std::to_string(i);
  }
  names_[s] = std::move(name);
}

Lts LtsBuilder::build() && {
  Lts lts;
  lts.initial_ = initial_;
  lts.labels_ = std::move(labels_);
  lts.names_ = std::move(names_);
  std::sort(transitions_.begin(), transitions_.end());
  transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
  lts.transitions_ = std::move(transitions_);

  const std::size_t n = num_states_;
  lts.out_offsets_.assign(n + 1, 0);
  lts.in_offsets_.assign(n + 1, 0);
  for (const auto& tr : lts.transitions_) {
    ++lts.out_offsets_[tr.src + 1];
    ++lts.in_offsets_[tr.dst + 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    lts.out_offsets_[i + 1] += lts.out_offsets_[i];
    lts.in_offsets_[i + 1] += lts.in_offsets_[i];
  }
  lts.out_edges_.resize(lts.transitions_.size());
  lts.in_edges_.resize(lts.transitions_.size());
  std::vector<std::size_t> in_fill(lts.in_offsets_.begin(), lts.in_offsets_.end() - 1);
  std::size_t k = 0;
  for (const auto& tr : lts.transitions_) {
    lts.out_edges_[k++] = {tr.label, tr.dst};
    lts.in_edges_[in_fill[tr.dst]++] = {tr.label, tr.src};
  }
  for (std::size_t s = 0; s < n; ++s)
    std::sort(lts.in_edges_.begin() + lts.in_offsets_[s], lts.in_edges_.begin() + lts.in_offsets_[s + 1]);

  lts.tau_end_.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    auto e = lts.out_offsets_[s];
    while (e < lts.out_offsets_[s + 1] && lts.out_edges_[e].label == kTau) ++e;
    lts.tau_end_[s] = e;
  }
  return lts;
}

std::optional<LabelId> Lts::find_label(std::string_view text) const {
  for (LabelId l = 0; l < labels_.size(); ++l)
    if (labels_[l] == text) return l;
  return std::nullopt;
}

std::span<const Edge> Lts::out(StateId s) const {
  return {out_edges_.data() + out_offsets_.at(s), out_edges_.data() + out_offsets_[s + 1]};
}

std::span<const Edge> Lts::in(StateId s) const {
  return {in_edges_.data() + in_offsets_.at(s), in_edges_.data() + in_offsets_[s + 1]};
}

std::span<const Edge> Lts::tau_out(StateId s) const {
  return {out_edges_.data() + out_offsets_.at(s), out_edges_.data() + tau_end_[s]};
}

bool Lts::has_transition(StateId src, LabelId label, StateId dst) const {
  auto o = out(src);
  return std::binary_search(o.begin(), o.end(), Edge{label, dst});
}

std::string Lts::state_name(StateId s) const {
  if (s < names_.size()) return names_[s];
  return std::to_string(s);
}

std::optional<StateId> Lts::find_state(std::string_view text) const {
  for (StateId s = 0; s < names_.size(); ++s)
    if (names_[s] == text) return s;
  StateId value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec == std::errc() && ptr == text.data() + text.size() && value < num_states()) return value;
  return std::nullopt;
}

Lts Lts::with_state_names(std::vector<std::string> names) const {
  if (names.size() != num_states()) throw std::invalid_argument("one name per state required");
  Lts copy = *this;
  copy.names_ = std::move(names);
  return copy;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_number(std::string_view s, std::uint64_t& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

struct RawTransition {
  std::uint64_t src, dst;
  std::string label;
};

RawTransition parse_transition(std::string_view line, std::size_t lineno) {
  line = trim(line);
  if (line.size() < 2 || line.front() != '(' || line.back() != ')')
    throw ParseError(lineno, "malformed transition, expected (src,label,dst)");
  line = line.substr(1, line.size() - 2);
  auto first = line.find(',');
  auto last = line.rfind(',');
  if (first == std::string_view::npos || first == last)
    throw ParseError(lineno, "malformed transition, expected (src,label,dst)");
  RawTransition t;
  if (!parse_number(line.substr(0, first), t.src) || !parse_number(line.substr(last + 1), t.dst))
    throw ParseError(lineno, "malformed state index");
  auto label = trim(line.substr(first + 1, last - first - 1));
  if (label.size() >= 2 && label.front() == '"' && label.back() == '"') label = label.substr(1, label.size() - 2);
  else if (!label.empty() && (label.front() == '"' || label.back() == '"'))
    throw ParseError(lineno, "unbalanced quotes in label");
  if (label.empty()) throw ParseError(lineno, "empty label");
  t.label = std::string(label);
  return t;
}

}  // namespace

Lts parse_aut(std::string_view text, std::string_view tau_label) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t lineno = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!trim(line).empty()) lines.emplace_back(lineno, line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  if (lines.empty()) throw ParseError(1, "missing header");

  auto [header_line, header_raw] = lines.front();
  auto header = trim(header_raw);
  if (header.substr(0, 3) != "des") throw ParseError(header_line, "malformed header, expected des (init,#trans,#states)");
  header = trim(header.substr(3));
  if (header.size() < 2 || header.front() != '(' || header.back() != ')')
    throw ParseError(header_line, "malformed header, expected des (init,#trans,#states)");
  header = header.substr(1, header.size() - 2);
  std::uint64_t fields[3];
  for (int i = 0; i < 3; ++i) {
    auto comma = header.find(',');
    if ((i < 2) == (comma == std::string_view::npos) || !parse_number(header.substr(0, comma), fields[i]))
      throw ParseError(header_line, "malformed header, expected des (init,#trans,#states)");
    header = i < 2 ? header.substr(comma + 1) : std::string_view{};
  }
  const auto [init, declared, nstates] = fields;
  if (nstates == 0) throw ParseError(header_line, "an LTS needs at least one state");
  if (init >= nstates) throw ParseError(header_line, "state index out of range");

  LtsBuilder builder(nstates, static_cast<StateId>(init), std::string(tau_label));
  std::size_t count = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto [ln, raw] = lines[i];
    auto line = trim(raw);
    if (line.front() == '#') {
      if (line.substr(0, 5) == "#name") {
        auto rest = trim(line.substr(5));
        auto sp = rest.find_first_of(" \t");
        std::uint64_t idx;
        if (sp == std::string_view::npos || !parse_number(rest.substr(0, sp), idx))
          throw ParseError(ln, "malformed #name line, expected #name <index> <text>");
        if (idx >= nstates) throw ParseError(ln, "state index out of range");
        builder.name_state(static_cast<StateId>(idx), std::string(trim(rest.substr(sp))));
      }
      continue;
    }
    auto t = parse_transition(line, ln);
    if (t.src >= nstates || t.dst >= nstates) throw ParseError(ln, "state index out of range");
    builder.add(static_cast<StateId>(t.src), t.label, static_cast<StateId>(t.dst));
    ++count;
  }
  if (count != declared)
    throw ParseError(lines.back().first, "transition count mismatch: header declares " + std::to_string(declared) +
                                             ", found " + std::to_string(count));
  return std::move(builder).build();
}

std::string serialize_aut(const Lts& lts) {
  std::vector<Transition> sorted = lts.transitions();
  std::sort(sorted.begin(), sorted.end(), [&](const Transition& a, const Transition& b) {
    return std::tie(a.src, lts.label_text(a.label), a.dst) < std::tie(b.src, lts.label_text(b.label), b.dst);
  });
  std::ostringstream out;
  out << "des (" << lts.initial() << "," << sorted.size() << "," << lts.num_states() << ")\n";
  for (const auto& t : sorted) out << "(" << t.src << ",\"" << lts.label_text(t.label) << "\"," << t.dst << ")\n";
  if (lts.has_names())
    for (StateId s = 0; s < lts.num_states(); ++s) out << "#name " << s << " " << lts.state_name(s) << "\n";
  return out.str();
}

std::vector<StateId> tau_reach(const Lts& lts, StateId s, bool strict) {
  std::vector<bool> seen(lts.num_states(), false);
  std::vector<StateId> stack;
  if (strict) {
    for (const auto& e : lts.tau_out(s))
      if (!seen[e.state]) seen[e.state] = true, stack.push_back(e.state);
  } else {
    seen[s] = true;
    stack.push_back(s);
  }
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    for (const auto& e : lts.tau_out(u))
      if (!seen[e.state]) seen[e.state] = true, stack.push_back(e.state);
  }
  std::vector<StateId> result;
  for (StateId u = 0; u < seen.size(); ++u)
    if (seen[u]) result.push_back(u);
  return result;
}

std::vector<bool> divergent_states(const Lts& lts) {
  const std::size_t n = lts.num_states();
  // Tarjan on the tau graph; a state lies on a cycle iff its SCC is
  // non-trivial or it has a tau self-loop.
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<StateId> stack;
  int counter = 0, ncomp = 0;
  std::vector<std::size_t> comp_size;
  std::function<void(StateId)> visit = [&](StateId v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (const auto& e : lts.tau_out(v)) {
      if (index[e.state] < 0) {
        visit(e.state);
        low[v] = std::min(low[v], low[e.state]);
      } else if (on_stack[e.state]) {
        low[v] = std::min(low[v], index[e.state]);
      }
    }
    if (low[v] == index[v]) {
      std::size_t size = 0;
      StateId w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = ncomp;
        ++size;
      } while (w != v);
      comp_size.push_back(size);
      ++ncomp;
    }
  };
  for (StateId v = 0; v < n; ++v)
    if (index[v] < 0) visit(v);

  std::vector<bool> div(n, false);
  for (StateId v = 0; v < n; ++v)
    if (comp_size[comp[v]] > 1 || lts.has_transition(v, kTau, v)) div[v] = true;
  // Anything that can tau-reach a cycle diverges too.
  bool changed = true;
  while (changed) {
    changed = false;
    for (StateId v = 0; v < n; ++v) {
      if (div[v]) continue;
      for (const auto& e : lts.tau_out(v))
        if (div[e.state]) {
          div[v] = changed = true;
          break;
        }
    }
  }
  return div;
}

bool is_divergent(const Lts& lts, StateId s) {
  if (s >= lts.num_states()) throw std::out_of_range("state index out of range");
  return divergent_states(lts)[s];
}

UnionResult disjoint_union(const Lts& l1, const Lts& l2) {
  if (l1.tau_text() != l2.tau_text())
    throw std::invalid_argument("tau label mismatch: \"" + l1.tau_text() + "\" vs \"" + l2.tau_text() + "\"");
  const std::size_t offset = l1.num_states();
  LtsBuilder b(offset + l2.num_states(), l1.initial(), l1.tau_text());
  for (const auto& text : l1.labels()) b.label(text);
  for (const auto& text : l2.labels()) b.label(text);
  for (const auto& t : l1.transitions()) b.add(t.src, l1.label_text(t.label), t.dst);
  for (const auto& t : l2.transitions())
    b.add(static_cast<StateId>(t.src + offset), l2.label_text(t.label), static_cast<StateId>(t.dst + offset));
  if (l1.has_names() || l2.has_names()) {
    for (StateId s = 0; s < l1.num_states(); ++s) b.name_state(s, l1.state_name(s));
    for (StateId s = 0; s < l2.num_states(); ++s) b.name_state(static_cast<StateId>(s + offset), l2.state_name(s));
  }
  return {std::move(b).build(), offset};
}

UnionResult disjoint_union_named(const Lts& l1, const Lts& l2) {
  auto u = disjoint_union(l1, l2);
  std::vector<std::string> names;
  for (StateId s = 0; s < l1.num_states(); ++s) names.push_back(l1.state_name(s));
  for (StateId s = 0; s < l2.num_states(); ++s) names.push_back("file2:" + l2.state_name(s));
  return {u.lts.with_state_names(std::move(names)), u.offset};
}

Lts random_lts(std::uint64_t seed, std::size_t n_states, std::size_t n_labels, double edge_density,
               double tau_fraction) {
  if (n_states == 0 || n_labels == 0) throw std::invalid_argument("random_lts needs at least one state and label");
  if (edge_density < 0 || edge_density > 1 || tau_fraction < 0 || tau_fraction > 1)
    throw std::invalid_argument("fractions must lie in [0,1]");
  // Raw engine output only: std distributions are not portable across
  // standard libraries, and instances must be reproducible from the seed.
  std::mt19937_64 rng(seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  LtsBuilder b(n_states);
  std::vector<LabelId> visible;
  for (std::size_t i = 0; i < n_labels; ++i)
    visible.push_back(b.label(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "l" + std::to_string(i)));
  for (StateId src = 0; src < n_states; ++src)
    for (StateId dst = 0; dst < n_states; ++dst) {
      if (unit() >= edge_density) continue;
      if (unit() < tau_fraction) b.add(src, kTau, dst);
      else b.add(src, visible[rng() % n_labels], dst);
    }
  return std::move(b).build();
}

}  // namespace bisimgame
