#include "support/fixtures.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fixtures {

using namespace bisimgame;

std::string path(const std::string& name) { return std::string(BISIMGAME_FIXTURES) + "/" + name + ".aut"; }

std::string read_text(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Lts load(const std::string& name) { return parse_aut(read_text(path(name))); }

std::shared_ptr<const Lts> load_shared(const std::string& name) { return std::make_shared<const Lts>(load(name)); }

StateId state(const Lts& lts, const std::string& name) {
  auto s = lts.find_state(name);
  if (!s) throw std::runtime_error("no state " + name);
  return *s;
}

Joined buffer_abp() {
  auto u = disjoint_union_named(load("buffer"), load("abp"));
  return {std::move(u.lts), u.offset};
}

RandomShape random_shape(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5eedf00dull);
  RandomShape r;
  r.states = 2 + rng() % 7;
  r.labels = 1 + rng() % 3;
  static constexpr double densities[] = {0.15, 0.25, 0.35};
  static constexpr double taus[] = {0.2, 0.35, 0.5};
  r.density = densities[rng() % 3];
  r.tau_fraction = taus[rng() % 3];
  return r;
}

Lts random_instance(std::uint64_t seed) {
  auto r = random_shape(seed);
  return random_lts(seed, r.states, r.labels, r.density, r.tau_fraction);
}

Lts nondivergent_instance(std::uint64_t seed) {
  for (std::uint64_t k = seed * 1000;; ++k) {
    auto r = random_shape(k);
    auto lts = random_lts(k, r.states, r.labels, r.density, 0.25);
    bool any = false;
    for (bool d : divergent_states(lts)) any = any || d;
    if (!any) return lts;
  }
}

}  // namespace fixtures
