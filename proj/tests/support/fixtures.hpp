#pragma once

#include <memory>
#include <string>

#include "bisimgame/lts.hpp"

namespace fixtures {

std::string path(const std::string& name);
std::string read_text(const std::string& file);
bisimgame::Lts load(const std::string& name);
std::shared_ptr<const bisimgame::Lts> load_shared(const std::string& name);
bisimgame::StateId state(const bisimgame::Lts& lts, const std::string& name);

// Buffer and ABP in one system; ABP states are named "file2:<n>".
struct Joined {
  bisimgame::Lts lts;
  std::size_t offset;
};
Joined buffer_abp();

// Shape of the random instances used by the property suites.
struct RandomShape {
  std::size_t states, labels;
  double density, tau_fraction;
};
RandomShape random_shape(std::uint64_t seed);
bisimgame::Lts random_instance(std::uint64_t seed);
// Instances with no divergent state, scanning seeds upward from `seed`.
bisimgame::Lts nondivergent_instance(std::uint64_t seed);

}  // namespace fixtures
