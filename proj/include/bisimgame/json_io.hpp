#pragma once

#include <json.hpp>

#include "bisimgame/arena.hpp"
#include "bisimgame/lts.hpp"

namespace bisimgame {

nlohmann::json config_to_json(const Lts& lts, const Config& c);
nlohmann::json arena_to_json(const Arena& a, const ArenaView& view);
nlohmann::json lts_to_json(const Lts& lts);

}  // namespace bisimgame
