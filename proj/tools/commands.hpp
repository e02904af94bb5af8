#pragma once

#include <iosfwd>

namespace bisimgame::cli {

// Exit codes: 0 related / success, 1 not related, 2 error, 3 game and
// oracle disagree.
int run(int argc, char** argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace bisimgame::cli
