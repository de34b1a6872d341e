#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ispgame {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSolver = 3;

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

// Regenerates one reference example and prints an expected/computed table.
// Returns kExitOk when every graded row matches.
int reproduce(const std::string& target, std::ostream& out);

}  // namespace ispgame
