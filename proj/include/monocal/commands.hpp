#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace monocal::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitOrder = 3;

// Entry point of the `monocal` binary. `args` excludes the program name.
//
//   monocal fit INPUT.csv [--loss square|logloss] [--solver direct|stack|anytime]
//               [--delta D] [--bounds LO,HI|auto] [--max-iters K] [--out PATH] [--quiet]
//   monocal apply MODEL.json SCORES.csv
//   monocal stream INPUT.csv [--loss square|logloss]
//
// INPUT may be "-" for standard input. MONOCAL_MAX_N caps the number of rows
// read by any subcommand.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace monocal::cli
