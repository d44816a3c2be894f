#pragma once

#include <iosfwd>
#include <string>

#include "ipdlab/replicator.hpp"

namespace ipdlab {

// Parses a roster document:
//   {
//     "payoffs": {"T": 5, "R": 3, "P": 1, "S": 0},
//     "strategies": [
//       {"name": "tft"},
//       {"name": "me", "p": [1, 0.5, 0.5, 0], "init_coop": 1},
//       {"name": "x", "p": [...], "zds_point": [1, -6]}
//     ]
//   }
// Entries with no "p" must use a built-in name: tft, repeat, grim, lame,
// edge, pavlov, allc, alld, complier:<alpha_bar>, extortion:<alpha_bar>,
// equalizer:<Z>. Parameterized ones expand against the roster's normalized
// payoffs and carry their strip point automatically. A zds_point tag must
// match the strategy's own coordinates within 1e-9. Throws ConstraintError
// with a message naming the offending field.
Roster parse_roster(const std::string& json_text);
Roster load_roster(const std::string& path);

// Expands a built-in strategy name; recognizes the same names as rosters.
StrategyVector builtin_strategy(const std::string& name,
                                const PayoffParams& params);
bool is_builtin_strategy(const std::string& name);

// CSV numbers carry 17 significant digits so emitted values re-ingest
// exactly.
std::string format_number(double v);

}  // namespace ipdlab
