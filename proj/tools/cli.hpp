#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "symbill/io.hpp"

namespace symbill::cli {

enum ExitCode { kOk = 0, kUsage = 1, kVerificationFailed = 2, kBudgetExhausted = 3 };

// Polygon argument: inline JSON, a JSON file, or a family shorthand such as
// "quad" or "penthouse:a=2,b=3/5".
Polygon load_table(const std::string& arg);
FamilySpec parse_family_shorthand(const std::string& text);
// "5,2,3/2" or "lo..hi:steps"
std::vector<Rat> parse_rat_list(const std::string& text);
// "128" or "128x96"
std::pair<int, int> parse_resolution(const std::string& text);

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symbill::cli
