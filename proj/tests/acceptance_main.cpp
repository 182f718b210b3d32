#include <cstdlib>
#include <iostream>
#include <string>

#include "symbill/acceptance.hpp"

// One line per criterion; exit status 1 if any fails.
int main(int argc, char** argv) {
  symbill::AcceptanceOptions opts;
  for (int k = 1; k < argc; ++k) {
    std::string a = argv[k];
    if (a == "--no-kite") opts.kite = false;
    else if (a == "--cases" && k + 1 < argc) opts.property_cases = std::atol(argv[++k]);
  }
  bool all = true;
  symbill::run_acceptance(opts, [&](const symbill::CriterionResult& r) {
    all = all && r.pass;
    std::cout << symbill::format_result(r) << std::endl;
  });
  std::cout << (all ? "ALL PASS" : "SOME CRITERIA FAILED") << std::endl;
  return all ? 0 : 1;
}
