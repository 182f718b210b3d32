#pragma once

#include <functional>
#include <string>
#include <vector>

namespace symbill {

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct AcceptanceOptions {
  long property_cases = 1000;
  std::uint64_t seed = 20240917;
  bool kite = true;  // the kite search is the slowest line
};

// Runs every criterion in order, reporting each as soon as it finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

// "PASS  name  (1.23 s)  detail"
std::string format_result(const CriterionResult& r);

}  // namespace symbill
