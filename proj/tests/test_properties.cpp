#include <doctest.h>

#include "symbill/families.hpp"
#include "symbill/properties.hpp"

using namespace symbill;

namespace {

void require_ok(const PropertyOutcome& o, long min_cases) {
  INFO("cases " << o.cases << ", failures " << o.failures << ": " << o.first_failure);
  CHECK(o.ok(min_cases));
}

}  // namespace

TEST_CASE("random helpers stay in range") {
  Rng rng(3);
  for (int k = 0; k < 500; ++k) {
    Rat f = random_fraction(rng, 50);
    CHECK(f > 0);
    CHECK(f < 1);
    CHECK(f.get_den() <= 50);
  }
  for (int k = 0; k < 100; ++k) {
    Polygon poly = random_table(rng);
    PhasePoint p = random_phase_point(rng, poly, true);
    CHECK(sgn(poly.side_cross(p.tail, p.head)) > 0);
    PhasePoint q = random_phase_point(rng, poly);
    CHECK(poly.side_cross(q.tail, q.head) != 0);
  }
}

TEST_CASE("properties hold on fresh seeds") {
  require_ok(prop_area_jacobian(200, 101), 200);
  require_ok(prop_metric_sign_flip(200, 102), 200);
  require_ok(prop_positivity(200, 103), 200);
  require_ok(prop_time_reversal(200, 104), 200);
  require_ok(prop_difference_body(100, 105), 100);
  require_ok(prop_split_area(200, 106), 200);
  require_ok(prop_return_order(40, 107), 40);
  require_ok(prop_float_exact(100, 108), 100);
}

TEST_CASE("difference body check detects a wrong factor") {
  PropertyOutcome o = prop_difference_body(30, 105, Rat(2));
  CHECK(o.failures == o.cases);
  CHECK(!o.first_failure.empty());
}

TEST_CASE("outcomes are deterministic in the seed") {
  PropertyOutcome a = prop_difference_body(20, 9), b = prop_difference_body(20, 9);
  CHECK(a.cases == b.cases);
  CHECK(a.note == b.note);
}
