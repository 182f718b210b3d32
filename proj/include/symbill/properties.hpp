#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "symbill/billiard_map.hpp"

namespace symbill {

// Randomized invariant checks over tables drawn from every family, plus
// perturbations and a few fixed tables. Each check counts its cases and
// keeps the first failure.
struct PropertyOutcome {
  long cases = 0;
  long failures = 0;
  std::string first_failure;
  std::string note;

  bool ok(long min_cases) const { return failures == 0 && cases >= min_cases; }
};

using Rng = std::mt19937_64;

// p/q with 1 <= p < q <= max_q.
Rat random_fraction(Rng& rng, long max_q = 1000);
// Any valid table; `lattice_only` skips perturbations and the kite so that
// orbits are periodic.
Polygon random_table(Rng& rng, bool lattice_only = false);
// Uniform over side pairs with nonzero cross product; positive only if asked.
PhasePoint random_phase_point(Rng& rng, const Polygon& poly, bool positive_only = false);

// c_jk * det(dT) = c_ij, with the slope measured by finite differences of
// the geometric step.
PropertyOutcome prop_area_jacobian(long cases, std::uint64_t seed);
// g(dT V) = -g(V) for g(V) = c_ij V_s V_t.
PropertyOutcome prop_metric_sign_flip(long cases, std::uint64_t seed);
// Positive chords map to positive chords; the table step agrees with the
// geometric step.
PropertyOutcome prop_positivity(long cases, std::uint64_t seed);
// rho T rho T = id, and step_back inverts step.
PropertyOutcome prop_time_reversal(long cases, std::uint64_t seed);
// area(D(P)) = factor * phase_area(P); the note reports the observed ratios.
PropertyOutcome prop_difference_body(long cases, std::uint64_t seed, const Rat& factor = Rat(1));
// propagate splits a rectangle into pieces of equal total area, and every
// image has the area of its piece.
PropertyOutcome prop_split_area(long cases, std::uint64_t seed);
// Return orders of closed tile orbits are 1, 2 or 4 and match the recorded
// value.
PropertyOutcome prop_return_order(long cases, std::uint64_t seed);
// Float and exact orbits agree on period and on every point within tol.
PropertyOutcome prop_float_exact(long cases, std::uint64_t seed, double tol = 1e-6);

}  // namespace symbill
