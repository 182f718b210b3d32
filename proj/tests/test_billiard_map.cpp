#include <doctest.h>

#include <random>

#include "symbill/billiard_map.hpp"
#include "symbill/families.hpp"

using namespace symbill;

namespace {

// Independent reference: intersect the line through the tail point, in the
// direction of the head side, with every side of the polygon.
struct OracleStep {
  bool halted = false;
  PhasePoint next;
};

OracleStep oracle_step(const Polygon& poly, const PhasePoint& pp) {
  const auto& V = poly.vertices();
  const int n = poly.size();
  auto side = [&](int k) { return V[static_cast<std::size_t>((k + 1) % n)] - V[static_cast<std::size_t>(k)]; };
  Point x = V[static_cast<std::size_t>(pp.tail)] + pp.s * side(pp.tail);
  Vec2 d = side(pp.head);
  OracleStep out;
  out.halted = true;
  for (int k = 0; k < n; ++k) {
    Vec2 e = side(k);
    Rat den = cross(d, e);
    if (den == 0) continue;
    Point a = V[static_cast<std::size_t>(k)];
    Rat mu = cross(d, x - a) / den;
    Rat lambda = cross(e, x - a) / den;  // x + lambda d = a + mu e
    if (lambda == 0 || mu < 0 || mu > 1) continue;
    if (mu == 0 || mu == 1) return {true, {}};
    out = {false, {pp.head, pp.t, k, mu}};
  }
  return out;
}

Rat frac(long p, long q) { return make_rat(p, q); }

}  // namespace

TEST_CASE("oracle sanity: the chord direction condition") {
  Polygon q = quad();
  PhasePoint p{0, frac(1, 6), 1, frac(1, 4)};
  OracleStep r = oracle_step(q, p);
  REQUIRE(!r.halted);
  Point x = q.vertex(0) + p.s * q.side(0);
  Point z = q.vertex(r.next.head) + r.next.t * q.side(r.next.head);
  CHECK(cross(z - x, q.side(1)) == 0);
}

TEST_CASE("step agrees with the oracle and with the table across families") {
  std::mt19937_64 rng(7);
  std::vector<Polygon> tables{unit_triangle(), unit_square(), quad(), kite(),
                              penthouse(frac(2, 1), frac(3, 5)), penthouse(frac(3, 7), frac(1, 3)),
                              trapezoid(frac(7, 1), frac(5, 1), frac(1, 3), frac(2, 1)), lattice_hexagon(3, 1, 2, 2),
                              hexhouse(6, 1, 4, 2), special_octagon(4, 5, 6, 8),
                              perturb(quad(), frac(1, 50), 3)};
  int compared = 0;
  for (const Polygon& poly : tables) {
    MapTable table(poly);
    for (int c = 0; c < 200; ++c) {
      int n = poly.size();
      int i = static_cast<int>(rng() % n), j = static_cast<int>(rng() % n);
      if (i == j || poly.side_cross(i, j) == 0) continue;
      long den = 2 + static_cast<long>(rng() % 500);
      PhasePoint p{i, frac(1 + static_cast<long>(rng() % (den - 1)), den), j,
                   frac(1 + static_cast<long>(rng() % (den - 1)), den)};
      OracleStep o = oracle_step(poly, p);
      StepResult s = step(poly, p);
      StepResult t = table.step(p);
      REQUIRE(s.ok() == !o.halted);
      REQUIRE(t.ok() == s.ok());
      if (s.ok()) {
        CHECK(*s.next == o.next);
        CHECK(*t.next == o.next);
      }
      ++compared;
    }
  }
  CHECK(compared > 1500);
}

TEST_CASE("triangle midpoints are 3-periodic") {
  Polygon tri = unit_triangle();
  PhasePoint p = make_phase_point(tri, 0, frac(1, 2), 1, frac(1, 2));
  OrbitReport r = orbit(tri, p);
  CHECK(r.status == OrbitStatus::Periodic);
  CHECK(r.period == 3);
  CHECK(r.symbolic == std::vector<int>{0, 1, 2});
}

TEST_CASE("every regular square orbit is 4-periodic") {
  Polygon sq = unit_square();
  for (long a = 1; a < 7; ++a)
    for (long b = 1; b < 7; ++b) {
      OrbitReport r = orbit(sq, PhasePoint{0, frac(a, 7), 1, frac(b, 7)});
      CHECK(r.status == OrbitStatus::Periodic);
      CHECK(r.period == 4);
    }
}

TEST_CASE("kite 6-orbit replays under the oracle") {
  Polygon k = kite();
  PhasePoint start{0, frac(3, 5), 2, frac(1, 5)};
  PhasePoint cur = start;
  for (int m = 1; m <= 6; ++m) {
    OracleStep o = oracle_step(k, cur);
    REQUIRE(!o.halted);
    cur = o.next;
    CHECK((cur == start) == (m == 6));
  }
  OrbitReport r = orbit(k, start);
  CHECK(r.status == OrbitStatus::Periodic);
  CHECK(r.period == 6);
}

TEST_CASE("quad tile centers have periods 10 and 9") {
  Polygon q = quad();
  CHECK(orbit(q, PhasePoint{0, frac(1, 6), 1, frac(1, 4)}).period == 10);
  CHECK(orbit(q, PhasePoint{0, frac(1, 6), 1, frac(3, 4)}).period == 9);
  // generic points of the same tiles
  CHECK(orbit(q, PhasePoint{0, frac(1, 7), 1, frac(1, 5)}).period == 20);
  CHECK(orbit(q, PhasePoint{0, frac(1, 7), 1, frac(3, 5)}).period == 36);
}

TEST_CASE("halts") {
  Polygon sq = unit_square();
  StepResult r = step(sq, PhasePoint{0, frac(1, 3), 2, frac(1, 2)});
  CHECK(!r.ok());
  CHECK(r.halt == HaltReason::ParallelSides);

  Polygon q = quad();
  MapTable t(q);
  for (const Rat& b : t.breakpoints(0, 1)) {
    StepResult h = step(q, PhasePoint{0, b, 1, frac(1, 2)});
    CHECK(!h.ok());
    CHECK(h.halt == HaltReason::HitVertex);
    CHECK(oracle_step(q, PhasePoint{0, b, 1, frac(1, 2)}).halted);
    CHECK(t.branch_index(0, 1, b) == -1);
  }
}

TEST_CASE("make_phase_point rejects bad input") {
  Polygon q = quad();
  CHECK_THROWS_AS(make_phase_point(q, 0, frac(1, 2), 0, frac(1, 2)), Error);
  CHECK_THROWS_AS(make_phase_point(q, 0, Rat(0), 1, frac(1, 2)), Error);
  CHECK_THROWS_AS(make_phase_point(q, 0, frac(1, 2), 1, Rat(1)), Error);
  CHECK_THROWS_AS(make_phase_point(q, 4, frac(1, 2), 1, frac(1, 2)), Error);
}

TEST_CASE("table branches tile (0,1) in order") {
  for (const Polygon& poly : {quad(), kite(), hexhouse(5, 1, 3, 2)}) {
    MapTable t(poly);
    for (int i = 0; i < poly.size(); ++i)
      for (int j = 0; j < poly.size(); ++j) {
        const auto& br = t.branches(i, j);
        if (i == j || poly.side_cross(i, j) == 0) {
          CHECK(br.empty());
          continue;
        }
        REQUIRE(!br.empty());
        CHECK(br.front().lo == 0);
        CHECK(br.back().hi == 1);
        for (std::size_t k = 1; k < br.size(); ++k) CHECK(br[k].lo == br[k - 1].hi);
        CHECK(t.breakpoints(i, j).size() == br.size() - 1);
        for (const AffineBranch& b : br) CHECK(b.slope == -poly.side_cross(i, j) / poly.side_cross(j, b.landing));
      }
  }
}

TEST_CASE("step_back inverts step") {
  Polygon q = penthouse(frac(2, 1), frac(3, 5));
  PhasePoint p{0, frac(2, 9), 1, frac(5, 11)};
  StepResult f = step(q, p);
  REQUIRE(f.ok());
  StepResult b = step_back(q, *f.next);
  REQUIRE(b.ok());
  CHECK(*b.next == p);
  CHECK(reverse_chord(reverse_chord(p)) == p);
}

TEST_CASE("orbit caps") {
  Polygon k = kite();
  OrbitOptions o;
  o.max_steps = 50;
  OrbitReport r = orbit(k, PhasePoint{0, frac(1, 7), 1, frac(2, 7)}, o);
  CHECK(r.status == OrbitStatus::Capped);
  CHECK(r.steps == 50);
  CHECK(r.note.empty());
  o.max_steps = 100000;
  o.bit_budget = 64;
  r = orbit(k, PhasePoint{0, frac(1, 7), 1, frac(2, 7)}, o);
  CHECK(r.status == OrbitStatus::Capped);
  CHECK(r.note == "precision overflow");
}

TEST_CASE("collected points follow the orbit") {
  Polygon q = quad();
  OrbitOptions o;
  o.collect_points = true;
  OrbitReport r = orbit(q, PhasePoint{0, frac(1, 6), 1, frac(1, 4)}, o);
  REQUIRE(r.points.size() == 10);
  for (std::size_t k = 0; k < 10; ++k) CHECK(*step(q, r.points[k]).next == r.points[(k + 1) % 10]);
}

TEST_CASE("stability classifier") {
  Polygon sq = unit_square(), tri = unit_triangle(), q = quad();
  StabilityReport a = classify(sq, PhasePoint{0, frac(1, 3), 1, frac(1, 2)});
  CHECK(a.period == 4);
  CHECK(a.parity == ParityClass::ZeroModFour);
  REQUIRE(a.lambda);
  CHECK(*a.lambda == 1);
  CHECK(a.verdict == Verdict::IdentityIndeterminate);

  StabilityReport b = classify(tri, PhasePoint{0, frac(1, 2), 1, frac(1, 2)});
  CHECK(b.parity == ParityClass::Odd);
  CHECK(b.verdict == Verdict::StableOrder4);

  StabilityReport c = classify(q, PhasePoint{0, frac(1, 6), 1, frac(1, 4)});
  CHECK(c.period == 10);
  CHECK(c.parity == ParityClass::TwoModFour);
  CHECK(c.verdict == Verdict::StableOrder2);

  StabilityReport d = classify(kite(), PhasePoint{0, frac(6, 11), 1, frac(5, 11)});
  CHECK(d.period == 16);
  CHECK(d.verdict == Verdict::HyperbolicStable);
  CHECK(*d.lambda == 12);

  CHECK_THROWS_AS(classify(kite(), PhasePoint{0, frac(1, 7), 1, frac(2, 7)}, 500), Error);
}

TEST_CASE("float orbits agree with exact ones on simple tables") {
  Polygon q = quad();
  MapTable t(q);
  for (auto [s, tt, want] : {std::tuple{frac(1, 7), frac(1, 5), 20}, std::tuple{frac(1, 7), frac(3, 5), 36}}) {
    OrbitReport f = float_orbit(t, to_float(PhasePoint{0, s, 1, tt}));
    CHECK(f.float_mode);
    CHECK(f.status == OrbitStatus::Periodic);
    CHECK(f.period == want);
  }
}
