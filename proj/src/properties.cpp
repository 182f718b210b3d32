#include "symbill/properties.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "symbill/families.hpp"
#include "symbill/tiling.hpp"

namespace symbill {

namespace {

long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

std::string describe(const Polygon& poly, const PhasePoint& pp) {
  std::ostringstream os;
  os << (poly.name().empty() ? "polygon" : poly.name()) << " at (" << pp.tail << ", " << to_string(pp.s) << "; "
     << pp.head << ", " << to_string(pp.t) << ")";
  return os.str();
}

void fail(PropertyOutcome& out, const std::string& what) {
  if (out.failures++ == 0) out.first_failure = what;
}

Polygon random_base(Rng& rng, bool periodic_only) {
  for (;;) {
    try {
      switch (uniform(rng, 0, periodic_only ? 6 : 7)) {
        case 0:
          return penthouse(make_rat(uniform(rng, 1, 40), uniform(rng, 1, 12)) + make_rat(1, 3), random_fraction(rng, 20));
        case 1: {
          Rat v = make_rat(uniform(rng, 1, 30), uniform(rng, 1, 6));
          Rat u = v + make_rat(uniform(rng, 1, 30), uniform(rng, 1, 6));
          return trapezoid(u, v, make_rat(uniform(rng, -20, 20), uniform(rng, 1, 6)), make_rat(uniform(rng, 1, 20), uniform(rng, 1, 6)));
        }
        case 2:
          return lattice_hexagon(uniform(rng, 1, 4), uniform(rng, 1, 4), uniform(rng, 1, 4), uniform(rng, 1, 4));
        case 3: {
          long w = uniform(rng, 2, 7);
          long x1 = uniform(rng, 0, w - 1);
          return hexhouse(w, x1, uniform(rng, x1 + 1, w), uniform(rng, 1, 5));
        }
        case 4: {
          long W = uniform(rng, 2, 6), H = uniform(rng, 2, 6);
          long lo = std::max(W, H) + 1, hi = W + H - 1;
          return special_octagon(W, H, uniform(rng, lo, hi), uniform(rng, lo, hi));
        }
        case 5:
          return quad();
        case 6:
          return uniform(rng, 0, 1) ? unit_square() : unit_triangle();
        default:
          return kite();
      }
    } catch (const Error&) {
    }
  }
}

}  // namespace

Rat random_fraction(Rng& rng, long max_q) {
  long q = uniform(rng, 2, max_q);
  return make_rat(uniform(rng, 1, q - 1), q);
}

Polygon random_table(Rng& rng, bool lattice_only) {
  Polygon base = random_base(rng, lattice_only);
  if (lattice_only || uniform(rng, 0, 2) != 0) return base;
  for (int tries = 0; tries < 20; ++tries) {
    try {
      return perturb(base, make_rat(1, uniform(rng, 20, 400)), rng());
    } catch (const Error&) {
    }
  }
  return base;
}

PhasePoint random_phase_point(Rng& rng, const Polygon& poly, bool positive_only) {
  const int n = poly.size();
  for (;;) {
    int i = static_cast<int>(uniform(rng, 0, n - 1));
    int j = static_cast<int>(uniform(rng, 0, n - 1));
    int c = sgn(poly.side_cross(i, j));
    if (i == j || c == 0 || (positive_only && c < 0)) continue;
    return {i, random_fraction(rng), j, random_fraction(rng)};
  }
}

namespace {

// A successful step from pp together with a perturbed start that lands on
// the same side, so both lie on one affine branch.
struct Pair {
  Polygon poly;
  PhasePoint p, q;
  PhasePoint tp, tq;
};

std::optional<Pair> branch_pair(Rng& rng, bool move_t) {
  Polygon poly = random_table(rng);
  PhasePoint p = random_phase_point(rng, poly);
  StepResult r = step(poly, p);
  if (!r.ok()) return std::nullopt;
  Rat ds = (1 - p.s) / 7;
  Rat dt = move_t ? (1 - p.t) / 5 : Rat(0);
  for (int k = 0; k < 40; ++k, ds /= 2) {
    PhasePoint q{p.tail, Rat(p.s + ds), p.head, Rat(p.t + dt)};
    StepResult rq = step(poly, q);
    if (rq.ok() && rq.next->head == r.next->head) return Pair{poly, p, q, *r.next, *rq.next};
  }
  return std::nullopt;
}

}  // namespace

PropertyOutcome prop_area_jacobian(long cases, std::uint64_t seed) {
  Rng rng(seed);
  PropertyOutcome out;
  while (out.cases < cases) {
    auto pr = branch_pair(rng, false);
    if (!pr) continue;
    ++out.cases;
    const Polygon& poly = pr->poly;
    int i = pr->p.tail, j = pr->p.head, k = pr->tp.head;
    // (s, t) -> (t, u(s)): det = -du/ds
    Rat slope = (pr->tq.t - pr->tp.t) / (pr->q.s - pr->p.s);
    Rat lhs = poly.side_cross(j, k) * -slope;
    bool shape = pr->tp.tail == j && pr->tp.s == pr->p.t && pr->tq.s == pr->q.t;
    if (!shape || lhs != poly.side_cross(i, j))
      fail(out, describe(poly, pr->p) + ": c_jk det = " + to_string(lhs) + ", c_ij = " + to_string(poly.side_cross(i, j)));
  }
  return out;
}

PropertyOutcome prop_metric_sign_flip(long cases, std::uint64_t seed) {
  Rng rng(seed);
  PropertyOutcome out;
  while (out.cases < cases) {
    auto pr = branch_pair(rng, true);
    if (!pr) continue;
    ++out.cases;
    const Polygon& poly = pr->poly;
    Rat g0 = poly.side_cross(pr->p.tail, pr->p.head) * (pr->q.s - pr->p.s) * (pr->q.t - pr->p.t);
    Rat g1 = poly.side_cross(pr->tp.tail, pr->tp.head) * (pr->tq.s - pr->tp.s) * (pr->tq.t - pr->tp.t);
    if (g1 != -g0) fail(out, describe(poly, pr->p) + ": g = " + to_string(g0) + ", g(dT V) = " + to_string(g1));
  }
  return out;
}

PropertyOutcome prop_positivity(long cases, std::uint64_t seed) {
  Rng rng(seed);
  PropertyOutcome out;
  while (out.cases < cases) {
    Polygon poly = random_table(rng);
    MapTable table(poly);
    PhasePoint p = random_phase_point(rng, poly, true);
    StepResult r = step(poly, p);
    StepResult rt = table.step(p);
    if (!r.ok()) continue;
    ++out.cases;
    if (!is_positive(poly, *r.next)) fail(out, describe(poly, p) + ": image not positive");
    else if (!rt.ok() || !(*rt.next == *r.next)) fail(out, describe(poly, p) + ": table step disagrees");
  }
  return out;
}

PropertyOutcome prop_time_reversal(long cases, std::uint64_t seed) {
  Rng rng(seed);
  PropertyOutcome out;
  while (out.cases < cases) {
    Polygon poly = random_table(rng);
    PhasePoint p = random_phase_point(rng, poly);
    StepResult r = step(poly, p);
    if (!r.ok()) continue;
    ++out.cases;
    StepResult back = step(poly, reverse_chord(*r.next));
    if (!back.ok() || !(reverse_chord(*back.next) == p)) fail(out, describe(poly, p) + ": rho T rho T != id");
    else if (StepResult b = step_back(poly, *r.next); !b.ok() || !(*b.next == p))
      fail(out, describe(poly, p) + ": step_back does not invert step");
  }
  return out;
}

PropertyOutcome prop_difference_body(long cases, std::uint64_t seed, const Rat& factor) {
  Rng rng(seed);
  PropertyOutcome out;
  std::set<Rat> ratios;
  while (out.cases < cases) {
    Polygon poly = random_table(rng);
    ++out.cases;
    Rat d = area(difference_body(poly));
    Rat ph = phase_area(poly);
    ratios.insert(d / ph);
    if (d != factor * ph)
      fail(out, poly.name() + ": area(D) = " + to_string(d) + ", phase area = " + to_string(ph));
  }
  std::string r;
  for (const Rat& x : ratios) r += (r.empty() ? "" : ", ") + to_string(x);
  out.note = "area(D)/phase_area observed {" + r + "}";
  return out;
}

PropertyOutcome prop_split_area(long cases, std::uint64_t seed) {
  Rng rng(seed);
  PropertyOutcome out;
  while (out.cases < cases) {
    Polygon poly = random_table(rng);
    PhasePoint a = random_phase_point(rng, poly, true);
    Rat s2 = random_fraction(rng), t2 = random_fraction(rng);
    if (s2 == a.s || t2 == a.t) continue;
    TileRect r{a.tail, a.head, std::min(a.s, s2), std::max(a.s, s2), std::min(a.t, t2), std::max(a.t, t2)};
    ++out.cases;
    auto pieces = propagate(poly, r);
    Rat total = 0;
    bool ok = true;
    for (std::size_t x = 0; x < pieces.size(); ++x) {
      const auto& [piece, image] = pieces[x];
      total += rect_area(poly, piece);
      if (rect_area(poly, image) != rect_area(poly, piece)) ok = false;
      if (piece.s0 < r.s0 || piece.s1 > r.s1 || piece.t0 < r.t0 || piece.t1 > r.t1) ok = false;
      for (std::size_t y = 0; y < x; ++y) {
        const TileRect& o = pieces[y].first;
        if (piece.s0 < o.s1 && o.s0 < piece.s1 && piece.t0 < o.t1 && o.t0 < piece.t1) ok = false;
      }
    }
    if (!ok || total != rect_area(poly, r))
      fail(out, poly.name() + ": split of a rectangle in cell " + std::to_string(r.tail) + "x" +
                    std::to_string(r.head) + " does not conserve area");
  }
  return out;
}

PropertyOutcome prop_return_order(long cases, std::uint64_t seed) {
  Rng rng(seed);
  PropertyOutcome out;
  long tables = 0;
  while (out.cases < cases) {
    // Perturbed tables rarely close many orbits; a small budget still
    // yields a few.
    bool lattice = uniform(rng, 0, 3) != 0;
    Polygon poly = random_table(rng, lattice);
    CertifyBudget b;
    b.max_tiles = lattice ? 5000 : 200;
    b.max_steps = lattice ? 5000 : 500;
    PeriodicityCertificate cert = certify(poly, b);
    ++tables;
    for (const TileOrbit& o : cert.tile_orbits) {
      ++out.cases;
      int k = return_order(poly, o);
      if ((k != 1 && k != 2 && k != 4) || k != o.return_order || o.point_period != o.length * k)
        fail(out, poly.name() + ": return order " + std::to_string(k) + " for a tile orbit of length " +
                      std::to_string(o.length));
    }
  }
  out.note = std::to_string(tables) + " tables";
  return out;
}

PropertyOutcome prop_float_exact(long cases, std::uint64_t seed, double tol) {
  Rng rng(seed);
  PropertyOutcome out;
  long skipped = 0;
  double worst = 0;
  while (out.cases < cases) {
    Polygon poly = random_table(rng, true);
    MapTable table(poly);
    PhasePoint p = random_phase_point(rng, poly, true);
    OrbitOptions eo;
    eo.max_steps = 2000;
    eo.collect_points = true;
    OrbitReport ex = orbit(table, p, eo);
    if (ex.status != OrbitStatus::Periodic) {
      ++skipped;
      continue;
    }
    ++out.cases;
    FloatOrbitOptions fo;
    fo.max_steps = 4000;
    fo.collect_points = true;
    OrbitReport fl = float_orbit(table, to_float(p), fo);
    if (fl.status != OrbitStatus::Periodic || fl.period != ex.period) {
      fail(out, describe(poly, p) + ": exact period " + std::to_string(ex.period) + ", float " +
                    (fl.status == OrbitStatus::Periodic ? std::to_string(fl.period) : status_name(fl.status)));
      continue;
    }
    for (int k = 0; k < ex.period; ++k) {
      const PhasePoint& e = ex.points[static_cast<std::size_t>(k)];
      const FloatPhasePoint& f = fl.float_points[static_cast<std::size_t>(k)];
      double d = std::max(std::abs(f.s - to_double(e.s)), std::abs(f.t - to_double(e.t)));
      worst = std::max(worst, d);
      if (e.tail != f.tail || e.head != f.head || d > tol) {
        fail(out, describe(poly, p) + ": float point " + std::to_string(k) + " off by " + std::to_string(d));
        break;
      }
    }
  }
  std::ostringstream os;
  os << "max deviation " << worst << ", " << skipped << " non-periodic starts skipped";
  out.note = os.str();
  return out;
}

}  // namespace symbill
