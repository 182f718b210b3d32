#include "symbill/billiard_map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace symbill {

const char* halt_name(HaltReason r) {
  switch (r) {
    case HaltReason::HitVertex: return "HitVertex";
    case HaltReason::ParallelSides: return "ParallelSides";
    case HaltReason::LineSupportsEdge: return "LineSupportsEdge";
  }
  return "?";
}

const char* status_name(OrbitStatus s) {
  switch (s) {
    case OrbitStatus::Periodic: return "periodic";
    case OrbitStatus::Halted: return "halted";
    case OrbitStatus::Capped: return "capped";
  }
  return "?";
}

const char* parity_name(ParityClass p) {
  switch (p) {
    case ParityClass::Odd: return "odd";
    case ParityClass::TwoModFour: return "twoModFour";
    case ParityClass::ZeroModFour: return "zeroModFour";
  }
  return "?";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::StableOrder4: return "StableOrder4";
    case Verdict::StableOrder2: return "StableOrder2";
    case Verdict::HyperbolicStable: return "HyperbolicStable";
    case Verdict::IdentityIndeterminate: return "IdentityIndeterminate";
  }
  return "?";
}

PhasePoint make_phase_point(const Polygon& poly, int tail, Rat s, int head, Rat t) {
  const int n = poly.size();
  if (tail < 0 || tail >= n || head < 0 || head >= n)
    throw Error(Errc::InvalidPhasePoint, "side index out of range");
  if (tail == head) throw Error(Errc::InvalidPhasePoint, "tail and head on the same side");
  if (sgn(s) <= 0 || s >= 1 || sgn(t) <= 0 || t >= 1)
    throw Error(Errc::InvalidPhasePoint, "fractions must lie strictly inside (0,1)");
  return {tail, std::move(s), head, std::move(t)};
}

Point tail_point(const Polygon& poly, const PhasePoint& pp) {
  return poly.vertex(pp.tail) + pp.s * poly.side(pp.tail);
}

Point head_point(const Polygon& poly, const PhasePoint& pp) {
  return poly.vertex(pp.head) + pp.t * poly.side(pp.head);
}

namespace {

struct Landing {
  bool ok = false;
  HaltReason halt = HaltReason::HitVertex;
  int side = -1;
  Rat frac;
};

// Second intersection of the line {x + lambda * dir} with the boundary,
// excluding side `from` (which contains x in its relative interior).
Landing land(const Polygon& poly, int from, const Point& x, const Vec2& dir) {
  Landing out;
  bool vertex = false;
  for (int k = 0; k < poly.size(); ++k) {
    if (k == from) continue;
    const Vec2& vk = poly.side(k);
    Rat denom = cross(vk, dir);
    Rat num = cross(x - poly.vertex(k), dir);
    if (sgn(denom) == 0) {
      if (sgn(num) == 0) {
        out.halt = HaltReason::LineSupportsEdge;
        return out;
      }
      continue;
    }
    Rat u = num / denom;
    if (sgn(u) < 0 || u > 1) continue;
    if (sgn(u) == 0 || u == 1) {
      vertex = true;
      continue;
    }
    out.ok = true;
    out.side = k;
    out.frac = std::move(u);
  }
  if (vertex) {
    out.ok = false;
    out.halt = HaltReason::HitVertex;
    return out;
  }
  if (!out.ok) throw std::logic_error("line through a side-interior point has no exit point");
  return out;
}

}  // namespace

StepResult step(const Polygon& poly, const PhasePoint& pp) {
  StepResult r;
  if (sgn(poly.side_cross(pp.tail, pp.head)) == 0) {
    r.halt = HaltReason::ParallelSides;
    return r;
  }
  Landing l = land(poly, pp.tail, tail_point(poly, pp), poly.side(pp.head));
  if (!l.ok) {
    r.halt = l.halt;
    return r;
  }
  r.next = PhasePoint{pp.head, pp.t, l.side, std::move(l.frac)};
  return r;
}

StepResult step_back(const Polygon& poly, const PhasePoint& pp) {
  StepResult r = step(poly, reverse_chord(pp));
  if (r.next) r.next = reverse_chord(*r.next);
  return r;
}

MapTable::MapTable(const Polygon& poly) : poly_(poly) {
  const int n = poly_.size();
  table_.resize(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Rat& cij = poly_.side_cross(i, j);
      if (sgn(cij) == 0) continue;
      const Vec2& vj = poly_.side(j);
      std::vector<Rat> cuts{Rat(0)};
      for (int k = 0; k < n; ++k) {
        if (k == i || k == poly_.wrap(i + 1)) continue;
        Rat s = cross(poly_.vertex(k) - poly_.vertex(i), vj) / cij;
        if (sgn(s) > 0 && s < 1) cuts.push_back(std::move(s));
      }
      cuts.emplace_back(1);
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

      auto& branches = table_[static_cast<std::size_t>(i * n + j)];
      for (std::size_t b = 0; b + 1 < cuts.size(); ++b) {
        AffineBranch br;
        br.lo = cuts[b];
        br.hi = cuts[b + 1];
        Rat mid = (br.lo + br.hi) / 2;
        Landing l = land(poly_, i, poly_.vertex(i) + mid * poly_.side(i), vj);
        if (!l.ok) throw std::logic_error("branch midpoint hits a vertex");
        const int k = l.side;
        Rat ckj = cross(poly_.side(k), vj);
        br.landing = k;
        br.slope = cij / ckj;
        br.offset = cross(poly_.vertex(i) - poly_.vertex(k), vj) / ckj;
        br.lo_d = to_double(br.lo);
        br.hi_d = to_double(br.hi);
        br.slope_d = to_double(br.slope);
        br.offset_d = to_double(br.offset);
        branches.push_back(std::move(br));
      }
    }
  }
}

std::vector<Rat> MapTable::breakpoints(int tail, int head) const {
  std::vector<Rat> out;
  const auto& brs = branches(tail, head);
  for (std::size_t b = 0; b + 1 < brs.size(); ++b) out.push_back(brs[b].hi);
  return out;
}

int MapTable::branch_index(int tail, int head, const Rat& s) const {
  const auto& brs = branches(tail, head);
  // First branch whose upper end is >= s.
  auto it = std::lower_bound(brs.begin(), brs.end(), s,
                             [](const AffineBranch& br, const Rat& v) { return br.hi < v; });
  if (it == brs.end() || it->hi == s) return -1;
  return static_cast<int>(it - brs.begin());
}

StepResult MapTable::step(const PhasePoint& pp) const {
  StepResult r;
  if (!defined(pp.tail, pp.head)) {
    r.halt = HaltReason::ParallelSides;
    return r;
  }
  int b = branch_index(pp.tail, pp.head, pp.s);
  if (b < 0) {
    r.halt = HaltReason::HitVertex;
    return r;
  }
  const AffineBranch& br = branches(pp.tail, pp.head)[static_cast<std::size_t>(b)];
  Rat u = br.slope * pp.s + br.offset;
  r.next = PhasePoint{pp.head, pp.t, br.landing, std::move(u)};
  return r;
}

OrbitReport orbit(const MapTable& table, const PhasePoint& start, const OrbitOptions& opts) {
  OrbitReport rep;
  PhasePoint cur = start;
  Rat u;
  while (rep.steps < opts.max_steps) {
    rep.symbolic.push_back(cur.tail);
    if (opts.collect_points) rep.points.push_back(cur);
    if (!table.defined(cur.tail, cur.head)) {
      rep.status = OrbitStatus::Halted;
      rep.halt = HaltReason::ParallelSides;
      return rep;
    }
    int b = table.branch_index(cur.tail, cur.head, cur.s);
    if (b < 0) {
      rep.status = OrbitStatus::Halted;
      rep.halt = HaltReason::HitVertex;
      return rep;
    }
    const AffineBranch& br = table.branches(cur.tail, cur.head)[static_cast<std::size_t>(b)];
    u = br.slope * cur.s;
    u += br.offset;
    cur.s.swap(cur.t);
    cur.t.swap(u);
    cur.tail = cur.head;
    cur.head = br.landing;
    ++rep.steps;
    if (cur.tail == start.tail && cur.head == start.head && cur.s == start.s && cur.t == start.t) {
      rep.status = OrbitStatus::Periodic;
      rep.period = static_cast<int>(rep.steps);
      return rep;
    }
    if (bit_size(cur.t) > opts.bit_budget) {
      rep.status = OrbitStatus::Capped;
      rep.note = "precision overflow";
      return rep;
    }
  }
  rep.status = OrbitStatus::Capped;
  return rep;
}

OrbitReport orbit(const Polygon& poly, const PhasePoint& start, const OrbitOptions& opts) {
  return orbit(MapTable(poly), start, opts);
}

StabilityReport classify(const Polygon& poly, const PhasePoint& pp, long max_steps) {
  MapTable table(poly);
  OrbitOptions opts;
  opts.max_steps = max_steps;
  opts.collect_points = true;
  OrbitReport rep = orbit(table, pp, opts);
  if (rep.status != OrbitStatus::Periodic)
    throw Error(Errc::NotPeriodic, std::string("orbit status ") + status_name(rep.status));

  // Linear part of the return map: alternately diagonal / anti-diagonal.
  // diag0 is the coefficient feeding the tail coordinate.
  Rat diag0 = 1, diag1 = 1;
  for (const PhasePoint& p : rep.points) {
    const auto& br = table.branches(p.tail, p.head)[static_cast<std::size_t>(
        table.branch_index(p.tail, p.head, p.s))];
    Rat next0 = diag1;
    diag1 = br.slope * diag0;
    diag0 = std::move(next0);
  }

  StabilityReport out;
  out.period = rep.period;
  if (rep.period % 2 == 1) {
    out.parity = ParityClass::Odd;
    out.verdict = Verdict::StableOrder4;
    return out;
  }
  Rat lambda = abs_rat(diag0);
  out.lambda = lambda;
  if (rep.period % 4 == 2) {
    out.parity = ParityClass::TwoModFour;
    out.verdict = lambda == 1 ? Verdict::StableOrder2 : Verdict::HyperbolicStable;
  } else {
    out.parity = ParityClass::ZeroModFour;
    out.verdict = lambda == 1 ? Verdict::IdentityIndeterminate : Verdict::HyperbolicStable;
  }
  return out;
}

FloatPhasePoint to_float(const PhasePoint& pp) {
  return {pp.tail, to_double(pp.s), pp.head, to_double(pp.t)};
}

FloatStepResult float_step(const MapTable& table, const FloatPhasePoint& pp, double vertex_tol) {
  FloatStepResult r;
  if (!table.defined(pp.tail, pp.head)) {
    r.halt = HaltReason::ParallelSides;
    return r;
  }
  const auto& brs = table.branches(pp.tail, pp.head);
  auto it = std::lower_bound(brs.begin(), brs.end(), pp.s,
                             [](const AffineBranch& br, double v) { return br.hi_d < v; });
  if (it == brs.end()) --it;
  double u = it->slope_d * pp.s + it->offset_d;
  if (u < vertex_tol || u > 1.0 - vertex_tol) {
    r.halt = HaltReason::HitVertex;
    return r;
  }
  r.next = FloatPhasePoint{pp.head, pp.t, it->landing, u};
  return r;
}

OrbitReport float_orbit(const MapTable& table, const FloatPhasePoint& start, const FloatOrbitOptions& opts) {
  OrbitReport rep;
  rep.float_mode = true;
  FloatPhasePoint cur = start;
  long pending = 0;
  auto near_start = [&](const FloatPhasePoint& p) {
    return p.tail == start.tail && p.head == start.head && std::fabs(p.s - start.s) <= opts.tol &&
           std::fabs(p.t - start.t) <= opts.tol;
  };
  while (rep.steps < opts.max_steps + pending) {
    rep.symbolic.push_back(cur.tail);
    if (opts.collect_points) rep.float_points.push_back(cur);
    FloatStepResult r = float_step(table, cur, opts.vertex_tol);
    if (!r.next) {
      rep.status = OrbitStatus::Halted;
      rep.halt = r.halt;
      return rep;
    }
    cur = *r.next;
    ++rep.steps;
    if (pending != 0 && rep.steps > 2 * pending) pending = 0;
    if (near_start(cur)) {
      if (pending != 0 && rep.steps == 2 * pending) {
        rep.status = OrbitStatus::Periodic;
        rep.period = static_cast<int>(pending);
        rep.symbolic.resize(static_cast<std::size_t>(pending));
        if (opts.collect_points) rep.float_points.resize(static_cast<std::size_t>(pending));
        return rep;
      }
      if (pending == 0) pending = rep.steps;
    }
  }
  rep.status = OrbitStatus::Capped;
  return rep;
}

}  // namespace symbill
