#include "symbill/tiling.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace symbill {

const char* cert_verdict_name(CertVerdict v) {
  switch (v) {
    case CertVerdict::FullyPeriodic: return "FullyPeriodic";
    case CertVerdict::Incomplete: return "Incomplete";
    case CertVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

bool operator<(const TileRect& a, const TileRect& b) {
  if (a.tail != b.tail) return a.tail < b.tail;
  if (a.head != b.head) return a.head < b.head;
  if (a.s0 != b.s0) return a.s0 < b.s0;
  if (a.s1 != b.s1) return a.s1 < b.s1;
  if (a.t0 != b.t0) return a.t0 < b.t0;
  return a.t1 < b.t1;
}

TileRect full_cell(int tail, int head) { return {tail, head, Rat(0), Rat(1), Rat(0), Rat(1)}; }

Rat rect_area(const Polygon& poly, const TileRect& r) {
  if (r.degenerate()) return 0;
  return abs_rat(poly.side_cross(r.tail, r.head)) * (r.s1 - r.s0) * (r.t1 - r.t0);
}

bool contains(const TileRect& r, const PhasePoint& pp) {
  return r.tail == pp.tail && r.head == pp.head && r.s0 < pp.s && pp.s < r.s1 && r.t0 < pp.t &&
         pp.t < r.t1;
}

void AxisMap::then_step(const Rat& slope, const Rat& offset) {
  // new.first = old.second; new.second = slope * old.first + offset
  Rat nm1 = slope * m0;
  Rat nc1 = slope * c0 + offset;
  m0.swap(m1);
  c0.swap(c1);
  m1.swap(nm1);
  c1.swap(nc1);
  swapped = !swapped;
}

namespace {

void check_rect(const MapTable& table, const TileRect& r) {
  const int n = table.size();
  if (r.tail < 0 || r.tail >= n || r.head < 0 || r.head >= n || !table.defined(r.tail, r.head))
    throw Error(Errc::DegenerateRect, "rectangle is not in a defined side-pair cell");
  if (!(r.s0 < r.s1) || !(r.t0 < r.t1) || sgn(r.s0) < 0 || r.s1 > 1 || sgn(r.t0) < 0 || r.t1 > 1)
    throw Error(Errc::DegenerateRect, "intervals must be nonempty subsets of [0,1]");
}

std::pair<Rat, Rat> ordered(Rat a, Rat b) {
  if (b < a) a.swap(b);
  return {std::move(a), std::move(b)};
}

TileRect image_of(const TileRect& piece, const AffineBranch& br) {
  auto [u0, u1] = ordered(br.slope * piece.s0 + br.offset, br.slope * piece.s1 + br.offset);
  return {piece.head, br.landing, piece.t0, piece.t1, std::move(u0), std::move(u1)};
}

// Index of the first branch whose upper end exceeds s0.
std::size_t first_branch(const std::vector<AffineBranch>& brs, const Rat& s0) {
  auto it = std::upper_bound(brs.begin(), brs.end(), s0,
                             [](const Rat& v, const AffineBranch& br) { return v < br.hi; });
  return static_cast<std::size_t>(it - brs.begin());
}

// Image of the rectangle `origin` under `map`, placed in cell (tail, head).
TileRect apply_map(const AxisMap& map, const TileRect& origin, int tail, int head) {
  const Rat& a0 = map.swapped ? origin.t0 : origin.s0;
  const Rat& a1 = map.swapped ? origin.t1 : origin.s1;
  const Rat& b0 = map.swapped ? origin.s0 : origin.t0;
  const Rat& b1 = map.swapped ? origin.s1 : origin.t1;
  auto [s0, s1] = ordered(map.m0 * a0 + map.c0, map.m0 * a1 + map.c0);
  auto [t0, t1] = ordered(map.m1 * b0 + map.c1, map.m1 * b1 + map.c1);
  return {tail, head, std::move(s0), std::move(s1), std::move(t0), std::move(t1)};
}

// Pulls back the first-coordinate value v of the image to the origin axis.
Rat pull_back_first(const AxisMap& map, const Rat& v) { return (v - map.c0) / map.m0; }

int classify_return(const AxisMap& map) {
  if (!map.swapped) {
    if (map.m0 == 1 && map.m1 == 1) return 1;
    if (map.m0 == -1 && map.m1 == -1) return 2;
    return 0;
  }
  if (map.m0 * map.m1 == -1) return 4;
  return 0;
}

// Shrinks `origin` (which contains pp) to the points whose next `steps`
// symbols agree with those of pp.
TileRect restrict_forward(const MapTable& table, TileRect origin, const PhasePoint& pp, long steps) {
  AxisMap map;
  PhasePoint cur = pp;
  for (long m = 0; m < steps; ++m) {
    int b = table.branch_index(cur.tail, cur.head, cur.s);
    if (!table.defined(cur.tail, cur.head) || b < 0)
      throw Error(Errc::HaltEncountered, "orbit halts after " + std::to_string(m) + " steps");
    const AffineBranch& br = table.branches(cur.tail, cur.head)[static_cast<std::size_t>(b)];
    TileRect img = apply_map(map, origin, cur.tail, cur.head);
    if (img.s0 < br.lo || br.hi < img.s1) {
      auto [lo, hi] = ordered(pull_back_first(map, std::max(img.s0, br.lo)),
                              pull_back_first(map, std::min(img.s1, br.hi)));
      Rat& o0 = map.swapped ? origin.t0 : origin.s0;
      Rat& o1 = map.swapped ? origin.t1 : origin.s1;
      o0 = std::max(o0, lo);
      o1 = std::min(o1, hi);
    }
    map.then_step(br.slope, br.offset);
    Rat u = br.slope * cur.s + br.offset;
    cur = PhasePoint{cur.head, cur.t, br.landing, std::move(u)};
  }
  return origin;
}

TileRect reverse_rect(const TileRect& r) { return {r.head, r.tail, r.t0, r.t1, r.s0, r.s1}; }

}  // namespace

std::vector<std::pair<TileRect, TileRect>> propagate(const MapTable& table, const TileRect& r) {
  check_rect(table, r);
  const auto& brs = table.branches(r.tail, r.head);
  std::vector<std::pair<TileRect, TileRect>> out;
  for (std::size_t b = first_branch(brs, r.s0); b < brs.size() && brs[b].lo < r.s1; ++b) {
    TileRect piece{r.tail, r.head, std::max(r.s0, brs[b].lo), std::min(r.s1, brs[b].hi), r.t0, r.t1};
    TileRect img = image_of(piece, brs[b]);
    out.emplace_back(std::move(piece), std::move(img));
  }
  return out;
}

std::vector<std::pair<TileRect, TileRect>> propagate(const Polygon& poly, const TileRect& r) {
  return propagate(MapTable(poly), r);
}

std::vector<long> PeriodicityCertificate::periods() const {
  std::vector<long> out;
  for (const auto& o : tile_orbits) out.push_back(o.point_period);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PeriodicityCertificate certify(const Polygon& poly, const CertifyBudget& budget) {
  MapTable table(poly);
  PeriodicityCertificate cert{poly, {}, phase_area(poly), Rat(0), CertVerdict::Inconclusive, 0, {}};

  std::set<TileRect> pending;
  std::set<TileRect> known;
  for (int i = 0; i < poly.size(); ++i)
    for (int j = 0; j < poly.size(); ++j)
      if (sgn(poly.side_cross(i, j)) > 0) pending.insert(full_cell(i, j));

  bool aborted = false;
  Rat unresolved = 0;
  std::vector<TileRect> trail;
  std::vector<int> symbolic;

  while (!pending.empty()) {
    if (cert.rectangles_processed >= budget.max_tiles) {
      aborted = true;
      cert.note = "tile budget exhausted";
      break;
    }
    if ((budget.cancel && budget.cancel->load(std::memory_order_relaxed)) ||
        (budget.deadline && std::chrono::steady_clock::now() > *budget.deadline)) {
      aborted = true;
      cert.note = "deadline reached";
      break;
    }
    TileRect origin = std::move(pending.extract(pending.begin()).value());
    ++cert.rectangles_processed;
    if (known.count(origin)) continue;

    AxisMap map;
    TileRect cur = origin;
    trail.clear();
    symbolic.clear();
    bool resolved = false;
    for (long m = 0; m < budget.max_steps; ++m) {
      const auto& brs = table.branches(cur.tail, cur.head);
      std::size_t b = first_branch(brs, cur.s0);
      if (brs[b].hi < cur.s1) {
        // Split: pull the interior breakpoints back onto the origin.
        std::vector<Rat> cuts;
        for (std::size_t k = b; k < brs.size() && brs[k].hi < cur.s1; ++k)
          cuts.push_back(pull_back_first(map, brs[k].hi));
        std::sort(cuts.begin(), cuts.end());
        const bool on_t = map.swapped;
        Rat lo = on_t ? origin.t0 : origin.s0;
        const Rat& end = on_t ? origin.t1 : origin.s1;
        cuts.push_back(end);
        for (Rat& hi : cuts) {
          TileRect piece = origin;
          (on_t ? piece.t0 : piece.s0) = lo;
          (on_t ? piece.t1 : piece.s1) = hi;
          pending.insert(std::move(piece));
          lo = hi;
        }
        resolved = true;
        break;
      }
      const AffineBranch& br = brs[b];
      trail.push_back(cur);
      symbolic.push_back(cur.tail);
      TileRect next = image_of(cur, br);
      map.then_step(br.slope, br.offset);
      cur = std::move(next);
      if (cur == origin) {
        TileOrbit orbit;
        orbit.representative = origin;
        orbit.length = static_cast<int>(trail.size());
        orbit.return_order = classify_return(map);
        if (orbit.return_order == 0) throw std::logic_error("closed rectangle orbit with invalid return map");
        orbit.point_period = static_cast<long>(orbit.length) * orbit.return_order;
        orbit.orbit_area = rect_area(poly, origin) * orbit.length;
        orbit.symbolic = symbolic;
        cert.covered_area += orbit.orbit_area;
        for (auto& t : trail) known.insert(std::move(t));
        cert.tile_orbits.push_back(std::move(orbit));
        resolved = true;
        break;
      }
    }
    if (!resolved) unresolved += rect_area(poly, origin);
  }

  if (aborted)
    cert.verdict = CertVerdict::Inconclusive;
  else if (cert.covered_area == cert.total_phase_area)
    cert.verdict = CertVerdict::FullyPeriodic;
  else {
    cert.verdict = CertVerdict::Incomplete;
    if (sgn(unresolved) > 0) cert.note = "rectangle orbits exceeded the step budget";
  }
  return cert;
}

int return_order(const MapTable& table, const TileRect& representative, int length) {
  check_rect(table, representative);
  AxisMap map;
  TileRect cur = representative;
  for (int m = 0; m < length; ++m) {
    auto pieces = propagate(table, cur);
    if (pieces.size() != 1) throw Error(Errc::NotClosed, "rectangle splits at step " + std::to_string(m));
    const auto& brs = table.branches(cur.tail, cur.head);
    const AffineBranch& br = brs[first_branch(brs, cur.s0)];
    map.then_step(br.slope, br.offset);
    cur = std::move(pieces.front().second);
  }
  if (!(cur == representative))
    throw Error(Errc::NotClosed, "rectangle does not return after " + std::to_string(length) + " steps");
  int order = classify_return(map);
  if (order == 0) throw Error(Errc::NotClosed, "return map is not a rotation of the rectangle");
  return order;
}

int return_order(const Polygon& poly, const TileOrbit& orbit) {
  return return_order(MapTable(poly), orbit.representative, orbit.length);
}

TileRect tile_of(const MapTable& table, const PhasePoint& pp, long depth) {
  if (!table.defined(pp.tail, pp.head))
    throw Error(Errc::HaltEncountered, "phase point lies in a parallel-sides cell");
  OrbitOptions opts;
  opts.max_steps = depth;
  opts.collect_points = true;
  OrbitReport rep = orbit(table, pp, opts);
  if (rep.status == OrbitStatus::Halted)
    throw Error(Errc::HaltEncountered, std::string("forward orbit halts: ") + halt_name(rep.halt));

  TileRect cell = full_cell(pp.tail, pp.head);
  if (rep.status == OrbitStatus::Periodic) {
    AxisMap map;
    for (const PhasePoint& p : rep.points) {
      const auto& br = table.branches(p.tail, p.head)[static_cast<std::size_t>(
          table.branch_index(p.tail, p.head, p.s))];
      map.then_step(br.slope, br.offset);
    }
    int order = classify_return(map);
    if (order == 0) return {pp.tail, pp.head, pp.s, pp.s, pp.t, pp.t};
    return restrict_forward(table, cell, pp, static_cast<long>(rep.period) * order);
  }
  TileRect fwd = restrict_forward(table, cell, pp, depth);
  TileRect back = restrict_forward(table, reverse_rect(fwd), reverse_chord(pp), depth);
  return reverse_rect(back);
}

TileRect tile_of(const Polygon& poly, const PhasePoint& pp, long depth) {
  return tile_of(MapTable(poly), pp, depth);
}

std::optional<PhasePoint> solve_periodic_itinerary(const MapTable& table, const std::vector<int>& sides) {
  const std::size_t n = sides.size();
  if (n < 2) return std::nullopt;
  AxisMap map;
  for (std::size_t m = 0; m < n; ++m) {
    int i = sides[m], j = sides[(m + 1) % n], k = sides[(m + 2) % n];
    if (i < 0 || j < 0 || i >= table.size() || j >= table.size() || !table.defined(i, j))
      return std::nullopt;
    const auto& brs = table.branches(i, j);
    auto it = std::find_if(brs.begin(), brs.end(), [k](const AffineBranch& br) { return br.landing == k; });
    if (it == brs.end()) return std::nullopt;
    map.then_step(it->slope, it->offset);
  }
  Rat s, t;
  if (!map.swapped) {
    if (map.m0 == 1 || map.m1 == 1) return std::nullopt;
    s = map.c0 / (1 - map.m0);
    t = map.c1 / (1 - map.m1);
  } else {
    Rat det = 1 - map.m0 * map.m1;
    if (sgn(det) == 0) return std::nullopt;
    s = (map.m0 * map.c1 + map.c0) / det;
    t = map.m1 * s + map.c1;
  }
  if (sgn(s) <= 0 || s >= 1 || sgn(t) <= 0 || t >= 1) return std::nullopt;
  PhasePoint pp{sides[0], s, sides[1], t};
  OrbitOptions opts;
  opts.max_steps = static_cast<long>(n);
  OrbitReport rep = orbit(table, pp, opts);
  if (rep.status != OrbitStatus::Periodic) return std::nullopt;
  for (std::size_t m = 0; m < n; ++m)
    if (rep.symbolic[m % rep.symbolic.size()] != sides[m]) return std::nullopt;
  return pp;
}

CertificateCheck check_certificate(const PeriodicityCertificate& cert) {
  const Polygon& poly = cert.polygon;
  CertificateCheck out;
  std::vector<TileRect> tiles;
  auto problem = [&](std::size_t idx, const std::string& what) {
    out.problems.push_back("tile orbit " + std::to_string(idx) + ": " + what);
  };

  for (std::size_t idx = 0; idx < cert.tile_orbits.size(); ++idx) {
    const TileOrbit& orb = cert.tile_orbits[idx];
    const TileRect& rep = orb.representative;
    const int n = poly.size();
    if (rep.tail < 0 || rep.tail >= n || rep.head < 0 || rep.head >= n ||
        sgn(poly.side_cross(rep.tail, rep.head)) <= 0 || rep.degenerate() || sgn(rep.s0) < 0 ||
        rep.s1 > 1 || sgn(rep.t0) < 0 || rep.t1 > 1) {
      problem(idx, "representative is not a positive-cell rectangle");
      continue;
    }
    if (orb.length <= 0) {
      problem(idx, "nonpositive length");
      continue;
    }
    TileRect cur = rep;
    bool swapped = false;
    Rat m0 = 1, m1 = 1;
    std::vector<int> syms;
    bool broken = false;
    for (int m = 0; m < orb.length && !broken; ++m) {
      const int i = cur.tail, j = cur.head;
      const Vec2& vi = poly.side(i);
      const Vec2& vj = poly.side(j);
      const Rat cij = cross(vi, vj);
      if (sgn(cij) == 0) {
        problem(idx, "orbit enters a parallel-sides cell");
        broken = true;
        break;
      }
      for (const Point& v : poly.vertices()) {
        Rat sv = cross(v - poly.vertex(i), vj) / cij;
        if (cur.s0 < sv && sv < cur.s1) {
          problem(idx, "rectangle straddles a discontinuity at step " + std::to_string(m));
          broken = true;
          break;
        }
      }
      if (broken) break;
      PhasePoint mid{i, (cur.s0 + cur.s1) / 2, j, (cur.t0 + cur.t1) / 2};
      StepResult r = step(poly, mid);
      if (!r.ok()) {
        problem(idx, std::string("midpoint halts: ") + halt_name(r.halt));
        broken = true;
        break;
      }
      const int k = r.next->head;
      const Rat ckj = cross(poly.side(k), vj);
      auto land = [&](const Rat& s) -> Rat {
        return cross(poly.vertex(i) + s * vi - poly.vertex(k), vj) / ckj;
      };
      Rat u0 = land(cur.s0), u1 = land(cur.s1);
      Rat slope = (u1 - u0) / (cur.s1 - cur.s0);
      tiles.push_back(cur);
      syms.push_back(i);
      if (u1 < u0) u0.swap(u1);
      cur = TileRect{j, k, cur.t0, cur.t1, std::move(u0), std::move(u1)};
      Rat nm1 = slope * m0;
      m0 = m1;
      m1 = std::move(nm1);
      swapped = !swapped;
    }
    if (broken) continue;
    if (!(cur == rep)) {
      problem(idx, "rectangle does not return after the stated length");
      continue;
    }
    int order = 0;
    if (!swapped && m0 == 1 && m1 == 1) order = 1;
    else if (!swapped && m0 == -1 && m1 == -1) order = 2;
    else if (swapped && m0 * m1 == -1) order = 4;
    if (order == 0) problem(idx, "return map is not a rotation");
    if (order != orb.return_order) problem(idx, "return order mismatch");
    if (orb.point_period != static_cast<long>(orb.length) * order) problem(idx, "point period mismatch");
    Rat area = rect_area(poly, rep) * orb.length;
    if (area != orb.orbit_area) problem(idx, "orbit area mismatch");
    if (syms != orb.symbolic) problem(idx, "symbolic orbit mismatch");
    out.covered += area;
  }

  std::sort(tiles.begin(), tiles.end());
  for (std::size_t a = 0; a < tiles.size(); ++a) {
    for (std::size_t b = a + 1; b < tiles.size(); ++b) {
      const TileRect& x = tiles[a];
      const TileRect& y = tiles[b];
      if (x.tail != y.tail || x.head != y.head || !(y.s0 < x.s1)) break;
      if (y.t0 < x.t1 && x.t0 < y.t1) {
        out.problems.push_back("tiles overlap in cell (" + std::to_string(x.tail) + "," +
                               std::to_string(x.head) + ")");
        a = tiles.size();
        break;
      }
    }
  }

  if (out.covered != cert.covered_area) out.problems.push_back("covered area mismatch");
  Rat total = phase_area(poly);
  if (total != cert.total_phase_area) out.problems.push_back("total phase area mismatch");
  if (cert.verdict == CertVerdict::FullyPeriodic && out.covered != total)
    out.problems.push_back("tile orbits do not cover the phase space");
  out.ok = out.problems.empty();
  return out;
}

}  // namespace symbill
