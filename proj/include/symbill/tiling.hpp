#pragma once

#include <atomic>
#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symbill/billiard_map.hpp"

namespace symbill {

// Open axis-aligned rectangle (s0,s1) x (t0,t1) inside the side-pair cell
// tail x head. Certificates only hold positive cells.
struct TileRect {
  int tail = 0;
  int head = 0;
  Rat s0, s1, t0, t1;

  friend bool operator==(const TileRect& a, const TileRect& b) {
    return a.tail == b.tail && a.head == b.head && a.s0 == b.s0 && a.s1 == b.s1 && a.t0 == b.t0 &&
           a.t1 == b.t1;
  }
  bool degenerate() const { return !(s0 < s1) || !(t0 < t1); }
};

// Lexicographic by side pair, then by interval endpoints.
bool operator<(const TileRect& a, const TileRect& b);

TileRect full_cell(int tail, int head);
Rat rect_area(const Polygon& poly, const TileRect& r);
bool contains(const TileRect& r, const PhasePoint& pp);

// Affine map of phase coordinates whose linear part is diagonal or
// anti-diagonal: out.first = m0 * in[swapped ? 1 : 0] + c0,
// out.second = m1 * in[swapped ? 0 : 1] + c1.
struct AxisMap {
  bool swapped = false;
  Rat m0 = 1, c0 = 0, m1 = 1, c1 = 0;

  // One map step with branch u = slope * s + offset, composed after *this.
  void then_step(const Rat& slope, const Rat& offset);
};

// One forward step of R as a set, split into maximal pieces on which the map
// is a single affine branch. Returns (piece, image) pairs in s order.
// Throws Error{DegenerateRect} for empty / out-of-range / parallel-cell input.
std::vector<std::pair<TileRect, TileRect>> propagate(const MapTable& table, const TileRect& r);
std::vector<std::pair<TileRect, TileRect>> propagate(const Polygon& poly, const TileRect& r);

struct TileOrbit {
  TileRect representative;
  int length = 0;        // iterations to first return
  int return_order = 1;  // 1, 2 or 4
  long point_period = 0;  // length * return_order
  Rat orbit_area;
  std::vector<int> symbolic;  // tail sides over one return
};

enum class CertVerdict { FullyPeriodic, Incomplete, Inconclusive };
const char* cert_verdict_name(CertVerdict v);

struct CertifyBudget {
  long max_tiles = 1'000'000;  // rectangles taken off the work list
  long max_steps = 100'000;    // per rectangle orbit
  std::optional<std::chrono::steady_clock::time_point> deadline;
  const std::atomic<bool>* cancel = nullptr;
};

struct PeriodicityCertificate {
  Polygon polygon;
  std::vector<TileOrbit> tile_orbits;
  Rat total_phase_area;
  Rat covered_area;
  CertVerdict verdict = CertVerdict::Inconclusive;
  long rectangles_processed = 0;
  std::string note;

  Rat residual() const { return total_phase_area - covered_area; }
  // Sorted distinct point periods.
  std::vector<long> periods() const;
};

// Work-list search over rectangles, starting from every positive side-pair
// cell in lexicographic order. A rectangle is followed forward until it
// either must split (the split is pulled back and both halves re-queued) or
// recurs exactly, which closes a tile orbit. Verdict by exact area accounting.
PeriodicityCertificate certify(const Polygon& poly, const CertifyBudget& budget = {});

// Order of the first-return map of a closed rectangle orbit.
// Throws Error{NotClosed} if the rectangle does not return unsplit.
int return_order(const MapTable& table, const TileRect& representative, int length);
int return_order(const Polygon& poly, const TileOrbit& orbit);

// Tile containing pp. For a periodic pp whose return map has finite order the
// result is the exact tile; for a hyperbolic return map it is the degenerate
// point rectangle; otherwise the intersection over `depth` steps forward and
// backward. Throws Error{HaltEncountered}.
TileRect tile_of(const MapTable& table, const PhasePoint& pp, long depth);
TileRect tile_of(const Polygon& poly, const PhasePoint& pp, long depth);

// Periodic point with the given cyclic tail-side itinerary, from the fixed
// point of the composed affine branches. Empty if the composite has no unique
// fixed point or the solution leaves the required branches.
std::optional<PhasePoint> solve_periodic_itinerary(const MapTable& table, const std::vector<int>& sides);

struct CertificateCheck {
  bool ok = false;
  Rat covered;
  std::vector<std::string> problems;
};

// Re-verifies a certificate without the search: replays every tile orbit with
// the geometric step, recomputes return orders and areas, checks that all
// tiles are pairwise disjoint and that their areas sum to the phase area.
CertificateCheck check_certificate(const PeriodicityCertificate& cert);

}  // namespace symbill
