#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "symbill/geometry.hpp"

namespace symbill {

// Oriented chord: tail on side `tail` at fraction s, head on side `head` at
// fraction t. Fractions are positions along v_i, not arc length.
struct PhasePoint {
  int tail = 0;
  Rat s;
  int head = 0;
  Rat t;

  friend bool operator==(const PhasePoint& a, const PhasePoint& b) {
    return a.tail == b.tail && a.head == b.head && a.s == b.s && a.t == b.t;
  }
};

// Rejects out-of-range sides, tail == head, and fractions outside (0,1).
PhasePoint make_phase_point(const Polygon& poly, int tail, Rat s, int head, Rat t);

inline bool is_positive(const Polygon& poly, const PhasePoint& pp) {
  return sgn(poly.side_cross(pp.tail, pp.head)) > 0;
}

// Chord reversal (tail <-> head).
inline PhasePoint reverse_chord(const PhasePoint& pp) { return {pp.head, pp.t, pp.tail, pp.s}; }

Point tail_point(const Polygon& poly, const PhasePoint& pp);
Point head_point(const Polygon& poly, const PhasePoint& pp);

enum class HaltReason { HitVertex, ParallelSides, LineSupportsEdge };
const char* halt_name(HaltReason r);

struct StepResult {
  std::optional<PhasePoint> next;
  HaltReason halt = HaltReason::HitVertex;

  bool ok() const { return next.has_value(); }
};

// Reference step: intersects the line through the tail point with direction
// v_head against every other side.
StepResult step(const Polygon& poly, const PhasePoint& pp);

// rho . step . rho
StepResult step_back(const Polygon& poly, const PhasePoint& pp);

// One affine branch of the map on a side pair: for s in (lo, hi) the chord
// (i, s; j, t) goes to (j, t; landing, slope * s + offset).
struct AffineBranch {
  Rat lo;
  Rat hi;
  int landing = -1;
  Rat slope;
  Rat offset;
  double lo_d = 0, hi_d = 0, slope_d = 0, offset_d = 0;
};

// The map in piecewise-affine form, precomputed per ordered side pair.
// Branch boundaries are the tail fractions whose image line hits a vertex.
class MapTable {
 public:
  explicit MapTable(const Polygon& poly);

  const Polygon& polygon() const { return poly_; }
  int size() const { return poly_.size(); }

  // Empty for parallel pairs and i == j.
  const std::vector<AffineBranch>& branches(int tail, int head) const {
    return table_[static_cast<std::size_t>(tail * size() + head)];
  }
  bool defined(int tail, int head) const { return !branches(tail, head).empty(); }

  // Vertex-hitting tail fractions strictly inside (0,1), ascending.
  std::vector<Rat> breakpoints(int tail, int head) const;

  // Index of the branch containing s, or -1 if s is a breakpoint.
  int branch_index(int tail, int head, const Rat& s) const;

  StepResult step(const PhasePoint& pp) const;

 private:
  Polygon poly_;
  std::vector<std::vector<AffineBranch>> table_;
};

inline constexpr std::size_t kDefaultBitBudget = 4096;

enum class OrbitStatus { Periodic, Halted, Capped };
const char* status_name(OrbitStatus s);

struct FloatPhasePoint {
  int tail = 0;
  double s = 0;
  int head = 0;
  double t = 0;
};

struct OrbitReport {
  OrbitStatus status = OrbitStatus::Capped;
  int period = 0;          // Periodic
  HaltReason halt{};       // Halted
  long steps = 0;          // successful steps taken
  std::vector<int> symbolic;  // tail side of every visited state
  std::vector<PhasePoint> points;            // exact mode, when collected
  std::vector<FloatPhasePoint> float_points;  // float mode, when collected
  bool float_mode = false;
  std::string note;  // e.g. "precision overflow"
};

struct OrbitOptions {
  long max_steps = 100000;
  bool collect_points = false;
  std::size_t bit_budget = kDefaultBitBudget;
};

// Exact iteration; periodic when the start state recurs exactly (the map is
// injective, so the start is the first state to repeat).
OrbitReport orbit(const MapTable& table, const PhasePoint& start, const OrbitOptions& opts = {});
OrbitReport orbit(const Polygon& poly, const PhasePoint& start, const OrbitOptions& opts = {});

enum class ParityClass { Odd, TwoModFour, ZeroModFour };
enum class Verdict { StableOrder4, StableOrder2, HyperbolicStable, IdentityIndeterminate };
const char* parity_name(ParityClass p);
const char* verdict_name(Verdict v);

struct StabilityReport {
  int period = 0;
  ParityClass parity = ParityClass::Odd;
  std::optional<Rat> lambda;  // even periods only
  Verdict verdict = Verdict::StableOrder4;
};

// Throws Error{NotPeriodic} if no exact return within max_steps.
StabilityReport classify(const Polygon& poly, const PhasePoint& pp, long max_steps = 100000);

inline constexpr double kDefaultFloatTol = 1e-9;
inline constexpr double kDefaultVertexTol = 1e-12;

struct FloatStepResult {
  std::optional<FloatPhasePoint> next;
  HaltReason halt = HaltReason::HitVertex;
};

FloatStepResult float_step(const MapTable& table, const FloatPhasePoint& pp,
                           double vertex_tol = kDefaultVertexTol);

struct FloatOrbitOptions {
  long max_steps = 100000;
  double tol = kDefaultFloatTol;
  double vertex_tol = kDefaultVertexTol;
  bool collect_points = false;
};

// Periodic when the state comes back within tol (max-norm, same sides) and
// does so again one period later.
OrbitReport float_orbit(const MapTable& table, const FloatPhasePoint& start,
                        const FloatOrbitOptions& opts = {});

FloatPhasePoint to_float(const PhasePoint& pp);

}  // namespace symbill
