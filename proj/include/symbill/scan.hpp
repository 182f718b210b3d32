#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "symbill/families.hpp"
#include "symbill/io.hpp"
#include "symbill/tiling.hpp"

namespace symbill {

// One family member and what certify made of it.
struct ScanEntry {
  FamilySpec spec;
  std::string key;     // canonical "family(k=v,...)"
  std::string status;  // "certified", "invalid" or "error"
  std::string verdict;  // certificate verdict when certified
  std::vector<long> periods;
  std::optional<std::vector<long>> expected;  // predicted period set, if any
  std::optional<bool> conforms;               // periods == expected, or the family conjecture
  bool checker_ok = false;
  std::map<std::string, long> stats;  // e.g. modulus, N, bound
  std::string note;
  std::optional<PeriodicityCertificate> certificate;
};

json scan_entry_to_json(const ScanEntry& e);
ScanEntry scan_entry_from_json(const json& j);
std::string spec_key(const FamilySpec& spec);

// Evaluates one member: build, certify, independent check, then `annotate`
// fills expected/conforms/stats.
using Annotate = void (*)(ScanEntry&, const Polygon&);

struct ScanOptions {
  CertifyBudget budget;
  int jobs = 0;  // 0: OpenMP default
  bool embed_certificates = true;
  std::string out_path;  // line-delimited JSON; existing entries are reused
};

struct ScanReport {
  std::string family;
  std::vector<ScanEntry> entries;  // in member order
  long resumed = 0;                // entries read back from out_path
  long certified = 0;
  long fully_periodic = 0;
  long conforming = 0;
  long nonconforming = 0;
  long invalid = 0;
  // Figure period sets realized by some member: set -> member keys.
  std::map<std::string, std::vector<std::string>> figure_matches;
  // Penthouse only: for each non-generic member, periods shared with its
  // nearest generic neighbours on both sides.
  std::vector<std::pair<std::string, std::vector<long>>> persisting;
};

ScanEntry evaluate_member(const FamilySpec& spec, Annotate annotate, const ScanOptions& opts);

// OpenMP over members, merged in member order; members are processed in
// batches and each batch is appended to out_path before the next starts.
ScanReport run_scan(const std::string& family, const std::vector<FamilySpec>& members, Annotate annotate,
                    const ScanOptions& opts);
// Serial reference with identical entries.
ScanReport run_scan_serial(const std::string& family, const std::vector<FamilySpec>& members, Annotate annotate,
                           const ScanOptions& opts);

// lo, lo + d, ..., hi with `steps` points (steps >= 2), or just lo.
std::vector<Rat> rat_range(const Rat& lo, const Rat& hi, int steps);

// Conjectured period set 16m-4, 16m+4, 16m+12.
std::vector<long> modulus_periods(long m);

std::vector<FamilySpec> penthouse_members(const std::vector<Rat>& as, const std::vector<Rat>& bs);
ScanReport scan_penthouse(const std::vector<Rat>& as, const std::vector<Rat>& bs, const ScanOptions& opts);

struct ParamBox {
  long lo = 1;
  long hi = 3;
};

// Hexhouses: 1 <= w <= wmax, 1 <= h <= hmax, 0 < x1 < x2 < w.
std::vector<FamilySpec> hexhouse_members(long wmax, long hmax);
// Special octagons: 1 <= W, H <= max, max(W,H) < c1, c2 < W + H.
std::vector<FamilySpec> octagon_members(long max);
// Lattice hexagons: p1, q1, r1, p2 in [lo, hi] that satisfy closure.
std::vector<FamilySpec> hexagon_members(const ParamBox& box);

// family in {"hexhouse", "special_octagon", "lattice_hexagon"}; `limits`
// holds wmax/hmax, max, or lo/hi respectively.
ScanReport scan_family(const std::string& family, const std::map<std::string, long>& limits,
                       const ScanOptions& opts);

// Period sets shown in the figures whose parameters are not printed.
const std::vector<std::vector<long>>& figure_period_sets();

struct PeriodSearchOptions {
  long max_period = 2000;
  // Every (a/q, b/q) with q <= max_denominator in each positive side-pair
  // cell, counted once in lowest terms.
  int max_denominator = 17;
  long random_samples = 5000;  // plus uniformly drawn rationals
  std::uint64_t seed = 1;
  long denominator = 10007;    // of the random fractions
  PortraitMode mode = PortraitMode::Exact;
  int jobs = 0;
  std::size_t keep_examples = 5;
};

struct FoundOrbit {
  PhasePoint start;
  int period = 0;
  bool verified = false;  // replayed with the geometric step
  std::vector<int> symbolic;
};

struct PeriodSearchReport {
  std::string polygon;
  long samples = 0;
  long periodic = 0;
  long halted = 0;
  long capped = 0;
  long precision_capped = 0;
  std::map<int, long> period_counts;
  std::vector<FoundOrbit> examples;  // up to keep_examples per period, sample order
  // Non-periodic samples by floor(log2(steps before halt or cap)).
  std::map<int, long> length_histogram;
  long longest_halted = 0;
};

std::vector<PhasePoint> search_samples(const Polygon& poly, const PeriodSearchOptions& opts);
PeriodSearchReport search_periodic(const Polygon& poly, const PeriodSearchOptions& opts);
PeriodSearchReport search_periodic_serial(const Polygon& poly, const PeriodSearchOptions& opts);
inline PeriodSearchReport search_kite(const PeriodSearchOptions& opts) { return search_periodic(kite(), opts); }

json scan_report_to_json(const ScanReport& r, bool with_entries = false);
json search_report_to_json(const PeriodSearchReport& r);

}  // namespace symbill
