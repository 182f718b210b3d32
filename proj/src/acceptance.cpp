#include "symbill/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>
#include <sstream>

#include "symbill/families.hpp"
#include "symbill/properties.hpp"
#include "symbill/scan.hpp"
#include "symbill/tiling.hpp"

namespace symbill {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string join(const std::vector<long>& xs) {
  std::string s = "{";
  for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? "," : "") + std::to_string(xs[k]);
  return s + "}";
}

// (length, order) pairs, sorted.
std::vector<std::pair<int, int>> structure(const PeriodicityCertificate& c) {
  std::vector<std::pair<int, int>> out;
  for (const TileOrbit& o : c.tile_orbits) out.emplace_back(o.length, o.return_order);
  std::sort(out.begin(), out.end());
  return out;
}

std::string join(const std::vector<std::pair<int, int>>& xs) {
  std::string s;
  for (auto [l, k] : xs) s += (s.empty() ? "" : " ") + std::string("(") + std::to_string(l) + "," + std::to_string(k) + ")";
  return s;
}

// Certify plus the independent replay check.
struct Certified {
  PeriodicityCertificate cert;
  CertificateCheck check;
  double seconds = 0;
  bool fp() const { return cert.verdict == CertVerdict::FullyPeriodic && check.ok; }
};

Certified run_certify(const Polygon& poly) {
  auto t0 = Clock::now();
  Certified c{certify(poly), {}, 0};
  c.seconds = since(t0);
  c.check = check_certificate(c.cert);
  return c;
}

CriterionResult quad_theorem() {
  CriterionResult r{"Quad theorem", false, "", 0};
  Certified c = run_certify(quad());
  r.seconds = c.seconds;
  Rat a10 = -1, a9 = -1;
  for (const TileOrbit& o : c.cert.tile_orbits) {
    if (o.length == 10 && o.return_order == 2) a10 = o.orbit_area;
    if (o.length == 9 && o.return_order == 4) a9 = o.orbit_area;
  }
  auto st = structure(c.cert);
  r.pass = c.fp() && c.cert.periods() == std::vector<long>{20, 36} && st == std::vector<std::pair<int, int>>{{9, 4}, {10, 2}} &&
           a10 == 10 && a9 == 9 && c.cert.total_phase_area == 19 && c.seconds < 10;
  r.detail = std::string(cert_verdict_name(c.cert.verdict)) + ", periods " + join(c.cert.periods()) + ", orbits " +
             join(st) + ", areas 10-orbit " + to_string(a10) + " 9-orbit " + to_string(a9) + ", phase area " +
             to_string(c.cert.total_phase_area) + (c.check.ok ? ", replay ok" : ", replay FAILED");
  return r;
}

CriterionResult tall_penthouse() {
  CriterionResult r{"Tall Penthouse theorem", true, "", 0};
  const std::vector<std::pair<int, int>> want{{3, 4}, {7, 4}, {10, 2}, {20, 1}, {28, 1}, {28, 1}};
  std::ostringstream os;
  double slowest = 0;
  for (Rat a : {make_rat(3, 2), make_rat(2), make_rat(5)})
    for (Rat b : {make_rat(3, 5), make_rat(4, 5)}) {
      Certified c = run_certify(penthouse(a, b));
      r.seconds += c.seconds;
      slowest = std::max(slowest, c.seconds);
      bool ok = c.fp() && c.cert.periods() == std::vector<long>{12, 20, 28} && structure(c.cert) == want && c.seconds < 10;
      if (!ok) {
        r.pass = false;
        os << " failed at a=" << to_string(a) << " b=" << to_string(b) << ": " << cert_verdict_name(c.cert.verdict)
           << " " << join(c.cert.periods()) << " " << join(structure(c.cert)) << ";";
      }
    }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", slowest);
  r.detail = "6 instances, periods {12,20,28}, orbits " + join(want) + ", slowest " + buf + " s" + os.str();
  return r;
}

// Cyclic words up to rotation, over one point period.
std::string cyclic_type(const TileOrbit& o) {
  std::vector<int> w;
  for (int k = 0; k < o.return_order; ++k) w.insert(w.end(), o.symbolic.begin(), o.symbolic.end());
  std::vector<int> best = w;
  for (std::size_t k = 1; k < w.size(); ++k) {
    std::rotate(w.begin(), w.begin() + 1, w.end());
    best = std::min(best, w);
  }
  std::string s;
  for (int x : best) s += static_cast<char>('0' + x);
  return s;
}

CriterionResult bifurcation() {
  CriterionResult r{"Bifurcation a = 1", true, "", 0};
  std::ostringstream os;
  for (Rat b : {make_rat(3, 5), make_rat(1, 4), make_rat(4, 5)}) {
    Certified c = run_certify(penthouse(make_rat(1), b));
    r.seconds += c.seconds;
    std::set<std::string> types;
    for (const TileOrbit& o : c.cert.tile_orbits)
      if (o.point_period == 28) types.insert(cyclic_type(o));
    auto ps = c.cert.periods();
    bool ok = c.fp() && std::count(ps.begin(), ps.end(), 28) == 1 && types.size() >= 3;
    r.pass = r.pass && ok;
    os << (os.tellp() ? "; " : "") << "b=" << to_string(b) << " " << cert_verdict_name(c.cert.verdict) << " "
       << join(ps) << ", " << types.size() << " period-28 types";
  }
  r.detail = os.str();
  return r;
}

CriterionResult trapezoids() {
  CriterionResult r{"Trapezoid periods", true, "", 0};
  std::ostringstream os;
  struct Case {
    long u, v;
  };
  for (Case k : {Case{3, 1}, Case{5, 3}, Case{7, 5}}) {
    Rat u = make_rat(k.u), v = make_rat(k.v);
    long m = trapezoid_modulus(u, v);
    Certified c = run_certify(trapezoid(u, v, make_rat(1, 3), make_rat(1)));
    r.seconds += c.seconds;
    bool ok = trapezoid_is_generic(u, v) && c.fp() && c.cert.periods() == modulus_periods(m);
    r.pass = r.pass && ok;
    os << (os.tellp() ? "; " : "") << "m=" << m << " " << join(c.cert.periods()) << (ok ? "" : " (expected " + join(modulus_periods(m)) + ")");
  }
  r.detail = os.str();
  return r;
}

CriterionResult hexagons() {
  CriterionResult r{"Lattice hexagons", false, "", 0};
  auto t0 = Clock::now();
  ScanOptions o;
  o.embed_certificates = false;
  ScanReport rep = scan_family("lattice_hexagon", {{"lo", 1}, {"hi", 3}}, o);
  r.seconds = since(t0);
  long checked = 0;
  for (const ScanEntry& e : rep.entries)
    if (e.status != "invalid" && e.checker_ok) ++checked;
  long members = static_cast<long>(rep.entries.size()) - rep.invalid;
  r.pass = members > 0 && rep.fully_periodic == members && rep.conforming == members && checked == members && r.seconds < 60;
  r.detail = std::to_string(members) + " members, " + std::to_string(rep.fully_periodic) + " FullyPeriodic, " +
             std::to_string(rep.conforming) + " within 4N, " + std::to_string(checked) + " replayed";
  return r;
}

CriterionResult property(const std::string& name, long min_cases, const std::function<PropertyOutcome()>& f) {
  auto t0 = Clock::now();
  PropertyOutcome o = f();
  CriterionResult r{name, o.ok(min_cases), "", since(t0)};
  r.detail = std::to_string(o.cases) + " cases, " + std::to_string(o.failures) + " failures";
  if (!o.note.empty()) r.detail += ", " + o.note;
  if (!o.first_failure.empty()) r.detail += "; first: " + o.first_failure;
  return r;
}

CriterionResult stability() {
  CriterionResult r{"Stability classifier", false, "", 0};
  auto t0 = Clock::now();
  Polygon sq = unit_square(), tri = unit_triangle(), q = quad();
  StabilityReport a = classify(sq, make_phase_point(sq, 0, make_rat(1, 3), 1, make_rat(1, 2)));
  StabilityReport b = classify(tri, make_phase_point(tri, 0, make_rat(1, 2), 1, make_rat(1, 2)));
  StabilityReport c = classify(q, make_phase_point(q, 0, make_rat(1, 6), 1, make_rat(1, 4)));
  r.seconds = since(t0);
  r.pass = a.period == 4 && a.lambda && *a.lambda == 1 && a.verdict == Verdict::IdentityIndeterminate && b.period == 3 &&
           b.verdict == Verdict::StableOrder4 && c.period == 10 && c.verdict == Verdict::StableOrder2;
  r.detail = "square " + std::to_string(a.period) + "-orbit lambda=" + (a.lambda ? to_string(*a.lambda) : "-") + " " +
             verdict_name(a.verdict) + "; triangle " + std::to_string(b.period) + "-orbit " + verdict_name(b.verdict) +
             "; quad " + std::to_string(c.period) + "-orbit " + verdict_name(c.verdict);
  return r;
}

CriterionResult kite_search() {
  CriterionResult r{"Kite search", false, "", 0};
  auto t0 = Clock::now();
  PeriodSearchOptions o;
  o.keep_examples = 1'000'000;
  PeriodSearchReport rep = search_kite(o);
  Polygon k = kite();
  MapTable table(k);
  long verified = 0;
  std::string smallest;
  int smallest_period = 1 << 30;
  for (const FoundOrbit& f : rep.examples) {
    OrbitOptions oo;
    oo.max_steps = f.period + 1;
    OrbitReport again = orbit(table, f.start, oo);
    if (f.verified && again.status == OrbitStatus::Periodic && again.period == f.period) ++verified;
    if (f.period < smallest_period) {
      smallest_period = f.period;
      smallest = "(" + std::to_string(f.start.tail) + ", " + to_string(f.start.s) + "; " + std::to_string(f.start.head) +
                 ", " + to_string(f.start.t) + ")";
    }
  }
  r.seconds = since(t0);
  std::string periods;
  for (auto [p, c] : rep.period_counts) periods += (periods.empty() ? "" : ",") + std::to_string(p);
  if (rep.periodic == 0) {
    r.pass = rep.samples >= 10000;
    r.detail = std::to_string(rep.samples) + " exact samples, no periodic orbit below " + std::to_string(o.max_period);
  } else {
    r.pass = rep.samples >= 10000 && verified == rep.periodic && verified == static_cast<long>(rep.examples.size());
    r.detail = std::to_string(rep.samples) + " exact samples; DISCOVERY: " + std::to_string(rep.periodic) +
               " periodic samples, periods {" + periods + "}, " + std::to_string(verified) +
               " verified by orbit() and geometric replay; shortest " + std::to_string(smallest_period) + "-orbit at " +
               smallest;
  }
  return r;
}

std::string matches(const ScanReport& rep) {
  std::string s;
  for (const auto& [set, keys] : rep.figure_matches) s += " " + set + " at " + keys.front();
  return s.empty() ? " none" : s;
}

CriterionResult conjecture_scans() {
  CriterionResult r{"Conjecture scans", false, "", 0};
  auto t0 = Clock::now();
  ScanOptions o;
  o.embed_certificates = false;
  std::vector<Rat> as{make_rat(5),    make_rat(2),    make_rat(3, 2), make_rat(1),    make_rat(5, 6),
                      make_rat(2, 3), make_rat(3, 5), make_rat(1, 2), make_rat(2, 5), make_rat(3, 8)};
  std::vector<Rat> bs{make_rat(1, 4), make_rat(3, 5), make_rat(9, 10)};
  ScanReport pent = scan_penthouse(as, bs, o);
  ScanReport hh = scan_family("hexhouse", {{"wmax", 6}, {"hmax", 4}}, o);
  ScanReport oc = scan_family("special_octagon", {{"max", 5}}, o);
  r.seconds = since(t0);
  auto all_fp = [](const ScanReport& s) {
    return s.fully_periodic == static_cast<long>(s.entries.size()) - s.invalid && s.nonconforming == 0;
  };
  auto count = [](const ScanReport& s) {
    return std::to_string(s.fully_periodic) + "/" + std::to_string(static_cast<long>(s.entries.size()) - s.invalid);
  };
  r.pass = all_fp(pent) && pent.conforming == static_cast<long>(pent.entries.size()) - pent.invalid && all_fp(hh) &&
           all_fp(oc) && !hh.figure_matches.empty() && !oc.figure_matches.empty();
  std::string persist;
  for (const auto& [k, v] : pent.persisting)
    if (k.find("b=3/5") != std::string::npos) persist += " " + k + " keeps " + join(v);
  r.detail = "penthouse " + count(pent) + " FP, " + std::to_string(pent.conforming) + " match the period formula;" +
             persist + "; hexhouse " + count(hh) + " FP, figure sets" + matches(hh) + "; octagon " + count(oc) +
             " FP, figure sets" + matches(oc);
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  auto add = [&](CriterionResult r) {
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  };
  const long n = opts.property_cases;
  const std::uint64_t s = opts.seed;
  add(quad_theorem());
  add(tall_penthouse());
  add(bifurcation());
  add(trapezoids());
  add(hexagons());
  add(property("Property (a) area-preserving Jacobian", n, [&] { return prop_area_jacobian(n, s + 1); }));
  add(property("Property (b) pseudo-metric sign flip", n, [&] { return prop_metric_sign_flip(n, s + 2); }));
  add(property("Property (c) positivity preserved", n, [&] { return prop_positivity(n, s + 3); }));
  add(property("Property (d) time reversal", n, [&] { return prop_time_reversal(n, s + 4); }));
  add(property("Property (e) difference body, factor 1", n, [&] { return prop_difference_body(n, s + 5); }));
  add(property("Property (f) split area conservation", n, [&] { return prop_split_area(n, s + 6); }));
  add(property("Property (g) return order in {1,2,4}", n, [&] { return prop_return_order(n, s + 7); }));
  add(property("Property (h) float vs exact orbits", n, [&] { return prop_float_exact(n, s + 8); }));
  add(stability());
  if (opts.kite) add(kite_search());
  add(conjecture_scans());
  return out;
}

std::string format_result(const CriterionResult& r) {
  char t[32];
  std::snprintf(t, sizeof t, "%.2f s", r.seconds);
  return std::string(r.pass ? "PASS" : "FAIL") + "  " + r.name + "  (" + t + ")  " + r.detail;
}

}  // namespace symbill
