#include "symbill/scan.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace symbill {

namespace {

int thread_count(int jobs) {
#ifdef _OPENMP
  return jobs > 0 ? jobs : omp_get_max_threads();
#else
  (void)jobs;
  return 1;
#endif
}

std::string periods_key(const std::vector<long>& ps) {
  std::string s = "{";
  for (std::size_t k = 0; k < ps.size(); ++k) s += (k ? "," : "") + std::to_string(ps[k]);
  return s + "}";
}

}  // namespace

std::string spec_key(const FamilySpec& spec) {
  std::string s = spec.family + "(";
  bool first = true;
  for (const auto& [k, v] : spec.params) {
    s += (first ? "" : ",") + k + "=" + to_string(v);
    first = false;
  }
  return s + ")";
}

json scan_entry_to_json(const ScanEntry& e) {
  json out = {{"key", e.key},
              {"spec", family_spec_to_json(e.spec)},
              {"status", e.status},
              {"periods", e.periods},
              {"checker_ok", e.checker_ok},
              {"stats", e.stats}};
  if (!e.verdict.empty()) out["verdict"] = e.verdict;
  if (e.expected) out["expected"] = *e.expected;
  if (e.conforms) out["conforms"] = *e.conforms;
  if (!e.note.empty()) out["note"] = e.note;
  if (e.certificate) out["certificate"] = certificate_to_json(*e.certificate);
  return out;
}

ScanEntry scan_entry_from_json(const json& j) {
  ScanEntry e;
  e.spec = family_spec_from_json(j.at("spec"));
  e.key = j.at("key").get<std::string>();
  e.status = j.at("status").get<std::string>();
  e.periods = j.at("periods").get<std::vector<long>>();
  e.checker_ok = j.value("checker_ok", false);
  if (j.contains("stats")) e.stats = j["stats"].get<std::map<std::string, long>>();
  e.verdict = j.value("verdict", "");
  if (j.contains("expected")) e.expected = j["expected"].get<std::vector<long>>();
  if (j.contains("conforms")) e.conforms = j["conforms"].get<bool>();
  e.note = j.value("note", "");
  if (j.contains("certificate")) e.certificate = certificate_from_json(j["certificate"]);
  return e;
}

ScanEntry evaluate_member(const FamilySpec& spec, Annotate annotate, const ScanOptions& opts) {
  ScanEntry e;
  e.spec = spec;
  e.key = spec_key(spec);
  std::optional<Polygon> poly;
  try {
    poly.emplace(build(spec));
  } catch (const Error& err) {
    e.status = "invalid";
    e.note = err.what();
    return e;
  }
  try {
    PeriodicityCertificate cert = certify(*poly, opts.budget);
    e.status = "certified";
    e.verdict = cert_verdict_name(cert.verdict);
    e.periods = cert.periods();
    if (!cert.note.empty()) e.note = cert.note;
    if (cert.verdict == CertVerdict::FullyPeriodic) e.checker_ok = check_certificate(cert).ok;
    e.certificate = std::move(cert);
    if (annotate) annotate(e, *poly);
    if (!opts.embed_certificates) e.certificate.reset();
  } catch (const std::exception& err) {
    e.status = "error";
    e.note = err.what();
  }
  return e;
}

namespace {

std::unordered_map<std::string, ScanEntry> load_existing(const std::string& path) {
  std::unordered_map<std::string, ScanEntry> out;
  if (path.empty()) return out;
  std::ifstream in(path);
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    try {
      ScanEntry e = scan_entry_from_json(json::parse(line));
      out.emplace(e.key, std::move(e));
    } catch (const std::exception&) {
      // A torn last line from an interrupted run is recomputed.
    }
  }
  return out;
}

void summarize(ScanReport& r) {
  const auto& sets = figure_period_sets();
  for (const ScanEntry& e : r.entries) {
    if (e.status == "invalid") {
      ++r.invalid;
      continue;
    }
    if (e.status == "certified") ++r.certified;
    if (e.verdict == "FullyPeriodic") ++r.fully_periodic;
    if (e.conforms) ++(*e.conforms ? r.conforming : r.nonconforming);
    if (e.verdict == "FullyPeriodic")
      for (const auto& s : sets)
        if (e.periods == s) r.figure_matches[periods_key(s)].push_back(e.key);
  }
}

template <class Eval>
ScanReport run(const std::string& family, const std::vector<FamilySpec>& members, const ScanOptions& opts,
               bool parallel, Eval eval) {
  ScanReport report;
  report.family = family;
  auto existing = load_existing(opts.out_path);
  std::vector<std::optional<ScanEntry>> slots(members.size());
  std::vector<std::size_t> todo;
  for (std::size_t k = 0; k < members.size(); ++k) {
    auto it = existing.find(spec_key(members[k]));
    if (it != existing.end()) {
      slots[k] = std::move(it->second);
      ++report.resumed;
    } else {
      todo.push_back(k);
    }
  }
  std::ofstream out;
  if (!opts.out_path.empty()) out.open(opts.out_path, std::ios::app);
  const int threads = parallel ? thread_count(opts.jobs) : 1;
  const std::size_t batch = parallel ? static_cast<std::size_t>(std::max(4 * threads, 16)) : 16;
  for (std::size_t b0 = 0; b0 < todo.size(); b0 += batch) {
    const long b1 = static_cast<long>(std::min(todo.size(), b0 + batch));
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
      for (long q = static_cast<long>(b0); q < b1; ++q) slots[todo[q]] = eval(members[todo[q]]);
    } else {
      for (long q = static_cast<long>(b0); q < b1; ++q) slots[todo[q]] = eval(members[todo[q]]);
    }
    if (out.is_open()) {
      for (long q = static_cast<long>(b0); q < b1; ++q) out << scan_entry_to_json(*slots[todo[q]]).dump() << '\n';
      out.flush();
    }
  }
  for (auto& s : slots) report.entries.push_back(std::move(*s));
  summarize(report);
  return report;
}

}  // namespace

ScanReport run_scan(const std::string& family, const std::vector<FamilySpec>& members, Annotate annotate,
                    const ScanOptions& opts) {
  return run(family, members, opts, true, [&](const FamilySpec& s) { return evaluate_member(s, annotate, opts); });
}

ScanReport run_scan_serial(const std::string& family, const std::vector<FamilySpec>& members, Annotate annotate,
                           const ScanOptions& opts) {
  return run(family, members, opts, false, [&](const FamilySpec& s) { return evaluate_member(s, annotate, opts); });
}

std::vector<Rat> rat_range(const Rat& lo, const Rat& hi, int steps) {
  if (steps <= 1) return {lo};
  std::vector<Rat> out;
  Rat d = (hi - lo) / (steps - 1);
  for (int k = 0; k < steps; ++k) out.push_back(Rat(lo + k * d));
  return out;
}

std::vector<long> modulus_periods(long m) { return {16 * m - 4, 16 * m + 4, 16 * m + 12}; }

std::vector<FamilySpec> penthouse_members(const std::vector<Rat>& as, const std::vector<Rat>& bs) {
  std::vector<FamilySpec> out;
  for (const Rat& a : as)
    for (const Rat& b : bs) out.push_back({"penthouse", {{"a", a}, {"b", b}}});
  return out;
}

namespace {

bool contains_period(const std::vector<long>& ps, long q) { return std::binary_search(ps.begin(), ps.end(), q); }

void annotate_penthouse(ScanEntry& e, const Polygon&) {
  const Rat& a = e.spec.params.at("a");
  long m = penthouse_modulus(a);
  e.stats["modulus"] = m;
  bool full = e.verdict == "FullyPeriodic";
  if (penthouse_is_generic(a)) {
    e.expected = modulus_periods(m);
    e.conforms = full && e.periods == *e.expected;
  } else {
    // At a bifurcation the top period of the lower modulus survives.
    e.stats["generic"] = 0;
    e.conforms = full && contains_period(e.periods, 16 * m - 4);
  }
}

void annotate_plain(ScanEntry& e, const Polygon&) { e.conforms = e.verdict == "FullyPeriodic"; }

void annotate_hexagon(ScanEntry& e, const Polygon&) {
  auto p = [&](const char* k) { return e.spec.params.at(k).get_num().get_si(); };
  HexagonSides h = hexagon_sides(p("p1"), p("q1"), p("r1"), p("p2"));
  long n = hexagon_n(h);
  e.stats["N"] = n;
  e.stats["bound"] = 4 * n;
  long max_len = 0;
  if (e.certificate) {
    for (const TileOrbit& o : e.certificate->tile_orbits) max_len = std::max<long>(max_len, o.length);
  }
  e.stats["max_period"] = e.periods.empty() ? 0 : e.periods.back();
  e.stats["max_length"] = max_len;
  e.conforms = e.verdict == "FullyPeriodic" && !e.periods.empty() && e.periods.back() <= 4 * n && max_len <= n;
}

}  // namespace

ScanReport scan_penthouse(const std::vector<Rat>& as, const std::vector<Rat>& bs, const ScanOptions& opts) {
  ScanReport r = run_scan("penthouse", penthouse_members(as, bs), annotate_penthouse, opts);
  // Persistence across each non-generic a: periods present on both sides.
  for (const ScanEntry& e : r.entries) {
    if (e.status != "certified" || penthouse_is_generic(e.spec.params.at("a"))) continue;
    const Rat& a = e.spec.params.at("a");
    const Rat& b = e.spec.params.at("b");
    const ScanEntry* below = nullptr;
    const ScanEntry* above = nullptr;
    for (const ScanEntry& o : r.entries) {
      if (o.status != "certified" || o.spec.params.at("b") != b) continue;
      const Rat& oa = o.spec.params.at("a");
      if (!penthouse_is_generic(oa)) continue;
      if (oa < a && (!below || oa > below->spec.params.at("a"))) below = &o;
      if (oa > a && (!above || oa < above->spec.params.at("a"))) above = &o;
    }
    if (!below || !above) continue;
    std::vector<long> both;
    std::set_intersection(below->periods.begin(), below->periods.end(), above->periods.begin(),
                          above->periods.end(), std::back_inserter(both));
    r.persisting.emplace_back(e.key, both);
  }
  return r;
}

std::vector<FamilySpec> hexhouse_members(long wmax, long hmax) {
  std::vector<FamilySpec> out;
  for (long w = 1; w <= wmax; ++w)
    for (long h = 1; h <= hmax; ++h)
      for (long x1 = 1; x1 < w; ++x1)
        for (long x2 = x1 + 1; x2 < w; ++x2)
          out.push_back({"hexhouse", {{"w", Rat(w)}, {"h", Rat(h)}, {"x1", Rat(x1)}, {"x2", Rat(x2)}}});
  return out;
}

std::vector<FamilySpec> octagon_members(long max) {
  std::vector<FamilySpec> out;
  for (long W = 1; W <= max; ++W)
    for (long H = 1; H <= max; ++H)
      for (long c1 = std::max(W, H) + 1; c1 < W + H; ++c1)
        for (long c2 = std::max(W, H) + 1; c2 < W + H; ++c2)
          out.push_back({"special_octagon", {{"W", Rat(W)}, {"H", Rat(H)}, {"c1", Rat(c1)}, {"c2", Rat(c2)}}});
  return out;
}

std::vector<FamilySpec> hexagon_members(const ParamBox& box) {
  std::vector<FamilySpec> out;
  for (long p1 = box.lo; p1 <= box.hi; ++p1)
    for (long q1 = box.lo; q1 <= box.hi; ++q1)
      for (long r1 = box.lo; r1 <= box.hi; ++r1)
        for (long p2 = box.lo; p2 <= box.hi; ++p2) {
          if (q1 + p1 - p2 <= 0 || r1 - p1 + p2 <= 0) continue;
          out.push_back({"lattice_hexagon", {{"p1", Rat(p1)}, {"q1", Rat(q1)}, {"r1", Rat(r1)}, {"p2", Rat(p2)}}});
        }
  return out;
}

ScanReport scan_family(const std::string& family, const std::map<std::string, long>& limits,
                       const ScanOptions& opts) {
  auto lim = [&](const char* k, long def) {
    auto it = limits.find(k);
    return it == limits.end() ? def : it->second;
  };
  if (family == "hexhouse")
    return run_scan(family, hexhouse_members(lim("wmax", 6), lim("hmax", 4)), annotate_plain, opts);
  if (family == "special_octagon") return run_scan(family, octagon_members(lim("max", 5)), annotate_plain, opts);
  if (family == "lattice_hexagon")
    return run_scan(family, hexagon_members({lim("lo", 1), lim("hi", 3)}), annotate_hexagon, opts);
  throw Error(Errc::ParamOutOfRange, "no scan for family '" + family + "'");
}

const std::vector<std::vector<long>>& figure_period_sets() {
  static const std::vector<std::vector<long>> sets{
      {4, 12, 28}, {4, 28, 108, 188}, {4, 44, 68, 92}, {4, 28, 44, 60, 68, 84, 108}, {4, 56, 68, 108},
      {4, 16, 32, 44, 68, 92},
  };
  return sets;
}

std::vector<PhasePoint> search_samples(const Polygon& poly, const PeriodSearchOptions& opts) {
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < poly.size(); ++i)
    for (int j = 0; j < poly.size(); ++j)
      if (sgn(poly.side_cross(i, j)) > 0) cells.emplace_back(i, j);
  std::vector<PhasePoint> out;
  for (auto [i, j] : cells)
    for (long q = 2; q <= opts.max_denominator; ++q)
      for (long a = 1; a < q; ++a)
        for (long b = 1; b < q; ++b)
          if (std::gcd(std::gcd(a, b), q) == 1) out.push_back({i, make_rat(a, q), j, make_rat(b, q)});
  std::mt19937_64 gen(opts.seed);
  const auto d = static_cast<std::uint64_t>(opts.denominator);
  for (long k = 0; k < opts.random_samples && !cells.empty(); ++k) {
    auto [i, j] = cells[gen() % cells.size()];
    long a = 1 + static_cast<long>(gen() % (d - 1));
    long b = 1 + static_cast<long>(gen() % (d - 1));
    out.push_back({i, make_rat(a, opts.denominator), j, make_rat(b, opts.denominator)});
  }
  return out;
}

namespace {

bool replay_geometric(const Polygon& poly, const PhasePoint& start, int period) {
  PhasePoint cur = start;
  for (int m = 1; m <= period; ++m) {
    StepResult r = step(poly, cur);
    if (!r.ok()) return false;
    cur = std::move(*r.next);
    if (cur == start) return m == period;
  }
  return false;
}

PeriodSearchReport search(const Polygon& poly, const PeriodSearchOptions& opts, bool parallel) {
  std::vector<PhasePoint> samples = search_samples(poly, opts);
  MapTable table(poly);
  std::vector<OrbitReport> results(samples.size());
  auto one = [&](std::size_t k) {
    if (opts.mode == PortraitMode::Exact) {
      OrbitOptions o;
      o.max_steps = opts.max_period;
      results[k] = orbit(table, samples[k], o);
    } else {
      FloatOrbitOptions o;
      o.max_steps = opts.max_period;
      results[k] = float_orbit(table, to_float(samples[k]), o);
    }
    results[k].symbolic.clear();
  };
  const long n = static_cast<long>(samples.size());
  if (parallel) {
    const int threads = thread_count(opts.jobs);
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
    for (long k = 0; k < n; ++k) one(static_cast<std::size_t>(k));
  } else {
    for (long k = 0; k < n; ++k) one(static_cast<std::size_t>(k));
  }

  PeriodSearchReport rep;
  rep.polygon = poly.name();
  rep.samples = n;
  std::map<int, std::size_t> kept;
  for (long k = 0; k < n; ++k) {
    const OrbitReport& r = results[static_cast<std::size_t>(k)];
    switch (r.status) {
      case OrbitStatus::Periodic: {
        ++rep.periodic;
        ++rep.period_counts[r.period];
        if (kept[r.period]++ < opts.keep_examples) {
          FoundOrbit f{samples[static_cast<std::size_t>(k)], r.period, false, {}};
          f.verified = replay_geometric(poly, f.start, r.period);
          OrbitOptions o;
          o.max_steps = r.period;
          f.symbolic = orbit(table, f.start, o).symbolic;
          rep.examples.push_back(std::move(f));
        }
        continue;
      }
      case OrbitStatus::Halted:
        ++rep.halted;
        rep.longest_halted = std::max(rep.longest_halted, r.steps);
        break;
      case OrbitStatus::Capped:
        ++rep.capped;
        if (!r.note.empty()) ++rep.precision_capped;
        break;
    }
    int bucket = 0;
    for (long s = r.steps; s > 1; s >>= 1) ++bucket;
    ++rep.length_histogram[bucket];
  }
  return rep;
}

}  // namespace

PeriodSearchReport search_periodic(const Polygon& poly, const PeriodSearchOptions& opts) {
  return search(poly, opts, true);
}

PeriodSearchReport search_periodic_serial(const Polygon& poly, const PeriodSearchOptions& opts) {
  return search(poly, opts, false);
}

json scan_report_to_json(const ScanReport& r, bool with_entries) {
  json matches = json::object();
  for (const auto& [k, v] : r.figure_matches) matches[k] = v;
  json persisting = json::array();
  for (const auto& [k, v] : r.persisting) persisting.push_back({{"member", k}, {"persisting", v}});
  json out = {{"family", r.family},
              {"members", r.entries.size()},
              {"resumed", r.resumed},
              {"invalid", r.invalid},
              {"certified", r.certified},
              {"fully_periodic", r.fully_periodic},
              {"conforming", r.conforming},
              {"nonconforming", r.nonconforming},
              {"figure_matches", matches}};
  if (!r.persisting.empty()) out["bifurcations"] = persisting;
  json bad = json::array();
  for (const ScanEntry& e : r.entries)
    if (e.conforms && !*e.conforms) bad.push_back(e.key);
  out["counterexamples"] = bad;
  if (with_entries) {
    json es = json::array();
    for (const ScanEntry& e : r.entries) es.push_back(scan_entry_to_json(e));
    out["entries"] = es;
  }
  return out;
}

json search_report_to_json(const PeriodSearchReport& r) {
  json counts = json::object();
  for (const auto& [p, c] : r.period_counts) counts[std::to_string(p)] = c;
  json hist = json::object();
  for (const auto& [b, c] : r.length_histogram) hist["2^" + std::to_string(b)] = c;
  json ex = json::array();
  for (const FoundOrbit& f : r.examples)
    ex.push_back({{"start", phase_point_to_json(f.start)},
                  {"period", f.period},
                  {"verified", f.verified},
                  {"symbolic", f.symbolic}});
  return {{"polygon", r.polygon},
          {"samples", r.samples},
          {"periodic", r.periodic},
          {"halted", r.halted},
          {"capped", r.capped},
          {"precision_capped", r.precision_capped},
          {"period_counts", counts},
          {"examples", ex},
          {"length_histogram", hist},
          {"longest_halted", r.longest_halted},
          {"result", r.periodic == 0 ? "none below max period" : "periodic orbits found"}};
}

}  // namespace symbill
