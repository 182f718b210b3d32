#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <tuple>

#include <unistd.h>

#include "symbill/scan.hpp"

using namespace symbill;

namespace {

Rat frac(long p, long q = 1) { return make_rat(p, q); }

std::string dump_entries(const ScanReport& r) {
  json j = json::array();
  for (const ScanEntry& e : r.entries) j.push_back(scan_entry_to_json(e));
  return j.dump();
}

std::string temp_path(const char* stem) {
  auto p = std::filesystem::temp_directory_path() / (std::string(stem) + "_" + std::to_string(::getpid()) + ".jsonl");
  std::filesystem::remove(p);
  return p.string();
}

}  // namespace

TEST_CASE("keys, ranges and moduli") {
  FamilySpec s{"penthouse", {{"b", frac(3, 5)}, {"a", frac(2)}}};
  CHECK(spec_key(s) == "penthouse(a=2,b=3/5)");
  CHECK(rat_range(frac(0), frac(1), 5) == std::vector<Rat>{frac(0), frac(1, 4), frac(1, 2), frac(3, 4), frac(1)});
  CHECK(rat_range(frac(2), frac(9), 1) == std::vector<Rat>{frac(2)});
  CHECK(modulus_periods(1) == std::vector<long>{12, 20, 28});
  CHECK(modulus_periods(3) == std::vector<long>{44, 52, 60});
}

TEST_CASE("member enumerations respect their constraints") {
  for (const FamilySpec& s : hexhouse_members(5, 2)) {
    const auto& p = s.params;
    CHECK(p.at("x1") > 0);
    CHECK(p.at("x1") < p.at("x2"));
    CHECK(p.at("x2") < p.at("w"));
  }
  for (const FamilySpec& s : octagon_members(4)) {
    const auto& p = s.params;
    Rat m = std::max(p.at("W"), p.at("H"));
    CHECK(p.at("c1") > m);
    CHECK(p.at("c2") < p.at("W") + p.at("H"));
  }
  auto hex = hexagon_members({1, 3});
  CHECK(!hex.empty());
  for (const FamilySpec& s : hex) CHECK_NOTHROW(build(s));
}

TEST_CASE("parallel scan equals the serial reference") {
  auto members = penthouse_members({frac(5), frac(2), frac(1), frac(2, 3)}, {frac(1, 4), frac(3, 5)});
  ScanOptions o;
  o.jobs = 4;
  ScanReport par = scan_penthouse({frac(5), frac(2), frac(1), frac(2, 3)}, {frac(1, 4), frac(3, 5)}, o);
  REQUIRE(par.entries.size() == members.size());
  for (std::size_t k = 0; k < members.size(); ++k) CHECK(par.entries[k].key == spec_key(members[k]));
  CHECK(par.fully_periodic == static_cast<long>(members.size()));
  CHECK(par.nonconforming == 0);

  ScanReport a = scan_family("lattice_hexagon", {{"lo", 1}, {"hi", 2}}, o);
  o.jobs = 1;
  ScanReport b = scan_family("lattice_hexagon", {{"lo", 1}, {"hi", 2}}, o);
  CHECK(dump_entries(a) == dump_entries(b));
  for (const ScanEntry& e : a.entries) {
    CHECK(e.checker_ok);
    CHECK(e.conforms.value_or(false));
  }
}

TEST_CASE("penthouse annotations") {
  ScanReport r = scan_penthouse({frac(2), frac(1), frac(3, 5)}, {frac(3, 5)}, {});
  REQUIRE(r.entries.size() == 3);
  const ScanEntry& g = r.entries[0];
  REQUIRE(g.expected);
  CHECK(*g.expected == std::vector<long>{12, 20, 28});
  CHECK(g.periods == *g.expected);
  CHECK(g.stats.at("modulus") == 1);
  // a = 1 is a bifurcation value
  const ScanEntry& bif = r.entries[1];
  CHECK(!bif.expected);
  CHECK(bif.stats.at("generic") == 0);
  CHECK(bif.conforms.value_or(false));
  REQUIRE(r.persisting.size() == 1);
  CHECK(r.persisting[0].first == bif.key);
}

TEST_CASE("invalid members are recorded, not thrown") {
  ScanReport r = run_scan("penthouse", {{"penthouse", {{"a", frac(-1)}, {"b", frac(1, 2)}}}}, nullptr, {});
  REQUIRE(r.entries.size() == 1);
  CHECK(r.entries[0].status == "invalid");
  CHECK(r.invalid == 1);
  CHECK_THROWS_AS(scan_family("kite", {}, {}), Error);
}

TEST_CASE("scans resume from their output file") {
  std::string path = temp_path("symbill_scan");
  ScanOptions o;
  o.out_path = path;
  o.embed_certificates = false;
  ScanReport first = scan_family("hexhouse", {{"wmax", 4}, {"hmax", 2}}, o);
  CHECK(first.resumed == 0);
  ScanReport second = scan_family("hexhouse", {{"wmax", 4}, {"hmax", 2}}, o);
  CHECK(second.resumed == static_cast<long>(second.entries.size()));
  CHECK(dump_entries(first) == dump_entries(second));

  // a torn trailing line is recomputed, not fatal
  { std::ofstream(path, std::ios::app) << "{\"family\": \"hex"; }
  ScanReport third = scan_family("hexhouse", {{"wmax", 5}, {"hmax", 2}}, o);
  CHECK(third.resumed == static_cast<long>(first.entries.size()));
  CHECK(third.entries.size() > first.entries.size());
  std::filesystem::remove(path);
}

TEST_CASE("entries survive JSON") {
  ScanReport r = scan_penthouse({frac(2)}, {frac(4, 5)}, {});
  const ScanEntry& e = r.entries[0];
  ScanEntry back = scan_entry_from_json(json::parse(scan_entry_to_json(e).dump()));
  CHECK(back.key == e.key);
  CHECK(back.periods == e.periods);
  CHECK(back.expected == e.expected);
  CHECK(back.stats == e.stats);
  REQUIRE(back.certificate);
  CHECK(check_certificate(*back.certificate).ok);
}

TEST_CASE("period search finds the kite 6-orbit") {
  PeriodSearchOptions o;
  o.max_denominator = 5;
  o.random_samples = 200;
  o.max_period = 200;
  o.jobs = 4;
  PeriodSearchReport p = search_periodic(kite(), o);
  PeriodSearchReport s = search_periodic_serial(kite(), o);
  CHECK(search_report_to_json(p).dump() == search_report_to_json(s).dump());
  CHECK(p.samples == static_cast<long>(search_samples(kite(), o).size()));
  CHECK(p.samples == p.periodic + p.halted + p.capped);
  REQUIRE(p.period_counts.count(6));
  bool six = false;
  for (const FoundOrbit& f : p.examples) {
    CHECK(f.verified);
    CHECK(static_cast<int>(f.symbolic.size()) == f.period);
    if (f.period == 6) {
      six = true;
      OrbitReport r = orbit(kite(), f.start);
      CHECK(r.period == 6);
    }
  }
  CHECK(six);
}

TEST_CASE("search samples are in lowest terms and distinct") {
  PeriodSearchOptions o;
  o.max_denominator = 6;
  o.random_samples = 0;
  auto pts = search_samples(quad(), o);
  std::set<std::tuple<int, std::string, int, std::string>> seen;
  for (const PhasePoint& p : pts) {
    CHECK(sgn(quad().side_cross(p.tail, p.head)) > 0);
    CHECK(p.s > 0);
    CHECK(p.s < 1);
    seen.emplace(p.tail, to_string(p.s), p.head, to_string(p.t));
  }
  CHECK(seen.size() == pts.size());
}

TEST_CASE("figure sets") {
  const auto& sets = figure_period_sets();
  CHECK(sets.size() == 6);
  for (const auto& s : sets) CHECK(std::is_sorted(s.begin(), s.end()));
}
