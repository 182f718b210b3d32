#include <doctest.h>

#include "symbill/io.hpp"

using namespace symbill;

namespace {

Rat frac(long p, long q = 1) { return make_rat(p, q); }

}  // namespace

TEST_CASE("rationals on the wire") {
  CHECK(rat_to_json(frac(3, 5)) == "3/5");
  CHECK(rat_to_json(frac(4)) == "4");
  CHECK(rat_from_json("6/10") == frac(3, 5));
  CHECK(rat_from_json(json(7)) == 7);
  CHECK(rat_from_json(json::parse("0.1")) == frac(1, 10));
  CHECK(rat_from_json(json::parse("-2.5e-1")) == frac(-1, 4));
  CHECK_THROWS_AS(rat_from_json(json::parse("true")), Error);
  CHECK_THROWS_AS(rat_from_json("1/0"), Error);
}

TEST_CASE("polygon JSON") {
  json j = json::parse(R"({"name": "q", "vertices": [[0, 0], ["3", 0], [1, "2"], [0, 1]]})");
  Polygon p = polygon_from_json(j);
  CHECK(p == quad());
  CHECK(p.name() == "q");
  CHECK(polygon_from_json(polygon_to_json(p)) == p);
  CHECK(polygon_from_json(json::parse(R"([[0,0],[1,0],[0,1]])")) == unit_triangle());
  CHECK_THROWS_AS(polygon_from_json(json::parse(R"({"vertices": [[0,0],[1]]})")), Error);
}

TEST_CASE("family specs and table selection") {
  json spec = json::parse(R"({"family": "penthouse", "params": {"a": "2", "b": "3/5"}})");
  FamilySpec f = family_spec_from_json(spec);
  CHECK(f.family == "penthouse");
  CHECK(f.params.at("b") == frac(3, 5));
  CHECK(family_spec_to_json(f) == spec);
  Polygon want = penthouse(frac(2), frac(3, 5));
  CHECK(table_from_json(spec) == want);
  CHECK(table_from_json(json{{"family", spec}}) == want);
  CHECK(table_from_json(json{{"polygon", polygon_to_json(want)}}) == want);
  CHECK(table_from_json(json{{"vertices", polygon_to_json(want)["vertices"]}}) == want);
  CHECK_THROWS_AS(table_from_json(json::object()), Error);
}

TEST_CASE("phase points") {
  Polygon q = quad();
  PhasePoint p = parse_phase_point(q, "0,1/6,1,1/4");
  CHECK(p == PhasePoint{0, frac(1, 6), 1, frac(1, 4)});
  CHECK(phase_point_from_json(q, phase_point_to_json(p)) == p);
  CHECK(phase_point_from_json(q, json::parse(R"([0, "1/6", 1, 0.25])")) == p);
  CHECK_THROWS_AS(parse_phase_point(q, "0,1/6,0,1/4"), Error);
  CHECK_THROWS_AS(parse_phase_point(q, "0,1/6"), Error);
}

TEST_CASE("orbit reports carry chords as exact strings") {
  Polygon tri = unit_triangle();
  OrbitOptions o;
  o.collect_points = true;
  json j = orbit_report_to_json(tri, orbit(tri, PhasePoint{0, frac(1, 2), 1, frac(1, 2)}, o), true);
  CHECK(j["status"] == "periodic");
  CHECK(j["period"] == 3);
  REQUIRE(j["chords"].size() == 3);
  CHECK(j["chords"][0][0] == json::array({"1/2", "0"}));
  CHECK(j["chords"][0][1] == json::array({"1/2", "1/2"}));

  MapTable t(tri);
  FloatOrbitOptions fo;
  fo.collect_points = true;
  json f = orbit_report_to_json(tri, float_orbit(t, to_float(PhasePoint{0, frac(1, 2), 1, frac(1, 2)}), fo), true);
  CHECK(f["mode"] == "float");
  CHECK(f["chords"][0][0][0].is_number_float());
}

TEST_CASE("tile rectangles and certificates round-trip") {
  TileRect r{0, 1, frac(0), frac(1, 3), frac(1, 2), frac(1)};
  CHECK(tile_rect_from_json(tile_rect_to_json(r)) == r);
  PeriodicityCertificate c = certify(quad());
  json j = certificate_to_json(c);
  CHECK(j["verdict"] == "FullyPeriodic");
  CHECK(j["periods"] == json::array({20, 36}));
  CHECK(certificate_to_json(certificate_from_json(j)) == j);
}

TEST_CASE("portraits round-trip") {
  PortraitOptions o;
  o.nx = 17;
  o.ny = 11;
  Portrait p = compute_portrait(quad(), o);
  json j = portrait_to_json(p);
  CHECK(j["resolution"] == json::array({17, 11}));
  CHECK(j["cells"].size() == 17 * 11);
  CHECK(j["legend"]["periods"].contains("20"));
  Portrait back = portrait_from_json(j);
  CHECK(back.cells == p.cells);
  CHECK(back.polygon == p.polygon);
  CHECK(cell_to_json(Cell{CellKind::Excised, 0}) == "excised");
  CHECK(cell_to_json(Cell{CellKind::Periodic, 20}) == 20);
}

TEST_CASE("errors become JSON") {
  json e = error_to_json(Error(Errc::NotConvex, "dent"));
  CHECK(e["code"] == "NotConvex");
  CHECK(e["error"].get<std::string>().find("dent") != std::string::npos);
}
