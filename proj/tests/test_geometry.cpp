#include <doctest.h>

#include "symbill/families.hpp"
#include "symbill/geometry.hpp"

using namespace symbill;

namespace {

Point pt(long x, long y) { return {make_rat(x), make_rat(y)}; }

// Area of a convex polygon from its vertices, fan from vertex 0.
Rat fan_area(const std::vector<Point>& v) {
  Rat a = 0;
  for (std::size_t k = 1; k + 1 < v.size(); ++k) a += cross(v[k] - v[0], v[k + 1] - v[0]);
  return a / 2;
}

}  // namespace

TEST_CASE("clockwise input is reversed, not rejected") {
  Polygon p({pt(0, 0), pt(0, 1), pt(1, 1), pt(1, 0)});
  CHECK(p.was_reversed());
  CHECK(area(p) == 1);
  for (int i = 0; i < 4; ++i) CHECK(sgn(p.side_cross(i, i + 1)) > 0);
}

TEST_CASE("invalid polygons are rejected with the right code") {
  auto code = [](std::vector<Point> v) {
    try {
      Polygon p(std::move(v));
    } catch (const Error& e) {
      return e.code();
    }
    FAIL("accepted");
    return Errc::ParseError;
  };
  CHECK(code({pt(0, 0), pt(1, 0)}) == Errc::TooFewVertices);
  CHECK(code({pt(0, 0), pt(1, 0), pt(1, 0), pt(0, 1)}) == Errc::DuplicateVertex);
  CHECK(code({pt(0, 0), pt(1, 0), pt(2, 0), pt(0, 1)}) == Errc::CollinearVertices);
  CHECK(code({pt(0, 0), pt(4, 0), pt(1, 1), pt(0, 4)}) == Errc::NotConvex);
  // a pentagram winds twice
  CHECK(code({pt(0, 3), pt(2, -3), pt(-3, 1), pt(3, 1), pt(-2, -3)}) == Errc::NotConvex);
}

TEST_CASE("parallel pairs") {
  CHECK(parallel_pairs(unit_square()) == std::vector<std::pair<int, int>>{{0, 2}, {1, 3}});
  CHECK(parallel_pairs(unit_triangle()).empty());
  CHECK(parallel_pairs(lattice_hexagon(1, 1, 1, 1)).size() == 3);
}

TEST_CASE("phase area of the reference tables") {
  CHECK(phase_area(unit_triangle()) == 3);
  CHECK(phase_area(unit_square()) == 4);
  CHECK(phase_area(quad()) == 19);
}

TEST_CASE("difference body of a triangle is a hexagon, of a square a doubled square") {
  Polygon dt = difference_body(unit_triangle());
  CHECK(dt.size() == 6);
  CHECK(area(dt) == 6 * area(unit_triangle()));
  Polygon ds = difference_body(unit_square());
  CHECK(ds.size() == 4);
  CHECK(area(ds) == 4);
  // D(P) is centrally symmetric
  for (const Point& v : dt.vertices()) {
    bool found = false;
    for (const Point& w : dt.vertices()) found = found || (w.x == -v.x && w.y == -v.y);
    CHECK(found);
  }
}

TEST_CASE("shoelace area agrees with a fan triangulation") {
  for (const Polygon& p : {quad(), kite(), penthouse(make_rat(2), make_rat(3, 5)), hexhouse(6, 1, 4, 2)})
    CHECK(area(p) == fan_area(p.vertices()));
}

TEST_CASE("affine maps scale phase area by the determinant") {
  Polygon q = quad();
  Mat2 m{make_rat(2), make_rat(1), make_rat(1), make_rat(3)};
  Polygon t = transform(q, m, {make_rat(5), make_rat(-1, 2)});
  CHECK(phase_area(t) == m.det() * phase_area(q));
  CHECK(area(t) == m.det() * area(q));
}

TEST_CASE("validate reports sides and pairs") {
  ValidationReport r = validate({pt(0, 0), pt(0, 1), pt(1, 1), pt(1, 0)}, "sq");
  CHECK(r.reversed);
  CHECK(r.side_directions.size() == 4);
  CHECK(r.parallel_pairs.size() == 2);
  CHECK(r.polygon.name() == "sq");
}
