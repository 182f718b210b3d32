#include "symbill/geometry.hpp"

#include <algorithm>

namespace symbill {

namespace {

std::string point_str(const Point& p) { return "(" + to_string(p.x) + ", " + to_string(p.y) + ")"; }

Rat signed_double_area(const std::vector<Point>& v) {
  Rat acc = 0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += cross(v[i], v[(i + 1) % v.size()]);
  return acc;
}

// 0 for angles in [0, pi), 1 for [pi, 2pi).
int half_plane(const Vec2& v) {
  if (sgn(v.y) > 0 || (sgn(v.y) == 0 && sgn(v.x) > 0)) return 0;
  return 1;
}

bool angle_less(const Vec2& a, const Vec2& b) {
  int ha = half_plane(a), hb = half_plane(b);
  if (ha != hb) return ha < hb;
  return sgn(cross(a, b)) > 0;
}

}  // namespace

Polygon::Polygon(std::vector<Point> vertices, std::string name) : name_(std::move(name)) {
  const std::size_t n = vertices.size();
  if (n < 3) throw Error(Errc::TooFewVertices, "a polygon needs at least 3 vertices");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (vertices[i] == vertices[j]) throw Error(Errc::DuplicateVertex, point_str(vertices[i]));

  Rat twice_area = signed_double_area(vertices);
  if (sgn(twice_area) == 0) throw Error(Errc::CollinearVertices, "all vertices are collinear");
  if (sgn(twice_area) < 0) {
    std::reverse(vertices.begin(), vertices.end());
    reversed_ = true;
  }

  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = vertices[i];
    const Point& b = vertices[(i + 1) % n];
    const Point& c = vertices[(i + 2) % n];
    int turn = sgn(cross(b - a, c - b));
    if (turn == 0) throw Error(Errc::CollinearVertices, "at vertex " + point_str(b));
    if (turn < 0) throw Error(Errc::NotConvex, "reflex vertex " + point_str(b));
  }
  // Every vertex strictly left of every non-incident edge; rejects
  // self-overlapping star polygons whose turns are all left.
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = vertices[i];
    Vec2 e = vertices[(i + 1) % n] - a;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i || k == (i + 1) % n) continue;
      if (sgn(cross(e, vertices[k] - a)) <= 0)
        throw Error(Errc::NotConvex, "vertex " + point_str(vertices[k]) + " not inside edge " +
                                         std::to_string(i));
    }
  }

  vertices_ = std::move(vertices);
  sides_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) sides_.push_back(vertices_[(i + 1) % n] - vertices_[i]);
  cross_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cross_[i * n + j] = cross(sides_[i], sides_[j]);
}

ValidationReport validate(std::vector<Point> vertices, std::string name) {
  Polygon poly(std::move(vertices), std::move(name));
  ValidationReport report{poly, poly.was_reversed(), poly.sides(), parallel_pairs(poly)};
  return report;
}

std::vector<std::pair<int, int>> parallel_pairs(const Polygon& poly) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < poly.size(); ++i)
    for (int j = i + 1; j < poly.size(); ++j)
      if (sgn(poly.side_cross(i, j)) == 0) out.emplace_back(i, j);
  return out;
}

Rat phase_area(const Polygon& poly) {
  Rat acc = 0;
  for (int i = 0; i < poly.size(); ++i)
    for (int j = 0; j < poly.size(); ++j)
      if (sgn(poly.side_cross(i, j)) > 0) acc += poly.side_cross(i, j);
  return acc;
}

Rat area(const Polygon& poly) { return signed_double_area(poly.vertices()) / 2; }

Polygon difference_body(const Polygon& poly) {
  std::vector<Vec2> edges;
  edges.reserve(2 * poly.sides().size());
  for (const Vec2& v : poly.sides()) {
    edges.push_back(v);
    edges.push_back(-v);
  }
  std::stable_sort(edges.begin(), edges.end(), angle_less);

  // Parallel same-direction edges merge into one.
  std::vector<Vec2> merged;
  for (const Vec2& e : edges) {
    if (!merged.empty() && sgn(cross(merged.back(), e)) == 0 && half_plane(merged.back()) == half_plane(e))
      merged.back() = merged.back() + e;
    else
      merged.push_back(e);
  }

  // The walk starts at direction angle 0, i.e. from the lowest-then-leftmost
  // vertex of D(P): lowest-leftmost of P minus highest-rightmost of P.
  auto lower_left = [](const Point& a, const Point& b) { return a.y < b.y || (a.y == b.y && a.x < b.x); };
  const auto& vs = poly.vertices();
  Point lo = *std::min_element(vs.begin(), vs.end(), lower_left);
  Point hi = *std::max_element(vs.begin(), vs.end(), lower_left);
  Point cur = lo - hi;

  std::vector<Point> out;
  out.reserve(merged.size());
  for (const Vec2& e : merged) {
    out.push_back(cur);
    cur = cur + e;
  }
  std::string name = poly.name().empty() ? std::string("D(P)") : "D(" + poly.name() + ")";
  return Polygon(std::move(out), std::move(name));
}

Polygon transform(const Polygon& poly, const Mat2& m, const Vec2& shift) {
  std::vector<Point> out;
  out.reserve(poly.vertices().size());
  for (const Point& p : poly.vertices()) out.push_back(m.apply(p) + shift);
  return Polygon(std::move(out), poly.name());
}

}  // namespace symbill
