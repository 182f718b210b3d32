#include "symbill/families.hpp"

#include <random>

namespace symbill {

namespace {

Point pt(const Rat& x, const Rat& y) { return {x, y}; }
Point pt(long x, long y) { return {Rat(x), Rat(y)}; }

long floor_long(const Rat& r) { return floor_rat(r).get_num().get_si(); }

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::ParamOutOfRange, what);
}

// Lattice constructors report lost strict convexity as NotConvex.
Polygon lattice_polygon(std::vector<Point> vs, std::string name) {
  try {
    return Polygon(std::move(vs), std::move(name));
  } catch (const Error& e) {
    if (e.code() == Errc::CollinearVertices) throw Error(Errc::NotConvex, e.what());
    throw;
  }
}

}  // namespace

Polygon penthouse(const Rat& a, const Rat& b) {
  require(sgn(a) > 0, "penthouse needs a > 0");
  require(sgn(b) > 0 && b < 1, "penthouse needs 0 < b < 1");
  return Polygon({pt(0, 1), pt(0, 0), pt(1, 0), pt(1, 1), pt(b, 1 + a)},
                 "penthouse(a=" + to_string(a) + ",b=" + to_string(b) + ")");
}

long penthouse_modulus(const Rat& a) {
  require(sgn(a) > 0, "modulus needs a > 0");
  return floor_long((a + 1) / a);
}

bool penthouse_is_generic(const Rat& a) { return Rat((a + 1) / a).get_den() != 1; }

Polygon trapezoid(const Rat& u, const Rat& v, const Rat& offset, const Rat& h) {
  require(u > v && sgn(v) > 0, "trapezoid needs u > v > 0");
  require(sgn(h) > 0, "trapezoid needs h > 0");
  return lattice_polygon({pt(0, 0), pt(u, 0), pt(offset + v, h), pt(offset, h)},
                         "trapezoid(u=" + to_string(u) + ",v=" + to_string(v) + ",offset=" +
                             to_string(offset) + ",h=" + to_string(h) + ")");
}

long trapezoid_modulus(const Rat& u, const Rat& v) {
  require(u > v && sgn(v) > 0, "trapezoid needs u > v > 0");
  return floor_long(u / (u - v));
}

bool trapezoid_is_generic(const Rat& u, const Rat& v) { return Rat(u / (u - v)).get_den() != 1; }

HexagonSides hexagon_sides(long p1, long q1, long r1, long p2) {
  require(p1 > 0 && q1 > 0 && r1 > 0 && p2 > 0, "hexagon side counts must be positive");
  HexagonSides h{p1, q1, r1, p2, q1 + p1 - p2, r1 - p1 + p2};
  if (h.q2 <= 0 || h.r2 <= 0)
    throw Error(Errc::ClosureViolated, "q2 = " + std::to_string(h.q2) + ", r2 = " + std::to_string(h.r2));
  return h;
}

Polygon lattice_hexagon(long p1, long q1, long r1, long p2) {
  HexagonSides h = hexagon_sides(p1, q1, r1, p2);
  const long dirs[6][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}};
  const long counts[6] = {h.p1, h.q1, h.r1, h.p2, h.q2, h.r2};
  std::vector<Point> vs;
  long x = 0, y = 0;
  for (int k = 0; k < 6; ++k) {
    vs.push_back(pt(x, y));
    x += counts[k] * dirs[k][0];
    y += counts[k] * dirs[k][1];
  }
  if (x != 0 || y != 0) throw Error(Errc::ClosureViolated, "edge vectors do not close");
  return Polygon(std::move(vs), "hexagon(" + std::to_string(p1) + "," + std::to_string(q1) + "," +
                                    std::to_string(r1) + "," + std::to_string(p2) + ")");
}

long hexagon_n(const HexagonSides& h) {
  return h.p1 * h.q1 + h.q1 * h.r1 + h.r1 * h.p2 + h.p2 * h.q2 + h.q2 * h.r2 + h.r2 * h.p1 +
         h.p1 * h.r1 + h.q1 * h.p2 + h.r1 * h.q2 + h.p2 * h.r2 + h.q2 * h.p1 + h.r2 * h.q1;
}

Polygon hexhouse(long w, long x1, long x2, long h) {
  require(w > 0 && h > 0, "hexhouse needs w > 0, h > 0");
  require(0 <= x1 && x1 < x2 && x2 <= w, "hexhouse needs 0 <= x1 < x2 <= w");
  require(!(x1 == 0 && x2 == w), "hexhouse roof degenerates to a rectangle");
  return lattice_polygon({pt(0, 0), pt(w, 0), pt(w, w), pt(x2, w + h), pt(x1, w + h), pt(0, w)},
                         "hexhouse(w=" + std::to_string(w) + ",x1=" + std::to_string(x1) +
                             ",x2=" + std::to_string(x2) + ",h=" + std::to_string(h) + ")");
}

Polygon special_octagon(long W, long H, long c1, long c2) {
  require(W > 0 && H > 0, "octagon needs W, H > 0");
  const long lo = std::max(W, H);
  require(lo < c1 && c1 < W + H && lo < c2 && c2 < W + H, "octagon needs max(W,H) < c1, c2 < W+H");
  std::vector<Point> vs{pt(-(c2 - H), -H), pt(c2 - H, -H), pt(W, W - c2), pt(W, c1 - W),
                        pt(c1 - H, H),     pt(-(c1 - H), H), pt(-W, c1 - W), pt(-W, W - c2)};
  return Polygon(std::move(vs), "octagon(W=" + std::to_string(W) + ",H=" + std::to_string(H) +
                                    ",c1=" + std::to_string(c1) + ",c2=" + std::to_string(c2) + ")");
}

Polygon kite() { return Polygon({pt(-1, 1), pt(-1, -1), pt(1, -1), pt(3, 3)}, "kite"); }

Polygon quad() { return Polygon({pt(0, 0), pt(3, 0), pt(1, 2), pt(0, 1)}, "quad"); }

Polygon unit_square() { return Polygon({pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)}, "square"); }

Polygon unit_triangle() { return Polygon({pt(0, 0), pt(1, 0), pt(0, 1)}, "triangle"); }

Polygon perturb(const Polygon& poly, const Rat& eps, std::uint64_t seed) {
  require(sgn(eps) >= 0, "perturbation size must be nonnegative");
  if (sgn(eps) == 0) return poly;
  std::mt19937_64 gen(seed);
  auto offset = [&] {
    long k = static_cast<long>(gen() % 2001) - 1000;
    return Rat(eps * make_rat(k, 1000));
  };
  std::vector<Point> vs;
  for (const Point& p : poly.vertices()) {
    Rat dx = offset();
    Rat dy = offset();
    vs.push_back(pt(p.x + dx, p.y + dy));
  }
  try {
    return Polygon(std::move(vs), poly.name().empty() ? "perturbed" : "perturbed " + poly.name());
  } catch (const Error& e) {
    throw Error(Errc::NotConvexAfterPerturbation, e.what());
  }
}

namespace {

const Rat& param(const FamilySpec& spec, const std::string& key) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) throw Error(Errc::ParamOutOfRange, spec.family + " needs parameter '" + key + "'");
  return it->second;
}

long int_param(const FamilySpec& spec, const std::string& key) {
  const Rat& r = param(spec, key);
  if (r.get_den() != 1 || !r.get_num().fits_slong_p())
    throw Error(Errc::ParamOutOfRange, "parameter '" + key + "' must be an integer");
  return r.get_num().get_si();
}

}  // namespace

Polygon build(const FamilySpec& spec) {
  const std::string& f = spec.family;
  if (f == "penthouse") return penthouse(param(spec, "a"), param(spec, "b"));
  if (f == "trapezoid") {
    Rat offset = spec.params.count("offset") ? param(spec, "offset") : Rat(0);
    Rat h = spec.params.count("h") ? param(spec, "h") : Rat(1);
    return trapezoid(param(spec, "u"), param(spec, "v"), offset, h);
  }
  if (f == "lattice_hexagon")
    return lattice_hexagon(int_param(spec, "p1"), int_param(spec, "q1"), int_param(spec, "r1"),
                           int_param(spec, "p2"));
  if (f == "hexhouse")
    return hexhouse(int_param(spec, "w"), int_param(spec, "x1"), int_param(spec, "x2"), int_param(spec, "h"));
  if (f == "special_octagon")
    return special_octagon(int_param(spec, "W"), int_param(spec, "H"), int_param(spec, "c1"),
                           int_param(spec, "c2"));
  if (f == "kite") return kite();
  if (f == "quad") return quad();
  if (f == "square") return unit_square();
  if (f == "triangle") return unit_triangle();
  throw Error(Errc::ParamOutOfRange, "unknown family '" + f + "'");
}

const std::vector<FamilySchema>& family_schemas() {
  static const std::vector<FamilySchema> schemas{
      {"penthouse",
       "unit square with a triangular roof of height a, apex offset b",
       {{"a", "rational", "a > 0"}, {"b", "rational", "0 < b < 1"}}},
      {"trapezoid",
       "parallel sides u (bottom) and v (top) at height h, top shifted by offset",
       {{"u", "rational", "u > v"},
        {"v", "rational", "v > 0"},
        {"offset", "rational", "convex; default 0"},
        {"h", "rational", "h > 0; default 1"}}},
      {"lattice_hexagon",
       "lattice hexagon with side slopes 0, 1, infinity",
       {{"p1", "integer", ">= 1"},
        {"q1", "integer", ">= 1"},
        {"r1", "integer", ">= 1"},
        {"p2", "integer", ">= 1, with q1+p1-p2 > 0 and r1-p1+p2 > 0"}}},
      {"hexhouse",
       "square of side w with a trapezoid roof of height h spanning x1..x2",
       {{"w", "integer", ">= 1"},
        {"x1", "integer", "0 < x1 < x2"},
        {"x2", "integer", "x1 < x2 < w"},
        {"h", "integer", ">= 1"}}},
      {"special_octagon",
       "rectangle [-W,W]x[-H,H] with corners cut by |x|+y=c1 and |x|-y=c2",
       {{"W", "integer", ">= 1"},
        {"H", "integer", ">= 1"},
        {"c1", "integer", "max(W,H) < c1 < W+H"},
        {"c2", "integer", "max(W,H) < c2 < W+H"}}},
      {"kite", "the kite (-1,1), (-1,-1), (1,-1), (3,3)", {}},
      {"quad", "the fully periodic quadrilateral with periods 20 and 36", {}},
      {"square", "unit square", {}},
      {"triangle", "unit right triangle", {}},
  };
  return schemas;
}

}  // namespace symbill
