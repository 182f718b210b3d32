#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "symbill/geometry.hpp"

namespace symbill {

// Pentagon A=(0,1), B=(0,0), C=(1,0), D=(1,1), E=(b,1+a): a unit square with
// a roof of height a whose apex sits at horizontal offset b.
// Sides in order: AB, BC, CD, DE, EA. Requires a > 0, 0 < b < 1.
Polygon penthouse(const Rat& a, const Rat& b);
// floor((a+1)/a)
long penthouse_modulus(const Rat& a);
bool penthouse_is_generic(const Rat& a);

// (0,0), (u,0), (offset+v,h), (offset,h); requires u > v > 0, h > 0.
Polygon trapezoid(const Rat& u, const Rat& v, const Rat& offset, const Rat& h);
// floor(u/(u-v))
long trapezoid_modulus(const Rat& u, const Rat& v);
bool trapezoid_is_generic(const Rat& u, const Rat& v);

// Lattice hexagon with edge directions (1,0), (1,1), (0,1) and their
// negatives, with p1, q1, r1, p2, q2, r2 unit segments per side;
// q2 = q1 + p1 - p2 and r2 = r1 - p1 + p2 must be positive.
struct HexagonSides {
  long p1, q1, r1, p2, q2, r2;
};
HexagonSides hexagon_sides(long p1, long q1, long r1, long p2);
Polygon lattice_hexagon(long p1, long q1, long r1, long p2);
long hexagon_n(const HexagonSides& h);

// Unit square of side w with a trapezoid roof from (x1, w+h) to (x2, w+h).
Polygon hexhouse(long w, long x1, long x2, long h);

// Rectangle [-W,W] x [-H,H] with top corners cut by |x| + y = c1 and bottom
// corners by |x| - y = c2. Requires max(W,H) < c1, c2 < W + H.
Polygon special_octagon(long W, long H, long c1, long c2);

// (-1,1), (-1,-1), (1,-1), (3,3)
Polygon kite();

// (0,0), (3,0), (1,2), (0,1): phase area 19, every orbit 20- or 36-periodic.
Polygon quad();

Polygon unit_square();
Polygon unit_triangle();

// Each vertex moved by an independent offset eps * (k / 1000), k uniform in
// [-1000, 1000], drawn from std::mt19937_64(seed) as (draw % 2001) - 1000,
// x before y, vertex by vertex. Throws Error{NotConvexAfterPerturbation}.
Polygon perturb(const Polygon& poly, const Rat& eps, std::uint64_t seed);

struct FamilySpec {
  std::string family;
  std::map<std::string, Rat> params;
};

Polygon build(const FamilySpec& spec);

struct ParamSchema {
  std::string name;
  std::string kind;  // "rational" or "integer"
  std::string domain;
};
struct FamilySchema {
  std::string family;
  std::string description;
  std::vector<ParamSchema> params;
};
const std::vector<FamilySchema>& family_schemas();

}  // namespace symbill
