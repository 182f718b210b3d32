#pragma once

#include <string>
#include <utility>
#include <vector>

#include "symbill/rational.hpp"

namespace symbill {

struct Vec2 {
  Rat x;
  Rat y;

  friend bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }
};
using Point = Vec2;

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
inline Vec2 operator*(const Rat& k, const Vec2& a) { return {k * a.x, k * a.y}; }

// Determinant [u, v] = u.x v.y - u.y v.x.
inline Rat cross(const Vec2& u, const Vec2& v) { return u.x * v.y - u.y * v.x; }

// 2x2 rational matrix acting on column vectors.
struct Mat2 {
  Rat a, b, c, d;
  Vec2 apply(const Vec2& p) const { return {a * p.x + b * p.y, c * p.x + d * p.y}; }
  Rat det() const { return a * d - b * c; }
};

// Strictly convex, counterclockwise polygon with exact vertices. Sides are
// v_i = P_{i+1} - P_i with cyclic indices.
class Polygon {
 public:
  // Validates and normalizes: clockwise input is reversed, never rejected.
  // Throws Error{DuplicateVertex, CollinearVertices, NotConvex, TooFewVertices}.
  explicit Polygon(std::vector<Point> vertices, std::string name = {});

  int size() const { return static_cast<int>(vertices_.size()); }
  const Point& vertex(int i) const { return vertices_[static_cast<std::size_t>(wrap(i))]; }
  const Vec2& side(int i) const { return sides_[static_cast<std::size_t>(wrap(i))]; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Vec2>& sides() const { return sides_; }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  // Whether the constructor reversed a clockwise input.
  bool was_reversed() const { return reversed_; }

  // cross(v_i, v_j), cached.
  const Rat& side_cross(int i, int j) const {
    return cross_[static_cast<std::size_t>(wrap(i) * size() + wrap(j))];
  }

  int wrap(int i) const {
    int n = size();
    return ((i % n) + n) % n;
  }

  friend bool operator==(const Polygon& a, const Polygon& b) { return a.vertices_ == b.vertices_; }

 private:
  std::vector<Point> vertices_;
  std::vector<Vec2> sides_;
  std::vector<Rat> cross_;
  std::string name_;
  bool reversed_ = false;
};

struct ValidationReport {
  Polygon polygon;
  bool reversed = false;
  std::vector<Vec2> side_directions;
  std::vector<std::pair<int, int>> parallel_pairs;  // unordered, i < j
};

ValidationReport validate(std::vector<Point> vertices, std::string name = {});

// Unordered side pairs {i, j}, i < j, with cross(v_i, v_j) = 0.
std::vector<std::pair<int, int>> parallel_pairs(const Polygon& poly);

// Sum of cross(v_i, v_j) over ordered pairs with cross(v_i, v_j) > 0.
Rat phase_area(const Polygon& poly);

// Shoelace area, positive for a valid polygon.
Rat area(const Polygon& poly);

// Minkowski sum P + (-P), by angular merge of the edge vectors.
Polygon difference_body(const Polygon& poly);

Polygon transform(const Polygon& poly, const Mat2& m, const Vec2& shift = {});

}  // namespace symbill
