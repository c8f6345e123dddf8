#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "entangle/errors.hpp"
#include "entangle/geometry.hpp"

namespace entangle {

/// Ordered polygonal chain. A closed chain does not repeat its first vertex;
/// its last edge runs from the final vertex back to the first.
class Chain {
 public:
  Chain() = default;

  Chain(std::vector<Point3> vertices, bool closed) : vertices_(std::move(vertices)), closed_(closed) {
    if (vertices_.size() < 2 || (closed_ && vertices_.size() < 3)) {
      throw Error("chain needs at least 2 vertices (3 when closed)");
    }
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (!is_finite(vertices_[i])) {
        throw Error("chain vertex " + std::to_string(i) + " is not finite");
      }
    }
    for (std::size_t i = 0; i < edge_count(); ++i) {
      const Segment e = edge(i);
      if (e.start == e.end) {
        throw Error("chain edge " + std::to_string(i) + " has zero length");
      }
    }
  }

  std::span<const Point3> vertices() const noexcept { return vertices_; }
  bool closed() const noexcept { return closed_; }
  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept {
    return closed_ ? vertices_.size() : vertices_.size() - 1;
  }

  Segment edge(std::size_t i) const noexcept {
    const std::size_t j = i + 1 == vertices_.size() ? 0 : i + 1;
    return {vertices_[i], vertices_[j]};
  }

  Vec3 edge_vector(std::size_t i) const noexcept { return edge(i).direction(); }

  /// Edges i < j are adjacent when consecutive, including the wraparound
  /// pair of a closed chain. The first and last edges of an open chain are
  /// not adjacent.
  bool adjacent(std::size_t i, std::size_t j) const noexcept {
    if (j < i) {
      std::swap(i, j);
    }
    if (j - i <= 1) {
      return true;
    }
    return closed_ && i == 0 && j + 1 == edge_count();
  }

  friend bool operator==(const Chain &, const Chain &) = default;

 private:
  std::vector<Point3> vertices_;
  bool closed_ = false;
};

struct Plane {
  Point3 point;
  Direction normal;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

namespace transform {

template <class F>
Chain map_vertices(const Chain &c, F &&f) {
  std::vector<Point3> out;
  out.reserve(c.vertex_count());
  for (const auto &p : c.vertices()) {
    out.push_back(f(p));
  }
  return Chain(std::move(out), c.closed());
}

/// Traverse in the opposite order. For closed chains vertex 0 stays first.
inline Chain reverse(const Chain &c) {
  std::vector<Point3> out(c.vertices().rbegin(), c.vertices().rend());
  if (c.closed()) {
    std::rotate(out.begin(), out.end() - 1, out.end());
  }
  return Chain(std::move(out), c.closed());
}

inline Chain translate(const Chain &c, const Vec3 &offset) {
  return map_vertices(c, [&](const Point3 &p) { return p + offset; });
}

inline Chain scale(const Chain &c, double factor) {
  if (!(factor > 0.0)) {
    throw Error("scale factor must be positive");
  }
  return map_vertices(c, [&](const Point3 &p) { return p * factor; });
}

inline Chain mirror(const Chain &c, const Plane &plane) {
  const Vec3 &n = plane.normal.vec();
  return map_vertices(c, [&](const Point3 &p) {
    return p - (2.0 * dot(p - plane.point, n)) * n;
  });
}

/// Applies a 3x3 matrix about the origin (rotation for rigid motions).
inline Chain linear(const Chain &c, const Matrix3 &m) {
  return map_vertices(c, [&](const Point3 &p) {
    return Point3{m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z,
                  m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z,
                  m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z};
  });
}

/// For open walks x and y with a common start, the walk
/// (y_n, ..., y_1, y_0 = x_0, x_1, ..., x_n) with the shared vertex once.
inline Chain concat_at_origin(const Chain &x, const Chain &y) {
  if (x.closed() || y.closed()) {
    throw Error("concat_at_origin requires open walks");
  }
  if (norm(x.vertices().front() - y.vertices().front()) > kGeomEps) {
    throw ConcatMismatch();
  }
  std::vector<Point3> out(y.vertices().rbegin(), y.vertices().rend());
  out.insert(out.end(), x.vertices().begin() + 1, x.vertices().end());
  return Chain(std::move(out), false);
}

}  // namespace transform
}  // namespace entangle
