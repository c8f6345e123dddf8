#pragma once

// Per-edge-pair kernels for polygonal chains: the exact Gauss linking
// integral of two straight segments, signed crossings of projected diagrams,
// and the signed binormal (torsion) angle at a vertex.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "entangle/errors.hpp"

namespace entangle {

/// Absolute tolerance for degeneracy tests; chains live in (or near) the unit cube.
inline constexpr double kGeomEps = 1e-12;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 &operator+=(const Vec3 &o) noexcept {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3 &operator-=(const Vec3 &o) noexcept {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3 &operator*=(double s) noexcept {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3 &b) noexcept { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3 &b) noexcept { return a -= b; }
  friend constexpr Vec3 operator*(Vec3 a, double s) noexcept { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) noexcept { return a *= s; }
  friend constexpr Vec3 operator-(const Vec3 &a) noexcept { return {-a.x, -a.y, -a.z}; }
  friend constexpr bool operator==(const Vec3 &, const Vec3 &) = default;
};

/// Vertex positions share the vector representation.
using Point3 = Vec3;

constexpr double dot(const Vec3 &a, const Vec3 &b) noexcept {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

constexpr Vec3 cross(const Vec3 &a, const Vec3 &b) noexcept {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// a . (b x c)
constexpr double triple(const Vec3 &a, const Vec3 &b, const Vec3 &c) noexcept {
  return dot(a, cross(b, c));
}

inline double norm(const Vec3 &a) noexcept { return std::sqrt(dot(a, a)); }

inline bool is_finite(const Vec3 &a) noexcept {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

struct Segment {
  Point3 start;
  Point3 end;

  constexpr Vec3 direction() const noexcept { return end - start; }
  constexpr Segment reversed() const noexcept { return {end, start}; }
  constexpr Point3 at(double t) const noexcept { return start + t * (end - start); }
};

/// Unit vector on the sphere; construction normalizes.
class Direction {
 public:
  explicit Direction(const Vec3 &v) {
    const double len = norm(v);
    if (!(len > kGeomEps) || !std::isfinite(len)) {
      throw Error("direction vector must be finite and non-zero");
    }
    unit_ = v * (1.0 / len);
  }

  const Vec3 &vec() const noexcept { return unit_; }

 private:
  Vec3 unit_;
};

/// Minimum Euclidean distance between two closed segments.
inline double segment_distance(const Segment &a, const Segment &b) noexcept {
  const Vec3 d1 = a.direction();
  const Vec3 d2 = b.direction();
  const Vec3 r = a.start - b.start;
  const double aa = dot(d1, d1);
  const double ee = dot(d2, d2);
  const double ff = dot(d2, r);
  const double cc = dot(d1, r);
  const double bb = dot(d1, d2);
  const double denom = aa * ee - bb * bb;

  double s = 0.0;
  if (denom > 1e-30 * aa * ee) {
    s = std::clamp((bb * ff - cc * ee) / denom, 0.0, 1.0);
  }
  double t = (bb * s + ff) / ee;
  if (t < 0.0) {
    t = 0.0;
    s = std::clamp(-cc / aa, 0.0, 1.0);
  } else if (t > 1.0) {
    t = 1.0;
    s = std::clamp((bb - cc) / aa, 0.0, 1.0);
  }
  return norm((a.start + s * d1) - (b.start + t * d2));
}

namespace detail {

// Signed solid angle of the spherical triangle spanned by three vectors
// (van Oosterom & Strackee).
inline double triangle_solid_angle(const Vec3 &r1, const Vec3 &r2, const Vec3 &r3) noexcept {
  const double l1 = norm(r1);
  const double l2 = norm(r2);
  const double l3 = norm(r3);
  const double num = triple(r1, r2, r3);
  const double den = l1 * l2 * l3 + dot(r1, r2) * l3 + dot(r1, r3) * l2 + dot(r2, r3) * l1;
  return 2.0 * std::atan2(num, den);
}

inline void check_pair(const Segment &a, const Segment &b) {
  const std::array<const Point3 *, 2> pa{&a.start, &a.end};
  const std::array<const Point3 *, 2> pb{&b.start, &b.end};
  for (const auto *p : pa) {
    for (const auto *q : pb) {
      if (norm(*p - *q) < kGeomEps) {
        throw DegeneratePair(DegeneratePair::Reason::shared_endpoint);
      }
    }
  }
  if (segment_distance(a, b) < kGeomEps) {
    throw DegeneratePair(DegeneratePair::Reason::too_close);
  }
}

}  // namespace detail

/// Exact Gauss linking integral of two straight oriented segments,
/// (1/4pi) times the signed solid angle of the geodesic quadrangle traced by
/// the unit difference vectors. Symmetric in its arguments, odd under
/// reversal of either segment, bounded by 1/2 in magnitude.
inline double seg_pair_linking(const Segment &a, const Segment &b) {
  detail::check_pair(a, b);
  const Vec3 v0 = a.start - b.start;
  const Vec3 v1 = a.end - b.start;
  const Vec3 v2 = a.end - b.end;
  const Vec3 v3 = a.start - b.end;
  const double omega =
      detail::triangle_solid_angle(v0, v1, v2) + detail::triangle_solid_angle(v0, v2, v3);
  return -omega / (4.0 * std::numbers::pi);
}

/// Crossing sign of the projections of a and b onto the plane orthogonal to
/// xi, viewed from +xi: 0 when the projections miss, otherwise the sign of
/// (over x under) . xi. Throws DegenerateProjection off general position.
inline int signed_crossing(const Segment &a, const Segment &b, const Direction &xi) {
  const Vec3 &k = xi.vec();
  // Any orthonormal frame (u, v, k) with u x v = k.
  const Vec3 helper = std::abs(k.x) < 0.6 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  Vec3 u = cross(helper, k);
  u *= 1.0 / norm(u);
  const Vec3 v = cross(k, u);

  const Vec3 da = a.direction();
  const Vec3 db = b.direction();
  const Vec3 w = b.start - a.start;
  const double dax = dot(da, u), day = dot(da, v);
  const double dbx = dot(db, u), dby = dot(db, v);
  const double wx = dot(w, u), wy = dot(w, v);

  const double denom = dax * dby - day * dbx;
  const double la = std::hypot(dax, day);
  const double lb = std::hypot(dbx, dby);
  if (la < kGeomEps || lb < kGeomEps) {
    throw DegenerateProjection();
  }
  if (std::abs(denom) < kGeomEps * la * lb) {
    // Parallel projections: only collinear overlap is degenerate.
    const double offset = (wx * day - wy * dax) / la;
    if (std::abs(offset) > kGeomEps) {
      return 0;
    }
    const double s0 = (wx * dax + wy * day) / (la * la);
    const double s1 = s0 + (dbx * dax + dby * day) / (la * la);
    if (std::max(s0, s1) < -kGeomEps || std::min(s0, s1) > 1.0 + kGeomEps) {
      return 0;
    }
    throw DegenerateProjection();
  }

  const double t = (wx * dby - wy * dbx) / denom;
  const double s = (wx * day - wy * dax) / denom;
  const double tol_t = kGeomEps / la;
  const double tol_s = kGeomEps / lb;
  if (t < -tol_t || t > 1.0 + tol_t || s < -tol_s || s > 1.0 + tol_s) {
    return 0;
  }
  if (t < tol_t || t > 1.0 - tol_t || s < tol_s || s > 1.0 - tol_s) {
    throw DegenerateProjection();
  }

  const double height = dot(a.at(t) - b.at(s), k);
  if (std::abs(height) < kGeomEps) {
    throw DegenerateProjection();
  }
  const double orient = dot(cross(da, db), k);
  return (height > 0.0) == (orient > 0.0) ? 1 : -1;
}

/// Signed angle from the binormal of (e1, e2) to the binormal of (e2, e3),
/// positive when the rotation is right-handed about e2. Range (-pi, pi];
/// exactly antiparallel binormals (a planar inflection) give pi. Throws DegenerateTurn if either consecutive pair is (anti)parallel.
inline double binormal_angle(const Vec3 &e1, const Vec3 &e2, const Vec3 &e3) {
  const Vec3 n1 = cross(e1, e2);
  const Vec3 n2 = cross(e2, e3);
  const double l1 = norm(n1);
  const double l2 = norm(n2);
  const double len2 = norm(e2);
  if (l1 < kGeomEps * norm(e1) * len2 || l2 < kGeomEps * len2 * norm(e3)) {
    throw DegenerateTurn();
  }
  const Vec3 b1 = n1 * (1.0 / l1);
  const Vec3 b2 = n2 * (1.0 / l2);
  // + 0.0 maps -0 to +0 so the antiparallel case is pi, not -pi.
  return std::atan2(dot(cross(b1, b2), e2) / len2 + 0.0, dot(b1, b2));
}

/// binormal_angle with parallel turns contributing zero.
inline double binormal_angle_or_zero(const Vec3 &e1, const Vec3 &e2, const Vec3 &e3) noexcept {
  try {
    return binormal_angle(e1, e2, e3);
  } catch (const DegenerateTurn &) {
    return 0.0;
  }
}

}  // namespace entangle
