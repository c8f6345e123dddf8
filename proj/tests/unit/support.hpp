#pragma once

#include <cmath>
#include <numbers>

#include "entangle/entangle.hpp"

namespace entangle::testing {

inline Segment random_segment(KeyedRng &rng) { return {rng.unit_cube_point(), rng.unit_cube_point()}; }

/// Random pair kept at least `gap` apart.
inline std::pair<Segment, Segment> random_pair(KeyedRng &rng, double gap = 1e-3) {
  for (;;) {
    Segment a = random_segment(rng), b = random_segment(rng);
    if (segment_distance(a, b) >= gap) {
      return {a, b};
    }
  }
}

inline Segment reversed(const Segment &s) { return {s.end, s.start}; }

/// Rotation about a unit axis by angle t (Rodrigues).
inline Matrix3 rotation(Vec3 axis, double t) {
  axis = axis * (1.0 / norm(axis));
  const double c = std::cos(t), s = std::sin(t), k = 1.0 - c;
  const double x = axis.x, y = axis.y, z = axis.z;
  return {{{c + x * x * k, x * y * k - z * s, x * z * k + y * s},
           {y * x * k + z * s, c + y * y * k, y * z * k - x * s},
           {z * x * k - y * s, z * y * k + x * s, c + z * z * k}}};
}

inline Vec3 apply(const Matrix3 &m, const Vec3 &p) {
  return {m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z, m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z,
          m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z};
}

/// Four-arcsin form of the pair solid angle over 4 pi, written independently
/// of the library kernel. Sign convention matches seg_pair_linking.
inline double arcsin_pair_linking(const Segment &a, const Segment &b) {
  const Vec3 r1 = a.start, r2 = a.end, r3 = b.start, r4 = b.end;
  auto unit = [](const Vec3 &v) { return v * (1.0 / norm(v)); };
  const Vec3 r13 = r3 - r1, r14 = r4 - r1, r23 = r3 - r2, r24 = r4 - r2;
  const Vec3 n1 = unit(cross(r13, r14)), n2 = unit(cross(r14, r24)), n3 = unit(cross(r24, r23)),
             n4 = unit(cross(r23, r13));
  auto as = [](double x) { return std::asin(std::clamp(x, -1.0, 1.0)); };
  const double omega = as(dot(n1, n2)) + as(dot(n2, n3)) + as(dot(n3, n4)) + as(dot(n4, n1));
  const double sign = triple(r4 - r3, r2 - r1, r13) > 0 ? 1.0 : -1.0;
  return sign * omega / (4.0 * std::numbers::pi);
}

inline double frac_distance(double x) { return std::abs(x - std::round(x)); }

}  // namespace entangle::testing
