#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"

using namespace entangle;
using namespace entangle::testing;

namespace {

// Frozen from an independent double-integral quadrature (scipy dblquad).
constexpr double kExamplePairLinking = -0.29516723530086653;
// atan2 of the two explicit binormals (z x ... ) for e1 = x, e2 = y, e3 = z.
constexpr double kRightAngleTurn = 1.5707963267948966;

const Segment kA{{0, 0, 0}, {1, 0, 0}};
const Segment kB{{0.5, -0.5, 0.25}, {0.5, 0.5, 0.25}};

}  // namespace

TEST(SegPairLinking, CoplanarPairIsZero) {
  EXPECT_EQ(seg_pair_linking(kA, Segment{{0, 1, 0}, {1, 1, 0}}), 0.0);
}

TEST(SegPairLinking, SymmetricUnderSwap) {
  const Segment b{{0.3, 0.4, 0.5}, {0.7, -0.2, 0.8}};
  EXPECT_NEAR(seg_pair_linking(kA, b), seg_pair_linking(b, kA), 1e-15);
}

TEST(SegPairLinking, MatchesFrozenQuadrature) {
  EXPECT_NEAR(seg_pair_linking(kA, kB), kExamplePairLinking, 1e-8);
}

TEST(SegPairLinking, ReversalAntisymmetry) {
  KeyedRng rng(11);
  for (int k = 0; k < 500; ++k) {
    const auto [a, b] = random_pair(rng);
    const double l = seg_pair_linking(a, b);
    EXPECT_NEAR(seg_pair_linking(reversed(a), b), -l, 1e-13);
    EXPECT_NEAR(seg_pair_linking(a, reversed(b)), -l, 1e-13);
    EXPECT_NEAR(seg_pair_linking(reversed(a), reversed(b)), l, 1e-13);
  }
}

TEST(SegPairLinking, BoundedByOneHalf) {
  KeyedRng rng(12);
  for (int k = 0; k < 2000; ++k) {
    const auto [a, b] = random_pair(rng, 1e-9);
    EXPECT_LE(std::abs(seg_pair_linking(a, b)), 0.5 + 1e-12);
  }
  // Long, nearly touching perpendicular segments approach the bound.
  const double l = seg_pair_linking({{-1e3, 0, 0}, {1e3, 0, 0}}, {{0, -1e3, 1e-3}, {0, 1e3, 1e-3}});
  EXPECT_NEAR(std::abs(l), 0.5, 1e-3);
}

TEST(SegPairLinking, RigidMotionAndScaleInvariance) {
  KeyedRng rng(13);
  for (int k = 0; k < 300; ++k) {
    const auto [a, b] = random_pair(rng);
    const Matrix3 r = rotation(rng.unit_vector(), 6.0 * rng.uniform());
    const Vec3 t = rng.unit_vector() * 5.0;
    auto move = [&](const Segment &s) { return Segment{apply(r, s.start) + t, apply(r, s.end) + t}; };
    const double s = 0.01 + 100.0 * rng.uniform();
    auto grow = [&](const Segment &x) { return Segment{x.start * s, x.end * s}; };
    const double l = seg_pair_linking(a, b);
    EXPECT_NEAR(seg_pair_linking(move(a), move(b)), l, 1e-10);
    EXPECT_NEAR(seg_pair_linking(grow(a), grow(b)), l, 1e-10);
  }
}

TEST(SegPairLinking, AgreesWithArcsinForm) {
  KeyedRng rng(14);
  for (int k = 0; k < 1000; ++k) {
    const auto [a, b] = random_pair(rng);
    EXPECT_NEAR(seg_pair_linking(a, b), arcsin_pair_linking(a, b), 1e-10);
  }
  EXPECT_NEAR(arcsin_pair_linking(kA, kB), kExamplePairLinking, 1e-12);
}

TEST(SegPairLinking, SharedEndpointIsDegenerate) {
  try {
    seg_pair_linking(kA, Segment{{1, 0, 0}, {1, 1, 1}});
    FAIL() << "expected DegeneratePair";
  } catch (const DegeneratePair &e) {
    EXPECT_EQ(e.reason(), DegeneratePair::Reason::shared_endpoint);
  }
}

TEST(SegPairLinking, IntersectingPairIsDegenerate) {
  try {
    seg_pair_linking(kA, Segment{{0.5, -1, 0}, {0.5, 1, 0}});
    FAIL() << "expected DegeneratePair";
  } catch (const DegeneratePair &e) {
    EXPECT_EQ(e.reason(), DegeneratePair::Reason::too_close);
  }
}

TEST(SegmentDistance, Basic) {
  EXPECT_NEAR(segment_distance(kA, kB), 0.25, 1e-15);
  EXPECT_NEAR(segment_distance(kA, Segment{{2, 1, 0}, {3, 1, 0}}), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(segment_distance(kA, Segment{{0, 1, 0}, {1, 1, 0}}), 1.0, 1e-15);
}

TEST(DirectionType, NormalizesAndRejectsZero) {
  const Direction d({3, 0, 4});
  EXPECT_NEAR(norm(d.vec()), 1.0, 1e-12);
  EXPECT_NEAR(d.vec().x, 0.6, 1e-15);
  EXPECT_THROW(Direction({0, 0, 0}), Error);
}

TEST(SignedCrossing, ReversingOneEdgeFlipsSign) {
  const Segment a{{0, -1, 1}, {0, 1, 1}};
  const Segment b{{-1, 0, 0}, {1, 0, 0}};
  const Direction z({0, 0, 1});
  const int s = signed_crossing(a, b, z);
  EXPECT_NE(s, 0);
  EXPECT_EQ(signed_crossing(reversed(a), b, z), -s);
  EXPECT_EQ(signed_crossing(a, reversed(b), z), -s);
  EXPECT_EQ(signed_crossing(b, a, z), s);
}

TEST(SignedCrossing, DisjointProjectionsGiveZero) {
  EXPECT_EQ(signed_crossing(kA, Segment{{2, 1, 0}, {3, 1, 0}}, Direction({0, 0, 1})), 0);
}

TEST(SignedCrossing, ViewingFromBelowKeepsSign) {
  const Segment a{{0, -1, 1}, {0, 1, 1}};
  const Segment b{{-1, 0, 0}, {1, 0, 0}};
  EXPECT_EQ(signed_crossing(a, b, Direction({0, 0, 1})), signed_crossing(a, b, Direction({0, 0, -1})));
}

TEST(SignedCrossing, DegenerateProjectionThrows) {
  // Projected crossing lands on an endpoint of b.
  EXPECT_THROW(signed_crossing(Segment{{0, -1, 1}, {0, 1, 1}}, Segment{{0, 0, 0}, {1, 0, 0}}, Direction({0, 0, 1})),
               DegenerateProjection);
}

TEST(SignedCrossing, DirectionAverageIsTwiceLinking) {
  KeyedRng rng(15);
  const int ndirs = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int k = 0; k < ndirs;) {
    try {
      const double e = signed_crossing(kA, kB, rng.direction());
      sum += e;
      sum2 += e * e;
      ++k;
    } catch (const DegenerateProjection &) {
    }
  }
  const double mean = sum / ndirs;
  const double se = std::sqrt((sum2 / ndirs - mean * mean) / (ndirs - 1));
  EXPECT_LE(std::abs(mean - 2.0 * seg_pair_linking(kA, kB)), 3.0 * se);
}

TEST(BinormalAngle, CoplanarEdgesGiveZero) {
  EXPECT_NEAR(binormal_angle({1, 0, 0}, {0, 1, 0}, {-1, 0.3, 0}), 0.0, 1e-15);
}

TEST(BinormalAngle, FrozenRightAngle) {
  EXPECT_NEAR(binormal_angle({1, 0, 0}, {0, 1, 0}, {0, 0, 1}), kRightAngleTurn, 1e-12);
}

TEST(BinormalAngle, MirrorNegates) {
  KeyedRng rng(16);
  for (int k = 0; k < 200; ++k) {
    const Vec3 e1 = rng.unit_vector(), e2 = rng.unit_vector(), e3 = rng.unit_vector();
    auto m = [](Vec3 v) { return Vec3{v.x, v.y, -v.z}; };
    EXPECT_NEAR(binormal_angle(m(e1), m(e2), m(e3)), -binormal_angle(e1, e2, e3), 1e-12);
  }
}

TEST(BinormalAngle, RotationInvariant) {
  KeyedRng rng(17);
  for (int k = 0; k < 200; ++k) {
    const Vec3 e1 = rng.unit_vector(), e2 = rng.unit_vector(), e3 = rng.unit_vector();
    const Matrix3 r = rotation(rng.unit_vector(), 6.0 * rng.uniform());
    EXPECT_NEAR(binormal_angle(apply(r, e1), apply(r, e2), apply(r, e3)), binormal_angle(e1, e2, e3), 1e-10);
  }
}

TEST(BinormalAngle, ParallelTurnThrows) {
  EXPECT_THROW(binormal_angle({1, 0, 0}, {2, 0, 0}, {0, 1, 0}), DegenerateTurn);
  EXPECT_EQ(binormal_angle_or_zero({1, 0, 0}, {2, 0, 0}, {0, 1, 0}), 0.0);
}
