#pragma once

// Slow, independent estimators used to certify the exact kernels:
// brute-force quadrature of the Gauss integrand and direction sampling of
// projected-diagram crossing sums.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <queue>
#include <vector>

#include "entangle/chain.hpp"
#include "entangle/geometry.hpp"
#include "entangle/measures.hpp"
#include "entangle/rng.hpp"

namespace entangle::oracle {

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t directions = 0;
  std::size_t resampled = 0;  ///< directions redrawn for lack of general position
};

namespace detail {

struct GaussRule {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

// Gauss-Legendre nodes by Newton iteration on P_n, mapped to [0, 1].
inline GaussRule make_gauss_legendre(std::size_t n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

inline const GaussRule &coarse_rule() {
  static const GaussRule rule = make_gauss_legendre(8);
  return rule;
}

inline const GaussRule &fine_rule() {
  static const GaussRule rule = make_gauss_legendre(13);
  return rule;
}

struct Cell {
  double t0, s0, h;
  double value;
  double error;
  bool operator<(const Cell &o) const noexcept { return error < o.error; }
};

}  // namespace detail

/// Gauss linking integrand of two straight segments at parameters (t, s),
/// without the 1/4pi factor: (a', b', a(t) - b(s)) / |a(t) - b(s)|^3.
inline double gauss_integrand(const Segment &a, const Segment &b, double t, double s) noexcept {
  const Vec3 r = a.at(t) - b.at(s);
  const double len = norm(r);
  return triple(a.direction(), b.direction(), r) / (len * len * len);
}

/// Adaptive tensor Gauss-Legendre quadrature of the pair linking integral to
/// absolute tolerance `tol`. Cells are split dyadically, worst error first.
/// Throws QuadratureFailure if `max_cells` is exhausted.
inline double seg_pair_quadrature(const Segment &a, const Segment &b, double tol,
                                  std::size_t max_cells = 400000) {
  const double scale = 1.0 / (4.0 * std::numbers::pi);
  auto integrate_cell = [&](double t0, double s0, double h) {
    auto apply = [&](const detail::GaussRule &rule) {
      double sum = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
          row += rule.weights[j] * gauss_integrand(a, b, t0 + h * rule.nodes[i], s0 + h * rule.nodes[j]);
        }
        sum += rule.weights[i] * row;
      }
      return sum * h * h * scale;
    };
    const double fine = apply(detail::fine_rule());
    const double coarse = apply(detail::coarse_rule());
    return detail::Cell{t0, s0, h, fine, std::abs(fine - coarse)};
  };

  std::priority_queue<detail::Cell> cells;
  cells.push(integrate_cell(0.0, 0.0, 1.0));
  double total = cells.top().value;
  double error = cells.top().error;
  std::size_t count = 1;
  while (error > tol) {
    if (count >= max_cells) {
      throw QuadratureFailure("pair quadrature did not reach tolerance");
    }
    const detail::Cell worst = cells.top();
    cells.pop();
    total -= worst.value;
    error -= worst.error;
    const double h = 0.5 * worst.h;
    for (const auto &[dt, ds] : std::array<std::array<double, 2>, 4>{{{0, 0}, {1, 0}, {0, 1}, {1, 1}}}) {
      detail::Cell child = integrate_cell(worst.t0 + dt * h, worst.s0 + ds * h, h);
      total += child.value;
      error += child.error;
      cells.push(child);
    }
    count += 3;
  }
  // Re-sum to drop the running-update rounding.
  double sum = 0.0;
  while (!cells.empty()) {
    sum += cells.top().value;
    cells.pop();
  }
  return sum;
}

namespace detail {

template <class DiagramSum>
Estimate sample_directions(std::size_t ndirs, KeyedRng &rng, DiagramSum &&diagram_sum) {
  Estimate est;
  est.directions = ndirs;
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k < ndirs; ++k) {
    double value = 0.0;
    for (;;) {
      const Direction xi = rng.direction();
      try {
        value = diagram_sum(xi);
        break;
      } catch (const DegenerateProjection &) {
        ++est.resampled;
      }
    }
    const double delta = value - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (value - mean);
  }
  est.mean = mean;
  est.std_error = ndirs > 1 ? std::sqrt(m2 / static_cast<double>(ndirs - 1) / static_cast<double>(ndirs)) : 0.0;
  return est;
}

}  // namespace detail

/// Sum of signed crossings over non-adjacent edge pairs in one diagram.
inline int diagram_writhe(const Chain &c, const Direction &xi) {
  int sum = 0;
  entangle::detail::for_each_nonadjacent_pair(
      c, [&](std::size_t i, std::size_t j) { sum += signed_crossing(c.edge(i), c.edge(j), xi); });
  return sum;
}

/// Algebraic sum of crossings between two chains in one diagram (twice the
/// diagram linking number). Pairs meeting at a common endpoint are skipped
/// under SharedEndpoints::contribute_zero.
inline int diagram_crossing_sum(const Chain &a, const Chain &b, const Direction &xi,
                                SharedEndpoints policy = SharedEndpoints::reject) {
  int sum = 0;
  for (std::size_t i = 0; i < a.edge_count(); ++i) {
    const Segment ea = a.edge(i);
    for (std::size_t j = 0; j < b.edge_count(); ++j) {
      const Segment eb = b.edge(j);
      if (policy == SharedEndpoints::contribute_zero &&
          (norm(ea.start - eb.start) < kGeomEps || norm(ea.start - eb.end) < kGeomEps ||
           norm(ea.end - eb.start) < kGeomEps || norm(ea.end - eb.end) < kGeomEps)) {
        continue;
      }
      sum += signed_crossing(ea, eb, xi);
    }
  }
  return sum;
}

/// Writhe as the average diagram writhe over uniformly sampled directions.
inline Estimate writhe_by_projection(const Chain &c, std::size_t ndirs, KeyedRng &rng) {
  return detail::sample_directions(ndirs, rng, [&](const Direction &xi) {
    return static_cast<double>(diagram_writhe(c, xi));
  });
}

/// Linking number as the average of half the algebraic inter-chain crossing sum.
inline Estimate linking_by_projection(const Chain &a, const Chain &b, std::size_t ndirs, KeyedRng &rng,
                                      SharedEndpoints policy = SharedEndpoints::reject) {
  return detail::sample_directions(ndirs, rng, [&](const Direction &xi) {
    return 0.5 * static_cast<double>(diagram_crossing_sum(a, b, xi, policy));
  });
}

/// Average crossing number as the average unsigned self-crossing count.
inline Estimate acn_by_projection(const Chain &c, std::size_t ndirs, KeyedRng &rng) {
  return detail::sample_directions(ndirs, rng, [&](const Direction &xi) {
    int count = 0;
    entangle::detail::for_each_nonadjacent_pair(c, [&](std::size_t i, std::size_t j) {
      count += std::abs(signed_crossing(c.edge(i), c.edge(j), xi));
    });
    return static_cast<double>(count);
  });
}

}  // namespace entangle::oracle
