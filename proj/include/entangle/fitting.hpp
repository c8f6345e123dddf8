#pragma once

// Two-parameter least-squares fits of scaling laws y = a + b g(n).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "entangle/errors.hpp"

namespace entangle {

enum class FitModel { a_plus_b_n, a_plus_b_n2, a_plus_b_sqrt_n };

inline std::string_view to_string(FitModel m) noexcept {
  switch (m) {
    case FitModel::a_plus_b_n: return "a_plus_b_n";
    case FitModel::a_plus_b_n2: return "a_plus_b_n2";
    case FitModel::a_plus_b_sqrt_n: return "a_plus_b_sqrt_n";
  }
  return "unknown";
}

inline std::optional<FitModel> parse_fit_model(std::string_view s) noexcept {
  for (auto m : {FitModel::a_plus_b_n, FitModel::a_plus_b_n2, FitModel::a_plus_b_sqrt_n}) {
    if (to_string(m) == s) {
      return m;
    }
  }
  return std::nullopt;
}

/// The regressor g(n) of a model.
inline double regressor(FitModel m, double n) noexcept {
  switch (m) {
    case FitModel::a_plus_b_n: return n;
    case FitModel::a_plus_b_n2: return n * n;
    case FitModel::a_plus_b_sqrt_n: return std::sqrt(n);
  }
  return n;
}

struct FitResult {
  FitModel model = FitModel::a_plus_b_n;
  double a = 0.0;
  double b = 0.0;
  double stderr_a = 0.0;
  double stderr_b = 0.0;
  double r_squared = 0.0;
};

/// Least squares on the design [1, g(x)]. Unweighted unless `weights` is
/// given (e.g. 1/stderr^2). Coefficient standard errors use the residual
/// variance with m - 2 degrees of freedom. R^2 = 1 - SSres/SStot, and 1 for
/// zero-variance data fitted without residual.
inline FitResult fit(std::span<const double> xs, std::span<const double> ys, FitModel model,
                     std::span<const double> weights = {}) {
  const std::size_t m = xs.size();
  if (ys.size() != m || (!weights.empty() && weights.size() != m)) {
    throw Error("fit: xs, ys and weights must have equal length");
  }
  if (m < 3) {
    throw Error("fit: need at least 3 points");
  }
  auto w = [&](std::size_t i) { return weights.empty() ? 1.0 : weights[i]; };

  std::vector<double> g(m);
  double sw = 0.0, gbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(w(i) > 0.0)) {
      throw Error("fit: weights must be positive");
    }
    g[i] = regressor(model, xs[i]);
    sw += w(i);
    gbar += w(i) * g[i];
    ybar += w(i) * ys[i];
  }
  gbar /= sw;
  ybar /= sw;

  double sgg = 0.0, sgy = 0.0, syy = 0.0, gscale = 0.0, yscale = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dg = g[i] - gbar;
    const double dy = ys[i] - ybar;
    sgg += w(i) * dg * dg;
    sgy += w(i) * dg * dy;
    syy += w(i) * dy * dy;
    gscale += w(i) * g[i] * g[i];
    yscale += w(i) * ys[i] * ys[i];
  }
  if (!(sgg > 1e-14 * gscale)) {
    throw SingularDesign();
  }

  FitResult r;
  r.model = model;
  r.b = sgy / sgg;
  r.a = ybar - r.b * gbar;

  double ssres = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = ys[i] - (r.a + r.b * g[i]);
    ssres += w(i) * e * e;
  }
  const double zero_floor = 1e-24 * yscale;
  if (syy <= zero_floor) {
    r.r_squared = ssres <= zero_floor ? 1.0 : 0.0;
    r.b = 0.0;
    r.a = ybar;
  } else {
    r.r_squared = std::max(0.0, 1.0 - ssres / syy);
  }

  const double s2 = ssres / static_cast<double>(m - 2);
  r.stderr_b = std::sqrt(s2 / sgg);
  r.stderr_a = std::sqrt(s2 * (1.0 / sw + gbar * gbar / sgg));
  return r;
}

struct ConjectureReport {
  std::vector<double> lengths;
  std::vector<double> ratio;  ///< sqrt(mean_squared) / mean_abs per length
  double ratio_mean = 0.0;    ///< least-squares constant fitted to the ratios
  double ratio_stderr = 0.0;
  double q = 0.0;      ///< n^2 coefficient of the mean-squared fit
  double b_abs = 0.0;  ///< slope of the linear mean-absolute fit
  double b_over_sqrt_q = 0.0;
  bool b_approx_sqrt_q = false;  ///< b_abs / sqrt(q) inside [0.72, 0.88]
};

/// Compares sqrt(E[X^2]) with E[|X|] on a shared length grid. A normal X
/// gives a ratio of sqrt(pi/2) and b_abs / sqrt(q) = sqrt(2/pi).
inline ConjectureReport compare_conjecture(std::span<const double> lengths_sq, std::span<const double> mean_sq,
                                           std::span<const double> lengths_abs, std::span<const double> mean_abs) {
  if (lengths_sq.size() != lengths_abs.size() || mean_sq.size() != lengths_sq.size() ||
      mean_abs.size() != lengths_abs.size()) {
    throw GridMismatch();
  }
  for (std::size_t i = 0; i < lengths_sq.size(); ++i) {
    if (lengths_sq[i] != lengths_abs[i]) {
      throw GridMismatch();
    }
  }
  ConjectureReport rep;
  rep.lengths.assign(lengths_sq.begin(), lengths_sq.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < mean_sq.size(); ++i) {
    rep.ratio.push_back(std::sqrt(mean_sq[i]) / mean_abs[i]);
    sum += rep.ratio.back();
  }
  const auto k = static_cast<double>(rep.ratio.size());
  rep.ratio_mean = sum / k;
  double ss = 0.0;
  for (double v : rep.ratio) {
    ss += (v - rep.ratio_mean) * (v - rep.ratio_mean);
  }
  rep.ratio_stderr = k > 1 ? std::sqrt(ss / (k - 1.0) / k) : 0.0;

  if (lengths_sq.size() >= 3) {
    rep.q = fit(lengths_sq, mean_sq, FitModel::a_plus_b_n2).b;
    rep.b_abs = fit(lengths_abs, mean_abs, FitModel::a_plus_b_n).b;
    rep.b_over_sqrt_q = rep.q > 0.0 ? rep.b_abs / std::sqrt(rep.q) : 0.0;
    rep.b_approx_sqrt_q = rep.b_over_sqrt_q >= 0.72 && rep.b_over_sqrt_q <= 0.88;
  }
  return rep;
}

}  // namespace entangle
