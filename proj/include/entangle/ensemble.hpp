#pragma once

// Monte Carlo experiment runner: for each chain length, draw
// `subcollections` batches of `samples_per_subcollection` independent
// samples, average each batch, and report the mean of the batch means with
// its standard error across batches.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "entangle/chains.hpp"
#include "entangle/fitting.hpp"
#include "entangle/geometry.hpp"
#include "entangle/measures.hpp"
#include "entangle/rng.hpp"

namespace entangle {

enum class Statistic { mean, mean_squared, mean_abs };
enum class Partner { none, square, trefoil };

inline std::string_view to_string(Statistic s) noexcept {
  switch (s) {
    case Statistic::mean: return "mean";
    case Statistic::mean_squared: return "mean_squared";
    case Statistic::mean_abs: return "mean_abs";
  }
  return "unknown";
}

inline std::string_view to_string(Partner p) noexcept {
  switch (p) {
    case Partner::none: return "none";
    case Partner::square: return "square";
    case Partner::trefoil: return "trefoil";
  }
  return "unknown";
}

inline std::optional<Statistic> parse_statistic(std::string_view s) noexcept {
  for (auto v : {Statistic::mean, Statistic::mean_squared, Statistic::mean_abs}) {
    if (to_string(v) == s) {
      return v;
    }
  }
  return std::nullopt;
}

inline std::optional<Partner> parse_partner(std::string_view s) noexcept {
  for (auto v : {Partner::none, Partner::square, Partner::trefoil}) {
    if (to_string(v) == s) {
      return v;
    }
  }
  return std::nullopt;
}

struct EnsembleSpec {
  std::string name = "experiment";
  ChainModel model = ChainModel::uniform_walk;
  std::optional<ChainModel> second_model;  ///< random partner for linking
  Partner partner = Partner::none;         ///< fixed partner for linking
  Statistic statistic = Statistic::mean_squared;
  MeasureKind measure = MeasureKind::writhe;
  std::vector<std::size_t> lengths;
  std::size_t samples_per_subcollection = 200;
  std::size_t subcollections = 10;
  std::uint64_t seed = 42;

  /// Throws SpecInvalid describing the first violated constraint.
  void validate() const {
    if (lengths.empty()) {
      throw SpecInvalid("lengths must be non-empty");
    }
    if (!std::is_sorted(lengths.begin(), lengths.end()) ||
        std::adjacent_find(lengths.begin(), lengths.end()) != lengths.end()) {
      throw SpecInvalid("lengths must be strictly ascending");
    }
    if (samples_per_subcollection < 1 || subcollections < 1) {
      throw SpecInvalid("sample and subcollection counts must be >= 1");
    }
    if (is_fixed(model)) {
      throw SpecInvalid("the primary chain model must be random");
    }
    const std::size_t min_n = model == ChainModel::uniform_polygon ? 3 : 1;
    if (lengths.front() < min_n) {
      throw SpecInvalid("length too small for chain model " + std::string(to_string(model)));
    }
    if (second_model && is_fixed(*second_model)) {
      throw SpecInvalid("second_model must be random; use partner for fixed curves");
    }
    if (second_model && *second_model == ChainModel::uniform_polygon && lengths.front() < 3) {
      throw SpecInvalid("length too small for second chain model");
    }
    const bool paired = second_model.has_value() || partner != Partner::none;
    if (measure == MeasureKind::linking && !paired) {
      throw SpecInvalid("linking needs second_model or a fixed partner");
    }
    if (measure != MeasureKind::linking && paired) {
      throw SpecInvalid("second_model/partner only apply to linking");
    }
    if (second_model && partner != Partner::none) {
      throw SpecInvalid("give either second_model or partner, not both");
    }
  }
};

struct StatRow {
  std::size_t n = 0;
  double mean = 0.0;    ///< mean of subcollection means
  double std_error = 0.0;  ///< sample std of subcollection means / sqrt(subcollections)
  std::size_t samples = 0;
  std::size_t degenerate_resamples = 0;

  friend bool operator==(const StatRow &, const StatRow &) = default;
};

struct StatTable {
  std::string series;
  std::vector<StatRow> rows;

  std::vector<double> lengths() const {
    std::vector<double> v;
    for (const auto &r : rows) {
      v.push_back(static_cast<double>(r.n));
    }
    return v;
  }
  std::vector<double> means() const {
    std::vector<double> v;
    for (const auto &r : rows) {
      v.push_back(r.mean);
    }
    return v;
  }

  friend bool operator==(const StatTable &, const StatTable &) = default;
};

struct RunOptions {
  unsigned threads = 0;  ///< 0 = hardware concurrency
  double max_degenerate_rate = 0.01;
};

inline unsigned resolve_threads(unsigned requested) noexcept {
  if (requested > 0) {
    return requested;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls f(i) for i in [0, count) on `threads` workers. The first exception
/// thrown by any call is rethrown after all workers join.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F &&f) {
  threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(count, 1)));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      f(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
          if (i >= count) {
            return;
          }
          try {
            f(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) {
              error = std::current_exception();
            }
            next.store(count);
          }
        }
      });
    }
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

namespace detail {

constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline const Chain &fixed_partner(Partner p) {
  static const Chain square = fixed_square();
  static const Chain trefoil = fixed_trefoil();
  return p == Partner::square ? square : trefoil;
}

}  // namespace detail

/// Stream identity of a (configuration, length) cell. Specs that differ only
/// in the reported statistic draw identical samples.
inline std::uint64_t experiment_id(const EnsembleSpec &spec, std::size_t n) {
  std::string key(to_string(spec.model));
  key += '|';
  key += spec.second_model ? to_string(*spec.second_model) : "-";
  key += '|';
  key += to_string(spec.partner);
  key += '|';
  key += to_string(spec.measure);
  return detail::mix64(detail::fnv1a(key) ^ detail::mix64(n));
}

/// One sample of the spec's measure at length n, drawn from `rng`.
inline double sample_measure(const EnsembleSpec &spec, std::size_t n, KeyedRng &rng) {
  const Chain chain = make_chain({spec.model, n}, rng);
  switch (spec.measure) {
    case MeasureKind::writhe: return writhe(chain);
    case MeasureKind::torsion: return total_torsion(chain);
    case MeasureKind::self_linking: return self_linking(chain);
    case MeasureKind::acn: return acn(chain);
    case MeasureKind::linking: {
      if (spec.second_model) {
        const Chain other = make_chain({*spec.second_model, n}, rng);
        return linking_number(chain, other, SharedEndpoints::contribute_zero);
      }
      return linking_number(chain, detail::fixed_partner(spec.partner), SharedEndpoints::contribute_zero);
    }
  }
  throw SpecInvalid("unknown measure");
}

/// Raw per-sample values for one length, ordered by (subcollection, sample).
struct SampleSet {
  std::size_t n = 0;
  std::vector<double> values;
  std::size_t degenerate_resamples = 0;
};

inline SampleSet draw_samples(const EnsembleSpec &spec, std::size_t n, const RunOptions &opts = {}) {
  const std::size_t per = spec.samples_per_subcollection;
  const std::size_t total = per * spec.subcollections;
  const std::uint64_t exp_id = experiment_id(spec, n);
  SampleSet set;
  set.n = n;
  set.values.assign(total, 0.0);
  std::vector<std::uint32_t> resamples(total, 0);
  const std::size_t max_attempts = 64;

  parallel_for(total, resolve_threads(opts.threads), [&](std::size_t idx) {
    const KeyedRng base(spec.seed, {exp_id, idx / per, idx % per});
    for (std::size_t attempt = 0;; ++attempt) {
      KeyedRng rng = attempt == 0 ? base : base.fork(attempt);
      try {
        set.values[idx] = sample_measure(spec, n, rng);
        return;
      } catch (const DegeneratePair &) {
        if (attempt + 1 >= max_attempts) {
          throw ExcessiveDegeneracy("sample could not avoid degenerate edge pairs");
        }
        ++resamples[idx];
      }
    }
  });

  for (auto r : resamples) {
    set.degenerate_resamples += r;
  }
  if (static_cast<double>(set.degenerate_resamples) > opts.max_degenerate_rate * static_cast<double>(total)) {
    throw ExcessiveDegeneracy("degenerate resample rate exceeds " + std::to_string(opts.max_degenerate_rate));
  }
  return set;
}

inline double apply_statistic(Statistic s, double x) noexcept {
  switch (s) {
    case Statistic::mean: return x;
    case Statistic::mean_squared: return x * x;
    case Statistic::mean_abs: return std::abs(x);
  }
  return x;
}

/// Subcollection protocol: batch means in sample order, then their mean and
/// standard error.
inline StatRow tabulate(const SampleSet &set, Statistic stat, std::size_t subcollections) {
  const std::size_t per = set.values.size() / subcollections;
  std::vector<double> batch_means(subcollections, 0.0);
  for (std::size_t c = 0; c < subcollections; ++c) {
    double sum = 0.0;
    for (std::size_t k = 0; k < per; ++k) {
      sum += apply_statistic(stat, set.values[c * per + k]);
    }
    batch_means[c] = sum / static_cast<double>(per);
  }
  double grand = 0.0;
  for (double m : batch_means) {
    grand += m;
  }
  grand /= static_cast<double>(subcollections);
  double ss = 0.0;
  for (double m : batch_means) {
    ss += (m - grand) * (m - grand);
  }
  StatRow row;
  row.n = set.n;
  row.mean = grand;
  row.std_error = subcollections > 1
                   ? std::sqrt(ss / static_cast<double>(subcollections - 1)) / std::sqrt(static_cast<double>(subcollections))
                   : 0.0;
  row.samples = set.values.size();
  row.degenerate_resamples = set.degenerate_resamples;
  return row;
}

inline StatTable run_experiment(const EnsembleSpec &spec, const RunOptions &opts = {}) {
  spec.validate();
  StatTable table;
  table.series = spec.name;
  for (std::size_t n : spec.lengths) {
    table.rows.push_back(tabulate(draw_samples(spec, n, opts), spec.statistic, spec.subcollections));
  }
  return table;
}

/// Runs one configuration once and tabulates several statistics from the
/// same draws. Equivalent to calling run_experiment per statistic.
inline std::vector<StatTable> run_experiments(const EnsembleSpec &spec, std::span<const Statistic> stats,
                                              std::span<const std::string> names, const RunOptions &opts = {}) {
  spec.validate();
  std::vector<StatTable> tables(stats.size());
  for (std::size_t k = 0; k < stats.size(); ++k) {
    tables[k].series = names[k];
  }
  for (std::size_t n : spec.lengths) {
    const SampleSet set = draw_samples(spec, n, opts);
    for (std::size_t k = 0; k < stats.size(); ++k) {
      tables[k].rows.push_back(tabulate(set, stats[k], spec.subcollections));
    }
  }
  return tables;
}

// ---------------------------------------------------------------------------
// Crossing-sign moments of random edge configurations in the unit cube.

struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct EdgePairMoments {
  MomentEstimate p;  ///< P(eps = +1) for two independent edges; E[eps^2] = 2p
  MomentEstimate u;  ///< E[eps(l, m1) eps(l, m2)], m1 and m2 consecutive
  MomentEstimate v;  ///< E[eps(l1, m1) eps(l2, m2)], both pairs consecutive
  MomentEstimate w;  ///< E[eps(e1, e3) eps(e2, e4)], four consecutive edges
  MomentEstimate q;        ///< p + 2(u + v)
  MomentEstimate q_prime;  ///< 3p + 2(2u + v + w)
  std::size_t samples = 0;
  std::size_t resampled = 0;
  bool q_positive = false;        ///< q > 0 at 3 standard errors (flag only)
  bool q_prime_positive = false;  ///< q' > 0 at 3 standard errors (flag only)
};

namespace detail {

struct RunningMean {
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;

  void add(double x) noexcept {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }
  MomentEstimate estimate(double scale = 1.0) const noexcept {
    const double var = count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
    return {scale * mean, scale * std::sqrt(var / static_cast<double>(count))};
  }
};

template <class Draw>
double draw_configuration(KeyedRng &rng, std::size_t &resampled, Draw &&draw) {
  for (;;) {
    try {
      return draw(rng);
    } catch (const DegenerateProjection &) {
      ++resampled;
    }
  }
}

}  // namespace detail

/// Monte Carlo estimate of the crossing-sign moments for edges whose
/// endpoints are uniform in the unit cube, projected along `xi`. Each moment
/// uses its own `samples` independent configurations.
inline EdgePairMoments estimate_edge_pair_moments(std::size_t samples, const Direction &xi, KeyedRng &rng) {
  if (samples < 2) {
    throw SpecInvalid("moment estimation needs at least 2 samples");
  }
  EdgePairMoments out;
  out.samples = samples;
  auto pt = [](KeyedRng &r) { return r.unit_cube_point(); };
  auto eps = [&](const Point3 &a0, const Point3 &a1, const Point3 &b0, const Point3 &b1) {
    return static_cast<double>(signed_crossing({a0, a1}, {b0, b1}, xi));
  };

  detail::RunningMean p, u, v, w;
  for (std::size_t k = 0; k < samples; ++k) {
    // Two independent edges: E[eps^2] = 2p.
    p.add(detail::draw_configuration(rng, out.resampled, [&](KeyedRng &r) {
      const Point3 a = pt(r), b = pt(r), c = pt(r), d = pt(r);
      const double e = eps(a, b, c, d);
      return e * e;
    }));
    // Five points: edge A->B against consecutive edges C->D, D->E.
    u.add(detail::draw_configuration(rng, out.resampled, [&](KeyedRng &r) {
      const Point3 a = pt(r), b = pt(r), c = pt(r), d = pt(r), e = pt(r);
      return eps(a, b, c, d) * eps(a, b, d, e);
    }));
    // Six points: consecutive A->B, B->C against consecutive D->E, E->F.
    v.add(detail::draw_configuration(rng, out.resampled, [&](KeyedRng &r) {
      const Point3 a = pt(r), b = pt(r), c = pt(r), d = pt(r), e = pt(r), f = pt(r);
      return eps(a, b, d, e) * eps(b, c, e, f);
    }));
    // Five points, four consecutive edges e1..e4: eps(e1, e3) eps(e2, e4).
    w.add(detail::draw_configuration(rng, out.resampled, [&](KeyedRng &r) {
      const Point3 a = pt(r), b = pt(r), c = pt(r), d = pt(r), e = pt(r);
      return eps(a, b, c, d) * eps(b, c, d, e);
    }));
  }

  out.p = p.estimate(0.5);
  out.u = u.estimate();
  out.v = v.estimate();
  out.w = w.estimate();
  auto sq = [](double x) { return x * x; };
  out.q = {out.p.value + 2.0 * (out.u.value + out.v.value),
           std::sqrt(sq(out.p.std_error) + 4.0 * sq(out.u.std_error) + 4.0 * sq(out.v.std_error))};
  out.q_prime = {3.0 * out.p.value + 2.0 * (2.0 * out.u.value + out.v.value + out.w.value),
                 std::sqrt(9.0 * sq(out.p.std_error) + 16.0 * sq(out.u.std_error) + 4.0 * sq(out.v.std_error) +
                           4.0 * sq(out.w.std_error))};
  out.q_positive = out.q.value > 3.0 * out.q.std_error;
  out.q_prime_positive = out.q_prime.value > 3.0 * out.q_prime.std_error;
  return out;
}

}  // namespace entangle
