#pragma once

// Chain-level entanglement measures assembled from the pair kernels.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string_view>

#include "entangle/chain.hpp"
#include "entangle/geometry.hpp"

namespace entangle {

enum class MeasureKind { writhe, linking, torsion, self_linking, acn };

inline std::string_view to_string(MeasureKind k) noexcept {
  switch (k) {
    case MeasureKind::writhe: return "writhe";
    case MeasureKind::linking: return "linking";
    case MeasureKind::torsion: return "torsion";
    case MeasureKind::self_linking: return "self_linking";
    case MeasureKind::acn: return "acn";
  }
  return "unknown";
}

inline std::optional<MeasureKind> parse_measure_kind(std::string_view s) noexcept {
  for (auto k : {MeasureKind::writhe, MeasureKind::linking, MeasureKind::torsion,
                 MeasureKind::self_linking, MeasureKind::acn}) {
    if (to_string(k) == s) {
      return k;
    }
  }
  return std::nullopt;
}

struct MeasureValue {
  double value = 0.0;
  MeasureKind kind = MeasureKind::writhe;
};

/// How linking_number treats edge pairs that meet at a common endpoint.
/// The Gauss integrand vanishes identically on such a pair, so zero is its
/// exact contribution; rejecting is the default because two chains that
/// touch are usually an input error.
enum class SharedEndpoints { reject, contribute_zero };

namespace detail {

template <class F>
void for_each_nonadjacent_pair(const Chain &c, F &&f) {
  const std::size_t n = c.edge_count();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (!c.adjacent(i, j)) {
        f(i, j);
      }
    }
  }
}

inline double pair_linking_indexed(const Segment &a, const Segment &b, std::size_t i, std::size_t j) {
  try {
    return seg_pair_linking(a, b);
  } catch (const DegeneratePair &e) {
    throw e.with_indices(i, j);
  }
}

}  // namespace detail

/// Twice the sum of pair linking over non-adjacent edge pairs. Open chains
/// have no wraparound adjacency, so their first and last edges are paired.
inline double writhe(const Chain &c) {
  double sum = 0.0;
  detail::for_each_nonadjacent_pair(c, [&](std::size_t i, std::size_t j) {
    sum += detail::pair_linking_indexed(c.edge(i), c.edge(j), i, j);
  });
  return 2.0 * sum;
}

inline double linking_number(const Chain &a, const Chain &b,
                             SharedEndpoints policy = SharedEndpoints::reject) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.edge_count(); ++i) {
    const Segment ea = a.edge(i);
    for (std::size_t j = 0; j < b.edge_count(); ++j) {
      try {
        sum += seg_pair_linking(ea, b.edge(j));
      } catch (const DegeneratePair &e) {
        if (policy == SharedEndpoints::contribute_zero &&
            e.reason() == DegeneratePair::Reason::shared_endpoint) {
          continue;
        }
        throw e.with_indices(i, j);
      }
    }
  }
  return sum;
}

/// Sum of signed binormal angles: n angles for a closed chain, n - 2 for an
/// open one. Parallel turns contribute zero.
inline double total_torsion(const Chain &c) {
  const std::size_t n = c.edge_count();
  const std::size_t count = c.closed() ? n : (n >= 2 ? n - 2 : 0);
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sum += binormal_angle_or_zero(c.edge_vector(i), c.edge_vector((i + 1) % n),
                                  c.edge_vector((i + 2) % n));
  }
  return sum;
}

inline double self_linking(const Chain &c) {
  return writhe(c) + total_torsion(c) / (2.0 * std::numbers::pi);
}

/// Average crossing number. For two straight edges the triple-product factor
/// of the integrand is constant over the whole parameter square, so the
/// absolute integral of a pair is the magnitude of its exact signed solid
/// angle and no subdivision is needed.
inline double acn(const Chain &c) {
  double sum = 0.0;
  detail::for_each_nonadjacent_pair(c, [&](std::size_t i, std::size_t j) {
    sum += std::abs(detail::pair_linking_indexed(c.edge(i), c.edge(j), i, j));
  });
  return 2.0 * sum;
}

struct ChainMeasures {
  double writhe = 0.0;
  double torsion = 0.0;
  double self_linking = 0.0;
  double acn = 0.0;
};

inline ChainMeasures all_measures(const Chain &c) {
  ChainMeasures m;
  m.writhe = writhe(c);
  m.torsion = total_torsion(c);
  m.self_linking = m.writhe + m.torsion / (2.0 * std::numbers::pi);
  m.acn = acn(c);
  return m;
}

}  // namespace entangle
