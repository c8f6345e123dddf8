#pragma once

// Random and fixed chain construction.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entangle/chain.hpp"
#include "entangle/rng.hpp"

namespace entangle {

enum class ChainModel { uniform_walk, uniform_polygon, equilateral_walk, fixed_square, fixed_trefoil };

struct ChainSpec {
  ChainModel model = ChainModel::uniform_walk;
  std::size_t n = 10;  ///< edge count; ignored by fixed curves

  friend bool operator==(const ChainSpec &, const ChainSpec &) = default;
};

inline std::string_view to_string(ChainModel m) noexcept {
  switch (m) {
    case ChainModel::uniform_walk: return "uniform_walk";
    case ChainModel::uniform_polygon: return "uniform_polygon";
    case ChainModel::equilateral_walk: return "equilateral_walk";
    case ChainModel::fixed_square: return "fixed_square";
    case ChainModel::fixed_trefoil: return "fixed_trefoil";
  }
  return "unknown";
}

inline std::optional<ChainModel> parse_chain_model(std::string_view s) noexcept {
  for (auto m : {ChainModel::uniform_walk, ChainModel::uniform_polygon, ChainModel::equilateral_walk,
                 ChainModel::fixed_square, ChainModel::fixed_trefoil}) {
    if (to_string(m) == s) {
      return m;
    }
  }
  return std::nullopt;
}

namespace detail {

// Vertices i.i.d. uniform in the unit cube; an exact repeat of the previous
// vertex (or of the first, closing a polygon) is redrawn.
inline std::vector<Point3> cube_vertices(std::size_t count, bool closed, KeyedRng &rng) {
  std::vector<Point3> v;
  v.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Point3 p = rng.unit_cube_point();
    while ((i > 0 && p == v.back()) || (closed && i + 1 == count && p == v.front())) {
      p = rng.unit_cube_point();
    }
    v.push_back(p);
  }
  return v;
}

}  // namespace detail

inline Chain gen_uniform_walk(std::size_t n, KeyedRng &rng) {
  if (n < 1) {
    throw SpecInvalid("uniform walk needs n >= 1");
  }
  return Chain(detail::cube_vertices(n + 1, false, rng), false);
}

inline Chain gen_uniform_polygon(std::size_t n, KeyedRng &rng) {
  if (n < 3) {
    throw SpecInvalid("uniform polygon needs n >= 3");
  }
  return Chain(detail::cube_vertices(n, true, rng), true);
}

/// Unit steps uniform on the sphere, starting at the origin.
inline Chain gen_equilateral_walk(std::size_t n, KeyedRng &rng) {
  if (n < 1) {
    throw SpecInvalid("equilateral walk needs n >= 1");
  }
  std::vector<Point3> v;
  v.reserve(n + 1);
  v.push_back({0.0, 0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) {
    v.push_back(v.back() + rng.unit_vector());
  }
  return Chain(std::move(v), false);
}

/// Planar square in the z = 0.5 plane.
inline Chain fixed_square() {
  return Chain({{0.1, 0.1, 0.5}, {0.9, 0.1, 0.5}, {0.9, 0.9, 0.5}, {0.1, 0.9, 0.5}}, true);
}

/// Six-edge closed curve used as the knotted fixed partner.
inline Chain fixed_trefoil() {
  return Chain({{0.9, 0.5, 0.5},
                {0.1, 0.5, 0.4},
                {0.5, 0.3, 0.9},
                {0.6, 0.3, 0.1},
                {0.2, 0.9, 0.6},
                {0.5, 0.2, 0.5}},
               true);
}

inline Chain make_chain(const ChainSpec &spec, KeyedRng &rng) {
  switch (spec.model) {
    case ChainModel::uniform_walk: return gen_uniform_walk(spec.n, rng);
    case ChainModel::uniform_polygon: return gen_uniform_polygon(spec.n, rng);
    case ChainModel::equilateral_walk: return gen_equilateral_walk(spec.n, rng);
    case ChainModel::fixed_square: return fixed_square();
    case ChainModel::fixed_trefoil: return fixed_trefoil();
  }
  throw SpecInvalid("unknown chain model");
}

inline bool is_fixed(ChainModel m) noexcept {
  return m == ChainModel::fixed_square || m == ChainModel::fixed_trefoil;
}

}  // namespace entangle
