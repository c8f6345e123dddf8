#pragma once

// The full catalogue of scaling-law series: random-chain writhe,
// self-linking and linking in the unit cube, linking with the fixed square
// and trefoil, and equilateral-walk self-linking and linking.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entangle/ensemble.hpp"
#include "entangle/fitting.hpp"

namespace entangle {

enum class Scale { desk, paper };

inline std::string_view to_string(Scale s) noexcept { return s == Scale::desk ? "desk" : "paper"; }

inline std::optional<Scale> parse_scale(std::string_view s) noexcept {
  if (s == "desk") {
    return Scale::desk;
  }
  if (s == "paper") {
    return Scale::paper;
  }
  return std::nullopt;
}

struct ScaleParams {
  std::size_t subcollections;
  std::size_t samples;
  std::vector<std::size_t> lengths;
};

/// desk: 10 x 200 samples, n = 10..60; paper: 10 x 500 samples, n = 10..100.
inline ScaleParams scale_params(Scale s) {
  ScaleParams p;
  p.subcollections = 10;
  p.samples = s == Scale::desk ? 200 : 500;
  const std::size_t top = s == Scale::desk ? 60 : 100;
  for (std::size_t n = 10; n <= top; n += 10) {
    p.lengths.push_back(n);
  }
  return p;
}

struct SeriesDef {
  EnsembleSpec spec;
  FitModel model;
};

struct SeriesResult {
  EnsembleSpec spec;
  StatTable table;
  FitResult fit;
};

struct ConjectureEntry {
  std::string name;
  std::string mean_squared_series;
  std::string mean_abs_series;
  ConjectureReport report;
};

struct ReproduceResult {
  Scale scale = Scale::desk;
  std::uint64_t seed = 0;
  std::vector<SeriesResult> series;
  std::vector<ConjectureEntry> conjectures;

  const SeriesResult *find(std::string_view name) const {
    for (const auto &s : series) {
      if (s.table.series == name) {
        return &s;
      }
    }
    return nullptr;
  }
};

/// Every series in reproduction order. Mean-squared series fit a + b n^2,
/// mean-absolute series of random pairs and single chains fit a + b n, and
/// fixed-partner and equilateral series fit a + b sqrt(n).
inline std::vector<SeriesDef> series_catalogue(Scale scale, std::uint64_t seed) {
  const ScaleParams params = scale_params(scale);
  std::vector<SeriesDef> out;
  auto add = [&](std::string name, ChainModel model, MeasureKind measure, Statistic stat, FitModel fit_model,
                 std::optional<ChainModel> second = std::nullopt, Partner partner = Partner::none) {
    EnsembleSpec spec;
    spec.name = std::move(name);
    spec.model = model;
    spec.second_model = second;
    spec.partner = partner;
    spec.statistic = stat;
    spec.measure = measure;
    spec.lengths = params.lengths;
    spec.samples_per_subcollection = params.samples;
    spec.subcollections = params.subcollections;
    spec.seed = seed;
    out.push_back({std::move(spec), fit_model});
  };

  for (auto model : {ChainModel::uniform_walk, ChainModel::uniform_polygon}) {
    const std::string tag = model == ChainModel::uniform_walk ? "walk" : "polygon";
    add(tag + ".msq_writhe", model, MeasureKind::writhe, Statistic::mean_squared, FitModel::a_plus_b_n2);
    add(tag + ".abs_writhe", model, MeasureKind::writhe, Statistic::mean_abs, FitModel::a_plus_b_n);
    add(tag + ".msq_self_linking", model, MeasureKind::self_linking, Statistic::mean_squared,
        FitModel::a_plus_b_n2);
    add(tag + ".abs_self_linking", model, MeasureKind::self_linking, Statistic::mean_abs, FitModel::a_plus_b_n);
    add(tag + ".msq_linking", model, MeasureKind::linking, Statistic::mean_squared, FitModel::a_plus_b_n2, model);
    add(tag + ".abs_linking", model, MeasureKind::linking, Statistic::mean_abs, FitModel::a_plus_b_n, model);
  }
  for (auto model : {ChainModel::uniform_walk, ChainModel::uniform_polygon}) {
    const std::string tag = model == ChainModel::uniform_walk ? "walk" : "polygon";
    add(tag + ".abs_linking_square", model, MeasureKind::linking, Statistic::mean_abs, FitModel::a_plus_b_sqrt_n,
        std::nullopt, Partner::square);
    add(tag + ".abs_linking_trefoil", model, MeasureKind::linking, Statistic::mean_abs,
        FitModel::a_plus_b_sqrt_n, std::nullopt, Partner::trefoil);
  }
  add("equilateral.abs_self_linking", ChainModel::equilateral_walk, MeasureKind::self_linking, Statistic::mean_abs,
      FitModel::a_plus_b_sqrt_n);
  add("equilateral.abs_linking", ChainModel::equilateral_walk, MeasureKind::linking, Statistic::mean_abs,
      FitModel::a_plus_b_sqrt_n, ChainModel::equilateral_walk);
  return out;
}

inline FitResult fit_table(const StatTable &table, FitModel model) {
  const auto xs = table.lengths();
  const auto ys = table.means();
  return fit(xs, ys, model);
}

/// Runs the catalogue. Series that share a sample stream (same chain model
/// and measure, different statistic) are drawn once.
inline ReproduceResult reproduce_all(Scale scale, std::uint64_t seed, const RunOptions &opts = {}) {
  ReproduceResult result;
  result.scale = scale;
  result.seed = seed;
  const auto catalogue = series_catalogue(scale, seed);
  std::vector<bool> done(catalogue.size(), false);

  result.series.resize(catalogue.size());
  for (std::size_t i = 0; i < catalogue.size(); ++i) {
    if (done[i]) {
      continue;
    }
    std::vector<std::size_t> group{i};
    for (std::size_t j = i + 1; j < catalogue.size(); ++j) {
      if (!done[j] && experiment_id(catalogue[j].spec, 0) == experiment_id(catalogue[i].spec, 0)) {
        group.push_back(j);
      }
    }
    std::vector<Statistic> stats;
    std::vector<std::string> names;
    for (auto g : group) {
      stats.push_back(catalogue[g].spec.statistic);
      names.push_back(catalogue[g].spec.name);
    }
    auto tables = run_experiments(catalogue[i].spec, stats, names, opts);
    for (std::size_t k = 0; k < group.size(); ++k) {
      const auto &def = catalogue[group[k]];
      result.series[group[k]] = {def.spec, tables[k], fit_table(tables[k], def.model)};
      done[group[k]] = true;
    }
  }

  for (const std::string tag : {"walk", "polygon"}) {
    for (const std::string measure : {"writhe", "self_linking", "linking"}) {
      const std::string sq = tag + ".msq_" + measure;
      const std::string ab = tag + ".abs_" + measure;
      const auto *s = result.find(sq);
      const auto *a = result.find(ab);
      const auto ls = s->table.lengths(), ms = s->table.means();
      const auto la = a->table.lengths(), ma = a->table.means();
      result.conjectures.push_back({tag + "." + measure, sq, ab, compare_conjecture(ls, ms, la, ma)});
    }
  }
  return result;
}

}  // namespace entangle
