#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "support.hpp"

using namespace entangle;

namespace {

EnsembleSpec small_spec(MeasureKind m, Statistic s, ChainModel model = ChainModel::uniform_polygon) {
  EnsembleSpec spec;
  spec.name = "t";
  spec.model = model;
  spec.measure = m;
  spec.statistic = s;
  spec.lengths = {10, 20};
  spec.samples_per_subcollection = 50;
  spec.subcollections = 10;
  spec.seed = 99;
  if (m == MeasureKind::linking) {
    spec.second_model = model;
  }
  return spec;
}

}  // namespace

TEST(SpecValidation, RejectsBadSpecs) {
  EnsembleSpec ok = small_spec(MeasureKind::writhe, Statistic::mean);
  EXPECT_NO_THROW(ok.validate());

  auto expect_invalid = [](EnsembleSpec s) { EXPECT_THROW(s.validate(), SpecInvalid); };
  EnsembleSpec s = ok;
  s.lengths.clear();
  expect_invalid(s);
  s = ok;
  s.lengths = {20, 10};
  expect_invalid(s);
  s = ok;
  s.lengths = {10, 10};
  expect_invalid(s);
  s = ok;
  s.samples_per_subcollection = 0;
  expect_invalid(s);
  s = ok;
  s.subcollections = 0;
  expect_invalid(s);
  s = ok;
  s.lengths = {2, 10};
  expect_invalid(s);
  s = ok;
  s.model = ChainModel::fixed_square;
  expect_invalid(s);
  s = ok;
  s.measure = MeasureKind::linking;
  expect_invalid(s);
  s = ok;
  s.partner = Partner::square;
  expect_invalid(s);
  s = small_spec(MeasureKind::linking, Statistic::mean);
  s.partner = Partner::trefoil;
  expect_invalid(s);
  s = small_spec(MeasureKind::linking, Statistic::mean);
  s.second_model = ChainModel::fixed_trefoil;
  expect_invalid(s);
}

TEST(RunExperiment, DeterministicAndThreadIndependent) {
  const auto spec = small_spec(MeasureKind::writhe, Statistic::mean_squared);
  const StatTable a = run_experiment(spec, {1});
  const StatTable b = run_experiment(spec, {1});
  const StatTable c = run_experiment(spec, {3});
  const StatTable d = run_experiment(spec, {8});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_EQ(a, d);
  EXPECT_EQ(a.series, "t");
  ASSERT_EQ(a.rows.size(), 2u);
  EXPECT_EQ(a.rows[0].n, 10u);
  EXPECT_EQ(a.rows[0].samples, 500u);
  EXPECT_GE(a.rows[0].std_error, 0.0);
}

TEST(RunExperiment, SeedChangesResults) {
  auto spec = small_spec(MeasureKind::writhe, Statistic::mean_squared);
  const StatTable a = run_experiment(spec, {1});
  spec.seed = 100;
  EXPECT_NE(a, run_experiment(spec, {1}));
}

TEST(RunExperiment, StatisticsShareDraws) {
  const auto sq = small_spec(MeasureKind::self_linking, Statistic::mean_squared);
  auto ab = sq;
  ab.statistic = Statistic::mean_abs;
  ab.name = "u";
  const std::vector<Statistic> stats = {Statistic::mean_squared, Statistic::mean_abs};
  const std::vector<std::string> names = {"t", "u"};
  const auto both = run_experiments(sq, stats, names, {2});
  ASSERT_EQ(both.size(), 2u);
  EXPECT_EQ(both[0], run_experiment(sq, {1}));
  EXPECT_EQ(both[1], run_experiment(ab, {1}));
  EXPECT_EQ(experiment_id(sq, 10), experiment_id(ab, 10));
  EXPECT_NE(experiment_id(sq, 10), experiment_id(sq, 20));
}

TEST(RunExperiment, SignedMeansAreZero) {
  for (auto m : {MeasureKind::writhe, MeasureKind::self_linking, MeasureKind::linking}) {
    for (auto model : {ChainModel::uniform_polygon, ChainModel::uniform_walk}) {
      auto spec = small_spec(m, Statistic::mean, model);
      spec.samples_per_subcollection = 200;
      for (const auto &r : run_experiment(spec).rows) {
        EXPECT_LE(std::abs(r.mean), 3.0 * r.std_error) << to_string(m) << " " << to_string(model) << " n=" << r.n;
      }
    }
  }
}

TEST(RunExperiment, StandardErrorShrinksWithSamples) {
  auto spec = small_spec(MeasureKind::writhe, Statistic::mean, ChainModel::uniform_polygon);
  spec.lengths = {10};
  spec.subcollections = 400;
  spec.samples_per_subcollection = 10;
  const double small = run_experiment(spec).rows[0].std_error;
  spec.samples_per_subcollection = 40;
  const double large = run_experiment(spec).rows[0].std_error;
  const double ratio = large / small;
  EXPECT_GE(ratio, 0.4);
  EXPECT_LE(ratio, 0.6);
}

TEST(RunExperiment, FixedSquarePartnerSlope) {
  EnsembleSpec spec;
  spec.name = "walk.abs_linking_square";
  spec.model = ChainModel::uniform_walk;
  spec.partner = Partner::square;
  spec.measure = MeasureKind::linking;
  spec.statistic = Statistic::mean_abs;
  spec.lengths = {10, 20, 30, 40, 50, 60};
  spec.samples_per_subcollection = 200;
  spec.subcollections = 10;
  spec.seed = 42;
  const FitResult f = fit_table(run_experiment(spec), FitModel::a_plus_b_sqrt_n);
  EXPECT_GE(f.b, 0.12);
  EXPECT_LE(f.b, 0.19);
}

TEST(RunExperiment, EquilateralLinkingHandlesSharedOrigin) {
  EnsembleSpec spec;
  spec.model = ChainModel::equilateral_walk;
  spec.second_model = ChainModel::equilateral_walk;
  spec.measure = MeasureKind::linking;
  spec.statistic = Statistic::mean_abs;
  spec.lengths = {5, 10};
  spec.samples_per_subcollection = 20;
  spec.subcollections = 3;
  const StatTable t = run_experiment(spec);
  for (const auto &r : t.rows) {
    EXPECT_GT(r.mean, 0.0);
    EXPECT_EQ(r.samples, 60u);
  }
}

TEST(Tabulate, BatchMeansProtocol) {
  SampleSet set;
  set.values = {1, 2, 3, 4, 5, 6};
  set.degenerate_resamples = 2;
  const StatRow r = tabulate(set, Statistic::mean, 3);
  // Batch means 1.5, 3.5, 5.5: mean 3.5, sample std 2, stderr 2/sqrt(3).
  EXPECT_DOUBLE_EQ(r.mean, 3.5);
  EXPECT_NEAR(r.std_error, 2.0 / std::sqrt(3.0), 1e-15);
  EXPECT_EQ(r.samples, 6u);
  EXPECT_EQ(r.degenerate_resamples, 2u);
  EXPECT_DOUBLE_EQ(tabulate(set, Statistic::mean_squared, 3).mean, 91.0 / 6.0);
}

TEST(EdgePairMomentsTest, SignMeanIsZero) {
  KeyedRng rng(77);
  const Direction z({0, 0, 1});
  const int draws = 200000;
  double s = 0.0, s2 = 0.0;
  for (int k = 0; k < draws;) {
    try {
      const double e = signed_crossing({rng.unit_cube_point(), rng.unit_cube_point()},
                                       {rng.unit_cube_point(), rng.unit_cube_point()}, z);
      s += e;
      s2 += e * e;
      ++k;
    } catch (const DegenerateProjection &) {
    }
  }
  const double mean = s / draws;
  EXPECT_LE(std::abs(mean), 3.0 * std::sqrt((s2 / draws - mean * mean) / (draws - 1)));
}

TEST(EdgePairMomentsTest, EstimatesAreConsistent) {
  KeyedRng rng(78);
  const auto m = estimate_edge_pair_moments(200000, Direction({0, 0, 1}), rng);
  EXPECT_GE(m.p.value, 0.0);
  EXPECT_LE(m.p.value, 0.5);
  EXPECT_NEAR(m.q.value, m.p.value + 2.0 * (m.u.value + m.v.value), 1e-15);
  EXPECT_NEAR(m.q_prime.value, 3.0 * m.p.value + 2.0 * (2.0 * m.u.value + m.v.value + m.w.value), 1e-15);
  // Reference estimate 0.0338 +- 0.024.
  EXPECT_LE(std::abs(m.q.value - 0.0338), 0.024 + 3.0 * m.q.std_error);
  EXPECT_TRUE(m.q_prime_positive);
  EXPECT_THROW(estimate_edge_pair_moments(1, Direction({0, 0, 1}), rng), SpecInvalid);
}

TEST(Reproduce, CatalogueCoversEverySeries) {
  const auto cat = series_catalogue(Scale::desk, 42);
  EXPECT_EQ(cat.size(), 18u);
  std::set<std::string> names;
  for (const auto &d : cat) {
    EXPECT_NO_THROW(d.spec.validate());
    EXPECT_EQ(d.spec.samples_per_subcollection, 200u);
    EXPECT_EQ(d.spec.subcollections, 10u);
    EXPECT_EQ(d.spec.lengths, (std::vector<std::size_t>{10, 20, 30, 40, 50, 60}));
    names.insert(d.spec.name);
  }
  EXPECT_EQ(names.size(), 18u);
  for (const char *n : {"walk.msq_writhe", "polygon.abs_self_linking", "walk.msq_linking", "polygon.abs_linking_trefoil",
                        "equilateral.abs_self_linking", "equilateral.abs_linking"}) {
    EXPECT_TRUE(names.count(n)) << n;
  }
  const ScaleParams paper = scale_params(Scale::paper);
  EXPECT_EQ(paper.samples, 500u);
  EXPECT_EQ(paper.subcollections, 10u);
  EXPECT_EQ(paper.lengths.back(), 100u);
  EXPECT_EQ(paper.lengths.size(), 10u);
}

TEST(EnumNames, RoundTrip) {
  for (auto s : {Statistic::mean, Statistic::mean_squared, Statistic::mean_abs}) {
    EXPECT_EQ(parse_statistic(to_string(s)), s);
  }
  for (auto p : {Partner::none, Partner::square, Partner::trefoil}) {
    EXPECT_EQ(parse_partner(to_string(p)), p);
  }
  for (auto s : {Scale::desk, Scale::paper}) {
    EXPECT_EQ(parse_scale(to_string(s)), s);
  }
}
