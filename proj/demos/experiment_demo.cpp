// A small mean-squared writhe experiment for uniform polygons and its n^2 fit.
#include <cstdio>

#include "entangle/entangle.hpp"

using namespace entangle;

int main() {
  EnsembleSpec spec;
  spec.name = "polygon.msq_writhe";
  spec.model = ChainModel::uniform_polygon;
  spec.measure = MeasureKind::writhe;
  spec.statistic = Statistic::mean_squared;
  spec.lengths = {10, 20, 30, 40};
  spec.samples_per_subcollection = 100;
  spec.subcollections = 5;
  spec.seed = 1;

  const StatTable table = run_experiment(spec);
  for (const auto &r : table.rows) {
    std::printf("n=%3zu  <Wr^2> = %.4f +- %.4f\n", r.n, r.mean, r.std_error);
  }
  const FitResult f = fit_table(table, FitModel::a_plus_b_n2);
  std::printf("fit a + q n^2: q = %.5f +- %.5f, a = %.4f, R^2 = %.4f\n", f.b, f.stderr_b, f.a, f.r_squared);
}
