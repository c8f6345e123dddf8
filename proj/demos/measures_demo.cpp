// Measures of the two fixed curves, a Hopf pair, and one random polygon.
#include <cstdio>

#include "entangle/entangle.hpp"

using namespace entangle;

int main() {
  const Chain square = fixed_square();
  const Chain trefoil = fixed_trefoil();
  for (const auto &[name, c] : {std::pair{"square", square}, std::pair{"trefoil", trefoil}}) {
    const ChainMeasures m = all_measures(c);
    std::printf("%-8s writhe % .6f  torsion % .6f  SL % .6f  acn %.6f\n", name, m.writhe, m.torsion,
                m.self_linking, m.acn);
  }

  const Chain a({{-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}}, true);
  const Chain b({{0, 0, -1}, {2, 0, -1}, {2, 0, 1}, {0, 0, 1}}, true);
  std::printf("hopf linking % .12f\n", linking_number(a, b));

  KeyedRng rng(7);
  const Chain p = gen_uniform_polygon(20, rng);
  std::printf("polygon n=20 writhe % .6f  SL % .6f\n", writhe(p), self_linking(p));

  KeyedRng dirs(8);
  const auto est = oracle::writhe_by_projection(trefoil, 20000, dirs);
  std::printf("trefoil writhe by projection % .4f +- %.4f\n", est.mean, est.std_error);
}
