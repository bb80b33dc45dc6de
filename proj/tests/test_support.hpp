#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "specgate/measure.hpp"

namespace testutil {

using specgate::DiscreteMeasureSpace;

inline DiscreteMeasureSpace random_space(std::mt19937_64& rng, int max_atoms, double vlo,
                                         double vhi) {
  std::uniform_int_distribution<int> nd(1, max_atoms);
  std::uniform_real_distribution<double> vd(vlo, vhi);
  std::uniform_real_distribution<double> wd(0.05, 1.0);
  DiscreteMeasureSpace s;
  int n = nd(rng);
  for (int i = 0; i < n; ++i) s.add(vd(rng), wd(rng));
  return s;
}

/// Rescales weights to total mass one (probability space).
inline DiscreteMeasureSpace normalized(const DiscreteMeasureSpace& s) {
  DiscreteMeasureSpace out;
  for (const auto& a : s.atoms) out.add(a.value, a.weight / s.total_mass);
  return out;
}

/// Neumaier compensated sum, the reference accumulator for oracles.
inline double kahan_sum(const std::vector<double>& xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 0.0) {
  double scale = std::max({std::abs(a), std::abs(b), 1.0});
  return std::abs(a - b) <= rel * scale + abs_floor;
}

}  // namespace testutil
