#include "specgate/lagrange.hpp"

#include <cmath>

namespace specgate {

MomentStats moments(const DiscreteMeasureSpace& space) {
  if (space.atoms.empty()) fail(Errc::EmptySpace, "empty space");
  if (std::abs(space.total_mass - 1.0) > 1e-9)
    fail(Errc::NotProbability, "moments require a probability space (mass 1 within 1e-9)");

  MomentStats s;
  for (const auto& a : space.atoms) {
    s.expectation += a.value * a.weight;
    s.second_moment += a.value * a.value * a.weight;
  }
  double var = s.second_moment - s.expectation * s.expectation;
  s.deviation = var > 0 ? std::sqrt(var) : 0.0;
  return s;
}

LagrangeBound lagrange_bound(const DiscreteMeasureSpace& space, double t) {
  if (!(t > 0.5) || !(t < 1.0)) fail(Errc::TOutOfHalfOpen, "t must lie in (1/2, 1)");
  MomentStats s = moments(space);

  LagrangeBound b;
  b.t = t;
  b.sigma = 2.0 * t - 1.0;
  if (s.deviation > 0) {
    double root = std::sqrt(1.0 - b.sigma * b.sigma);
    b.lambda_star = s.deviation / (2.0 * root);
    b.nu_star = s.expectation + 2.0 * *b.lambda_star * b.sigma;
    b.bound = 0.5 * (1.0 + b.sigma) * s.expectation - 0.5 * root * s.deviation;
  } else {
    // W is constant almost everywhere; the saddle formulas degenerate.
    b.bound = t * s.expectation;
  }
  return b;
}

double dual_value(const MomentStats& stats, double sigma, double lambda, double nu) {
  if (!(lambda > 0)) fail(Errc::NonPositiveLambda, "dual_value requires lambda > 0");
  double dm = nu - stats.expectation;
  double var = stats.deviation * stats.deviation;
  return stats.expectation - dm * dm / (4.0 * lambda) - var / (4.0 * lambda) - lambda + nu * sigma;
}

}  // namespace specgate
