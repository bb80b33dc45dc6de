#pragma once

#include <optional>

#include "specgate/measure.hpp"

namespace specgate {

struct MomentStats {
  double expectation = 0.0;
  double second_moment = 0.0;
  double deviation = 0.0;  // sqrt of the clamped central second moment
};

/// Weighted moments on a probability space (total mass 1 within 1e-9).
MomentStats moments(const DiscreteMeasureSpace& space);

struct LagrangeBound {
  double t = 0.0;
  double sigma = 0.0;  // 2t - 1
  std::optional<double> lambda_star;
  std::optional<double> nu_star;
  double bound = 0.0;
};

/// Lower bound on the mass-constrained minimization at level t in (1/2, 1):
///   bound = (1/2)(1+sigma) E - (1/2) sqrt(1-sigma^2) Dev.
/// With zero deviation the multipliers are absent and bound = t*E.
LagrangeBound lagrange_bound(const DiscreteMeasureSpace& space, double t);

/// Dual objective at constant multiplier lambda > 0 and mean constraint
/// multiplier nu:
///   m(lambda, nu) = E - (nu-E)^2/(4 lambda) - Dev^2/(4 lambda) - lambda + nu*sigma.
double dual_value(const MomentStats& stats, double sigma, double lambda, double nu);

}  // namespace specgate
