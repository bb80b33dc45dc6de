#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "specgate/measure.hpp"

namespace specgate {

/// A measurable set of prescribed mass assembled from whole atoms plus at
/// most one partially taken atom. The partial atom never appears in
/// full_atoms.
struct FractionalSet {
  std::vector<std::size_t> full_atoms;
  std::optional<std::pair<std::size_t, double>> partial_atom;  // (index, fraction in (0,1))
  double mass = 0.0;
};

enum class OptMode { Fractional, Binary };

struct OptResult {
  double value = 0.0;
  FractionalSet witness;
  OptMode mode = OptMode::Fractional;
};

/// Exact minimum of the mass-constrained integral in the relaxed model where
/// atoms may be taken fractionally; the witness has mass exactly t. Equal
/// values at the threshold fill in ascending original-index order.
OptResult solve_fractional(const DiscreteMeasureSpace& space, double t);

/// Exhaustive minimum over atom subsets E with mu(E) >= t. Ties resolve to
/// the numerically smallest index bitmask. Atom count capped at 24.
OptResult solve_binary_bruteforce(const DiscreteMeasureSpace& space, double t);

struct SandwichBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Two-sided control of the optimal value via the non-increasing
/// rearrangement at level t: for theta > 1 and nonnegative values,
///   lower = ((theta-1)/theta) * t * Wstar(t) <= value at mass - t/theta,
///   value at mass - t <= upper = (mass - t) * Wstar(t).
/// Both inequalities are re-checked against solve_fractional and a violation
/// throws std::logic_error.
SandwichBounds sandwich_bounds(const DiscreteMeasureSpace& space, double t, double theta);

}  // namespace specgate
