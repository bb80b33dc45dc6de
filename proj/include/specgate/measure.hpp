#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "specgate/errors.hpp"
#include "specgate/grid.hpp"

namespace specgate {

/// Finite measure space as a list of weighted atoms. One atom carries the
/// function value at a point together with the measure of that point, so the
/// same object stands for (X, mu) and for W on it. Order of atoms carries no
/// meaning; duplicate values are allowed.
struct DiscreteMeasureSpace {
  struct Atom {
    double value;
    double weight;  // > 0
  };

  std::vector<Atom> atoms;
  double total_mass = 0.0;

  static DiscreteMeasureSpace from_pairs(const std::vector<std::pair<double, double>>& vw);
  void add(double value, double weight);
  void validate() const;
};

/// Value-sorted cumulative table. values are strictly increasing after
/// duplicate merging; cum_leq[i] = mu{W <= values[i]}, last entry equals
/// total_mass.
struct RearrangementProfile {
  std::vector<double> values;
  std::vector<double> cum_leq;
  double total_mass = 0.0;

  std::size_t levels() const { return values.size(); }
  /// mu{W >= values[i]}.
  double tail_mass(std::size_t i) const { return i == 0 ? total_mass : total_mass - cum_leq[i - 1]; }
};

enum class Direction { NonIncreasing, NonDecreasing };

RearrangementProfile build_profile(const DiscreteMeasureSpace& space);

/// NonIncreasing: mu{W >= s}. NonDecreasing: mu{W <= s}.
double distribution(const RearrangementProfile& profile, double s, Direction dir);

/// Generalized inverses of the two distribution functions, with the
/// convention sup over the empty set of {s > 0 : ...} equal to 0:
///   NonIncreasing: sup{s > 0 : mu{W >= s} >= t}
///   NonDecreasing: sup{s > 0 : mu{W <= s} <  t}
/// NonDecreasing with t > total_mass returns +infinity (the defining set is
/// unbounded above).
double rearrangement_value(const RearrangementProfile& profile, double t, Direction dir);

/// Unclamped t-quantile under mu{W <= s}: the smallest merged value whose
/// cumulative measure reaches t. Feeds level sets and the set optimizer,
/// where negative values must pass through unchanged.
double lower_quantile(const RearrangementProfile& profile, double t);

struct LowerLevelSet {
  std::vector<std::size_t> subset;  // atom indices with value strictly below threshold
  double kappa = 0.0;               // their total weight
  double threshold = 0.0;           // the t-quantile
};

LowerLevelSet lower_level_set(const DiscreteMeasureSpace& space, double t);

/// Quadrature bridge: one atom per unmasked grid cell, value = sample,
/// weight = cell volume (or 1/#unmasked when normalized).
DiscreteMeasureSpace grid_to_measure(const GridFunction& g,
                                     const std::vector<std::uint8_t>* mask = nullptr,
                                     bool normalized = false);

}  // namespace specgate
