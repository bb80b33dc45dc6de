#include "specgate/setopt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace specgate {

namespace {

void check_t_range(const DiscreteMeasureSpace& space, double t) {
  if (space.atoms.empty()) fail(Errc::EmptySpace, "empty space");
  if (!(t > 0) || !(t < space.total_mass)) fail(Errc::TOutOfRange, "t must lie in (0, total mass)");
}

}  // namespace

OptResult solve_fractional(const DiscreteMeasureSpace& space, double t) {
  check_t_range(space, t);

  LowerLevelSet level = lower_level_set(space, t);
  const double q = level.threshold;

  OptResult res;
  res.mode = OptMode::Fractional;
  res.witness.full_atoms = level.subset;
  res.witness.mass = level.kappa;

  double below_integral = 0.0;
  for (std::size_t i : level.subset) below_integral += space.atoms[i].value * space.atoms[i].weight;
  res.value = below_integral + (t - level.kappa) * q;

  // Fill the remaining mass from threshold-valued atoms, ascending index.
  double remaining = t - level.kappa;
  for (std::size_t i = 0; i < space.atoms.size() && remaining > 0; ++i) {
    if (space.atoms[i].value != q) continue;
    double w = space.atoms[i].weight;
    if (remaining >= w) {
      res.witness.full_atoms.push_back(i);
      res.witness.mass += w;
      remaining -= w;
    } else {
      res.witness.partial_atom = {i, remaining / w};
      res.witness.mass += remaining;
      remaining = 0;
    }
  }
  return res;
}

OptResult solve_binary_bruteforce(const DiscreteMeasureSpace& space, double t) {
  check_t_range(space, t);
  const std::size_t n = space.atoms.size();
  if (n > 24) fail(Errc::TooManyAtoms, "brute force capped at 24 atoms");

  double best_value = 0.0;
  std::uint32_t best_mask = 0;
  bool found = false;

  const std::uint32_t limit = static_cast<std::uint32_t>(1u << n);
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    double m = 0.0, v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        m += space.atoms[i].weight;
        v += space.atoms[i].value * space.atoms[i].weight;
      }
    }
    if (m < t) continue;
    if (!found || v < best_value || (v == best_value && mask < best_mask)) {
      found = true;
      best_value = v;
      best_mask = mask;
    }
  }
  // mu(X) >= t guarantees at least the full set is feasible.
  OptResult res;
  res.mode = OptMode::Binary;
  res.value = best_value;
  for (std::size_t i = 0; i < n; ++i) {
    if (best_mask & (1u << i)) {
      res.witness.full_atoms.push_back(i);
      res.witness.mass += space.atoms[i].weight;
    }
  }
  return res;
}

SandwichBounds sandwich_bounds(const DiscreteMeasureSpace& space, double t, double theta) {
  if (!(theta > 1)) fail(Errc::BadTheta, "sandwich bounds require theta > 1");
  check_t_range(space, t);
  for (const auto& a : space.atoms)
    if (a.value < 0) fail(Errc::NegativeValues, "sandwich bounds require W >= 0");

  RearrangementProfile p = build_profile(space);
  double wstar = rearrangement_value(p, t, Direction::NonIncreasing);

  SandwichBounds b;
  b.lower = (theta - 1.0) / theta * t * wstar;
  b.upper = (space.total_mass - t) * wstar;

  double scale = std::max(1.0, wstar * space.total_mass);
  double slack = 1e-10 * scale;
  double j_relaxed = solve_fractional(space, space.total_mass - t / theta).value;
  double j_tight = solve_fractional(space, space.total_mass - t).value;
  if (b.lower > j_relaxed + slack || j_tight > b.upper + slack)
    throw std::logic_error("sandwich estimate violated");
  return b;
}

}  // namespace specgate
