#include "specgate/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace specgate {

DiscreteMeasureSpace DiscreteMeasureSpace::from_pairs(const std::vector<std::pair<double, double>>& vw) {
  DiscreteMeasureSpace s;
  for (const auto& [v, w] : vw) s.add(v, w);
  return s;
}

void DiscreteMeasureSpace::add(double value, double weight) {
  if (!(weight > 0) || !std::isfinite(weight) || !std::isfinite(value))
    fail(Errc::NegativeValues, "atom weights must be finite and positive, values finite");
  atoms.push_back({value, weight});
  total_mass += weight;
}

void DiscreteMeasureSpace::validate() const {
  if (atoms.empty()) fail(Errc::EmptySpace, "measure space has no atoms");
  double sum = 0.0;
  for (const Atom& a : atoms) {
    if (!(a.weight > 0)) fail(Errc::NegativeValues, "atom weight must be positive");
    sum += a.weight;
  }
  double tol = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, sum);
  if (std::abs(sum - total_mass) > tol) fail(Errc::ShapeMismatch, "total_mass is stale");
}

RearrangementProfile build_profile(const DiscreteMeasureSpace& space) {
  if (space.atoms.empty()) fail(Errc::EmptySpace, "cannot build a profile of an empty space");

  std::vector<std::size_t> order(space.atoms.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return space.atoms[a].value < space.atoms[b].value;
  });

  RearrangementProfile p;
  double running = 0.0;
  for (std::size_t k : order) {
    const auto& a = space.atoms[k];
    running += a.weight;
    if (!p.values.empty() && p.values.back() == a.value)
      p.cum_leq.back() = running;
    else {
      p.values.push_back(a.value);
      p.cum_leq.push_back(running);
    }
  }
  p.total_mass = running;
  return p;
}

double distribution(const RearrangementProfile& profile, double s, Direction dir) {
  const auto& v = profile.values;
  if (dir == Direction::NonDecreasing) {
    // mu{W <= s}
    auto it = std::upper_bound(v.begin(), v.end(), s);
    if (it == v.begin()) return 0.0;
    return profile.cum_leq[static_cast<std::size_t>(it - v.begin()) - 1];
  }
  // mu{W >= s} = total - mu{W < s}
  auto it = std::lower_bound(v.begin(), v.end(), s);
  if (it == v.begin()) return profile.total_mass;
  return profile.total_mass - profile.cum_leq[static_cast<std::size_t>(it - v.begin()) - 1];
}

double rearrangement_value(const RearrangementProfile& profile, double t, Direction dir) {
  if (!(t > 0)) fail(Errc::NonPositiveT, "rearrangement_value requires t > 0");
  const auto& v = profile.values;

  if (dir == Direction::NonIncreasing) {
    // largest level whose tail mass still reaches t; the qualifying set of
    // s > 0 is empty when that level is <= 0 or when t exceeds the total.
    if (t > profile.total_mass) return 0.0;
    std::size_t lo = 0, hi = v.size();  // invariant: tail_mass(lo) >= t
    while (lo + 1 < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (profile.tail_mass(mid) >= t)
        lo = mid;
      else
        hi = mid;
    }
    return std::max(v[lo], 0.0);
  }

  if (t > profile.total_mass) return std::numeric_limits<double>::infinity();
  double q = lower_quantile(profile, t);
  return std::max(q, 0.0);
}

double lower_quantile(const RearrangementProfile& profile, double t) {
  if (!(t > 0)) fail(Errc::NonPositiveT, "lower_quantile requires t > 0");
  if (t > profile.total_mass) fail(Errc::TOutOfRange, "lower_quantile requires t <= total mass");
  auto it = std::lower_bound(profile.cum_leq.begin(), profile.cum_leq.end(), t);
  return profile.values[static_cast<std::size_t>(it - profile.cum_leq.begin())];
}

LowerLevelSet lower_level_set(const DiscreteMeasureSpace& space, double t) {
  if (space.atoms.empty()) fail(Errc::EmptySpace, "empty space");
  if (!(t > 0) || !(t < space.total_mass))
    fail(Errc::TOutOfRange, "lower_level_set requires 0 < t < total mass");
  RearrangementProfile p = build_profile(space);
  LowerLevelSet out;
  out.threshold = lower_quantile(p, t);
  for (std::size_t i = 0; i < space.atoms.size(); ++i) {
    if (space.atoms[i].value < out.threshold) {
      out.subset.push_back(i);
      out.kappa += space.atoms[i].weight;
    }
  }
  return out;
}

DiscreteMeasureSpace grid_to_measure(const GridFunction& g, const std::vector<std::uint8_t>* mask,
                                     bool normalized) {
  g.check_shape();
  if (mask && mask->size() != g.size())
    fail(Errc::ShapeMismatch, "mask length does not match grid size");

  std::size_t kept = g.size();
  if (mask) {
    kept = 0;
    for (std::uint8_t m : *mask) kept += (m != 0);
    if (kept == 0) fail(Errc::EmptySpace, "mask excludes every cell");
  }

  double w = normalized ? 1.0 / static_cast<double>(kept) : g.cell_volume();
  DiscreteMeasureSpace s;
  s.atoms.reserve(kept);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    s.add(g.values[i], w);
  }
  return s;
}

}  // namespace specgate
