#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "specgate/errors.hpp"

namespace specgate {

/// Scalar laws of the lattice cell index |l|_inf used for amplitudes, lattice
/// densities and ball radii.
struct GrowthLaw {
  enum class Kind { Const, OnePlusLinf, OnePlusLog, LogShift, CeilSqLogShift, PowLinf };

  Kind kind = Kind::Const;
  double scale = 1.0;
  double param = 1.0;  // shift for the log kinds, exponent for PowLinf

  double operator()(long linf) const;

  static GrowthLaw constant(double c) { return {Kind::Const, c, 0.0}; }
  static GrowthLaw parse(const std::string& text);
  std::string str() const;
};

struct Interval {
  double lo, hi;
  double length() const { return hi - lo; }
};

/// Closures of the intervals removed from [0,1] at step n of the middle-third
/// construction: 2^(n-1) pairwise disjoint intervals of length 3^-n, ordered
/// left to right.
std::vector<Interval> cantor_adjacent(int n);

/// Depth n >= 1 of the removed middle third containing u, or 0 if u survives
/// every step up to max_depth (or lies outside [0,1]).
int cantor_gap_depth(double u, int max_depth = 40);

/// Exact Lebesgue measure of {x in [a,b] : theta_beta(S x) > 0} where
/// theta_beta is the 1-periodic step profile equal to 1 on (0, beta] and 0 on
/// (beta, 1]. Computed by interval arithmetic over whole periods, never by
/// sampling.
double theta_measure(double S, double beta, double a, double b);

/// 1 on the raised part of the period, 0 elsewhere.
inline double theta_step(double beta, double t) {
  double f = t - std::floor(t);
  return (f > 0 && f <= beta) ? 1.0 : 0.0;
}

/// x - sqrt(delta) * sqrt(x - x^2) on (0, 1].
double f_delta(double delta, double x);

// --- potential zoo -----------------------------------------------------

struct ConstantPot {
  double c = 0.0;
};

/// Oscillating potential supported on the Cantor adjacent intervals of each
/// unit cell, amplitude N(l), duty cycle 3^(-alpha n) at depth n, oscillation
/// rate 3^p with p = |l|_inf + 1 unless fixed.
struct VAlphaPot {
  double alpha = 1.0;
  GrowthLaw amplitude{GrowthLaw::Kind::OnePlusLog, 1.0, 1.0};
  std::optional<long> fixed_p;
};

/// Dyadic-shell variant: on the shell (2^-n, 2^-n+1] of each unit cell the
/// duty cycle is 2^(-alpha n) and the oscillation rate is p itself.
struct PsiLagrPot {
  double alpha = 1.0;
  GrowthLaw amplitude{GrowthLaw::Kind::OnePlusLog, 1.0, 1.0};
  std::optional<long> fixed_p;
};

/// Mean-preserving thinning of VAlphaPot: duty cycle psi(3^-(n+1)) with the
/// amplitude raised by 3^(-alpha n)/beta, psi(r) = coeff * r^exponent.
struct VPsiPot {
  double alpha = 2.0;
  GrowthLaw amplitude{GrowthLaw::Kind::OnePlusLog, 1.0, 1.0};
  double psi_coeff = 1.0;
  double psi_exponent = 6.0;
  std::optional<long> fixed_p;
};

/// N(l) * prod_j (1 - cos(m(l) x_j)) on each unit cell.
struct CosineProductPot {
  GrowthLaw amplitude{GrowthLaw::Kind::Const, 1.0, 0.0};
  GrowthLaw rate{GrowthLaw::Kind::Const, 1.0, 0.0};
};

struct ExpSquarePot {};

enum class BumpShape { BallIndicator, RadialBump };

/// Per unit cell Q_1(l): m(l)^d bumps of radius r(l)/m(l) on the shifted
/// sublattice, scaled by N(l). Radii r(l) must stay in (0, 1/2).
struct MolchanovLatticePot {
  GrowthLaw amplitude{GrowthLaw::Kind::OnePlusLog, 1.0, 1.0};
  GrowthLaw density{GrowthLaw::Kind::Const, 2.0, 0.0};  // m(l), rounded to >= 1
  GrowthLaw radius{GrowthLaw::Kind::Const, 0.25, 0.0};  // r(l)
  BumpShape shape = BumpShape::BallIndicator;
};

struct CustomPot {
  std::function<double(std::span<const double>)> fn;
  std::string label = "custom";
};

struct PotentialSpec {
  int d = 3;
  std::variant<ConstantPot, VAlphaPot, PsiLagrPot, VPsiPot, CosineProductPot, ExpSquarePot,
               MolchanovLatticePot, CustomPot>
      body;

  std::string id() const;
  void validate() const;

  /// Smallest oscillation length scale over cells with |l|_inf <= linf_max;
  /// +infinity for feature-free kinds. Used for aliasing flags.
  double min_feature_scale(long linf_max) const;
};

double evaluate(const PotentialSpec& spec, std::span<const double> x);

/// Exact measure fraction of {V > 0} in the unit cell at l for the ball
/// indicator lattice potential: r(l)^d * mes(B_1/2).
double support_fraction(const PotentialSpec& spec, const std::vector<long>& l);

double unit_ball_volume(int d);

std::string potential_to_json(const PotentialSpec& spec);
PotentialSpec potential_from_json(const std::string& text);
PotentialSpec load_potential(const std::string& path);

// --- dense systems ------------------------------------------------------

struct Box {
  std::vector<double> lo, hi;
};

/// Sequence D_1, D_2, ... of finite unions of axis boxes inside the unit
/// cube, the scaffolding that density checks and m-adic scans walk over.
struct DenseSystemSpec {
  enum class Kind { CantorAdjacent, ProductWithCube, Custom };

  Kind kind = Kind::CantorAdjacent;
  int dimension = 1;
  std::vector<std::vector<Box>> custom_levels;  // Custom only, custom_levels[j-1] = boxes of D_j

  /// Boxes of D_j inside [0,1]^dimension.
  std::vector<Box> boxes(int j) const;
  int max_level() const;
};

std::string dense_system_to_json(const DenseSystemSpec& system);
DenseSystemSpec dense_system_from_json(const std::string& text);
DenseSystemSpec load_dense_system(const std::string& path);

}  // namespace specgate
