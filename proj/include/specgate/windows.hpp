#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "specgate/measure.hpp"
#include "specgate/potentials.hpp"
#include "specgate/report.hpp"

namespace specgate {

/// Axis-aligned cube window with a uniform midpoint sample grid; the optional
/// mask marks the cells that belong to the ambient domain.
struct CubeWindow {
  std::vector<double> corner;
  double side = 1.0;
  int resolution = 2;  // samples per axis, >= 2
  std::optional<std::vector<std::uint8_t>> omega_mask;

  int dimension() const { return static_cast<int>(corner.size()); }
  void validate() const;
};

/// Power-family window weight gamma(r) = K * r^alpha. Admissible exponents
/// are 0 < alpha < 2d/(d-2); the evaluated weight must land in (0, 1).
struct GammaSchedule {
  double K = 1.0;
  double alpha = 1.0;

  double operator()(double r) const;
  void validate(int d) const;
};

struct WindowStats {
  std::optional<double> vstar_at_delta;
  std::optional<double> lagrange_stat;
  std::optional<double> gmd_ratio;
  std::optional<ReportValue> r_v;
  std::optional<ReportValue> y_v;
};

GridFunction sample_window(const PotentialSpec& pot, const CubeWindow& win);

/// Per-window statistics: rearrangement value at level gamma(r) * r^d on the
/// cell measure, the expectation-deviation statistic on the normalized
/// measure, and (when gmd_delta is given) the upper-level-set fraction at the
/// averaged-integral threshold.
WindowStats window_statistics(const PotentialSpec& pot, const CubeWindow& win,
                              const GammaSchedule& sched,
                              std::optional<double> gmd_delta = std::nullopt);

/// Windows Q_r(k * direction) for k = 0..steps-1, one report row each.
ScanReport ray_scan(const PotentialSpec& pot, const std::vector<long>& direction, int steps,
                    double r, const GammaSchedule& sched, int resolution,
                    std::optional<double> gmd_delta = std::nullopt);

struct MadicResult {
  double min_vstar = 0.0;
  long cells = 0;
};

/// Minimum of the rearrangement value at level gamma(m^-n) * m^-nd over all
/// m-adic cells of depth n inside D_1(l) u ... u D_n(l). `resolution` counts
/// samples per axis across the whole unit cell and must divide by m^n.
MadicResult madic_scan(const PotentialSpec& pot, const std::vector<long>& l, int n, int m,
                       const DenseSystemSpec& system, const GammaSchedule& sched, int resolution);

struct DensityFailure {
  int trial = 0;
  double r = 0.0;
  std::vector<double> z;
};

struct DensityResult {
  bool pass = true;
  std::vector<DensityFailure> failures;
};

/// Randomized check of the (log_m, theta)-density property: every sampled
/// cube Q_r(z) in the unit cube must contain a theta*r sub-cube lying inside
/// some box of D_j with j <= log_m(1/(theta r)).
DensityResult verify_logm_theta_density(const DenseSystemSpec& system, int m, double theta,
                                        int trials, std::uint64_t rng_seed);

struct OmegaStats {
  ReportValue r_v;
  ReportValue y_v;
};

/// Masked-window statistics. r_v: +inf when the kept fraction falls below
/// 1 - gamma, the plain integral at equality, otherwise the constrained
/// minimum at mass (1-gamma) * r^d. y_v: +inf when the kept fraction falls
/// below 1 - gamma/2, otherwise E - sqrt(2 gbar) Dev on the kept cells with
/// gbar = 1 - (1 - gamma/2)/fraction.
OmegaStats omega_statistics(const PotentialSpec& pot, const CubeWindow& win, double gamma);

}  // namespace specgate
