#include "specgate/windows.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "specgate/lagrange.hpp"
#include "specgate/parallel.hpp"
#include "specgate/setopt.hpp"

namespace specgate {

namespace {

constexpr double kGeomTol = 1e-12;

double pow_int(double b, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

void CubeWindow::validate() const {
  if (corner.empty()) fail(Errc::ShapeMismatch, "window has no corner coordinates");
  if (!(side > 0)) fail(Errc::ShapeMismatch, "window side must be positive");
  if (resolution < 2) fail(Errc::ResolutionTooLow, "window resolution must be >= 2");
  if (omega_mask) {
    std::size_t n = 1;
    for (int a = 0; a < dimension(); ++a) n *= static_cast<std::size_t>(resolution);
    if (omega_mask->size() != n) fail(Errc::ShapeMismatch, "mask size must equal resolution^d");
  }
}

double GammaSchedule::operator()(double r) const { return K * std::pow(r, alpha); }

void GammaSchedule::validate(int d) const {
  if (d < 3) fail(Errc::DLessThan3, "window schedules are defined for d >= 3");
  double cap = 2.0 * d / (d - 2.0);
  if (!(K > 0)) fail(Errc::BadSchedule, "schedule K must be positive");
  if (!(alpha > 0) || !(alpha < cap)) fail(Errc::BadSchedule, "schedule alpha must lie in (0, 2d/(d-2))");
}

GridFunction sample_window(const PotentialSpec& pot, const CubeWindow& win) {
  win.validate();
  const int d = win.dimension();
  if (d != pot.d) fail(Errc::ShapeMismatch, "window and potential dimensions differ");

  GridFunction g;
  g.d = d;
  g.dims.assign(static_cast<std::size_t>(d), win.resolution);
  g.spacing.assign(static_cast<std::size_t>(d), win.side / win.resolution);
  g.origin.resize(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) g.origin[a] = win.corner[a] + 0.5 * g.spacing[a];
  g.topology = Topology::Cube;
  g.values.resize(g.size());

  std::vector<double> x(static_cast<std::size_t>(d));
  std::size_t flat = 0;
  for (MultiIndex it(g.dims); !it.done(); it.next(), ++flat) {
    const auto& idx = *it;
    for (int a = 0; a < d; ++a) x[a] = g.origin[a] + idx[a] * g.spacing[a];
    double v = evaluate(pot, x);
    if (!std::isfinite(v)) fail(Errc::EvaluationDomain, "potential not finite on window");
    g.values[flat] = v;
  }
  return g;
}

WindowStats window_statistics(const PotentialSpec& pot, const CubeWindow& win,
                              const GammaSchedule& sched, std::optional<double> gmd_delta) {
  const int d = win.dimension();
  sched.validate(d);
  double gamma = sched(win.side);
  if (!(gamma > 0) || !(gamma < 1)) fail(Errc::BadSchedule, "gamma(r) must land in (0,1)");

  GridFunction g = sample_window(pot, win);
  for (double v : g.values)
    if (v < 0) fail(Errc::NegativeSamples, "window statistics require V >= 0 samples");

  DiscreteMeasureSpace cells = grid_to_measure(g);
  RearrangementProfile profile = build_profile(cells);
  const double mass = cells.total_mass;  // == side^d up to rounding

  WindowStats out;
  out.vstar_at_delta = rearrangement_value(profile, gamma * mass, Direction::NonIncreasing);

  MomentStats ms = moments(grid_to_measure(g, nullptr, true));
  out.lagrange_stat = ms.expectation - std::sqrt(gamma) * ms.deviation;

  if (gmd_delta) {
    if (!(*gmd_delta > 0)) fail(Errc::TOutOfRange, "gmd delta must be positive");
    double integral = 0.0;
    for (const auto& a : cells.atoms) integral += a.value * a.weight;
    if (integral > 0) {
      double s = *gmd_delta * integral / mass;
      out.gmd_ratio = std::clamp(distribution(profile, s, Direction::NonIncreasing) / mass, 0.0, 1.0);
    } else {
      out.gmd_ratio = 0.0;  // the averaged-integral threshold degenerates
    }
  }
  return out;
}

ScanReport ray_scan(const PotentialSpec& pot, const std::vector<long>& direction, int steps,
                    double r, const GammaSchedule& sched, int resolution,
                    std::optional<double> gmd_delta) {
  if (steps < 2) fail(Errc::TOutOfRange, "ray scans need at least 2 steps");
  if (direction.size() != static_cast<std::size_t>(pot.d))
    fail(Errc::ShapeMismatch, "direction dimension does not match potential");

  ScanReport rep;
  rep.set_meta("potential", pot.id());
  rep.set_meta("r", r);
  rep.set_meta("gamma_k", sched.K);
  rep.set_meta("gamma_alpha", sched.alpha);
  rep.set_meta("resolution", static_cast<double>(resolution));
  if (gmd_delta) rep.set_meta("gmd_delta", *gmd_delta);

  rep.columns = {"vstar", "lagrange_stat"};
  if (gmd_delta) rep.columns.push_back("gmd_ratio");

  rep.rows.resize(static_cast<std::size_t>(steps));
  parallel_for(static_cast<std::size_t>(steps), [&](std::size_t k) {
    CubeWindow win;
    win.corner.resize(direction.size());
    for (std::size_t a = 0; a < direction.size(); ++a)
      win.corner[a] = static_cast<double>(direction[a]) * static_cast<double>(k);
    win.side = r;
    win.resolution = resolution;
    WindowStats s = window_statistics(pot, win, sched, gmd_delta);

    ReportRow row;
    row.location = win.corner;
    row.stats.push_back(ReportValue::finite(*s.vstar_at_delta));
    row.stats.push_back(ReportValue::finite(*s.lagrange_stat));
    if (gmd_delta) row.stats.push_back(ReportValue::finite(*s.gmd_ratio));
    rep.rows[k] = std::move(row);
  });

  long linf = 0;
  for (long dj : direction) linf = std::max(linf, std::labs(dj) * (steps - 1));
  linf += static_cast<long>(std::ceil(r));
  double feature = pot.min_feature_scale(linf);
  bool aliased = (r / resolution) > feature / 2.0;
  rep.set_meta("aliased", aliased ? "true" : "false");

  // monotone-trend flag across the final half of the rows, per statistic
  for (std::size_t c = 0; c < rep.columns.size(); ++c) {
    bool increasing = true;
    std::size_t from = rep.rows.size() / 2;
    for (std::size_t k = from + 1; k < rep.rows.size(); ++k)
      increasing = increasing && rep.rows[k].stats[c].value > rep.rows[k - 1].stats[c].value;
    rep.set_meta("trend_increasing_" + rep.columns[c], increasing ? "true" : "false");
  }
  return rep;
}

namespace {

bool box_contains_cell(const Box& box, const std::vector<double>& lo, const std::vector<double>& hi) {
  for (std::size_t a = 0; a < lo.size(); ++a)
    if (lo[a] < box.lo[a] - kGeomTol || hi[a] > box.hi[a] + kGeomTol) return false;
  return true;
}

}  // namespace

MadicResult madic_scan(const PotentialSpec& pot, const std::vector<long>& l, int n, int m,
                       const DenseSystemSpec& system, const GammaSchedule& sched, int resolution) {
  const int d = pot.d;
  if (static_cast<std::size_t>(d) != l.size()) fail(Errc::ShapeMismatch, "cell index dimension mismatch");
  if (n < 1 || m < 2) fail(Errc::TOutOfRange, "madic_scan requires n >= 1, m >= 2");
  if (system.dimension != d) fail(Errc::ShapeMismatch, "dense system dimension mismatch");
  sched.validate(d);

  long cells_per_axis = 1;
  for (int i = 0; i < n; ++i) cells_per_axis *= m;
  if (resolution % cells_per_axis != 0)
    fail(Errc::BadResolution, "resolution must divide by m^n");
  int per_cell = static_cast<int>(resolution / cells_per_axis);
  if (per_cell < 2) fail(Errc::ResolutionTooLow, "fewer than 2 samples per axis per cell");

  double cell_side = 1.0 / static_cast<double>(cells_per_axis);
  double gamma = sched(cell_side);
  if (!(gamma > 0) || !(gamma < 1)) fail(Errc::BadSchedule, "gamma(m^-n) must land in (0,1)");
  double level = gamma * pow_int(cell_side, d);

  std::vector<std::vector<Box>> levels;
  int jmax = std::min(n, system.max_level());
  for (int j = 1; j <= jmax; ++j) levels.push_back(system.boxes(j));

  // collect the m-adic cells of depth n lying inside some D_j, j <= n
  std::vector<std::vector<int>> chosen;
  std::vector<int> grid_dims(static_cast<std::size_t>(d), static_cast<int>(cells_per_axis));
  for (MultiIndex it(grid_dims); !it.done(); it.next()) {
    const auto& idx = *it;
    std::vector<double> lo(static_cast<std::size_t>(d)), hi(lo.size());
    for (int a = 0; a < d; ++a) {
      lo[a] = idx[a] * cell_side;
      hi[a] = (idx[a] + 1) * cell_side;
    }
    bool inside = false;
    for (const auto& boxes : levels) {
      for (const Box& box : boxes)
        if (box_contains_cell(box, lo, hi)) {
          inside = true;
          break;
        }
      if (inside) break;
    }
    if (inside) chosen.push_back(idx);
  }
  if (chosen.empty()) fail(Errc::EmptyXi, "no m-adic cell lies inside the dense system");

  std::vector<double> vstars(chosen.size());
  parallel_for(chosen.size(), [&](std::size_t c) {
    CubeWindow win;
    win.corner.resize(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) win.corner[a] = static_cast<double>(l[a]) + chosen[c][a] * cell_side;
    win.side = cell_side;
    win.resolution = per_cell;
    GridFunction g = sample_window(pot, win);
    for (double v : g.values)
      if (v < 0) fail(Errc::NegativeSamples, "madic_scan requires V >= 0");
    RearrangementProfile p = build_profile(grid_to_measure(g));
    vstars[c] = rearrangement_value(p, level, Direction::NonIncreasing);
  });

  MadicResult res;
  res.cells = static_cast<long>(chosen.size());
  res.min_vstar = *std::min_element(vstars.begin(), vstars.end());
  return res;
}

DensityResult verify_logm_theta_density(const DenseSystemSpec& system, int m, double theta,
                                        int trials, std::uint64_t rng_seed) {
  if (!(theta > 0) || !(theta < 1)) fail(Errc::BadTheta, "theta must lie in (0,1)");
  if (m < 2) fail(Errc::TOutOfRange, "m must be > 1");
  const int d = system.dimension;

  double r_max = std::min(1.0, 1.0 / (theta * m * m));
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  DensityResult res;
  for (int trial = 0; trial < trials; ++trial) {
    // log-uniform radii cover three decades below r_max
    double r = r_max * std::exp(-unit(rng) * std::log(1e3));
    std::vector<double> z(static_cast<std::size_t>(d));
    for (double& zj : z) zj = unit(rng) * (1.0 - r);

    int jmax = static_cast<int>(std::floor(std::log(1.0 / (theta * r)) / std::log(double(m))));
    jmax = std::min(jmax, system.max_level());

    bool found = false;
    for (int j = 1; j <= jmax && !found; ++j) {
      for (const Box& box : system.boxes(j)) {
        bool fits = true;
        for (int a = 0; a < d; ++a) {
          double lo = std::max(box.lo[a], z[a]);
          double hi = std::min(box.hi[a], z[a] + r);
          if (hi - lo < theta * r - kGeomTol) {
            fits = false;
            break;
          }
        }
        if (fits) {
          found = true;
          break;
        }
      }
    }
    if (!found) {
      res.pass = false;
      res.failures.push_back({trial, r, z});
    }
  }
  return res;
}

OmegaStats omega_statistics(const PotentialSpec& pot, const CubeWindow& win, double gamma) {
  win.validate();
  if (!win.omega_mask) fail(Errc::MaskMissing, "omega statistics need a window mask");
  if (!(gamma > 0) || !(gamma < 1)) fail(Errc::TOutOfRange, "gamma must lie in (0,1)");

  GridFunction g = sample_window(pot, win);
  const std::vector<std::uint8_t>& mask = *win.omega_mask;

  std::size_t kept = 0;
  for (std::uint8_t b : mask) kept += (b != 0);
  double fraction = static_cast<double>(kept) / static_cast<double>(g.size());
  const int d = win.dimension();
  double window_mass = pow_int(win.side, d);

  OmegaStats out;

  if (fraction < (1.0 - gamma) - kGeomTol) {
    out.r_v = ReportValue::inf();
  } else if (std::abs(fraction - (1.0 - gamma)) <= kGeomTol) {
    double integral = 0.0;
    double cv = g.cell_volume();
    for (std::size_t i = 0; i < g.size(); ++i)
      if (mask[i]) integral += g.values[i] * cv;
    out.r_v = ReportValue::finite(integral);
  } else {
    DiscreteMeasureSpace cells = grid_to_measure(g, &mask);
    OptResult opt = solve_fractional(cells, (1.0 - gamma) * window_mass);
    out.r_v = ReportValue::finite(opt.value);
  }

  if (fraction < (1.0 - gamma / 2.0) - kGeomTol) {
    out.y_v = ReportValue::inf();
  } else {
    double gbar = std::max(0.0, 1.0 - (1.0 - gamma / 2.0) / fraction);
    MomentStats ms = moments(grid_to_measure(g, &mask, true));
    out.y_v = ReportValue::finite(ms.expectation - std::sqrt(2.0 * gbar) * ms.deviation);
  }
  return out;
}

}  // namespace specgate
