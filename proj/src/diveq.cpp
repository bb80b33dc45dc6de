#include "specgate/diveq.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>

#include <fftw3.h>

namespace specgate {

namespace {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<cplx> fft(const std::vector<int>& dims, std::vector<cplx> data, int sign) {
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(),
                         reinterpret_cast<fftw_complex*>(data.data()),
                         reinterpret_cast<fftw_complex*>(data.data()), sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return data;
}

/// signed mode number of DFT index i on an axis of size n; Nyquist maps to -n/2
int mode_of(int i, int n) { return i <= (n - 1) / 2 ? i : i - n; }

bool has_nyquist(const std::vector<int>& modes, const std::vector<int>& dims) {
  for (std::size_t a = 0; a < modes.size(); ++a)
    if (dims[a] % 2 == 0 && modes[a] == -dims[a] / 2) return true;
  return false;
}

void require_unit_torus(const GridFunction& g) {
  g.check_shape();
  if (g.topology != Topology::Torus) fail(Errc::WrongTopology, "operation requires a torus grid");
  for (int a = 0; a < g.d; ++a)
    if (std::abs(g.dims[a] * g.spacing[a] - 1.0) > 1e-9)
      fail(Errc::WrongTopology, "torus grids must have unit period per axis");
}

std::vector<cplx> to_complex(const std::vector<double>& v) {
  std::vector<cplx> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

double trapezoid_weight(const std::vector<int>& idx, const GridFunction& g) {
  if (g.topology == Topology::Torus) return g.cell_volume();
  double w = g.cell_volume();
  for (int a = 0; a < g.d; ++a)
    if (idx[a] == 0 || idx[a] == g.dims[a] - 1) w *= 0.5;
  return w;
}

double grid_lp_norm(const GridFunction& g, double p) {
  double acc = 0.0;
  std::size_t flat = 0;
  for (MultiIndex it(g.dims); !it.done(); it.next(), ++flat)
    acc += std::pow(std::abs(g.values[flat]), p) * trapezoid_weight(*it, g);
  return std::pow(acc, 1.0 / p);
}

double vector_lp_norm(const VectorFieldGrid& vf, double p) {
  const GridFunction& g0 = vf.geometry();
  double acc = 0.0;
  std::size_t flat = 0;
  for (MultiIndex it(g0.dims); !it.done(); it.next(), ++flat) {
    double m2 = 0.0;
    for (const GridFunction& g : vf.components) m2 += g.values[flat] * g.values[flat];
    acc += std::pow(m2, 0.5 * p) * trapezoid_weight(*it, g0);
  }
  return std::pow(acc, 1.0 / p);
}

}  // namespace

SpectralConstants constants(int d) {
  if (d < 3) fail(Errc::DLessThan3, "constants are defined for d >= 3");
  const long double dd = d;
  const long double pi = 3.14159265358979323846264338328L;

  SpectralConstants out;
  out.C = static_cast<double>(std::sqrt(1.0L / (pi * dd * (dd - 2.0L))) *
                              std::exp((std::lgamma(dd) - std::lgamma(dd / 2.0L)) / dd));

  long double vball = std::exp(0.5L * dd * std::log(pi) - std::lgamma(dd / 2.0L + 1.0L));
  out.c = static_cast<double>(
      std::exp(-dd / (dd - 2.0L) * std::log(dd * (dd - 2.0L) * std::pow(vball, 2.0L / dd))));

  long double omega_surface = 2.0L * std::exp(0.5L * dd * std::log(pi) - std::lgamma(dd / 2.0L));
  long double pow2 = std::pow(2.0L, dd - 2.0L);
  out.G = static_cast<double>((dd - 2.0L) * omega_surface * pow2 / (pow2 - 1.0L));
  out.G_volume_reading = static_cast<double>((dd - 2.0L) * vball * pow2 / (pow2 - 1.0L));
  return out;
}

std::size_t SpectralCoeffs::index(const std::vector<int>& k) const {
  std::size_t flat = 0;
  std::size_t width = static_cast<std::size_t>(2 * band + 1);
  for (int a = 0; a < d; ++a) {
    if (std::abs(k[static_cast<std::size_t>(a)]) > band)
      fail(Errc::ShapeMismatch, "mode index outside the band");
    flat = flat * width + static_cast<std::size_t>(k[static_cast<std::size_t>(a)] + band);
  }
  return flat;
}

bool SpectralCoeffs::hermitian(double tol) const {
  std::vector<int> dims(static_cast<std::size_t>(d), 2 * band + 1);
  std::vector<int> k(static_cast<std::size_t>(d)), neg(k.size());
  for (MultiIndex it(dims); !it.done(); it.next()) {
    for (int a = 0; a < d; ++a) {
      k[static_cast<std::size_t>(a)] = (*it)[a] - band;
      neg[static_cast<std::size_t>(a)] = -k[static_cast<std::size_t>(a)];
    }
    if (std::abs(at(k) - std::conj(at(neg))) > tol) return false;
  }
  return true;
}

SpectralCoeffs transform_banded(const GridFunction& g, int band) {
  require_unit_torus(g);
  for (int a = 0; a < g.d; ++a)
    if (band > (g.dims[a] - 1) / 2)
      fail(Errc::BadResolution, "band exceeds the grid's alias-free range");

  std::vector<cplx> what = fft(g.dims, to_complex(g.values), FFTW_FORWARD);
  SpectralCoeffs out;
  out.d = g.d;
  out.band = band;
  std::size_t width = static_cast<std::size_t>(2 * band + 1);
  std::size_t count = 1;
  for (int a = 0; a < g.d; ++a) count *= width;
  out.values.assign(count, 0.0);

  const double scale = 1.0 / static_cast<double>(g.size());
  std::size_t flat = 0;
  std::vector<int> k(static_cast<std::size_t>(g.d));
  for (MultiIndex it(g.dims); !it.done(); it.next(), ++flat) {
    bool in_band = true;
    for (int a = 0; a < g.d; ++a) {
      k[static_cast<std::size_t>(a)] = mode_of((*it)[a], g.dims[a]);
      in_band = in_band && std::abs(k[static_cast<std::size_t>(a)]) <= band;
    }
    if (in_band) out.values[out.index(k)] = what[flat] * scale;
  }
  return out;
}

VectorFieldGrid antiderivative_solution(const GridFunction& w) {
  w.check_shape();
  if (w.topology != Topology::Cube) fail(Errc::WrongTopology, "antiderivative solution needs a cube grid");

  VectorFieldGrid vf;
  for (int c = 0; c < w.d; ++c) vf.components.push_back(zero_like(w));

  GridFunction& g1 = vf.components[0];
  const int n0 = w.dims[0];
  const double h0 = w.spacing[0];
  std::size_t stride0 = w.size() / static_cast<std::size_t>(n0);
  for (std::size_t rest = 0; rest < stride0; ++rest) {
    double running = 0.0;
    double prev = w.values[rest];
    g1.values[rest] = 0.0;
    for (int i = 1; i < n0; ++i) {
      double cur = w.values[static_cast<std::size_t>(i) * stride0 + rest];
      running += 0.5 * h0 * (prev + cur);
      g1.values[static_cast<std::size_t>(i) * stride0 + rest] = running;
      prev = cur;
    }
  }
  return vf;
}

GridFunction divergence(const VectorFieldGrid& vf, DivergenceMethod method) {
  vf.check_consistent();
  const GridFunction& g0 = vf.geometry();
  if (static_cast<int>(vf.components.size()) != g0.d)
    fail(Errc::ShapeMismatch, "vector field must have d components");

  if (method == DivergenceMethod::Spectral) {
    require_unit_torus(g0);
    const std::size_t n = g0.size();
    std::vector<cplx> acc(n, 0.0);
    for (int c = 0; c < g0.d; ++c) {
      std::vector<cplx> modes = fft(g0.dims, to_complex(vf.components[c].values), FFTW_FORWARD);
      std::size_t flat = 0;
      for (MultiIndex it(g0.dims); !it.done(); it.next(), ++flat) {
        const auto& idx = *it;
        std::vector<int> k(idx.size());
        for (std::size_t a = 0; a < idx.size(); ++a) k[a] = mode_of(idx[a], g0.dims[a]);
        if (has_nyquist(k, g0.dims)) {
          acc[flat] += 0.0;
          continue;
        }
        acc[flat] += cplx(0.0, 2.0 * kPi * k[c]) * modes[flat] / static_cast<double>(n);
      }
    }
    std::vector<cplx> field = fft(g0.dims, std::move(acc), FFTW_BACKWARD);
    GridFunction out = zero_like(g0);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = field[i].real();
    return out;
  }

  GridFunction out = zero_like(g0);
  std::vector<std::size_t> strides(static_cast<std::size_t>(g0.d));
  std::size_t s = 1;
  for (int a = g0.d - 1; a >= 0; --a) {
    strides[static_cast<std::size_t>(a)] = s;
    s *= static_cast<std::size_t>(g0.dims[a]);
  }
  std::size_t flat = 0;
  for (MultiIndex it(g0.dims); !it.done(); it.next(), ++flat) {
    const auto& idx = *it;
    double div = 0.0;
    for (int a = 0; a < g0.d; ++a) {
      const auto& vals = vf.components[static_cast<std::size_t>(a)].values;
      double h = g0.spacing[static_cast<std::size_t>(a)];
      std::size_t st = strides[static_cast<std::size_t>(a)];
      if (idx[a] + 1 < g0.dims[a])
        div += (vals[flat + st] - vals[flat]) / h;
      else if (g0.topology == Topology::Torus)
        div += (vals[flat - static_cast<std::size_t>(g0.dims[a] - 1) * st] - vals[flat]) / h;
      else
        div += (vals[flat] - vals[flat - st]) / h;  // one-sided closure at the top face
    }
    out.values[flat] = div;
  }
  return out;
}

PeriodicSolution periodic_potential_solution(const GridFunction& w) {
  require_unit_torus(w);
  const std::size_t n = w.size();

  double mean = std::accumulate(w.values.begin(), w.values.end(), 0.0) / static_cast<double>(n);
  double rms = 0.0;
  for (double v : w.values) rms += v * v;
  rms = std::sqrt(rms / static_cast<double>(n));
  if (std::abs(mean) > 1e-9 * (rms + 1e-300))
    fail(Errc::NonZeroMean, "periodic solution requires a zero-mean field");

  std::vector<cplx> what = fft(w.dims, to_complex(w.values), FFTW_FORWARD);

  std::vector<std::vector<cplx>> gmodes(static_cast<std::size_t>(w.d),
                                        std::vector<cplx>(n, 0.0));
  double l2_total = 0.0, l2_dropped = 0.0, l2_outer = 0.0;
  std::map<double, double> lq_acc;  // p -> sum |G|^q
  std::vector<double> ps = {2.0, 3.0, 4.0, static_cast<double>(w.d)};
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  for (double p : ps) lq_acc[p] = 0.0;

  int kmax_avail = 0;
  for (int a = 0; a < w.d; ++a) kmax_avail = std::max(kmax_avail, (w.dims[a] - 1) / 2);

  std::size_t flat = 0;
  for (MultiIndex it(w.dims); !it.done(); it.next(), ++flat) {
    const auto& idx = *it;
    std::vector<int> k(idx.size());
    int kinf = 0;
    double k2 = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      k[a] = mode_of(idx[a], w.dims[a]);
      kinf = std::max(kinf, std::abs(k[a]));
      k2 += static_cast<double>(k[a]) * k[a];
    }
    if (k2 == 0.0) continue;
    cplx coeff = what[flat] / static_cast<double>(n);
    double gmag2 = std::norm(coeff) / (4.0 * kPi * kPi * k2);
    l2_total += gmag2;
    if (has_nyquist(k, w.dims)) {
      l2_dropped += gmag2;
      continue;
    }
    if (kinf == kmax_avail) l2_outer += gmag2;
    // G(k) = F(w)(k) k / (2 pi i |k|^2)
    cplx base = coeff / cplx(0.0, 2.0 * kPi * k2);
    for (int c = 0; c < w.d; ++c) gmodes[static_cast<std::size_t>(c)][flat] = base * static_cast<double>(k[c]);
    double gmag = std::sqrt(gmag2);
    for (double p : ps) lq_acc[p] += std::pow(gmag, p / (p - 1.0));
  }

  PeriodicSolution out;
  for (double p : ps) out.g_lq_norms[p] = std::pow(lq_acc[p], (p - 1.0) / p);
  out.tail_share = l2_total > 0 ? (l2_dropped + l2_outer) / l2_total : 0.0;

  for (int c = 0; c < w.d; ++c) {
    std::vector<cplx> field = fft(w.dims, std::move(gmodes[static_cast<std::size_t>(c)]), FFTW_BACKWARD);
    GridFunction g = zero_like(w);
    for (std::size_t i = 0; i < n; ++i) g.values[i] = field[i].real();
    out.gamma.components.push_back(std::move(g));
  }
  return out;
}

TestFunction product_bump(const std::vector<double>& lo, const std::vector<double>& hi) {
  auto eta = [](double t) { return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; };
  auto eta_prime = [&](double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    double s = 1.0 - t * t;
    return eta(t) * (-2.0 * t / (s * s));
  };
  auto center = std::make_shared<std::vector<double>>(lo.size());
  auto radius = std::make_shared<std::vector<double>>(lo.size());
  for (std::size_t a = 0; a < lo.size(); ++a) {
    (*center)[a] = 0.5 * (lo[a] + hi[a]);
    (*radius)[a] = 0.5 * (hi[a] - lo[a]);
  }
  TestFunction f;
  f.value = [=](std::span<const double> x) {
    double v = 1.0;
    for (std::size_t a = 0; a < x.size(); ++a) v *= eta((x[a] - (*center)[a]) / (*radius)[a]);
    return v;
  };
  f.gradient = [=](std::span<const double> x, std::span<double> g) {
    std::vector<double> parts(x.size());
    for (std::size_t a = 0; a < x.size(); ++a) parts[a] = eta((x[a] - (*center)[a]) / (*radius)[a]);
    for (std::size_t a = 0; a < x.size(); ++a) {
      double t = (x[a] - (*center)[a]) / (*radius)[a];
      double gp = eta_prime(t) / (*radius)[a];
      for (std::size_t b = 0; b < x.size(); ++b)
        if (b != a) gp *= parts[b];
      g[a] = gp;
    }
  };
  return f;
}

std::vector<FormCheck> quadratic_form_check(const GridFunction& w,
                                            const std::vector<TestFunction>& u_family,
                                            FormRoute route) {
  w.check_shape();
  const int d = w.d;
  SpectralConstants cst = constants(d);

  double route_factor = 0.0;
  if (route == FormRoute::Holder) {
    route_factor = cst.C * cst.C * grid_lp_norm(w, 0.5 * d);
  } else {
    VectorFieldGrid gamma = antiderivative_solution(w);
    route_factor = 2.0 * cst.C * vector_lp_norm(gamma, static_cast<double>(d));
  }

  std::vector<FormCheck> out;
  std::vector<double> grad(static_cast<std::size_t>(d));
  for (const TestFunction& u : u_family) {
    // boundary layer: every face sample of the grid must be (numerically) zero
    std::size_t flat = 0;
    double lhs = 0.0, grad2 = 0.0;
    for (MultiIndex it(w.dims); !it.done(); it.next(), ++flat) {
      const auto& idx = *it;
      std::vector<double> x = w.point(idx);
      double uv = u.value(x);
      bool boundary = false;
      for (int a = 0; a < d; ++a) boundary = boundary || idx[a] == 0 || idx[a] == w.dims[a] - 1;
      if (boundary && std::abs(uv) > 1e-8)
        fail(Errc::BoundaryViolation, "test function does not vanish on the boundary layer");
      double wt = trapezoid_weight(idx, w);
      lhs += w.values[flat] * uv * uv * wt;
      u.gradient(x, grad);
      double g2 = 0.0;
      for (double gc : grad) g2 += gc * gc;
      grad2 += g2 * wt;
    }
    FormCheck chk;
    chk.lhs = std::abs(lhs);
    chk.rhs = route_factor * grad2;
    chk.ok = chk.lhs <= chk.rhs + 1e-6 + 1e-3 * chk.rhs;
    out.push_back(chk);
  }
  return out;
}

FourierGate fourier_gate(const GridFunction& v_cell, int d) {
  if (d < 3) fail(Errc::DLessThan3, "fourier gate needs d >= 3");
  if (v_cell.d != d) fail(Errc::ShapeMismatch, "cell dimension mismatch");
  require_unit_torus(v_cell);

  GridFunction w = v_cell;
  double mean = std::accumulate(w.values.begin(), w.values.end(), 0.0) /
                static_cast<double>(w.values.size());
  for (double& v : w.values) v -= mean;

  const double dprime = static_cast<double>(d) / (d - 1.0);
  const std::size_t n = w.size();
  std::vector<cplx> what = fft(w.dims, to_complex(w.values), FFTW_FORWARD);

  int kmax_avail = 0;
  for (int a = 0; a < w.d; ++a) kmax_avail = std::max(kmax_avail, (w.dims[a] - 1) / 2);

  double acc = 0.0, outer = 0.0, dropped = 0.0, total = 0.0;
  std::size_t flat = 0;
  for (MultiIndex it(w.dims); !it.done(); it.next(), ++flat) {
    const auto& idx = *it;
    std::vector<int> k(idx.size());
    int kinf = 0;
    double k2 = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      k[a] = mode_of(idx[a], w.dims[a]);
      kinf = std::max(kinf, std::abs(k[a]));
      k2 += static_cast<double>(k[a]) * k[a];
    }
    if (k2 == 0.0) continue;
    double gmag = std::abs(what[flat]) / static_cast<double>(n) / (2.0 * kPi * std::sqrt(k2));
    double term = std::pow(gmag, dprime);
    total += term;
    if (has_nyquist(k, w.dims)) {
      dropped += term;
      continue;
    }
    if (kinf == kmax_avail) outer += term;
    acc += term;
  }

  FourierGate gate;
  gate.lhs = std::pow(acc, 1.0 / dprime);
  gate.threshold = 1.0 / (d * std::pow(2.0, d + 1) * constants(d).C);
  gate.pass = gate.lhs < gate.threshold;
  gate.tail_share = total > 0 ? (outer + dropped) / total : 0.0;
  return gate;
}

double ball_indicator_transform(int d, double rho) {
  if (d < 1) fail(Errc::DLessThan3, "dimension must be positive");
  if (rho == 0.0) {
    double vball = std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
    return vball / std::pow(2.0, d);
  }
  double nu = 0.5 * d;
  return std::pow(2.0, -nu) * std::pow(rho, -nu) * std::cyl_bessel_j(nu, kPi * rho);
}

namespace {

double bessel_sqrt_sup(double nu) {
  // numeric sup of sqrt(x)|J_nu(x)|; the early extrema dominate the
  // asymptotic envelope sqrt(2/pi), so a bounded scan suffices
  double sup = 0.0;
  for (double x = 5e-4; x <= 60.0; x += 5e-4)
    sup = std::max(sup, std::sqrt(x) * std::abs(std::cyl_bessel_j(nu, x)));
  return sup * 1.02;
}

double cached_bessel_sup(int d) {
  static std::mutex m;
  static std::map<int, double> cache;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  double v = bessel_sqrt_sup(0.5 * d);
  cache[d] = v;
  return v;
}

/// counts of nonzero lattice points by squared Euclidean norm <= k_band^2
std::vector<long> radial_counts(int d, int k_band) {
  const long cap = static_cast<long>(k_band) * k_band;
  std::vector<long> counts(static_cast<std::size_t>(cap) + 1, 0);
  std::function<void(int, long)> walk = [&](int axis, long partial) {
    if (axis == d) {
      if (partial > 0) ++counts[static_cast<std::size_t>(partial)];
      return;
    }
    for (long k = -k_band; k <= k_band; ++k) {
      long s = partial + k * k;
      if (s <= cap) walk(axis + 1, s);
    }
  };
  walk(0, 0);
  return counts;
}

}  // namespace

double lattice_gate_hbar(int d, int k_band) {
  std::vector<long> counts = radial_counts(d, k_band);
  const double dprime = static_cast<double>(d) / (d - 1.0);
  double hbar = 0.0;
  for (int ri = 1; ri < 40; ++ri) {
    double r = 0.025 * ri;
    double acc = 0.0;
    for (std::size_t s = 1; s < counts.size(); ++s) {
      if (!counts[s]) continue;
      double knorm = std::sqrt(static_cast<double>(s));
      double term = std::abs(ball_indicator_transform(d, r * knorm)) / (2.0 * kPi * knorm);
      acc += counts[s] * std::pow(term, dprime);
    }
    hbar = std::max(hbar, std::pow(r, d) * std::pow(acc, 1.0 / dprime));
  }
  return hbar;
}

double lattice_gate_tail_bound(int d, int k_band) {
  const double dprime = static_cast<double>(d) / (d - 1.0);
  double jhat = cached_bessel_sup(d);
  double big_b = std::pow(2.0, -0.5 * d) * jhat / (2.0 * std::pow(kPi, 1.5));
  double s_exp = 0.5 * (d + 3) * dprime;
  double vball = std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
  double shell_c = vball * d * (1.0 + std::sqrt(double(d))) * std::pow(1.4, d - 1);
  double kb = static_cast<double>(k_band);
  double sum_bound = shell_c * (std::pow(kb, d - s_exp) / (s_exp - d) + std::pow(kb, d - 1 - s_exp));
  return big_b * std::pow(sum_bound, 1.0 / dprime);
}

LatticeGateResult lattice_gate(const std::function<double(long)>& N_of_l,
                               const std::function<double(long)>& m_of_l,
                               const std::function<double(long)>& r_of_l,
                               const std::vector<long>& l_range, int d, int k_band) {
  if (d != 3 && d != 4) fail(Errc::UncertifiedDimension, "ball-shape gate is certified for d in {3,4}");
  if (k_band < 8) fail(Errc::BadResolution, "gate band must be at least 8");

  LatticeGateResult res;
  res.hbar = lattice_gate_hbar(d, k_band);
  res.tail_bound = lattice_gate_tail_bound(d, k_band);
  res.bessel_sup = cached_bessel_sup(d);
  SpectralConstants cst = constants(d);
  res.ratio_threshold = 1.0 / (d * std::pow(2.0, d + 1) * cst.C * res.hbar);

  res.report.set_meta("d", static_cast<double>(d));
  res.report.set_meta("k_band", static_cast<double>(k_band));
  res.report.set_meta("hbar", res.hbar);
  res.report.set_meta("tail_bound", res.tail_bound);
  res.report.set_meta("C_d", cst.C);
  res.report.set_meta("bessel_sup", res.bessel_sup);
  res.report.set_meta("ratio_threshold", res.ratio_threshold);
  res.report.columns = {"ratio", "product", "ratio_ok", "dbar", "sigma_lo", "sigma_ok"};

  for (long l : l_range) {
    double N = N_of_l(l), m = m_of_l(l), r = r_of_l(l);
    if (!(m > 0)) fail(Errc::TOutOfRange, "lattice density law must be positive");
    double ratio = N / m;
    double product = N * std::pow(r, d);
    // straddling cubes meet at most 2^d cells, so the admissible perturbation
    // norm scales the per-cell mode bound d * ratio * hbar accordingly
    double dbar = std::pow(2.0, d) * d * ratio * res.hbar;
    double sigma_lo = 2.0 * cst.C * dbar;
    ReportRow row;
    row.location = {static_cast<double>(l)};
    row.stats = {ReportValue::finite(ratio),
                 ReportValue::finite(product),
                 ReportValue::finite(ratio < res.ratio_threshold ? 1.0 : 0.0),
                 ReportValue::finite(dbar),
                 ReportValue::finite(sigma_lo),
                 ReportValue::finite(sigma_lo < 1.0 ? 1.0 : 0.0)};
    res.report.rows.push_back(std::move(row));
  }
  return res;
}

}  // namespace specgate
