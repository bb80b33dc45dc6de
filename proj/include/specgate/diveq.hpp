#pragma once

#include <complex>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "specgate/grid.hpp"
#include "specgate/report.hpp"

namespace specgate {

struct SpectralConstants {
  double C = 0.0;  // Sobolev embedding constant
  double c = 0.0;  // isocapacity constant
  double G = 0.0;  // lattice-of-balls energy constant, sphere surface-area reading
  double G_volume_reading = 0.0;
};

SpectralConstants constants(int d);

/// Mode coefficients of a torus field on the symmetric band |k|_inf <= band,
/// stored row-major over the (2 band + 1)^d index box. Real fields yield
/// Hermitian-symmetric coefficients.
struct SpectralCoeffs {
  int d = 0;
  int band = 0;
  std::vector<std::complex<double>> values;

  std::size_t index(const std::vector<int>& k) const;
  std::complex<double> at(const std::vector<int>& k) const { return values[index(k)]; }
  bool hermitian(double tol = 1e-12) const;
};

SpectralCoeffs transform_banded(const GridFunction& g, int band);

/// First-axis antiderivative solution on a cube grid: component 0 carries the
/// cumulative trapezoid integral of w from the low face, all other components
/// vanish.
VectorFieldGrid antiderivative_solution(const GridFunction& w);

enum class DivergenceMethod { Spectral, ForwardDifference };

GridFunction divergence(const VectorFieldGrid& vf, DivergenceMethod method);

struct PeriodicSolution {
  VectorFieldGrid gamma;
  std::map<double, double> g_lq_norms;  // p -> l_q norm of the mode field, q = p/(p-1)
  double tail_share = 0.0;              // outermost-shell share of the l_2 mode mass
};

/// Gradient-form solution on the torus built in mode space; the zero mode of
/// w must vanish to 1e-9 relative. Modes with a Nyquist component are
/// dropped and counted into tail_share.
PeriodicSolution periodic_potential_solution(const GridFunction& w);

/// Smooth compactly supported test function with an analytic gradient.
struct TestFunction {
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
};

/// Product bump supported on the open box (lo, hi).
TestFunction product_bump(const std::vector<double>& lo, const std::vector<double>& hi);

enum class FormRoute { Holder, DivergenceRoute };

struct FormCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

/// Quadratic-form control |integral of w |u|^2| against either
/// C(d)^2 ||w||_{d/2} ||grad u||_2^2 or 2 C(d) ||Gamma||_d ||grad u||_2^2
/// with Gamma the antiderivative solution. Test functions must vanish on the
/// boundary sample layer.
std::vector<FormCheck> quadratic_form_check(const GridFunction& w,
                                            const std::vector<TestFunction>& u_family,
                                            FormRoute route);

struct FourierGate {
  double lhs = 0.0;
  double threshold = 0.0;
  bool pass = false;
  double tail_share = 0.0;
};

/// Mode-space smallness test of one unit cell: after removing the cell mean,
/// the l_{d'} norm of the gradient-solution modes must stay below
/// 1/(d 2^{d+1} C(d)).
FourierGate fourier_gate(const GridFunction& v_cell, int d);

/// Fourier transform of the radius-1/2 ball indicator at radial frequency
/// rho, via the half-order Bessel closed form.
double ball_indicator_transform(int d, double rho);

struct LatticeGateResult {
  double hbar = 0.0;          // sup_r r^d || S_hat(r k)/(2 pi |k|) ||_{l_d'} over the band
  double tail_bound = 0.0;    // analytic majorant of the dropped |k| > K_band mass
  double ratio_threshold = 0.0;
  double bessel_sup = 0.0;    // numeric sup of sqrt(x) |J_{d/2}(x)| with margin
  ScanReport report;
};

/// Growth-law gate for lattice-of-balls potentials: per cell index, the
/// density ratio N/m against 1/(d 2^{d+1} C(d) Hbar) and the mass product
/// N r^d, plus the admissible perturbation interval derived from both.
LatticeGateResult lattice_gate(const std::function<double(long)>& N_of_l,
                               const std::function<double(long)>& m_of_l,
                               const std::function<double(long)>& r_of_l,
                               const std::vector<long>& l_range, int d, int k_band);

/// Band norm used by the gate; exposed for convergence studies.
double lattice_gate_hbar(int d, int k_band);
double lattice_gate_tail_bound(int d, int k_band);

}  // namespace specgate
