#pragma once

#include <vector>

#include <Eigen/SparseCore>

#include "specgate/potentials.hpp"
#include "specgate/report.hpp"
#include "specgate/windows.hpp"

namespace specgate {

enum class Boundary { Dirichlet, Neumann };

/// Symmetric finite-difference realization of -kinetic*Laplacian + V on a
/// cube window. Dirichlet lives on the (n-1)^d interior nodes, Neumann on
/// the n^d cell centers with a no-flux closure (kinetic row sums vanish).
struct DiscreteOperator {
  int d = 0;
  std::vector<int> dims;     // unknowns per axis
  double h = 0.0;
  Boundary bc = Boundary::Dirichlet;
  double kinetic = 1.0;
  std::vector<double> potential;  // diagonal samples, one per unknown

  std::size_t size() const;
  Eigen::SparseMatrix<double> matrix() const;
  void apply(const double* x, double* y) const;
};

DiscreteOperator assemble(const PotentialSpec& pot, const CubeWindow& win, Boundary bc,
                          double kinetic = 1.0);

struct EigResult {
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Smallest eigenvalue by shifted inverse iteration from the all-ones start
/// vector, with a Rayleigh re-shift fallback when the fixed shift stalls.
EigResult smallest_eigenvalue(const DiscreteOperator& op, double tol = 1e-9, int max_iter = 200);

/// Smallest window eigenvalue along the ray of windows Q_r(k*direction).
ScanReport localization_scan(const PotentialSpec& pot, const std::vector<long>& direction,
                             int steps, double r, Boundary bc, int resolution,
                             double kinetic = 1.0);

struct MolchanovQuotient {
  double energy = 0.0;       // G_d m^2 r^(d-2)
  double volume_lb = 0.0;    // 1 - m^d mes(B_1) (2r/m)^d
  double quotient_ub = 0.0;  // energy / volume_lb
  bool small_capacity = false;
};

MolchanovQuotient molchanov_quotient(double N, int m, double r, int d);

}  // namespace specgate
