#include "specgate/eiglab.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseCholesky>

#include "specgate/diveq.hpp"
#include "specgate/parallel.hpp"

namespace specgate {

std::size_t DiscreteOperator::size() const {
  std::size_t n = 1;
  for (int m : dims) n *= static_cast<std::size_t>(m);
  return n;
}

Eigen::SparseMatrix<double> DiscreteOperator::matrix() const {
  const std::size_t n = size();
  std::vector<std::size_t> strides(static_cast<std::size_t>(d));
  std::size_t s = 1;
  for (int a = d - 1; a >= 0; --a) {
    strides[static_cast<std::size_t>(a)] = s;
    s *= static_cast<std::size_t>(dims[a]);
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(n * static_cast<std::size_t>(2 * d + 1));
  const double inv_h2 = kinetic / (h * h);

  std::size_t flat = 0;
  for (MultiIndex it(dims); !it.done(); it.next(), ++flat) {
    const auto& idx = *it;
    double diag = potential[flat];
    for (int a = 0; a < d; ++a) {
      std::size_t st = strides[static_cast<std::size_t>(a)];
      bool lo = idx[a] > 0, hi = idx[a] + 1 < dims[a];
      if (bc == Boundary::Dirichlet) {
        diag += 2.0 * inv_h2;
        if (lo) trip.emplace_back(flat, flat - st, -inv_h2);
        if (hi) trip.emplace_back(flat, flat + st, -inv_h2);
      } else {
        if (lo) {
          diag += inv_h2;
          trip.emplace_back(flat, flat - st, -inv_h2);
        }
        if (hi) {
          diag += inv_h2;
          trip.emplace_back(flat, flat + st, -inv_h2);
        }
      }
    }
    trip.emplace_back(flat, flat, diag);
  }

  Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

void DiscreteOperator::apply(const double* x, double* y) const {
  std::vector<std::size_t> strides(static_cast<std::size_t>(d));
  std::size_t s = 1;
  for (int a = d - 1; a >= 0; --a) {
    strides[static_cast<std::size_t>(a)] = s;
    s *= static_cast<std::size_t>(dims[a]);
  }
  const double inv_h2 = kinetic / (h * h);
  std::size_t flat = 0;
  for (MultiIndex it(dims); !it.done(); it.next(), ++flat) {
    const auto& idx = *it;
    double acc = potential[flat] * x[flat];
    for (int a = 0; a < d; ++a) {
      std::size_t st = strides[static_cast<std::size_t>(a)];
      bool lo = idx[a] > 0, hi = idx[a] + 1 < dims[a];
      if (bc == Boundary::Dirichlet) {
        acc += 2.0 * inv_h2 * x[flat];
        if (lo) acc -= inv_h2 * x[flat - st];
        if (hi) acc -= inv_h2 * x[flat + st];
      } else {
        if (lo) acc += inv_h2 * (x[flat] - x[flat - st]);
        if (hi) acc += inv_h2 * (x[flat] - x[flat + st]);
      }
    }
    y[flat] = acc;
  }
}

DiscreteOperator assemble(const PotentialSpec& pot, const CubeWindow& win, Boundary bc,
                          double kinetic) {
  win.validate();
  if (win.resolution < 8) fail(Errc::ResolutionTooLow, "operator assembly needs resolution >= 8");
  if (!(kinetic > 0)) fail(Errc::TOutOfRange, "kinetic coefficient must be positive");
  if (win.dimension() != pot.d) fail(Errc::ShapeMismatch, "window and potential dimensions differ");

  DiscreteOperator op;
  op.d = win.dimension();
  op.h = win.side / win.resolution;
  op.bc = bc;
  op.kinetic = kinetic;
  int per_axis = bc == Boundary::Dirichlet ? win.resolution - 1 : win.resolution;
  op.dims.assign(static_cast<std::size_t>(op.d), per_axis);

  double offset = bc == Boundary::Dirichlet ? op.h : 0.5 * op.h;
  op.potential.resize(op.size());
  std::vector<double> x(static_cast<std::size_t>(op.d));
  std::size_t flat = 0;
  for (MultiIndex it(op.dims); !it.done(); it.next(), ++flat) {
    const auto& idx = *it;
    for (int a = 0; a < op.d; ++a) x[a] = win.corner[a] + offset + idx[a] * op.h;
    double v = evaluate(pot, x);
    if (!std::isfinite(v)) fail(Errc::EvaluationDomain, "potential not finite on window");
    op.potential[flat] = v;
  }
  return op;
}

EigResult smallest_eigenvalue(const DiscreteOperator& op, double tol, int max_iter) {
  const std::size_t n = op.size();
  Eigen::SparseMatrix<double> A = op.matrix();

  // Gershgorin bracket for a safe initial shift strictly below the spectrum.
  double g_lo = 0.0, g_hi = 0.0;
  for (Eigen::Index col = 0; col < A.outerSize(); ++col) {
    double diag = 0.0, off = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it) {
      if (it.row() == col)
        diag = it.value();
      else
        off += std::abs(it.value());
    }
    double lo = diag - off, hi = diag + off;
    if (col == 0) {
      g_lo = lo;
      g_hi = hi;
    } else {
      g_lo = std::min(g_lo, lo);
      g_hi = std::max(g_hi, hi);
    }
  }
  double span = std::max(g_hi - g_lo, 1.0);
  double shift = g_lo - 1e-3 * span;

  Eigen::SparseMatrix<double> I(A.rows(), A.cols());
  I.setIdentity();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.compute(A - shift * I);
  if (solver.info() != Eigen::Success) fail(Errc::NoConvergence, "shifted factorization failed");

  Eigen::VectorXd v = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  v.normalize();

  EigResult res;
  double lambda = 0.0;
  for (int iter = 1; iter <= max_iter; ++iter) {
    Eigen::VectorXd w = solver.solve(v);
    w.normalize();
    v = w;
    Eigen::VectorXd Av = A * v;
    lambda = v.dot(Av);
    double resid = (Av - lambda * v).norm();
    res.value = lambda;
    res.residual = resid;
    res.iterations = iter;
    if (resid <= tol * std::max(1.0, std::abs(lambda))) return res;
    if (iter % 16 == 0) {
      // Rayleigh re-shift from just below the current estimate
      shift = lambda - std::max(resid, 1e-8 * span);
      solver.compute(A - shift * I);
      if (solver.info() != Eigen::Success) fail(Errc::NoConvergence, "re-shifted factorization failed");
    }
  }
  fail(Errc::NoConvergence, "inverse iteration did not reach the requested residual");
}

ScanReport localization_scan(const PotentialSpec& pot, const std::vector<long>& direction,
                             int steps, double r, Boundary bc, int resolution, double kinetic) {
  if (steps < 2) fail(Errc::TOutOfRange, "localization scans need at least 2 steps");
  if (direction.size() != static_cast<std::size_t>(pot.d))
    fail(Errc::ShapeMismatch, "direction dimension does not match potential");

  ScanReport rep;
  rep.set_meta("potential", pot.id());
  rep.set_meta("r", r);
  rep.set_meta("bc", bc == Boundary::Dirichlet ? "dirichlet" : "neumann");
  rep.set_meta("resolution", static_cast<double>(resolution));
  rep.set_meta("kinetic", kinetic);
  rep.columns = {"eigenvalue", "residual", "iterations"};
  rep.rows.resize(static_cast<std::size_t>(steps));

  parallel_for(static_cast<std::size_t>(steps), [&](std::size_t k) {
    CubeWindow win;
    win.corner.resize(direction.size());
    for (std::size_t a = 0; a < direction.size(); ++a)
      win.corner[a] = static_cast<double>(direction[a]) * static_cast<double>(k);
    win.side = r;
    win.resolution = resolution;
    EigResult eig = smallest_eigenvalue(assemble(pot, win, bc, kinetic));
    ReportRow row;
    row.location = win.corner;
    row.stats = {ReportValue::finite(eig.value), ReportValue::finite(eig.residual),
                 ReportValue::finite(static_cast<double>(eig.iterations))};
    rep.rows[k] = std::move(row);
  });

  long linf = 0;
  for (long dj : direction) linf = std::max(linf, std::labs(dj) * (steps - 1));
  linf += static_cast<long>(std::ceil(r));
  bool aliased = (r / resolution) > pot.min_feature_scale(linf) / 2.0;
  rep.set_meta("aliased", aliased ? "true" : "false");

  bool increasing = true;
  std::size_t from = rep.rows.size() / 2;
  for (std::size_t k = from + 1; k < rep.rows.size(); ++k)
    increasing = increasing && rep.rows[k].stats[0].value > rep.rows[k - 1].stats[0].value;
  rep.set_meta("trend_increasing_eigenvalue", increasing ? "true" : "false");
  return rep;
}

MolchanovQuotient molchanov_quotient(double N, int m, double r, int d) {
  (void)N;  // the closed forms cancel the amplitude; kept for call-site symmetry
  if (d < 3) fail(Errc::DLessThan3, "quotient bound needs d >= 3");
  if (!(r > 0) || !(r < 0.5)) fail(Errc::TOutOfRange, "ball radius must lie in (0, 1/2)");
  if (m < 1) fail(Errc::TOutOfRange, "lattice density must be >= 1");

  MolchanovQuotient q;
  q.energy = constants(d).G * static_cast<double>(m) * m * std::pow(r, d - 2);
  double doubled = std::pow(static_cast<double>(m), d) * unit_ball_volume(d) *
                   std::pow(2.0 * r / m, d);
  q.volume_lb = 1.0 - doubled;
  if (q.volume_lb <= 0) fail(Errc::DegenerateVolume, "doubled bumps cover the cell");
  q.quotient_ub = q.energy / q.volume_lb;
  q.small_capacity = q.energy < 1.0;
  return q;
}

}  // namespace specgate
