#include "specgate/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "specgate/diveq.hpp"
#include "specgate/eiglab.hpp"
#include "specgate/lagrange.hpp"
#include "specgate/measure.hpp"
#include "specgate/potentials.hpp"
#include "specgate/report.hpp"
#include "specgate/setopt.hpp"
#include "specgate/windows.hpp"

namespace specgate {

namespace {

using nlohmann::json;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) fail(Errc::IoFailure, "cannot open " + out_path + " for writing");
  out << text << "\n";
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoFailure, "cannot open " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) fail(Errc::IoFailure, path + " does not parse as JSON");
  return j;
}

DiscreteMeasureSpace atoms_from_file(const std::string& path) {
  json j = load_json_file(path);
  if (j.is_object() && j.contains("atoms")) j = j["atoms"];
  if (!j.is_array()) fail(Errc::IoFailure, "atoms file must hold an array of [value, weight] pairs");
  DiscreteMeasureSpace s;
  for (const auto& pair : j) s.add(pair.at(0).get<double>(), pair.at(1).get<double>());
  if (s.atoms.empty()) fail(Errc::EmptySpace, "atoms file holds no atoms");
  return s;
}

std::vector<long> parse_longs(const std::string& text) {
  std::vector<long> out;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stol(tok));
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

ReportFormat parse_format(const std::string& text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  fail(Errc::BadFlag, "format must be json or csv");
}

DenseSystemSpec system_from_arg(const std::string& arg, int d) {
  if (arg == "cantor") {
    DenseSystemSpec s;
    s.kind = DenseSystemSpec::Kind::CantorAdjacent;
    s.dimension = d;
    return s;
  }
  if (arg == "product") {
    DenseSystemSpec s;
    s.kind = DenseSystemSpec::Kind::ProductWithCube;
    s.dimension = d;
    return s;
  }
  return load_dense_system(arg);
}

double default_alpha(int d) { return static_cast<double>(d) / (d - 2.0); }

/// Applies --config defaults: keys become flags unless already given
/// explicitly, so the command line wins.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string config_path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") config_path = args[i + 1];
  if (config_path.empty()) return args;

  json cfg = load_json_file(config_path);
  if (!cfg.is_object()) fail(Errc::BadFlag, "config file must hold a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    std::string flag = "--" + key;
    if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
      continue;
    }
    args.push_back(flag);
    args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  return args;
}

std::string kv(const std::string& key, double v) {
  return "\"" + key + "\":" + format_double(v);
}

// --- subcommand bodies ----------------------------------------------------

struct CommonOut {
  std::string out;
  std::string format = "json";
  long seed = 1;
};

int cmd_constants(int d, const CommonOut& io) {
  SpectralConstants c = constants(d);
  std::ostringstream os;
  os << "{\"d\":" << d << "," << kv("C", c.C) << "," << kv("c", c.c) << "," << kv("G", c.G) << ","
     << kv("G_volume_reading", c.G_volume_reading) << "}";
  emit(os.str(), io.out);
  return 0;
}

int cmd_setopt(const std::string& atoms_path, double t, const std::string& mode,
               const CommonOut& io) {
  DiscreteMeasureSpace space = atoms_from_file(atoms_path);
  std::ostringstream os;
  os << "{" << kv("t", t);
  if (mode == "fractional" || mode == "both") {
    OptResult r = solve_fractional(space, t);
    os << ",\"fractional\":{" << kv("value", r.value) << "," << kv("witness_mass", r.witness.mass)
       << ",\"full_atoms\":" << r.witness.full_atoms.size() << "}";
  }
  if (mode == "binary" || mode == "both") {
    OptResult r = solve_binary_bruteforce(space, t);
    os << ",\"binary\":{" << kv("value", r.value) << "," << kv("witness_mass", r.witness.mass)
       << ",\"full_atoms\":" << r.witness.full_atoms.size() << "}";
  }
  os << "}";
  emit(os.str(), io.out);
  return 0;
}

int cmd_lagrange(const std::string& atoms_path, double t, const CommonOut& io) {
  DiscreteMeasureSpace space = atoms_from_file(atoms_path);
  MomentStats ms = moments(space);
  LagrangeBound b = lagrange_bound(space, t);
  std::ostringstream os;
  os << "{" << kv("t", b.t) << "," << kv("sigma", b.sigma) << "," << kv("bound", b.bound) << ","
     << kv("expectation", ms.expectation) << "," << kv("deviation", ms.deviation);
  if (b.lambda_star) os << "," << kv("lambda_star", *b.lambda_star) << "," << kv("nu_star", *b.nu_star);
  os << "}";
  emit(os.str(), io.out);
  return 0;
}

void emit_report(const ScanReport& rep, const CommonOut& io) {
  ReportFormat format = parse_format(io.format);
  if (io.out.empty()) {
    std::cout << (format == ReportFormat::Json ? report_to_json(rep) : report_to_csv(rep)) << "\n";
    return;
  }
  write_report(rep, format, io.out);
}

int cmd_scan(const std::string& pot_path, double r, int steps, const std::string& dir,
             int resolution, double gamma_k, double alpha, double gmd_delta, bool has_gmd,
             const CommonOut& io) {
  PotentialSpec pot = load_potential(pot_path);
  GammaSchedule sched{gamma_k, alpha > 0 ? alpha : default_alpha(pot.d)};
  std::optional<double> gmd;
  if (has_gmd) gmd = gmd_delta;
  ScanReport rep = ray_scan(pot, parse_longs(dir), steps, r, sched, resolution, gmd);
  rep.set_meta("seed", static_cast<double>(io.seed));
  emit_report(rep, io);
  return 0;
}

int cmd_madic(const std::string& pot_path, const std::string& l_str, int n, int m,
              const std::string& system_arg, int resolution, double gamma_k, double alpha,
              const CommonOut& io) {
  PotentialSpec pot = load_potential(pot_path);
  GammaSchedule sched{gamma_k, alpha > 0 ? alpha : default_alpha(pot.d)};
  DenseSystemSpec system = system_from_arg(system_arg, pot.d);
  MadicResult res = madic_scan(pot, parse_longs(l_str), n, m, system, sched, resolution);
  std::ostringstream os;
  os << "{" << kv("min_vstar", res.min_vstar) << ",\"cells\":" << res.cells << "}";
  emit(os.str(), io.out);
  return 0;
}

int cmd_density(const std::string& system_arg, int d, int m, double theta, int trials,
                const CommonOut& io) {
  DenseSystemSpec system = system_from_arg(system_arg, d);
  DensityResult res =
      verify_logm_theta_density(system, m, theta, trials, static_cast<std::uint64_t>(io.seed));
  std::ostringstream os;
  os << "{\"pass\":" << (res.pass ? "true" : "false") << ",\"failures\":[";
  for (std::size_t i = 0; i < res.failures.size(); ++i) {
    if (i) os << ",";
    const auto& f = res.failures[i];
    os << "{\"trial\":" << f.trial << "," << kv("r", f.r) << ",\"z\":[";
    for (std::size_t a = 0; a < f.z.size(); ++a) {
      if (a) os << ",";
      os << format_double(f.z[a]);
    }
    os << "]}";
  }
  os << "]}";
  emit(os.str(), io.out);
  return res.pass ? 0 : 3;
}

int cmd_diveq(const std::string& grid_path, const std::string& solver, const std::string& out_path,
              const std::string& report_path) {
  GridFunction w = read_sgf_scalar(grid_path);
  if (solver == "antiderivative") {
    VectorFieldGrid gamma = antiderivative_solution(w);
    write_sgf(gamma, out_path);
    if (!report_path.empty()) {
      std::ostringstream os;
      double sup = 0.0;
      for (double v : gamma.components[0].values) sup = std::max(sup, std::abs(v));
      os << "{\"solver\":\"antiderivative\"," << kv("sup_abs", sup) << "}";
      emit(os.str(), report_path);
    }
    return 0;
  }
  if (solver == "spectral") {
    PeriodicSolution sol = periodic_potential_solution(w);
    write_sgf(sol.gamma, out_path);
    if (!report_path.empty()) {
      std::ostringstream os;
      os << "{\"solver\":\"spectral\"," << kv("tail_share", sol.tail_share) << ",\"g_lq_norms\":{";
      bool first = true;
      for (const auto& [p, norm] : sol.g_lq_norms) {
        if (!first) os << ",";
        first = false;
        os << "\"" << p << "\":" << format_double(norm);
      }
      os << "}}";
      emit(os.str(), report_path);
    }
    return 0;
  }
  fail(Errc::BadFlag, "solver must be antiderivative or spectral");
}

int cmd_gate_fourier(const std::string& pot_path, const std::string& l_str, int resolution,
                     const CommonOut& io) {
  PotentialSpec pot = load_potential(pot_path);
  std::vector<long> l = parse_longs(l_str);
  if (l.size() != static_cast<std::size_t>(pot.d)) fail(Errc::ShapeMismatch, "cell index mismatch");

  GridFunction cell;
  cell.d = pot.d;
  cell.dims.assign(static_cast<std::size_t>(pot.d), resolution);
  cell.spacing.assign(static_cast<std::size_t>(pot.d), 1.0 / resolution);
  cell.origin.resize(static_cast<std::size_t>(pot.d));
  for (int a = 0; a < pot.d; ++a) cell.origin[a] = static_cast<double>(l[a]);
  cell.topology = Topology::Torus;
  cell.values.resize(cell.size());
  std::vector<double> x(static_cast<std::size_t>(pot.d));
  std::size_t flat = 0;
  for (MultiIndex it(cell.dims); !it.done(); it.next(), ++flat) {
    for (int a = 0; a < pot.d; ++a) x[a] = cell.origin[a] + (*it)[a] * cell.spacing[a];
    cell.values[flat] = evaluate(pot, x);
  }

  FourierGate gate = fourier_gate(cell, pot.d);
  std::ostringstream os;
  os << "{" << kv("lhs", gate.lhs) << "," << kv("threshold", gate.threshold)
     << ",\"pass\":" << (gate.pass ? "true" : "false") << "," << kv("tail_share", gate.tail_share)
     << "}";
  emit(os.str(), io.out);
  return 0;
}

int cmd_gate_lattice(int d, int k_band, long l_min, long l_max, const std::string& n_law,
                     const std::string& m_law, const std::string& r_law, const CommonOut& io) {
  GrowthLaw nl = GrowthLaw::parse(n_law);
  GrowthLaw ml = GrowthLaw::parse(m_law);
  GrowthLaw rl = r_law == "default" ? GrowthLaw{GrowthLaw::Kind::PowLinf, 1.0, -1.0 / (2.0 * d)}
                                    : GrowthLaw::parse(r_law);
  std::vector<long> range;
  for (long l = l_min; l <= l_max; ++l) range.push_back(l);
  LatticeGateResult res = lattice_gate(
      [&](long l) { return nl(l); },
      [&](long l) { return std::max(1.0, std::round(ml(l))); },
      [&](long l) { return rl(l); }, range, d, k_band);
  res.report.set_meta("seed", static_cast<double>(io.seed));
  emit_report(res.report, io);
  return 0;
}

int cmd_eig(const std::string& pot_path, const std::string& corner_str, double side, int resolution,
            const std::string& bc_str, double kinetic, double tol, int max_iter, int steps,
            const std::string& dir, const CommonOut& io) {
  PotentialSpec pot = load_potential(pot_path);
  Boundary bc = bc_str == "neumann" ? Boundary::Neumann : Boundary::Dirichlet;
  if (bc_str != "neumann" && bc_str != "dirichlet") fail(Errc::BadFlag, "bc must be dirichlet or neumann");

  if (steps > 0) {
    ScanReport rep = localization_scan(pot, parse_longs(dir), steps, side, bc, resolution, kinetic);
    rep.set_meta("seed", static_cast<double>(io.seed));
    emit_report(rep, io);
    return 0;
  }

  CubeWindow win;
  win.corner = parse_doubles(corner_str);
  win.side = side;
  win.resolution = resolution;
  EigResult eig = smallest_eigenvalue(assemble(pot, win, bc, kinetic), tol, max_iter);
  std::ostringstream os;
  os << "{" << kv("value", eig.value) << "," << kv("residual", eig.residual)
     << ",\"iterations\":" << eig.iterations << "}";
  emit(os.str(), io.out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args) {
  CLI::App app{"rearrangement, relaxation and divergence-equation scans on window potentials"};
  app.require_subcommand(1);

  CommonOut io;
  std::string config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", io.out, "output path (stdout when omitted)");
    sub->add_option("--format", io.format, "json or csv")->default_val("json");
    sub->add_option("--seed", io.seed, "rng seed recorded with the run")->default_val(1);
    sub->add_option("--config", config_path, "JSON config supplying default flags");
  };

  // constants
  int d = 3;
  auto* c_const = app.add_subcommand("constants", "embedding, isocapacity and lattice constants");
  c_const->add_option("--d", d, "dimension, >= 3")->required();
  add_common(c_const);

  // setopt
  std::string atoms_path, mode = "both";
  double t_level = 0.5;
  auto* c_setopt = app.add_subcommand("setopt", "mass-constrained set minimization");
  c_setopt->add_option("--atoms", atoms_path, "JSON atoms file")->required();
  c_setopt->add_option("--t", t_level, "mass level")->required();
  c_setopt->add_option("--mode", mode, "fractional | binary | both")->default_val("both");
  add_common(c_setopt);

  // lagrange
  auto* c_lagr = app.add_subcommand("lagrange", "expectation-deviation lower bound");
  c_lagr->add_option("--atoms", atoms_path, "JSON atoms file")->required();
  c_lagr->add_option("--t", t_level, "level in (1/2, 1)")->required();
  add_common(c_lagr);

  // scan
  std::string pot_path, dir_str = "1,0,0";
  double r_side = 1.0, gamma_k = 1.0, alpha = -1.0, gmd_delta = 0.5;
  int steps = 8, resolution = 32;
  auto* c_scan = app.add_subcommand("scan", "window statistics along a lattice ray");
  c_scan->add_option("--potential", pot_path, "potential JSON file")->required();
  c_scan->add_option("--r", r_side, "window side")->required();
  c_scan->add_option("--steps", steps, "number of windows")->required();
  c_scan->add_option("--dir", dir_str, "lattice direction, e.g. 1,0,0")->default_val("1,0,0");
  c_scan->add_option("--resolution", resolution, "samples per axis")->default_val(32);
  c_scan->add_option("--gamma-k", gamma_k, "schedule coefficient K")->default_val(1.0);
  c_scan->add_option("--alpha", alpha, "schedule exponent (default d/(d-2))");
  auto* gmd_opt = c_scan->add_option("--gmd-delta", gmd_delta, "averaged-integral threshold delta");
  add_common(c_scan);

  // madic
  std::string l_str = "0,0,0", system_arg = "cantor";
  int n_depth = 1, m_base = 3;
  auto* c_madic = app.add_subcommand("madic", "minimum rearrangement over m-adic cells");
  c_madic->add_option("--potential", pot_path, "potential JSON file")->required();
  c_madic->add_option("--l", l_str, "unit cell index")->required();
  c_madic->add_option("--n", n_depth, "partition depth")->required();
  c_madic->add_option("--m", m_base, "partition base")->required();
  c_madic->add_option("--system", system_arg, "cantor | product | file")->default_val("cantor");
  c_madic->add_option("--resolution", resolution, "samples per axis over the unit cell")->required();
  c_madic->add_option("--gamma-k", gamma_k, "schedule coefficient K")->default_val(1.0);
  c_madic->add_option("--alpha", alpha, "schedule exponent (default d/(d-2))");
  add_common(c_madic);

  // density
  double theta = 1.0 / 9.0;
  int trials = 200, sys_d = 1;
  auto* c_density = app.add_subcommand("density", "randomized dense-system verifier");
  c_density->add_option("--system", system_arg, "cantor | product | file")->default_val("cantor");
  c_density->add_option("--d", sys_d, "system dimension")->default_val(1);
  c_density->add_option("--m", m_base, "log base")->required();
  c_density->add_option("--theta", theta, "density parameter in (0,1)")->required();
  c_density->add_option("--trials", trials, "sampled cubes")->default_val(200);
  add_common(c_density);

  // diveq
  std::string grid_path, solver = "spectral", report_path;
  auto* c_diveq = app.add_subcommand("diveq", "divergence-equation solvers on SGF1 grids");
  c_diveq->add_option("--grid", grid_path, "input SGF1 scalar grid")->required();
  c_diveq->add_option("--solver", solver, "antiderivative | spectral")->default_val("spectral");
  c_diveq->add_option("--out", io.out, "output SGF1 vector field")->required();
  c_diveq->add_option("--report", report_path, "optional JSON norm report");
  c_diveq->add_option("--config", config_path, "JSON config supplying default flags");

  // gate-fourier
  auto* c_gatef = app.add_subcommand("gate-fourier", "mode-space smallness gate on one unit cell");
  c_gatef->add_option("--potential", pot_path, "potential JSON file")->required();
  c_gatef->add_option("--l", l_str, "unit cell index")->default_val("0,0,0");
  c_gatef->add_option("--resolution", resolution, "samples per axis")->default_val(32);
  add_common(c_gatef);

  // gate-lattice
  int k_band = 32;
  long l_min = 1, l_max = 20;
  std::string n_law = "log:1,2", m_law = "ceilsq-log:1,2", r_law = "default";
  auto* c_gatel = app.add_subcommand("gate-lattice", "growth-law gate for lattice-of-balls potentials");
  c_gatel->add_option("--d", d, "dimension, 3 or 4")->required();
  c_gatel->add_option("--k-band", k_band, "mode band radius")->default_val(32);
  c_gatel->add_option("--l-min", l_min, "first |l|_inf")->default_val(1);
  c_gatel->add_option("--l-max", l_max, "last |l|_inf")->default_val(20);
  c_gatel->add_option("--n-law", n_law, "amplitude growth law")->default_val("log:1,2");
  c_gatel->add_option("--m-law", m_law, "density growth law")->default_val("ceilsq-log:1,2");
  c_gatel->add_option("--r-law", r_law, "radius law (default |l|^(-1/(2d)))")->default_val("default");
  add_common(c_gatel);

  // eig
  std::string corner_str = "0,0,0", bc_str = "dirichlet";
  double side = 1.0, kinetic = 1.0, tol = 1e-9;
  int max_iter = 200, eig_steps = 0;
  auto* c_eig = app.add_subcommand("eig", "smallest window eigenvalue or a window scan");
  c_eig->add_option("--potential", pot_path, "potential JSON file")->required();
  c_eig->add_option("--corner", corner_str, "window corner")->default_val("0,0,0");
  c_eig->add_option("--side", side, "window side")->required();
  c_eig->add_option("--resolution", resolution, "samples per axis, >= 8")->required();
  c_eig->add_option("--bc", bc_str, "dirichlet | neumann")->default_val("dirichlet");
  c_eig->add_option("--kinetic", kinetic, "kinetic coefficient")->default_val(1.0);
  c_eig->add_option("--tol", tol, "residual tolerance")->default_val(1e-9);
  c_eig->add_option("--max-iter", max_iter, "iteration cap")->default_val(200);
  c_eig->add_option("--steps", eig_steps, "windows along --dir (0 = single window)")->default_val(0);
  c_eig->add_option("--dir", dir_str, "lattice direction for scans")->default_val("1,0,0");
  add_common(c_eig);

  try {
    std::vector<std::string> args = merge_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);

    if (c_const->parsed()) return cmd_constants(d, io);
    if (c_setopt->parsed()) return cmd_setopt(atoms_path, t_level, mode, io);
    if (c_lagr->parsed()) return cmd_lagrange(atoms_path, t_level, io);
    if (c_scan->parsed())
      return cmd_scan(pot_path, r_side, steps, dir_str, resolution, gamma_k, alpha, gmd_delta,
                      gmd_opt->count() > 0, io);
    if (c_madic->parsed())
      return cmd_madic(pot_path, l_str, n_depth, m_base, system_arg, resolution, gamma_k, alpha, io);
    if (c_density->parsed()) return cmd_density(system_arg, sys_d, m_base, theta, trials, io);
    if (c_diveq->parsed()) return cmd_diveq(grid_path, solver, io.out, report_path);
    if (c_gatef->parsed()) return cmd_gate_fourier(pot_path, l_str, resolution, io);
    if (c_gatel->parsed()) return cmd_gate_lattice(d, k_band, l_min, l_max, n_law, m_law, r_law, io);
    if (c_eig->parsed())
      return cmd_eig(pot_path, corner_str, side, resolution, bc_str, kinetic, tol, max_iter,
                     eig_steps, dir_str, io);
    fail(Errc::UnknownCommand, "no subcommand given");
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == Errc::NoConvergence ? 3 : 2;
  } catch (const std::logic_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace specgate
