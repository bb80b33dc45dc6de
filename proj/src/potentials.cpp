#include "specgate/potentials.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace specgate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

long linf_of(std::span<const double> x, std::vector<long>& l_out) {
  long linf = 0;
  l_out.resize(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    l_out[j] = static_cast<long>(std::floor(x[j]));
    linf = std::max(linf, std::labs(l_out[j]));
  }
  return linf;
}

long rounded_density(const GrowthLaw& law, long linf) {
  return std::max(1L, static_cast<long>(std::llround(law(linf))));
}

double pow_int(double b, long e) {
  double r = 1.0;
  for (long i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

double GrowthLaw::operator()(long linf) const {
  double L = static_cast<double>(std::labs(linf));
  switch (kind) {
    case Kind::Const:
      return scale;
    case Kind::OnePlusLinf:
      return scale * (1.0 + L);
    case Kind::OnePlusLog:
      return scale * (1.0 + std::log1p(L));
    case Kind::LogShift:
      return scale * std::log(param + L);
    case Kind::CeilSqLogShift: {
      double g = std::log(param + L);
      return scale * std::ceil(g * g);
    }
    case Kind::PowLinf:
      return scale * std::pow(std::max(1.0, L), param);
  }
  return scale;
}

GrowthLaw GrowthLaw::parse(const std::string& text) {
  std::string name = text;
  double a = 1.0, b = 0.0;
  bool have_b = false;
  if (auto pos = text.find(':'); pos != std::string::npos) {
    name = text.substr(0, pos);
    std::istringstream args(text.substr(pos + 1));
    std::string tok;
    if (std::getline(args, tok, ',')) a = std::stod(tok);
    if (std::getline(args, tok, ',')) {
      b = std::stod(tok);
      have_b = true;
    }
  }
  if (name == "const") return {Kind::Const, a, 0.0};
  if (name == "one-plus-linf") return {Kind::OnePlusLinf, a, 0.0};
  if (name == "one-plus-log") return {Kind::OnePlusLog, a, 0.0};
  if (name == "log") return {Kind::LogShift, a, have_b ? b : 2.0};
  if (name == "ceilsq-log") return {Kind::CeilSqLogShift, a, have_b ? b : 2.0};
  if (name == "pow") return {Kind::PowLinf, have_b ? a : 1.0, have_b ? b : a};
  fail(Errc::UnknownKind, "unknown growth law: " + text);
}

std::string GrowthLaw::str() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::Const: out << "const:" << scale; break;
    case Kind::OnePlusLinf: out << "one-plus-linf:" << scale; break;
    case Kind::OnePlusLog: out << "one-plus-log:" << scale; break;
    case Kind::LogShift: out << "log:" << scale << "," << param; break;
    case Kind::CeilSqLogShift: out << "ceilsq-log:" << scale << "," << param; break;
    case Kind::PowLinf: out << "pow:" << scale << "," << param; break;
  }
  return out.str();
}

std::vector<Interval> cantor_adjacent(int n) {
  if (n < 1) fail(Errc::TOutOfRange, "cantor_adjacent requires n >= 1");
  std::vector<Interval> keep{{0.0, 1.0}};
  for (int depth = 1; depth < n; ++depth) {
    std::vector<Interval> next;
    next.reserve(keep.size() * 2);
    for (const Interval& iv : keep) {
      double third = (iv.hi - iv.lo) / 3.0;
      next.push_back({iv.lo, iv.lo + third});
      next.push_back({iv.hi - third, iv.hi});
    }
    keep.swap(next);
  }
  std::vector<Interval> out;
  out.reserve(keep.size());
  for (const Interval& iv : keep) {
    double third = (iv.hi - iv.lo) / 3.0;
    out.push_back({iv.lo + third, iv.hi - third});
  }
  return out;
}

int cantor_gap_depth(double u, int max_depth) {
  if (u < 0.0 || u > 1.0) return 0;
  double lo = 0.0, hi = 1.0;
  for (int n = 1; n <= max_depth; ++n) {
    double third = (hi - lo) / 3.0;
    if (third < 4.0 * std::numeric_limits<double>::epsilon()) return 0;  // below fp resolution
    if (u >= lo + third && u <= hi - third) return n;
    if (u < lo + third)
      hi = lo + third;
    else
      lo = hi - third;
  }
  return 0;
}

double theta_measure(double S, double beta, double a, double b) {
  if (!(S > 0)) fail(Errc::TOutOfRange, "theta_measure requires S > 0");
  if (!(beta > 0) || !(beta < 1)) fail(Errc::BadTheta, "theta_measure requires beta in (0,1)");
  if (!(b > a)) return 0.0;

  double A = S * a, B = S * b;
  double jA = std::floor(A), jB = std::floor(B);
  if (jA == jB) {
    double lo = std::max(A, jA);
    double hi = std::min(B, jA + beta);
    return std::max(0.0, hi - lo) / S;
  }
  double head = std::max(0.0, jA + beta - A);
  double tail = std::min(beta, B - jB);
  double full = (jB - jA - 1.0) * beta;
  return (head + full + tail) / S;
}

double f_delta(double delta, double x) {
  if (!(delta > 0)) fail(Errc::TOutOfRange, "f_delta requires delta > 0");
  if (!(x > 0) || !(x <= 1)) fail(Errc::DomainX, "f_delta requires x in (0, 1]");
  return x - std::sqrt(delta) * std::sqrt(x - x * x);
}

double unit_ball_volume(int d) {
  return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

std::string PotentialSpec::id() const {
  std::ostringstream out;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantPot>)
          out << "constant(c=" << p.c << ")";
        else if constexpr (std::is_same_v<T, VAlphaPot>)
          out << "valpha(alpha=" << p.alpha << ",N=" << p.amplitude.str() << ")";
        else if constexpr (std::is_same_v<T, PsiLagrPot>)
          out << "psilagr(alpha=" << p.alpha << ",N=" << p.amplitude.str() << ")";
        else if constexpr (std::is_same_v<T, VPsiPot>)
          out << "vpsi(alpha=" << p.alpha << ",psi=" << p.psi_coeff << "*r^" << p.psi_exponent
              << ")";
        else if constexpr (std::is_same_v<T, CosineProductPot>)
          out << "cosine(N=" << p.amplitude.str() << ",m=" << p.rate.str() << ")";
        else if constexpr (std::is_same_v<T, ExpSquarePot>)
          out << "expsquare";
        else if constexpr (std::is_same_v<T, MolchanovLatticePot>)
          out << "molchanov(N=" << p.amplitude.str() << ",m=" << p.density.str()
              << ",r=" << p.radius.str()
              << ",shape=" << (p.shape == BumpShape::BallIndicator ? "ball" : "bump") << ")";
        else
          out << p.label;
      },
      body);
  return out.str();
}

void PotentialSpec::validate() const {
  if (d < 1) fail(Errc::ShapeMismatch, "potential dimension must be >= 1");
  double alpha_cap = d > 2 ? 2.0 * d / (d - 2.0) : kInf;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, VAlphaPot> || std::is_same_v<T, PsiLagrPot> ||
                      std::is_same_v<T, VPsiPot>) {
          if (!(p.alpha > 0) || !(p.alpha < alpha_cap))
            fail(Errc::TOutOfRange, "alpha must lie in (0, 2d/(d-2))");
        } else if constexpr (std::is_same_v<T, CustomPot>) {
          if (!p.fn) fail(Errc::UnknownKind, "custom potential has no callable");
        }
      },
      body);
}

double PotentialSpec::min_feature_scale(long linf_max) const {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, VAlphaPot>) {
          long pexp = p.fixed_p ? *p.fixed_p : linf_max + 1;
          return pow_int(1.0 / 3.0, pexp);
        } else if constexpr (std::is_same_v<T, VPsiPot>) {
          long pexp = p.fixed_p ? *p.fixed_p : linf_max + 1;
          return pow_int(1.0 / 3.0, pexp);
        } else if constexpr (std::is_same_v<T, PsiLagrPot>) {
          long pexp = p.fixed_p ? *p.fixed_p : linf_max + 1;
          return 1.0 / static_cast<double>(pexp);
        } else if constexpr (std::is_same_v<T, CosineProductPot>) {
          return 2.0 * M_PI / std::max(1.0, p.rate(linf_max));
        } else if constexpr (std::is_same_v<T, MolchanovLatticePot>) {
          // kernel support radius 1/2 makes the bump radius r/(2m)
          return p.radius(linf_max) / (2.0 * rounded_density(p.density, linf_max));
        } else {
          return kInf;
        }
      },
      body);
}

namespace {

double eval_valpha(const VAlphaPot& p, std::span<const double> x) {
  std::vector<long> l;
  long linf = linf_of(x, l);
  double u = x[0] - static_cast<double>(l[0]);
  int n = cantor_gap_depth(u);
  if (n == 0) return 0.0;
  long pexp = p.fixed_p ? *p.fixed_p : linf + 1;
  double beta = std::pow(3.0, -p.alpha * n);
  return p.amplitude(linf) * theta_step(beta, pow_int(3.0, pexp) * u);
}

double eval_psilagr(const PsiLagrPot& p, std::span<const double> x) {
  std::vector<long> l;
  long linf = linf_of(x, l);
  double u = x[0] - static_cast<double>(l[0]);
  if (!(u > 0)) return 0.0;
  // dyadic shell (2^-n, 2^-n+1] containing u
  int n = static_cast<int>(std::floor(-std::log2(u))) + 1;
  if (n < 1) n = 1;
  double beta = std::pow(2.0, -p.alpha * n);
  long pexp = p.fixed_p ? *p.fixed_p : linf + 1;
  return p.amplitude(linf) * theta_step(beta, static_cast<double>(pexp) * u);
}

double eval_vpsi(const VPsiPot& p, std::span<const double> x) {
  std::vector<long> l;
  long linf = linf_of(x, l);
  double u = x[0] - static_cast<double>(l[0]);
  int n = cantor_gap_depth(u);
  if (n == 0) return 0.0;
  double beta = p.psi_coeff * std::pow(pow_int(1.0 / 3.0, n + 1), p.psi_exponent);
  if (!(beta > 0) || !(beta < 1)) fail(Errc::BadTheta, "vpsi duty cycle left (0,1)");
  long pexp = p.fixed_p ? *p.fixed_p : linf + 1;
  double lift = std::pow(3.0, -p.alpha * n) / beta;
  return p.amplitude(linf) * lift * theta_step(beta, pow_int(3.0, pexp) * u);
}

double eval_cosine(const CosineProductPot& p, std::span<const double> x) {
  std::vector<long> l;
  long linf = linf_of(x, l);
  double m = p.rate(linf);
  double prod = 1.0;
  for (double xj : x) prod *= 1.0 - std::cos(m * xj);
  return p.amplitude(linf) * prod;
}

double eval_molchanov(const MolchanovLatticePot& p, std::span<const double> x) {
  std::vector<long> l;
  long linf = linf_of(x, l);
  double r = p.radius(linf);
  if (!(r > 0) || !(r < 0.5)) fail(Errc::TOutOfRange, "lattice bump radius must lie in (0, 1/2)");
  long m = rounded_density(p.density, linf);
  // nearest bump center of the 1/m sublattice shifted to cell centers
  double rho2 = 0.0;
  for (double xj : x) {
    double w = static_cast<double>(m) * xj - 0.5;
    double y = w - std::round(w);
    rho2 += y * y;
  }
  double z = std::sqrt(rho2) / r;  // |argument| of the bump profile
  if (z > 0.5) return 0.0;
  double profile = p.shape == BumpShape::BallIndicator ? 1.0 : 1.0 - 4.0 * z * z;
  return p.amplitude(linf) * profile;
}

}  // namespace

double evaluate(const PotentialSpec& spec, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(spec.d))
    fail(Errc::ShapeMismatch, "point dimension does not match potential dimension");
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantPot>) {
          return p.c;
        } else if constexpr (std::is_same_v<T, VAlphaPot>) {
          return eval_valpha(p, x);
        } else if constexpr (std::is_same_v<T, PsiLagrPot>) {
          return eval_psilagr(p, x);
        } else if constexpr (std::is_same_v<T, VPsiPot>) {
          return eval_vpsi(p, x);
        } else if constexpr (std::is_same_v<T, CosineProductPot>) {
          return eval_cosine(p, x);
        } else if constexpr (std::is_same_v<T, ExpSquarePot>) {
          double s = 0.0;
          for (double xj : x) s += xj * xj;
          return std::exp(s);
        } else if constexpr (std::is_same_v<T, MolchanovLatticePot>) {
          return eval_molchanov(p, x);
        } else {
          return p.fn(x);
        }
      },
      spec.body);
}

double support_fraction(const PotentialSpec& spec, const std::vector<long>& l) {
  const auto* p = std::get_if<MolchanovLatticePot>(&spec.body);
  if (!p || p->shape != BumpShape::BallIndicator)
    fail(Errc::WrongKind, "support_fraction needs the ball-indicator lattice potential");
  long linf = 0;
  for (long lj : l) linf = std::max(linf, std::labs(lj));
  double r = p->radius(linf);
  return std::pow(r, spec.d) * unit_ball_volume(spec.d) / std::pow(2.0, spec.d);
}

// --- JSON ----------------------------------------------------------------

namespace {

using nlohmann::json;

json law_json(const GrowthLaw& g) { return g.str(); }
GrowthLaw law_from(const json& j) { return GrowthLaw::parse(j.get<std::string>()); }

}  // namespace

std::string potential_to_json(const PotentialSpec& spec) {
  json j;
  j["d"] = spec.d;
  json& params = j["params"];
  params = json::object();
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantPot>) {
          j["kind"] = "constant";
          params["c"] = p.c;
        } else if constexpr (std::is_same_v<T, VAlphaPot>) {
          j["kind"] = "valpha";
          params["alpha"] = p.alpha;
          params["amplitude"] = law_json(p.amplitude);
          if (p.fixed_p) params["fixed_p"] = *p.fixed_p;
        } else if constexpr (std::is_same_v<T, PsiLagrPot>) {
          j["kind"] = "psilagr";
          params["alpha"] = p.alpha;
          params["amplitude"] = law_json(p.amplitude);
          if (p.fixed_p) params["fixed_p"] = *p.fixed_p;
        } else if constexpr (std::is_same_v<T, VPsiPot>) {
          j["kind"] = "vpsi";
          params["alpha"] = p.alpha;
          params["amplitude"] = law_json(p.amplitude);
          params["psi_coeff"] = p.psi_coeff;
          params["psi_exponent"] = p.psi_exponent;
          if (p.fixed_p) params["fixed_p"] = *p.fixed_p;
        } else if constexpr (std::is_same_v<T, CosineProductPot>) {
          j["kind"] = "cosine";
          params["amplitude"] = law_json(p.amplitude);
          params["rate"] = law_json(p.rate);
        } else if constexpr (std::is_same_v<T, ExpSquarePot>) {
          j["kind"] = "expsquare";
        } else if constexpr (std::is_same_v<T, MolchanovLatticePot>) {
          j["kind"] = "molchanov";
          params["amplitude"] = law_json(p.amplitude);
          params["density"] = law_json(p.density);
          params["radius"] = law_json(p.radius);
          params["shape"] = p.shape == BumpShape::BallIndicator ? "ball" : "bump";
        } else {
          fail(Errc::UnknownKind, "custom potentials do not serialize");
        }
      },
      spec.body);
  return j.dump();
}

PotentialSpec potential_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Errc::IoFailure, "potential JSON does not parse");
  PotentialSpec spec;
  spec.d = j.value("d", 3);
  std::string kind = j.at("kind").get<std::string>();
  json params = j.value("params", json::object());

  auto fixed_p = [&]() -> std::optional<long> {
    if (params.contains("fixed_p")) return params["fixed_p"].get<long>();
    return std::nullopt;
  };

  if (kind == "constant") {
    spec.body = ConstantPot{params.value("c", 0.0)};
  } else if (kind == "valpha") {
    VAlphaPot p;
    p.alpha = params.at("alpha").get<double>();
    if (params.contains("amplitude")) p.amplitude = law_from(params["amplitude"]);
    p.fixed_p = fixed_p();
    spec.body = p;
  } else if (kind == "psilagr") {
    PsiLagrPot p;
    p.alpha = params.at("alpha").get<double>();
    if (params.contains("amplitude")) p.amplitude = law_from(params["amplitude"]);
    p.fixed_p = fixed_p();
    spec.body = p;
  } else if (kind == "vpsi") {
    VPsiPot p;
    p.alpha = params.at("alpha").get<double>();
    if (params.contains("amplitude")) p.amplitude = law_from(params["amplitude"]);
    p.psi_coeff = params.value("psi_coeff", 1.0);
    p.psi_exponent = params.value("psi_exponent", 6.0);
    p.fixed_p = fixed_p();
    spec.body = p;
  } else if (kind == "cosine") {
    CosineProductPot p;
    if (params.contains("amplitude")) p.amplitude = law_from(params["amplitude"]);
    if (params.contains("rate")) p.rate = law_from(params["rate"]);
    spec.body = p;
  } else if (kind == "expsquare") {
    spec.body = ExpSquarePot{};
  } else if (kind == "molchanov") {
    MolchanovLatticePot p;
    if (params.contains("amplitude")) p.amplitude = law_from(params["amplitude"]);
    if (params.contains("density")) p.density = law_from(params["density"]);
    if (params.contains("radius")) p.radius = law_from(params["radius"]);
    if (params.value("shape", "ball") == "bump") p.shape = BumpShape::RadialBump;
    spec.body = p;
  } else {
    fail(Errc::UnknownKind, "unknown potential kind: " + kind);
  }
  spec.validate();
  return spec;
}

PotentialSpec load_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoFailure, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return potential_from_json(buf.str());
}

// --- dense systems --------------------------------------------------------

std::vector<Box> DenseSystemSpec::boxes(int j) const {
  if (j < 1) fail(Errc::TOutOfRange, "dense system levels start at 1");
  switch (kind) {
    case Kind::CantorAdjacent:
    case Kind::ProductWithCube: {
      std::vector<Box> out;
      for (const Interval& iv : cantor_adjacent(j)) {
        Box b;
        b.lo.assign(static_cast<std::size_t>(dimension), 0.0);
        b.hi.assign(static_cast<std::size_t>(dimension), 1.0);
        b.lo[0] = iv.lo;
        b.hi[0] = iv.hi;
        out.push_back(std::move(b));
      }
      return out;
    }
    case Kind::Custom: {
      if (static_cast<std::size_t>(j) > custom_levels.size()) return {};
      return custom_levels[static_cast<std::size_t>(j) - 1];
    }
  }
  return {};
}

int DenseSystemSpec::max_level() const {
  return kind == Kind::Custom ? static_cast<int>(custom_levels.size())
                              : std::numeric_limits<int>::max();
}

std::string dense_system_to_json(const DenseSystemSpec& system) {
  json j;
  switch (system.kind) {
    case DenseSystemSpec::Kind::CantorAdjacent: j["kind"] = "cantor"; break;
    case DenseSystemSpec::Kind::ProductWithCube: j["kind"] = "product"; break;
    case DenseSystemSpec::Kind::Custom: j["kind"] = "custom"; break;
  }
  j["dimension"] = system.dimension;
  if (system.kind == DenseSystemSpec::Kind::Custom) {
    json levels = json::array();
    for (const auto& level : system.custom_levels) {
      json boxes = json::array();
      for (const Box& b : level) boxes.push_back(json{{"lo", b.lo}, {"hi", b.hi}});
      levels.push_back(boxes);
    }
    j["levels"] = levels;
  }
  return j.dump();
}

DenseSystemSpec dense_system_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Errc::IoFailure, "dense system JSON does not parse");
  DenseSystemSpec s;
  std::string kind = j.value("kind", "cantor");
  s.dimension = j.value("dimension", 1);
  if (kind == "cantor")
    s.kind = DenseSystemSpec::Kind::CantorAdjacent;
  else if (kind == "product")
    s.kind = DenseSystemSpec::Kind::ProductWithCube;
  else if (kind == "custom") {
    s.kind = DenseSystemSpec::Kind::Custom;
    for (const auto& level : j.at("levels")) {
      std::vector<Box> boxes;
      for (const auto& jb : level) {
        Box b;
        b.lo = jb.at("lo").get<std::vector<double>>();
        b.hi = jb.at("hi").get<std::vector<double>>();
        if (b.lo.size() != static_cast<std::size_t>(s.dimension) || b.hi.size() != b.lo.size())
          fail(Errc::ShapeMismatch, "dense system box dimension mismatch");
        boxes.push_back(std::move(b));
      }
      s.custom_levels.push_back(std::move(boxes));
    }
  } else {
    fail(Errc::UnknownKind, "unknown dense system kind: " + kind);
  }
  return s;
}

DenseSystemSpec load_dense_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoFailure, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return dense_system_from_json(buf.str());
}

}  // namespace specgate
