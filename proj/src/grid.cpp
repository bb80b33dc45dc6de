#include "specgate/grid.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

namespace specgate {

std::size_t GridFunction::size() const {
  std::size_t n = 1;
  for (int m : dims) n *= static_cast<std::size_t>(m);
  return n;
}

double GridFunction::cell_volume() const {
  double v = 1.0;
  for (double h : spacing) v *= h;
  return v;
}

void GridFunction::check_shape() const {
  if (d < 1 || dims.size() != static_cast<std::size_t>(d) ||
      origin.size() != static_cast<std::size_t>(d) ||
      spacing.size() != static_cast<std::size_t>(d))
    fail(Errc::ShapeMismatch, "grid descriptor arrays must all have length d");
  for (int m : dims)
    if (m < 1) fail(Errc::ShapeMismatch, "grid dims must be positive");
  for (double h : spacing)
    if (!(h > 0)) fail(Errc::ShapeMismatch, "grid spacing must be positive");
  if (values.size() != size()) fail(Errc::ShapeMismatch, "values length does not match dims");
}

std::size_t GridFunction::index(const std::vector<int>& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < d; ++a) flat = flat * static_cast<std::size_t>(dims[a]) + static_cast<std::size_t>(idx[a]);
  return flat;
}

std::vector<double> GridFunction::point(const std::vector<int>& idx) const {
  std::vector<double> x(d);
  for (int a = 0; a < d; ++a) x[a] = origin[a] + idx[a] * spacing[a];
  return x;
}

void VectorFieldGrid::check_consistent() const {
  if (components.empty()) fail(Errc::ShapeMismatch, "vector field has no components");
  const GridFunction& g0 = components.front();
  for (const GridFunction& g : components) {
    g.check_shape();
    if (g.d != g0.d || g.dims != g0.dims || g.origin != g0.origin || g.spacing != g0.spacing ||
        g.topology != g0.topology)
      fail(Errc::ShapeMismatch, "vector field components disagree on geometry");
  }
}

GridFunction zero_like(const GridFunction& g) {
  GridFunction z = g;
  std::fill(z.values.begin(), z.values.end(), 0.0);
  return z;
}

void MultiIndex::next() {
  for (int a = static_cast<int>(dims_.size()) - 1; a >= 0; --a) {
    if (++idx_[a] < dims_[a]) return;
    idx_[a] = 0;
  }
  done_ = true;
}

namespace {

using nlohmann::json;

json header_json(const GridFunction& g, int fields) {
  json h;
  h["magic"] = "SGF1";
  h["d"] = g.d;
  h["dims"] = g.dims;
  h["origin"] = g.origin;
  h["spacing"] = g.spacing;
  h["topology"] = g.topology == Topology::Cube ? "cube" : "torus";
  h["fields"] = fields;
  return h;
}

void write_payload(std::ofstream& out, const std::vector<double>& v) {
  static_assert(std::endian::native == std::endian::little, "SGF1 writer assumes little-endian host");
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

struct SgfHeader {
  GridFunction geom;  // values left empty
  int fields = 1;
};

SgfHeader read_header(std::ifstream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) fail(Errc::IoFailure, "cannot read SGF1 header from " + path);
  json h = json::parse(line, nullptr, false);
  if (h.is_discarded() || h.value("magic", "") != std::string("SGF1"))
    fail(Errc::IoFailure, "not an SGF1 file: " + path);
  SgfHeader s;
  s.geom.d = h.at("d").get<int>();
  s.geom.dims = h.at("dims").get<std::vector<int>>();
  s.geom.origin = h.at("origin").get<std::vector<double>>();
  s.geom.spacing = h.at("spacing").get<std::vector<double>>();
  std::string topo = h.at("topology").get<std::string>();
  if (topo == "cube")
    s.geom.topology = Topology::Cube;
  else if (topo == "torus")
    s.geom.topology = Topology::Torus;
  else
    fail(Errc::IoFailure, "unknown SGF1 topology: " + topo);
  s.fields = h.at("fields").get<int>();
  return s;
}

std::vector<double> read_payload(std::ifstream& in, std::size_t n, const std::string& path) {
  std::vector<double> v(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != n * sizeof(double))
    fail(Errc::IoFailure, "truncated SGF1 payload in " + path);
  return v;
}

}  // namespace

void write_sgf(const GridFunction& g, const std::string& path) {
  g.check_shape();
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoFailure, "cannot open " + path + " for writing");
  out << header_json(g, 1).dump() << "\n";
  write_payload(out, g.values);
  if (!out) fail(Errc::IoFailure, "write failed: " + path);
}

void write_sgf(const VectorFieldGrid& vf, const std::string& path) {
  vf.check_consistent();
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoFailure, "cannot open " + path + " for writing");
  out << header_json(vf.geometry(), static_cast<int>(vf.components.size())).dump() << "\n";
  for (const GridFunction& g : vf.components) write_payload(out, g.values);
  if (!out) fail(Errc::IoFailure, "write failed: " + path);
}

GridFunction read_sgf_scalar(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoFailure, "cannot open " + path);
  SgfHeader h = read_header(in, path);
  if (h.fields != 1) fail(Errc::IoFailure, path + " holds a vector field, expected a scalar");
  GridFunction g = h.geom;
  g.values = read_payload(in, g.size(), path);
  g.check_shape();
  return g;
}

VectorFieldGrid read_sgf_vector(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoFailure, "cannot open " + path);
  SgfHeader h = read_header(in, path);
  VectorFieldGrid vf;
  for (int c = 0; c < h.fields; ++c) {
    GridFunction g = h.geom;
    g.values = read_payload(in, g.size(), path);
    vf.components.push_back(std::move(g));
  }
  vf.check_consistent();
  return vf;
}

}  // namespace specgate
