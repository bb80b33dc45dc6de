#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "specgate/errors.hpp"

namespace specgate {

enum class Topology { Cube, Torus };

/// Uniform sample grid over a box (Cube) or a fully periodic box (Torus).
/// values are row-major with axis 0 slowest; sample i sits at
/// origin[a] + i[a]*spacing[a] along each axis a.
struct GridFunction {
  int d = 0;
  std::vector<int> dims;
  std::vector<double> origin;
  std::vector<double> spacing;
  Topology topology = Topology::Cube;
  std::vector<double> values;

  std::size_t size() const;
  double cell_volume() const;
  void check_shape() const;

  std::size_t index(const std::vector<int>& idx) const;
  std::vector<double> point(const std::vector<int>& idx) const;
};

/// d scalar fields sharing one geometry, component a holds field a.
struct VectorFieldGrid {
  std::vector<GridFunction> components;

  const GridFunction& geometry() const { return components.at(0); }
  void check_consistent() const;
};

GridFunction zero_like(const GridFunction& g);

/// Walks all multi-indices of `dims` in row-major order.
class MultiIndex {
 public:
  explicit MultiIndex(const std::vector<int>& dims) : dims_(dims), idx_(dims.size(), 0) {}

  const std::vector<int>& operator*() const { return idx_; }
  bool done() const { return done_; }
  void next();

 private:
  std::vector<int> dims_;
  std::vector<int> idx_;
  bool done_ = false;
};

// "SGF1" container: one JSON header line, then raw little-endian doubles,
// row-major, one block per field.
void write_sgf(const GridFunction& g, const std::string& path);
void write_sgf(const VectorFieldGrid& vf, const std::string& path);
GridFunction read_sgf_scalar(const std::string& path);
VectorFieldGrid read_sgf_vector(const std::string& path);

}  // namespace specgate
