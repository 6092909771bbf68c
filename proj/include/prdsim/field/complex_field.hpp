#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prdsim/errors.hpp"
#include "prdsim/field/grid.hpp"
#include "prdsim/field/optics.hpp"

namespace prdsim {

enum class FieldRole { source, object_arm, reference_arm, generic };

namespace detail {

inline void require_finite(std::span<const Complex> values, const char* what) {
  for (const Complex& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw InvalidArgument(std::string(what) + " contains non-finite samples");
}

} // namespace detail

/// Complex amplitude samples on a 1D grid. Values are validated finite on
/// construction; diagnostics collected while producing the field (sampling
/// warnings and the like) travel with it.
class ComplexField {
public:
  ComplexField(Grid grid, std::vector<Complex> values, FieldRole role = FieldRole::generic)
      : grid_(std::move(grid)), values_(std::move(values)), role_(role) {
    if (values_.size() != grid_.size())
      throw InvalidArgument("field has " + std::to_string(values_.size()) +
                            " samples but its grid has " + std::to_string(grid_.size()));
    detail::require_finite(values_, "field");
  }

  /// Zero field.
  explicit ComplexField(Grid grid, FieldRole role = FieldRole::generic)
      : grid_(std::move(grid)), values_(grid_.size()), role_(role) {}

  const Grid& grid() const { return grid_; }
  std::span<const Complex> values() const { return values_; }
  const std::vector<Complex>& samples() const { return values_; }
  std::size_t size() const { return values_.size(); }
  const Complex& operator[](std::size_t j) const { return values_[j]; }

  FieldRole role() const { return role_; }
  void set_role(FieldRole role) { role_ = role; }

  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }
  void add_warnings(const std::vector<std::string>& ws) {
    warnings_.insert(warnings_.end(), ws.begin(), ws.end());
  }

  /// Sum |E|^2 dx.
  double energy() const {
    double acc = 0.0;
    for (const Complex& v : values_) acc += std::norm(v);
    return acc * grid_.spacing();
  }

private:
  Grid grid_;
  std::vector<Complex> values_;
  FieldRole role_;
  std::vector<std::string> warnings_;
};

/// Separable 2D field: rows run along x (grid_x), row index runs along y.
/// Storage is row-major, values[iy * nx + ix].
class Field2D {
public:
  Field2D(Grid grid_x, Grid grid_y, std::vector<Complex> values)
      : gx_(std::move(grid_x)), gy_(std::move(grid_y)), values_(std::move(values)) {
    if (values_.size() != gx_.size() * gy_.size())
      throw InvalidArgument("2D field sample count does not match its grids");
    detail::require_finite(values_, "2D field");
  }

  const Grid& grid_x() const { return gx_; }
  const Grid& grid_y() const { return gy_; }
  std::size_t nx() const { return gx_.size(); }
  std::size_t ny() const { return gy_.size(); }
  std::span<const Complex> values() const { return values_; }
  std::vector<Complex>& mutable_values() { return values_; }
  const Complex& at(std::size_t ix, std::size_t iy) const { return values_[iy * nx() + ix]; }

  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warnings(const std::vector<std::string>& ws) {
    warnings_.insert(warnings_.end(), ws.begin(), ws.end());
  }

private:
  Grid gx_;
  Grid gy_;
  std::vector<Complex> values_;
  std::vector<std::string> warnings_;
};

} // namespace prdsim
