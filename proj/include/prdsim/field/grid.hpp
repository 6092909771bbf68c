#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "prdsim/errors.hpp"

namespace prdsim {

/// Uniform transverse sampling in meters. Sample j sits at the midpoint of
/// cell j, x_j = center - half_width + (j + 1/2) dx, with dx = 2 half_width / n.
class Grid {
public:
  Grid(double center, double half_width, std::size_t n_samples)
      : center_(center), half_width_(half_width), n_(n_samples) {
    if (!std::isfinite(center) || !std::isfinite(half_width) || half_width <= 0.0)
      throw InvalidArgument("grid half_width must be positive and finite");
    if (n_samples < 2)
      throw InvalidArgument("grid needs at least 2 samples, got " + std::to_string(n_samples));
    dx_ = 2.0 * half_width_ / static_cast<double>(n_);
  }

  double center() const { return center_; }
  double half_width() const { return half_width_; }
  double width() const { return 2.0 * half_width_; }
  std::size_t size() const { return n_; }
  double spacing() const { return dx_; }

  /// Left edge of the first cell.
  double lower() const { return center_ - half_width_; }
  double upper() const { return center_ + half_width_; }

  double x(std::size_t j) const {
    return center_ - half_width_ + (static_cast<double>(j) + 0.5) * dx_;
  }

  std::vector<double> coordinates() const {
    std::vector<double> xs(n_);
    for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
    return xs;
  }

  bool operator==(const Grid& other) const {
    return center_ == other.center_ && half_width_ == other.half_width_ && n_ == other.n_;
  }

private:
  double center_;
  double half_width_;
  std::size_t n_;
  double dx_;
};

/// Signed sample count so that configuration values such as 0 or -1 are
/// rejected instead of wrapping.
inline Grid make_grid(double center, double half_width, std::int64_t n_samples) {
  if (n_samples < 2)
    throw InvalidArgument("grid needs at least 2 samples, got " + std::to_string(n_samples));
  return Grid(center, half_width, static_cast<std::size_t>(n_samples));
}

} // namespace prdsim
