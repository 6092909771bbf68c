#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "prdsim/errors.hpp"

namespace prdsim {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Quasi-monochromatic illumination: one vacuum wavelength for everything.
class OpticsContext {
public:
  explicit OpticsContext(double wavelength) : wavelength_(wavelength) {
    if (!std::isfinite(wavelength) || wavelength <= 0.0)
      throw InvalidArgument("wavelength must be positive and finite");
    k0_ = kTwoPi / wavelength_;
  }

  double wavelength() const { return wavelength_; }
  /// Vacuum wavenumber 2 pi / lambda in rad/m.
  double k0() const { return k0_; }

private:
  double wavelength_;
  double k0_;
};

} // namespace prdsim
