#pragma once

#include <cmath>
#include <complex>

#include "prdsim/errors.hpp"
#include "prdsim/field/optics.hpp"

namespace prdsim {

/// sqrt(k0 / (i 2 pi Zbar)) on the principal branch. For Zbar < 0 this is the
/// conjugate of the value at |Zbar|, so negative diffraction lengths need no
/// special handling anywhere downstream.
inline Complex fresnel_amplitude(const OpticsContext& ctx, double diffraction_length) {
  if (diffraction_length == 0.0)
    throw DegenerateKernel("zero diffraction length: use the delta-kernel path");
  // k0 / (i 2 pi Zbar) = -i k0 / (2 pi Zbar)
  return std::sqrt(Complex(0.0, -ctx.k0() / (kTwoPi * diffraction_length)));
}

/// Phase of the paraxial free-travel kernel, k0 Z + k0 (x - x0)^2 / (2 Zbar).
inline double fresnel_phase(const OpticsContext& ctx, double offset, double optical_path,
                            double diffraction_length) {
  return ctx.k0() * optical_path + ctx.k0() * (offset * offset) / (2.0 * diffraction_length);
}

/// Impulse response for paraxial travel with optical path Z (governs the
/// carrier phase) and diffraction length Zbar (governs the chirp curvature):
///
///   H(x, x0; Z, Zbar) = sqrt(k0 / (i 2 pi Zbar)) exp[i k0 Z + i k0 (x - x0)^2 / (2 Zbar)]
///
/// Throws DegenerateKernel for Zbar == 0; that limit is a delta function.
inline Complex fresnel_kernel(const OpticsContext& ctx, double x, double x0, double optical_path,
                              double diffraction_length) {
  const Complex amp = fresnel_amplitude(ctx, diffraction_length);
  return amp * std::polar(1.0, fresnel_phase(ctx, x - x0, optical_path, diffraction_length));
}

} // namespace prdsim
