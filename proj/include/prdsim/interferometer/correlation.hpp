#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "prdsim/errors.hpp"
#include "prdsim/field/complex_field.hpp"
#include "prdsim/field/grid.hpp"
#include "prdsim/field/kernel.hpp"
#include "prdsim/field/propagate.hpp"
#include "prdsim/interferometer/spec.hpp"

namespace prdsim {

/// First-order cross correlation <E_r*(x) E_o(x)> sampled on a grid.
///
/// correlation = prefactor * pattern, where pattern is the Fresnel
/// transform of T over Z_eff (T itself at imaging) and
///   prefactor = I_s sqrt(k0 / (i 2 pi z_o2)) sqrt(k0 / (i 2 pi (z_o1 - Zbar)))
///                   / sqrt(k0 / (i 2 pi Z_eff))
/// which reduces to I_s sqrt(k0 / (i 2 pi z_o2)) at imaging.
struct CorrelationResult {
  Grid grid;
  std::vector<Complex> correlation;
  double effective_length = 0.0;
  Complex prefactor{};
  std::vector<std::string> warnings;

  /// correlation / prefactor.
  std::vector<Complex> pattern() const {
    std::vector<Complex> p(correlation.size());
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = correlation[j] / prefactor;
    return p;
  }
};

struct CorrelationResult2D {
  Grid grid_x;
  Grid grid_y;
  std::vector<Complex> correlation; // row-major, values[iy * nx + ix]
  double effective_length = 0.0;
  Complex prefactor{};
  std::vector<std::string> warnings;
};

namespace detail {

inline Complex correlation_prefactor(const InterferometerSpec& spec, const SpecSummary& s,
                                     int dims) {
  const OpticsContext& ctx = spec.optics;
  Complex amp;
  if (s.effective_length == 0.0) {
    amp = fresnel_amplitude(ctx, spec.z_o2);
  } else {
    const double defocus = spec.z_o1 - s.reference.diffraction_length;
    amp = fresnel_amplitude(ctx, spec.z_o2) * fresnel_amplitude(ctx, defocus) /
          fresnel_amplitude(ctx, s.effective_length);
  }
  return spec.source_intensity * (dims == 2 ? amp * amp : amp);
}

inline void check_resolution(const InterferometerSpec& spec, const Grid& grid,
                             std::vector<std::string>& warnings) {
  const double feature = spec.object.smallest_feature();
  if (std::isfinite(feature) && grid.spacing() > feature / 4.0) {
    std::ostringstream os;
    os << "grid spacing " << grid.spacing() << " m does not resolve the object's smallest feature "
       << feature << " m (need spacing <= feature / 4)";
    throw ResolutionError(os.str());
  }
  const double psf = spec.optics.wavelength() * spec.z_o1 / spec.source_width;
  if (feature < 3.0 * psf) {
    std::ostringstream os;
    os << "object feature " << feature << " m is below 3x the source-aperture point spread "
       << psf << " m; the finite source will blur it";
    warnings.push_back(os.str());
  }
  if (const auto sup = spec.object.support()) {
    if (sup->first < grid.lower() || sup->second > grid.upper())
      warnings.push_back("object extends beyond the grid and is truncated");
  }
}

} // namespace detail

/// Closed-form correlation for a delta-correlated source of unbounded
/// extent: the Fresnel pattern of T over the effective diffraction length,
/// or T itself at imaging.
inline CorrelationResult correlation_analytic(const InterferometerSpec& spec, const Grid& grid,
                                              Method method = Method::automatic) {
  SpecSummary s = validate(spec);
  CorrelationResult r{grid, {}, s.effective_length, {}, std::move(s.warnings)};
  detail::check_resolution(spec, grid, r.warnings);
  r.prefactor = detail::correlation_prefactor(spec, s, 1);

  ComplexField object(grid, spec.object.sample(grid));
  // Under exactly equal paths this carrier is 1; a tolerated mismatch keeps it.
  const ComplexField pattern =
      propagate(spec.optics, object, s.path_mismatch, s.effective_length, method);
  r.warnings.insert(r.warnings.end(), pattern.warnings().begin(), pattern.warnings().end());
  r.correlation.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) r.correlation[j] = r.prefactor * pattern[j];
  return r;
}

/// 2D version for raster objects, by separable propagation.
inline CorrelationResult2D correlation_analytic_2d(const InterferometerSpec& spec,
                                                   const Grid& grid_x, const Grid& grid_y,
                                                   Method method = Method::automatic) {
  SpecSummary s = validate(spec);
  CorrelationResult2D r{grid_x, grid_y, {}, s.effective_length, {}, std::move(s.warnings)};
  detail::check_resolution(spec, grid_x, r.warnings);
  r.prefactor = detail::correlation_prefactor(spec, s, 2);
  Field2D object(grid_x, grid_y, spec.object.sample_2d(grid_x, grid_y));
  const Field2D pattern = propagate_2d(spec.optics, object, s.path_mismatch, s.effective_length, method);
  r.warnings.insert(r.warnings.end(), pattern.warnings().begin(), pattern.warnings().end());
  r.correlation.assign(pattern.values().begin(), pattern.values().end());
  for (Complex& v : r.correlation) v *= r.prefactor;
  return r;
}

/// Finite-source oracle: I_s sum_{x0} h_r*(x, x0) h_o(x, x0) dx0 with the
/// reference impulse response H(x, x0; Z, Zbar) and the object-arm response
///   h_o(x, x0) = sum_{x'} H(x, x'; z_o2, z_o2) T(x') H(x', x0; z_o1, z_o1) dx'
/// evaluated by brute-force midpoint quadrature. The source occupies
/// `source`, the object is sampled on `object_plane`. Cost is
/// O(detector * source * nonzero object samples).
inline CorrelationResult correlation_bruteforce(const InterferometerSpec& spec,
                                                const Grid& detector, const Grid& source,
                                                const Grid& object_plane) {
  SpecSummary s = validate(spec);
  CorrelationResult r{detector, {}, s.effective_length, {}, std::move(s.warnings)};
  r.prefactor = detail::correlation_prefactor(spec, s, 1);
  const OpticsContext& ctx = spec.optics;
  const double Z = s.reference.optical_path;
  const double Zbar = s.reference.diffraction_length;

  std::vector<double> xo;
  std::vector<Complex> to;
  for (std::size_t m = 0; m < object_plane.size(); ++m) {
    const Complex t = spec.object(object_plane.x(m));
    if (t != Complex{}) {
      xo.push_back(object_plane.x(m));
      to.push_back(t);
    }
  }
  const std::size_t ns = source.size();
  const std::size_t no = xo.size();

  // First object-arm hop, source -> object plane.
  std::vector<Complex> hop1(no * ns);
  for (std::size_t m = 0; m < no; ++m)
    for (std::size_t k = 0; k < ns; ++k)
      hop1[m * ns + k] = fresnel_kernel(ctx, xo[m], source.x(k), spec.z_o1, spec.z_o1);

  const double weight = spec.source_intensity * source.spacing() * object_plane.spacing();
  std::vector<Complex> ref(ns);
  r.correlation.assign(detector.size(), Complex{});
  for (std::size_t i = 0; i < detector.size(); ++i) {
    const double x = detector.x(i);
    for (std::size_t k = 0; k < ns; ++k) ref[k] = std::conj(fresnel_kernel(ctx, x, source.x(k), Z, Zbar));
    Complex acc{};
    for (std::size_t m = 0; m < no; ++m) {
      const Complex* row = hop1.data() + m * ns;
      Complex g{};
      for (std::size_t k = 0; k < ns; ++k) g += ref[k] * row[k];
      acc += fresnel_kernel(ctx, x, xo[m], spec.z_o2, spec.z_o2) * to[m] * g;
    }
    r.correlation[i] = acc * weight;
  }
  return r;
}

} // namespace prdsim
