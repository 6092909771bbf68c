#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <vector>

#include "prdsim/errors.hpp"
#include "prdsim/field/kernel.hpp"
#include "prdsim/field/propagate.hpp"
#include "prdsim/interferometer/correlation.hpp"
#include "prdsim/interferometer/spec.hpp"

namespace prdsim {

/// Flat background <|E_r|^2> + <|E_o|^2> over a source of width W.
///
/// The reference term is exact: the kernel modulus is constant, so
/// I_s int_W |h_r|^2 dx0 = I_s k0 W / (2 pi |Zbar|). The object term is a
/// midpoint quadrature over `source_samples` point sources, each propagated
/// through the object arm on `grid` (which must contain the object).
inline std::vector<double> background_intensity(const InterferometerSpec& spec, const Grid& grid,
                                                std::size_t source_samples = 1024) {
  const SpecSummary s = validate(spec);
  if (s.reference.diffraction_length == 0.0)
    throw DegenerateGeometry("reference arm with zero diffraction length has no flat background");
  if (source_samples < 2) throw InvalidArgument("background quadrature needs >= 2 source samples");
  const OpticsContext& ctx = spec.optics;
  const double W = spec.source_width;
  const double reference_level =
      spec.source_intensity * ctx.k0() * W / (kTwoPi * std::abs(s.reference.diffraction_length));

  const Grid source(0.0, 0.5 * W, source_samples);
  const std::vector<Complex> t = spec.object.sample(grid);
  FresnelPropagator hop2(ctx, grid, spec.z_o2, spec.z_o2);

  std::vector<double> object_term(grid.size(), 0.0);
  std::vector<Complex> plane(grid.size());
  std::vector<Complex> out(grid.size());
  std::vector<Complex> scratch;
  for (std::size_t k = 0; k < source.size(); ++k) {
    const double x0 = source.x(k);
    for (std::size_t j = 0; j < grid.size(); ++j)
      plane[j] = t[j] == Complex{} ? Complex{} : t[j] * fresnel_kernel(ctx, grid.x(j), x0, spec.z_o1, spec.z_o1);
    hop2.apply(plane, out, scratch);
    for (std::size_t j = 0; j < grid.size(); ++j) object_term[j] += std::norm(out[j]);
  }
  std::vector<double> bg(grid.size());
  const double w = spec.source_intensity * source.spacing();
  for (std::size_t j = 0; j < grid.size(); ++j) bg[j] = reference_level + w * object_term[j];
  return bg;
}

/// The two outputs of a lossless symmetric 50/50 splitter with ports
/// (E_o +- E_r) / sqrt(2):  I_+- = background / 2 +- Re<E_r* E_o>.
struct PortIntensities {
  std::vector<double> plus;
  std::vector<double> minus;
  std::vector<double> background;

  /// Background-free image, 2 Re<E_r* E_o>.
  std::vector<double> difference() const {
    std::vector<double> d(plus.size());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = plus[j] - minus[j];
    return d;
  }

  /// Background only; the interference term cancels.
  std::vector<double> sum() const {
    std::vector<double> s(plus.size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = plus[j] + minus[j];
    return s;
  }
};

inline PortIntensities detector_ports(std::span<const Complex> correlation,
                                      std::span<const double> background) {
  if (correlation.size() != background.size())
    throw InvalidArgument("correlation and background must share a grid");
  PortIntensities p;
  p.plus.resize(correlation.size());
  p.minus.resize(correlation.size());
  p.background.assign(background.begin(), background.end());
  for (std::size_t j = 0; j < correlation.size(); ++j) {
    const double half = 0.5 * background[j];
    const double re = correlation[j].real();
    if (half < std::abs(re) * (1.0 - 1e-12)) {
      std::ostringstream os;
      os << "negative port intensity at sample " << j << ": background/2 = " << half
         << " < |Re correlation| = " << std::abs(re);
      throw NegativeIntensity(os.str());
    }
    p.plus[j] = half + re;
    p.minus[j] = half - re;
  }
  return p;
}

inline PortIntensities detector_ports(const CorrelationResult& correlation,
                                      std::span<const double> background) {
  return detector_ports(std::span<const Complex>(correlation.correlation), background);
}

} // namespace prdsim
