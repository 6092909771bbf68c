#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "prdsim/errors.hpp"
#include "prdsim/field/complex_field.hpp"
#include "prdsim/field/propagate.hpp"
#include "prdsim/interferometer/spec.hpp"

namespace prdsim {

/// Fully coherent illumination of the same interferometer, for contrast
/// with the incoherent-source image.
struct CoherentIllumination {
  enum class Kind { plane_wave, pinhole };
  Kind kind = Kind::plane_wave;
  double pinhole_width = 0.0;
};

struct CoherentOptions {
  bool block_reference = false;
  Method method = Method::automatic;
};

struct CoherentResult {
  Grid grid;
  std::vector<double> intensity; // |E_o + E_r|^2
  ComplexField object_field;
  ComplexField reference_field;
  std::vector<std::string> warnings;
};

inline CoherentResult run_coherent(const InterferometerSpec& spec, const Grid& grid,
                                   const CoherentIllumination& illumination,
                                   const CoherentOptions& options = {}) {
  SpecSummary s = validate(spec);
  const OpticsContext& ctx = spec.optics;
  const double amplitude = std::sqrt(spec.source_intensity);
  std::vector<std::string> warnings = std::move(s.warnings);

  ComplexField eo(grid, FieldRole::object_arm);
  ComplexField er(grid, FieldRole::reference_arm);
  if (illumination.kind == CoherentIllumination::Kind::plane_wave) {
    // A unit plane wave is invariant under paraxial propagation apart from
    // its carrier, so only the object's departure from its background
    // level is propagated numerically.
    const Complex bg = spec.object.background();
    std::vector<Complex> dev = spec.object.sample(grid);
    for (Complex& v : dev) v -= bg;
    const ComplexField scattered = propagate(ctx, ComplexField(grid, std::move(dev)), spec.z_o2, spec.z_o2,
                                             options.method);
    warnings.insert(warnings.end(), scattered.warnings().begin(), scattered.warnings().end());
    const Complex lead = amplitude * std::polar(1.0, ctx.k0() * spec.z_o1);
    const Complex carried = bg * std::polar(1.0, ctx.k0() * spec.z_o2);
    std::vector<Complex> o(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) o[j] = lead * (carried + scattered[j]);
    eo = ComplexField(grid, std::move(o), FieldRole::object_arm);
    er = ComplexField(grid,
                      std::vector<Complex>(grid.size(), amplitude * std::polar(1.0, ctx.k0() * s.reference.optical_path)),
                      FieldRole::reference_arm);
  } else {
    const double w = illumination.pinhole_width;
    if (!(w > 0.0)) throw InvalidArgument("pinhole width must be positive");
    if (w < 2.0 * grid.spacing()) warnings.push_back("pinhole narrower than two grid samples");
    std::vector<Complex> src(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
      src[j] = std::abs(grid.x(j)) < 0.5 * w ? Complex(amplitude) : Complex{};
    const ComplexField source(grid, std::move(src), FieldRole::source);
    ComplexField at_object = propagate(ctx, source, spec.z_o1, spec.z_o1, options.method);
    eo = propagate(ctx, spec.object.apply(at_object), spec.z_o2, spec.z_o2, options.method);
    eo.set_role(FieldRole::object_arm);
    er = propagate(ctx, source, s.reference.optical_path, s.reference.diffraction_length, options.method);
    er.set_role(FieldRole::reference_arm);
    warnings.insert(warnings.end(), eo.warnings().begin(), eo.warnings().end());
    warnings.insert(warnings.end(), er.warnings().begin(), er.warnings().end());
  }

  std::vector<double> intensity(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j)
    intensity[j] = std::norm(options.block_reference ? eo[j] : eo[j] + er[j]);
  return CoherentResult{grid, std::move(intensity), std::move(eo), std::move(er), std::move(warnings)};
}

} // namespace prdsim
