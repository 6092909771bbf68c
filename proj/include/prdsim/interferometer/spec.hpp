#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "prdsim/cascade/ledger.hpp"
#include "prdsim/errors.hpp"
#include "prdsim/field/optics.hpp"
#include "prdsim/field/transmittance.hpp"

namespace prdsim {

/// Two-arm interferometer fed by a spatially incoherent source.
///
/// Object arm: source -> z_o1 of air -> object T -> z_o2 of air -> detector.
/// Reference arm: the chain of media in `reference`. The arms must have
/// equal optical paths within `coherence_tolerance`.
struct InterferometerSpec {
  OpticsContext optics;
  double z_o1;
  double z_o2;
  std::vector<MediumSegment> reference;
  Transmittance object;
  double source_intensity = 1.0;
  double source_width = 10e-3;
  double coherence_tolerance = kDefaultCoherenceTolerance;
};

/// Resolved ledger quantities for a valid spec.
struct SpecSummary {
  PathLedger reference;
  double path_mismatch = 0.0;     // z_o1 + z_o2 - Z
  double effective_length = 0.0;  // Z_eff, exactly 0 at imaging
  std::optional<ImagingPositions> imaging;
  std::vector<std::string> warnings;
};

inline SpecSummary validate(const InterferometerSpec& spec) {
  if (!(spec.z_o1 > 0.0) || !std::isfinite(spec.z_o1)) throw InvalidArgument("z_o1 must be positive");
  if (!(spec.z_o2 > 0.0) || !std::isfinite(spec.z_o2)) throw InvalidArgument("z_o2 must be positive");
  if (!(spec.source_intensity > 0.0) || !std::isfinite(spec.source_intensity))
    throw InvalidArgument("source intensity must be positive");
  if (!(spec.source_width > 0.0) || !std::isfinite(spec.source_width))
    throw InvalidArgument("source width must be positive");
  if (!(spec.coherence_tolerance >= 0.0)) throw InvalidArgument("coherence tolerance must be >= 0");
  for (const MediumSegment& s : spec.reference) make_segment(s.length, s.index);

  SpecSummary out;
  out.reference = ledger(spec.reference);
  const double object_path = spec.z_o1 + spec.z_o2;
  std::string w = check_equal_path(object_path, out.reference.optical_path, spec.coherence_tolerance);
  if (!w.empty()) out.warnings.push_back(std::move(w));
  out.path_mismatch = object_path - out.reference.optical_path;
  out.effective_length = effective_diffraction_length(spec.z_o1, spec.z_o2, out.reference,
                                                      spec.coherence_tolerance);
  if (out.reference.optical_path >= out.reference.diffraction_length) {
    out.imaging = ImagingPositions{out.reference.diffraction_length,
                                   out.reference.optical_path - out.reference.diffraction_length};
  }
  return out;
}

} // namespace prdsim
