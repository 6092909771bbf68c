#pragma once

#include <cassert>
#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "prdsim/errors.hpp"

namespace prdsim {

/// Homogeneous slab of physical length l and refractive index n. Negative
/// indices model a negatively refracting medium.
struct MediumSegment {
  double length;
  double index;
};

inline MediumSegment make_segment(double length, double index) {
  if (!std::isfinite(length) || length <= 0.0) throw InvalidArgument("segment length must be positive");
  if (!std::isfinite(index) || index == 0.0) throw InvalidArgument("segment index must be non-zero");
  return {length, index};
}

/// Accumulated optical path Z = sum n l (carrier phase, coherence) and
/// diffraction length Zbar = sum l / n (chirp curvature).
struct PathLedger {
  double optical_path = 0.0;
  double diffraction_length = 0.0;

  PathLedger& operator+=(const PathLedger& o) {
    optical_path += o.optical_path;
    diffraction_length += o.diffraction_length;
    return *this;
  }
  friend PathLedger operator+(PathLedger a, const PathLedger& b) { return a += b; }
};

inline PathLedger segment_ledger(const MediumSegment& s) {
  if (s.index == 0.0) throw InvalidArgument("segment index must be non-zero");
  return {s.index * s.length, s.length / s.index};
}

inline PathLedger ledger(std::span<const MediumSegment> segments) {
  if (segments.empty()) throw InvalidArgument("ledger needs at least one segment");
  PathLedger total;
  for (const MediumSegment& s : segments) total += segment_ledger(s);
  return total;
}

/// Default tolerance on the optical path mismatch between the two arms.
inline constexpr double kDefaultCoherenceTolerance = 1e-3;

/// Mismatches below this are treated as exact equality (no warning).
inline constexpr double kPathEqualitySlack = 1e-9;

/// Returns a warning string for a tolerated mismatch, empty when the paths
/// agree, and throws UnequalPath beyond the tolerance.
inline std::string check_equal_path(double object_path, double reference_path,
                                    double tolerance = kDefaultCoherenceTolerance) {
  const double mismatch = std::abs(object_path - reference_path);
  auto g = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::string(buf);
  };
  if (!(mismatch <= tolerance)) {
    throw UnequalPath("equal-optical-path constraint violated: object arm " +
                      g(object_path) + " m vs reference arm " +
                      g(reference_path) + " m exceeds the coherence tolerance of " +
                      g(tolerance) + " m");
  }
  if (mismatch > kPathEqualitySlack) {
    return "arm optical paths differ by " + g(mismatch) +
           " m (within the coherence tolerance)";
  }
  return {};
}

struct ImagingPositions {
  double object_distance;   // z_o1 at imaging, equals Zbar
  double detector_distance; // z_o2 at imaging, equals Z - Zbar
};

/// Object placement that images it onto the detector: the object sits one
/// reference diffraction length from the source.
inline ImagingPositions imaging_positions(const PathLedger& reference, double object_arm_length,
                                          double tolerance = kDefaultCoherenceTolerance) {
  check_equal_path(object_arm_length, reference.optical_path, tolerance);
  if (reference.optical_path < reference.diffraction_length)
    throw DegenerateGeometry("reference diffraction length exceeds its optical path: "
                             "no imaging position inside the object arm");
  return {reference.diffraction_length, reference.optical_path - reference.diffraction_length};
}

/// Z_eff = z_o2 (1 - z_o2 / z_o2_img); valid under exactly equal optical paths.
inline double effective_diffraction_length_equal_path(double z_o2, double z_o2_imaging) {
  if (z_o2_imaging == 0.0)
    throw DegenerateGeometry("imaging plane coincides with the detector; Z_eff is unbounded");
  return z_o2 * (1.0 - z_o2 / z_o2_imaging);
}

/// Effective diffraction length of the joint two-arm pattern,
///   1/Z_eff = 1/z_o2 + 1/(z_o1 - Zbar).
/// Exactly 0 at the imaging point z_o1 == Zbar; negative values mean the
/// pattern is phase-reversed.
inline double effective_diffraction_length(double z_o1, double z_o2, const PathLedger& reference,
                                           double tolerance = kDefaultCoherenceTolerance) {
  if (z_o2 == 0.0) throw DegenerateGeometry("object at the detector plane (z_o2 == 0)");
  check_equal_path(z_o1 + z_o2, reference.optical_path, tolerance);
  const double defocus = z_o1 - reference.diffraction_length;
  if (defocus == 0.0) return 0.0;
  const double curvature = 1.0 / z_o2 + 1.0 / defocus;
  if (curvature == 0.0)
    throw DegenerateGeometry("arm curvatures cancel; Z_eff is unbounded");
  const double z_eff = 1.0 / curvature;

#ifndef NDEBUG
  // Second route, only meaningful when the paths are equal to rounding.
  const double img = reference.optical_path - reference.diffraction_length;
  if (img != 0.0 && std::abs(z_o1 + z_o2 - reference.optical_path) <= 1e-14 * reference.optical_path) {
    const double other = effective_diffraction_length_equal_path(z_o2, img);
    const double cond = 1.0 + std::abs(z_o2 / defocus);
    assert(std::abs(other - z_eff) <= 1e-12 * cond * std::abs(z_eff) + 1e-18);
  }
#endif
  return z_eff;
}

} // namespace prdsim
