#pragma once

#include <stdexcept>
#include <string>

namespace prdsim {

/// Bad input values: non-positive lengths, NaN samples, empty rasters.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Zero diffraction length handed to the Fresnel kernel. Callers should take
/// the delta-kernel path instead.
class DegenerateKernel : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Geometry with no finite answer: object at the detector, unbounded Z_eff.
class DegenerateGeometry : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class OverlappingApertures : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// The two interferometer arms differ in optical path by more than the
/// coherence tolerance.
class UnequalPath : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// The sampling grid cannot resolve the object.
class ResolutionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Port intensity would go negative: the flat-background approximation does
/// not hold for this configuration.
class NegativeIntensity : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace prdsim
