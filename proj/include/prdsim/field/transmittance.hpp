#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "prdsim/errors.hpp"
#include "prdsim/field/complex_field.hpp"
#include "prdsim/field/grid.hpp"
#include "prdsim/field/optics.hpp"
#include "prdsim/field/pgm.hpp"

namespace prdsim {

/// Two open slits of width `slit_width` centered at +-spacing/2.
struct DoubleSlit {
  double slit_width;
  double spacing;
};

/// Two holes centered at -separation/2 (transmits 1) and +separation/2
/// (transmits exp(i phase)).
struct PhaseHoles {
  double hole_width;
  double separation;
  double phase;
};

/// Amplitude mask from a grayscale raster centered on the optical axis.
/// Column c covers x in [-W/2 + c pitch, -W/2 + (c + 1) pitch) with W the
/// raster width in meters. Row 0 is the top edge (largest y), so the mask
/// reads upright when y points up.
struct RasterMask {
  GrayImage image;
  double pitch;
};

struct UniformMask {
  Complex value;
};

/// Complex object transmittance T(x) (or T(x, y) for rasters), |T| <= 1.
class Transmittance {
public:
  using Kind = std::variant<DoubleSlit, PhaseHoles, RasterMask, UniformMask>;

  explicit Transmittance(Kind kind) : kind_(std::move(kind)) {}

  const Kind& kind() const { return kind_; }

  /// T along the line y = 0.
  Complex operator()(double x) const {
    return std::visit([x](const auto& k) { return eval(k, x); }, kind_);
  }

  /// T at (x, y). Non-raster kinds are invariant along y.
  Complex operator()(double x, double y) const {
    if (const auto* r = std::get_if<RasterMask>(&kind_)) return eval_raster(*r, x, y);
    return (*this)(x);
  }

  /// Value of T outside its support.
  Complex background() const {
    if (const auto* u = std::get_if<UniformMask>(&kind_)) return u->value;
    return Complex{};
  }

  /// Interval along x outside which T equals background(); nullopt when the
  /// object has no boundary.
  std::optional<std::pair<double, double>> support() const {
    return std::visit(
        [](const auto& k) -> std::optional<std::pair<double, double>> { return extent(k); }, kind_);
  }

  /// Smallest length the grid has to resolve: slit, bar or pixel.
  double smallest_feature() const {
    return std::visit([](const auto& k) { return feature(k); }, kind_);
  }

  bool is_raster_2d() const {
    const auto* r = std::get_if<RasterMask>(&kind_);
    return r != nullptr && r->image.height > 1;
  }

  std::vector<Complex> sample(const Grid& grid) const {
    std::vector<Complex> out(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) out[j] = (*this)(grid.x(j));
    return out;
  }

  std::vector<Complex> sample_2d(const Grid& gx, const Grid& gy) const {
    std::vector<Complex> out(gx.size() * gy.size());
    for (std::size_t iy = 0; iy < gy.size(); ++iy)
      for (std::size_t ix = 0; ix < gx.size(); ++ix)
        out[iy * gx.size() + ix] = (*this)(gx.x(ix), gy.x(iy));
    return out;
  }

  /// E(x) T(x) on the field's grid.
  ComplexField apply(const ComplexField& field) const {
    std::vector<Complex> v(field.values().begin(), field.values().end());
    const Grid& g = field.grid();
    for (std::size_t j = 0; j < v.size(); ++j) v[j] *= (*this)(g.x(j));
    ComplexField out(g, std::move(v), field.role());
    out.add_warnings(field.warnings());
    return out;
  }

private:
  static bool inside(double x, double center, double width) {
    return std::abs(x - center) < 0.5 * width;
  }

  static Complex eval(const DoubleSlit& s, double x) {
    return (inside(x, 0.5 * s.spacing, s.slit_width) || inside(x, -0.5 * s.spacing, s.slit_width))
               ? Complex(1.0, 0.0)
               : Complex{};
  }
  static Complex eval(const PhaseHoles& h, double x) {
    if (inside(x, -0.5 * h.separation, h.hole_width)) return {1.0, 0.0};
    if (inside(x, 0.5 * h.separation, h.hole_width)) return std::polar(1.0, h.phase);
    return {};
  }
  static Complex eval(const RasterMask& r, double x) { return eval_raster(r, x, 0.0); }
  static Complex eval(const UniformMask& u, double) { return u.value; }

  static Complex eval_raster(const RasterMask& r, double x, double y) {
    const double w = static_cast<double>(r.image.width) * r.pitch;
    const double h = static_cast<double>(r.image.height) * r.pitch;
    const double u = (x + 0.5 * w) / r.pitch;
    const double v = (y + 0.5 * h) / r.pitch;
    if (u < 0.0 || v < 0.0) return {};
    const auto col = static_cast<std::size_t>(std::floor(u));
    const auto from_bottom = static_cast<std::size_t>(std::floor(v));
    if (col >= r.image.width || from_bottom >= r.image.height) return {};
    return {static_cast<double>(r.image.at(col, r.image.height - 1 - from_bottom)) / 255.0, 0.0};
  }

  static std::optional<std::pair<double, double>> extent(const DoubleSlit& s) {
    const double e = 0.5 * (s.spacing + s.slit_width);
    return std::pair{-e, e};
  }
  static std::optional<std::pair<double, double>> extent(const PhaseHoles& h) {
    const double e = 0.5 * (h.separation + h.hole_width);
    return std::pair{-e, e};
  }
  static std::optional<std::pair<double, double>> extent(const RasterMask& r) {
    const double e = 0.5 * static_cast<double>(r.image.width) * r.pitch;
    return std::pair{-e, e};
  }
  static std::optional<std::pair<double, double>> extent(const UniformMask&) {
    return std::nullopt;
  }

  static double feature(const DoubleSlit& s) { return std::min(s.slit_width, s.spacing - s.slit_width); }
  static double feature(const PhaseHoles& h) { return std::min(h.hole_width, h.separation - h.hole_width); }
  static double feature(const RasterMask& r) { return r.pitch; }
  static double feature(const UniformMask&) { return std::numeric_limits<double>::infinity(); }

  Kind kind_;
};

inline Transmittance double_slit(double slit_width, double spacing) {
  if (!(slit_width > 0.0) || !(spacing > 0.0) || !std::isfinite(slit_width) || !std::isfinite(spacing))
    throw InvalidArgument("slit width and spacing must be positive");
  if (slit_width >= spacing)
    throw OverlappingApertures("slit width must be smaller than the slit spacing");
  return Transmittance(DoubleSlit{slit_width, spacing});
}

inline Transmittance phase_holes(double hole_width, double separation, double phase) {
  if (!(hole_width > 0.0) || !(separation > 0.0) || !std::isfinite(phase))
    throw InvalidArgument("hole width and separation must be positive, phase finite");
  if (hole_width >= separation)
    throw OverlappingApertures("hole width must be smaller than the hole separation");
  return Transmittance(PhaseHoles{hole_width, separation, phase});
}

/// Amplitude = pixel / 255, zero phase, zero outside the raster.
inline Transmittance raster_to_transmittance(GrayImage image, double pitch) {
  if (image.width == 0 || image.height == 0 || image.pixels.empty())
    throw InvalidArgument("empty raster");
  if (image.pixels.size() != image.width * image.height)
    throw InvalidArgument("raster pixel count does not match its dimensions");
  if (!(pitch > 0.0) || !std::isfinite(pitch)) throw InvalidArgument("raster pitch must be positive");
  return Transmittance(RasterMask{std::move(image), pitch});
}

inline Transmittance uniform_transmittance(Complex value) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()) || std::abs(value) > 1.0 + 1e-12)
    throw InvalidArgument("uniform transmittance must satisfy |T| <= 1");
  return Transmittance(UniformMask{value});
}

} // namespace prdsim
