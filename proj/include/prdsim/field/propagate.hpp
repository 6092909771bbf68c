#pragma once

#include <algorithm>
#include <cstdlib>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "prdsim/errors.hpp"
#include "prdsim/field/complex_field.hpp"
#include "prdsim/field/fft.hpp"
#include "prdsim/field/grid.hpp"
#include "prdsim/field/kernel.hpp"
#include "prdsim/field/optics.hpp"

namespace prdsim {

/// direct: midpoint Riemann sum of the kernel integral, O(N^2).
/// fft: discrete-Fourier convolution, form picked by the sampling rule below.
/// automatic: direct for tiny grids, fft otherwise.
enum class Method { direct, fft, automatic };

/// transfer_function: multiply the spectrum by exp(i k0 Z - i pi lambda Zbar f^2)
///   (periodic, exactly unitary).
/// impulse_response: zero-padded linear convolution with the sampled chirp
///   (same discrete sum as the direct method).
enum class FftForm { automatic, transfer_function, impulse_response };

/// Which single-step form the grid supports for a diffraction length.
/// The transfer function is clean when dx^2 N >= lambda |Zbar|. The impulse
/// response is clean when the chirp over the largest sample offset stays
/// below Nyquist, 2 dx^2 N <= lambda |Zbar|. Between the two neither is clean.
struct SamplingRegime {
  double space_bandwidth = 0.0; // dx^2 N
  double lambda_z = 0.0;        // lambda |Zbar|
  FftForm preferred = FftForm::transfer_function;
  bool transfer_clean = false;
  bool impulse_clean = false;

  bool clean() const {
    return preferred == FftForm::transfer_function ? transfer_clean : impulse_clean;
  }
};

inline SamplingRegime sampling_regime(const OpticsContext& ctx, const Grid& grid,
                                      double diffraction_length) {
  SamplingRegime r;
  const double dx = grid.spacing();
  r.space_bandwidth = dx * dx * static_cast<double>(grid.size());
  r.lambda_z = ctx.wavelength() * std::abs(diffraction_length);
  r.transfer_clean = r.space_bandwidth >= r.lambda_z;
  r.impulse_clean = 2.0 * r.space_bandwidth <= r.lambda_z;
  r.preferred = r.transfer_clean ? FftForm::transfer_function : FftForm::impulse_response;
  return r;
}

namespace detail {

inline std::string format_sci(double v) {
  std::ostringstream os;
  os.precision(4);
  os << std::scientific << v;
  return os.str();
}

/// Spectrum of the sampled chirp H(m dx) dx laid out for a zero-padded
/// circular convolution between an input window of n_in samples and an
/// output window of n_out samples whose first sample sits `offset` cells to
/// the right of the input's first sample.
struct ChirpSpectrum {
  std::size_t n_in = 0;
  std::size_t n_out = 0;
  std::size_t fft_size = 0;
  std::vector<Complex> spectrum;
};

inline ChirpSpectrum make_chirp_spectrum(const OpticsContext& ctx, double dx, std::size_t n_in,
                                         std::size_t n_out, long long offset,
                                         double optical_path, double diffraction_length) {
  ChirpSpectrum c;
  c.n_in = n_in;
  c.n_out = n_out;
  c.fft_size = good_fft_size(n_in + n_out - 1);
  c.spectrum.assign(c.fft_size, Complex{});
  const Complex amp = fresnel_amplitude(ctx, diffraction_length) * dx;
  const long long lo = -static_cast<long long>(n_in) + 1;
  const long long hi = static_cast<long long>(n_out) - 1;
  const long long L = static_cast<long long>(c.fft_size);
  for (long long p = lo; p <= hi; ++p) {
    const double s = static_cast<double>(p + offset) * dx;
    const std::size_t slot = static_cast<std::size_t>(((p % L) + L) % L);
    c.spectrum[slot] = amp * std::polar(1.0, fresnel_phase(ctx, s, optical_path, diffraction_length));
  }
  const FftPlan& plan = fft_plan(c.fft_size);
  plan.forward(c.spectrum.data());
  const double inv = 1.0 / static_cast<double>(c.fft_size);
  for (Complex& v : c.spectrum) v *= inv;
  return c;
}

inline void apply_chirp_spectrum(const ChirpSpectrum& c, std::span<const Complex> in,
                                 std::span<Complex> out, std::vector<Complex>& scratch) {
  scratch.assign(c.fft_size, Complex{});
  std::copy(in.begin(), in.end(), scratch.begin());
  const FftPlan& plan = fft_plan(c.fft_size);
  plan.forward(scratch.data());
  for (std::size_t f = 0; f < c.fft_size; ++f) scratch[f] *= c.spectrum[f];
  plan.backward(scratch.data());
  std::copy(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(c.n_out), out.begin());
}

} // namespace detail

/// Single-hop paraxial propagation on one grid, precomputed for a fixed
/// (Z, Zbar). apply() is const and safe to call from several threads.
class FresnelPropagator {
public:
  enum class Kind { identity, direct, transfer_function, impulse_response };

  FresnelPropagator(const OpticsContext& ctx, const Grid& grid, double optical_path,
                    double diffraction_length, Method method = Method::automatic,
                    FftForm form = FftForm::automatic)
      : ctx_(ctx), grid_(grid), z_(optical_path), zbar_(diffraction_length) {
    if (!std::isfinite(optical_path) || !std::isfinite(diffraction_length))
      throw InvalidArgument("propagation lengths must be finite");
    if (diffraction_length == 0.0) {
      kind_ = Kind::identity;
      return;
    }
    if (method == Method::automatic) method = grid.size() <= 64 ? Method::direct : Method::fft;

    regime_ = sampling_regime(ctx, grid, diffraction_length);
    if (method == Method::direct) {
      kind_ = Kind::direct;
      if (!regime_.impulse_clean) warn_undersampled_chirp();
      return;
    }

    if (form == FftForm::automatic) form = regime_.preferred;
    if (form == FftForm::transfer_function) {
      kind_ = Kind::transfer_function;
      if (!regime_.transfer_clean) {
        warnings_.push_back("transfer-function propagation undersampled: dx^2 N = " +
                            detail::format_sci(regime_.space_bandwidth) + " m^2 < lambda |Zbar| = " +
                            detail::format_sci(regime_.lambda_z) +
                            " m^2; expect periodic wrap-around");
      }
      build_transfer();
    } else {
      kind_ = Kind::impulse_response;
      if (!regime_.impulse_clean) warn_undersampled_chirp();
      chirp_ = std::make_shared<detail::ChirpSpectrum>(detail::make_chirp_spectrum(
          ctx_, grid_.spacing(), grid_.size(), grid_.size(), 0, z_, zbar_));
    }
  }

  Kind kind() const { return kind_; }
  const SamplingRegime& regime() const { return regime_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const Grid& grid() const { return grid_; }

  void apply(std::span<const Complex> in, std::span<Complex> out,
             std::vector<Complex>& scratch) const {
    if (in.size() != grid_.size() || out.size() != grid_.size())
      throw InvalidArgument("sample count does not match the propagator grid");
    switch (kind_) {
    case Kind::identity: {
      const Complex phase = std::polar(1.0, ctx_.k0() * z_);
      for (std::size_t j = 0; j < in.size(); ++j) out[j] = in[j] * phase;
      break;
    }
    case Kind::direct: apply_direct(in, out); break;
    case Kind::transfer_function: {
      const std::size_t n = grid_.size();
      scratch.assign(in.begin(), in.end());
      const detail::FftPlan& plan = detail::fft_plan(n);
      plan.forward(scratch.data());
      for (std::size_t f = 0; f < n; ++f) scratch[f] *= transfer_[f];
      plan.backward(scratch.data());
      std::copy(scratch.begin(), scratch.end(), out.begin());
      break;
    }
    case Kind::impulse_response: detail::apply_chirp_spectrum(*chirp_, in, out, scratch); break;
    }
  }

  std::vector<Complex> apply(std::span<const Complex> in) const {
    std::vector<Complex> out(grid_.size());
    std::vector<Complex> scratch;
    apply(in, out, scratch);
    return out;
  }

private:
  void warn_undersampled_chirp() {
    warnings_.push_back("impulse-response chirp undersampled: 2 dx^2 N = " +
                        detail::format_sci(2.0 * regime_.space_bandwidth) +
                        " m^2 > lambda |Zbar| = " + detail::format_sci(regime_.lambda_z) +
                        " m^2; expect aliasing");
  }

  void build_transfer() {
    const std::size_t n = grid_.size();
    const double dx = grid_.spacing();
    transfer_.resize(n);
    const double inv = 1.0 / static_cast<double>(n);
    const double carrier = ctx_.k0() * z_;
    const double curvature = std::numbers::pi * ctx_.wavelength() * zbar_;
    for (std::size_t m = 0; m < n; ++m) {
      const long long k = m < (n + 1) / 2 ? static_cast<long long>(m)
                                          : static_cast<long long>(m) - static_cast<long long>(n);
      const double f = static_cast<double>(k) / (static_cast<double>(n) * dx);
      transfer_[m] = std::polar(inv, carrier - curvature * f * f);
    }
  }

  void apply_direct(std::span<const Complex> in, std::span<Complex> out) const {
    const std::size_t n = grid_.size();
    const double dx = grid_.spacing();
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = grid_.x(i);
      Complex acc{};
      for (std::size_t j = 0; j < n; ++j) {
        if (in[j] == Complex{}) continue;
        acc += fresnel_kernel(ctx_, xi, grid_.x(j), z_, zbar_) * in[j];
      }
      out[i] = acc * dx;
    }
  }

  OpticsContext ctx_;
  Grid grid_;
  double z_;
  double zbar_;
  Kind kind_ = Kind::identity;
  SamplingRegime regime_{};
  std::vector<Complex> transfer_;
  std::shared_ptr<const detail::ChirpSpectrum> chirp_;
  std::vector<std::string> warnings_;
};

/// Impulse-response propagation between two windows that share one sample
/// spacing and alignment (the output's first sample is an integer number of
/// cells away from the input's). Computes
///   out(x_i) = sum_j H(x_i - x_j; Z, Zbar) in(x_j) dx
/// without periodic wrap-around, for any window placement.
class WindowPropagator {
public:
  WindowPropagator(const OpticsContext& ctx, const Grid& input, const Grid& output,
                   double optical_path, double diffraction_length)
      : in_(input), out_(output) {
    const double dx = input.spacing();
    if (std::abs(output.spacing() - dx) > 1e-9 * dx)
      throw InvalidArgument("window propagation needs equal input and output spacing");
    const double shift = (output.x(0) - input.x(0)) / dx;
    const double rounded = std::round(shift);
    if (std::abs(shift - rounded) > 1e-6)
      throw InvalidArgument("window propagation needs grids aligned to a common lattice");
    offset_ = static_cast<long long>(rounded);
    if (diffraction_length == 0.0)
      throw DegenerateKernel("zero diffraction length: use the delta-kernel path");

    const long long reach = std::max(std::llabs(offset_ - static_cast<long long>(input.size()) + 1),
                                     std::llabs(offset_ + static_cast<long long>(output.size()) - 1));
    const double lambda_z = ctx.wavelength() * std::abs(diffraction_length);
    if (2.0 * dx * static_cast<double>(reach) * dx > lambda_z) {
      warnings_.push_back("impulse-response chirp undersampled over a " +
                          detail::format_sci(static_cast<double>(reach) * dx) +
                          " m window offset; expect aliasing");
    }
    chirp_ = detail::make_chirp_spectrum(ctx, dx, input.size(), output.size(), offset_,
                                         optical_path, diffraction_length);
  }

  const Grid& input_grid() const { return in_; }
  const Grid& output_grid() const { return out_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  long long offset() const { return offset_; }

  void apply(std::span<const Complex> in, std::span<Complex> out,
             std::vector<Complex>& scratch) const {
    if (in.size() != in_.size() || out.size() != out_.size())
      throw InvalidArgument("sample count does not match the propagator windows");
    detail::apply_chirp_spectrum(chirp_, in, out, scratch);
  }

private:
  Grid in_;
  Grid out_;
  long long offset_ = 0;
  detail::ChirpSpectrum chirp_;
  std::vector<std::string> warnings_;
};

/// E(x) = integral H(x, x'; Z, Zbar) E(x') dx' on the field's own grid.
/// Zbar == 0 is the delta kernel: the input times exp(i k0 Z).
inline ComplexField propagate(const OpticsContext& ctx, const ComplexField& field,
                              double optical_path, double diffraction_length,
                              Method method = Method::automatic,
                              FftForm form = FftForm::automatic) {
  FresnelPropagator prop(ctx, field.grid(), optical_path, diffraction_length, method, form);
  ComplexField out(field.grid(), prop.apply(field.values()), field.role());
  out.add_warnings(field.warnings());
  out.add_warnings(prop.warnings());
  return out;
}

/// Separable 2D propagation. The 2D kernel is the product of the two 1D
/// kernels except that the carrier exp(i k0 Z) appears once, so rows carry Z
/// and columns carry none.
inline Field2D propagate_2d(const OpticsContext& ctx, const Field2D& field, double optical_path,
                            double diffraction_length, Method method = Method::automatic) {
  const std::size_t nx = field.nx();
  const std::size_t ny = field.ny();
  std::vector<Complex> values(field.values().begin(), field.values().end());
  FresnelPropagator rows(ctx, field.grid_x(), optical_path, diffraction_length, method);
  FresnelPropagator cols(ctx, field.grid_y(), 0.0, diffraction_length, method);

  std::vector<Complex> line;
  std::vector<Complex> result;
  std::vector<Complex> scratch;
  result.resize(nx);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    std::span<Complex> row(values.data() + iy * nx, nx);
    rows.apply(row, result, scratch);
    std::copy(result.begin(), result.end(), row.begin());
  }
  line.resize(ny);
  result.resize(ny);
  for (std::size_t ix = 0; ix < nx; ++ix) {
    for (std::size_t iy = 0; iy < ny; ++iy) line[iy] = values[iy * nx + ix];
    cols.apply(line, result, scratch);
    for (std::size_t iy = 0; iy < ny; ++iy) values[iy * nx + ix] = result[iy];
  }
  Field2D out(field.grid_x(), field.grid_y(), std::move(values));
  out.add_warnings(field.warnings());
  out.add_warnings(rows.warnings());
  out.add_warnings(cols.warnings());
  return out;
}

} // namespace prdsim
