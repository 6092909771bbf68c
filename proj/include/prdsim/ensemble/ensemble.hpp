#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "prdsim/errors.hpp"
#include "prdsim/field/complex_field.hpp"
#include "prdsim/field/grid.hpp"
#include "prdsim/field/propagate.hpp"
#include "prdsim/interferometer/spec.hpp"

namespace prdsim {

/// Monte-Carlo estimate of the cross correlation from random source
/// realizations. The source grid must span exactly the source width.
struct EnsembleConfig {
  InterferometerSpec spec;
  Grid source_grid;
  Grid detector_grid;
  std::size_t n_realizations = 1000;
  std::uint64_t master_seed = 0;
  unsigned workers = 0; // 0: hardware concurrency
};

struct EnsembleEstimate {
  Grid grid;
  std::vector<Complex> correlation_mean;
  std::vector<double> intensity_o;
  std::vector<double> intensity_r;
  std::vector<double> intensity_r_second_moment; // <|E_r|^4>
  std::vector<double> standard_error;             // of correlation_mean
  std::size_t n_used = 0;
  std::vector<std::string> warnings;
};

/// Windows on the detector's sample lattice used to carry each realization
/// through both arms. Source samples are deposited on the nearest lattice
/// cell with weight source_spacing / detector_spacing.
struct EnsembleLayout {
  Grid source_window;
  Grid object_window;
  std::vector<std::size_t> source_slots;
  double deposit_weight = 1.0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t realization_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index));
}

// Lattice window covering [lo, hi] with cells at anchor + k dx.
inline Grid lattice_window(double anchor, double dx, double lo, double hi) {
  long long i0 = static_cast<long long>(std::floor((lo - anchor) / dx + 0.5));
  long long i1 = static_cast<long long>(std::floor((hi - anchor) / dx + 0.5));
  if (i1 <= i0) i1 = i0 + 1;
  const std::size_t n = static_cast<std::size_t>(i1 - i0 + 1);
  const double center = anchor + 0.5 * static_cast<double>(i0 + i1) * dx;
  return Grid(center, 0.5 * static_cast<double>(n) * dx, n);
}

struct BlockSums {
  std::vector<Complex> c;
  std::vector<double> c2;
  std::vector<double> io;
  std::vector<double> ir;
  std::vector<double> ir2;

  explicit BlockSums(std::size_t n) : c(n), c2(n), io(n), ir(n), ir2(n) {}
};

inline constexpr std::size_t kEnsembleBlock = 16;

} // namespace detail

/// One source realization: independent circular complex Gaussian samples
/// with <|e|^2> = I_s / dx_s, so that sum e_j e_k* dx_s^2 -> I_s delta dx_s.
inline ComplexField sample_source(const EnsembleConfig& config, std::size_t index) {
  if (index >= config.n_realizations) throw InvalidArgument("realization index out of range");
  std::mt19937_64 rng(detail::realization_seed(config.master_seed, index));
  const double sigma = std::sqrt(config.spec.source_intensity / (2.0 * config.source_grid.spacing()));
  std::normal_distribution<double> normal(0.0, sigma);
  std::vector<Complex> v(config.source_grid.size());
  for (Complex& e : v) {
    const double re = normal(rng);
    const double im = normal(rng);
    e = Complex(re, im);
  }
  return ComplexField(config.source_grid, std::move(v), FieldRole::source);
}

inline EnsembleLayout ensemble_layout(const EnsembleConfig& config) {
  const Grid& det = config.detector_grid;
  const Grid& src = config.source_grid;
  const double dx = det.spacing();
  const double anchor = det.x(0);
  // Absolute lattice cells, rounded once so slots and window agree.
  std::vector<long long> cells(src.size());
  for (std::size_t k = 0; k < src.size(); ++k)
    cells[k] = static_cast<long long>(std::floor((src.x(k) - anchor) / dx + 0.5));
  const long long first = cells.front();
  const long long last = std::max(cells.back(), first + 1);
  const std::size_t n = static_cast<std::size_t>(last - first + 1);
  EnsembleLayout layout{Grid(anchor + 0.5 * static_cast<double>(first + last) * dx,
                             0.5 * static_cast<double>(n) * dx, n),
                        det, {}, src.spacing() / dx};
  layout.source_slots.resize(src.size());
  for (std::size_t k = 0; k < src.size(); ++k) layout.source_slots[k] = static_cast<std::size_t>(cells[k] - first);

  double lo = std::min(src.lower(), det.lower());
  double hi = std::max(src.upper(), det.upper());
  if (const auto sup = config.spec.object.support()) {
    lo = sup->first;
    hi = sup->second;
  }
  layout.object_window = detail::lattice_window(anchor, dx, lo - dx, hi + dx);
  return layout;
}

/// Source grid with every sample moved to the lattice cell it is deposited
/// on; the estimator's expectation is the finite-source correlation for
/// this grid.
inline Grid deposited_source_grid(const EnsembleConfig& config) {
  const EnsembleLayout layout = ensemble_layout(config);
  const Grid& src = config.source_grid;
  const double shift = layout.source_window.x(layout.source_slots.front()) - src.x(0);
  return Grid(src.center() + shift, src.half_width(), src.size());
}

inline EnsembleEstimate run_ensemble(const EnsembleConfig& config) {
  const InterferometerSpec& spec = config.spec;
  SpecSummary summary = validate(spec);
  if (config.n_realizations == 0) throw InvalidArgument("n_realizations must be >= 1");
  if (std::abs(config.source_grid.width() - spec.source_width) > 1e-9 * spec.source_width)
    throw InvalidArgument("source grid must span the source width");
  if (summary.reference.diffraction_length == 0.0)
    throw DegenerateGeometry("reference arm with zero diffraction length");

  const OpticsContext& ctx = spec.optics;
  const EnsembleLayout layout = ensemble_layout(config);
  const Grid& det = config.detector_grid;
  const WindowPropagator ref(ctx, layout.source_window, det, summary.reference.optical_path,
                             summary.reference.diffraction_length);
  const WindowPropagator hop1(ctx, layout.source_window, layout.object_window, spec.z_o1, spec.z_o1);
  const WindowPropagator hop2(ctx, layout.object_window, det, spec.z_o2, spec.z_o2);
  const std::vector<Complex> t = spec.object.sample(layout.object_window);

  EnsembleEstimate est{det, {}, {}, {}, {}, {}, config.n_realizations, std::move(summary.warnings)};
  for (const WindowPropagator* p : {&ref, &hop1, &hop2})
    est.warnings.insert(est.warnings.end(), p->warnings().begin(), p->warnings().end());

  const std::size_t n_det = det.size();
  const std::size_t n_blocks = (config.n_realizations + detail::kEnsembleBlock - 1) / detail::kEnsembleBlock;
  unsigned n_workers = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  n_workers = static_cast<unsigned>(std::min<std::size_t>(n_workers, n_blocks));
  // Blocks are processed in waves and folded into the total in block order,
  // so the result does not depend on scheduling or worker count.
  const std::size_t wave = 4 * static_cast<std::size_t>(n_workers);
  std::vector<detail::BlockSums> blocks(std::min(wave, n_blocks), detail::BlockSums(n_det));
  detail::BlockSums total(n_det);

  auto worker = [&](std::size_t wave_begin, std::size_t wave_end, std::atomic<std::size_t>& next) {
    std::vector<Complex> src(layout.source_window.size());
    std::vector<Complex> er(n_det);
    std::vector<Complex> obj(layout.object_window.size());
    std::vector<Complex> eo(n_det);
    std::vector<Complex> scratch;
    for (std::size_t b = wave_begin + next++; b < wave_end; b = wave_begin + next++) {
      detail::BlockSums& sums = blocks[b - wave_begin];
      const std::size_t end = std::min(config.n_realizations, (b + 1) * detail::kEnsembleBlock);
      for (std::size_t r = b * detail::kEnsembleBlock; r < end; ++r) {
        const ComplexField e = sample_source(config, r);
        std::fill(src.begin(), src.end(), Complex{});
        for (std::size_t k = 0; k < e.size(); ++k) src[layout.source_slots[k]] += e[k] * layout.deposit_weight;
        ref.apply(src, er, scratch);
        hop1.apply(src, obj, scratch);
        for (std::size_t m = 0; m < obj.size(); ++m) obj[m] *= t[m];
        hop2.apply(obj, eo, scratch);
        for (std::size_t j = 0; j < n_det; ++j) {
          const Complex c = std::conj(er[j]) * eo[j];
          const double ir = std::norm(er[j]);
          sums.c[j] += c;
          sums.c2[j] += std::norm(c);
          sums.io[j] += std::norm(eo[j]);
          sums.ir[j] += ir;
          sums.ir2[j] += ir * ir;
        }
      }
    }
  };

  for (std::size_t wave_begin = 0; wave_begin < n_blocks; wave_begin += wave) {
    const std::size_t wave_end = std::min(n_blocks, wave_begin + wave);
    for (detail::BlockSums& b : blocks) b = detail::BlockSums(n_det);
    std::atomic<std::size_t> next{0};
    if (n_workers <= 1) {
      worker(wave_begin, wave_end, next);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker, wave_begin, wave_end, std::ref(next));
      for (std::thread& th : pool) th.join();
    }
    for (std::size_t i = 0; i < wave_end - wave_begin; ++i) {
      const detail::BlockSums& b = blocks[i];
      for (std::size_t j = 0; j < n_det; ++j) {
        total.c[j] += b.c[j];
        total.c2[j] += b.c2[j];
        total.io[j] += b.io[j];
        total.ir[j] += b.ir[j];
        total.ir2[j] += b.ir2[j];
      }
    }
  }

  const double n = static_cast<double>(config.n_realizations);
  est.correlation_mean.resize(n_det);
  est.intensity_o.resize(n_det);
  est.intensity_r.resize(n_det);
  est.intensity_r_second_moment.resize(n_det);
  est.standard_error.resize(n_det);
  bool significant = false;
  for (std::size_t j = 0; j < n_det; ++j) {
    const Complex m = total.c[j] / n;
    est.correlation_mean[j] = m;
    est.intensity_o[j] = total.io[j] / n;
    est.intensity_r[j] = total.ir[j] / n;
    est.intensity_r_second_moment[j] = total.ir2[j] / n;
    if (config.n_realizations > 1) {
      const double var = std::max(0.0, (total.c2[j] - n * std::norm(m)) / (n - 1.0));
      est.standard_error[j] = std::sqrt(var / n);
    }
    if (std::abs(m) > est.standard_error[j]) significant = true;
  }
  if (config.n_realizations == 1) est.warnings.push_back("a single realization gives no standard error");
  else if (!significant) est.warnings.push_back("ensemble mean is below its standard error everywhere; increase n_realizations");
  return est;
}

} // namespace prdsim
