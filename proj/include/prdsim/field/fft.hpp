#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace prdsim::detail {

/// In-place complex FFT plans of one length. Planning goes through a global
/// mutex (the FFTW planner is not reentrant); execution uses the new-array
/// interface and is safe to call concurrently on distinct buffers.
class FftPlan {
public:
  explicit FftPlan(std::size_t n) : n_(n) {
    std::vector<std::complex<double>> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, flags);
    backward_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, flags);
  }
  ~FftPlan() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::size_t size() const { return n_; }

  void forward(std::complex<double>* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(forward_, p, p);
  }

  /// Unnormalized inverse; callers divide by n.
  void backward(std::complex<double>* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(backward_, p, p);
  }

private:
  std::size_t n_;
  fftw_plan forward_;
  fftw_plan backward_;
};

inline std::mutex& fft_planner_mutex() {
  static std::mutex m;
  return m;
}

/// Cached plan for length n. Plans live for the rest of the process.
inline const FftPlan& fft_plan(std::size_t n) {
  static std::map<std::size_t, std::unique_ptr<FftPlan>> cache;
  std::lock_guard<std::mutex> lock(fft_planner_mutex());
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<FftPlan>(n)).first;
  return *it->second;
}

/// Smallest length >= n whose prime factors are all in {2, 3, 5, 7}.
inline std::size_t good_fft_size(std::size_t n) {
  if (n <= 1) return 1;
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2u, 3u, 5u, 7u})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

} // namespace prdsim::detail
