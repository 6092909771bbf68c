#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

#include "prdsim/errors.hpp"

namespace prdsim {

/// ||a - b|| / ||b||.
template <class T>
double relative_l2(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) throw InvalidArgument("relative_l2: size mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    num += std::norm(a[j] - b[j]);
    den += std::norm(b[j]);
  }
  return std::sqrt(num / den);
}

/// Zero-lag Pearson correlation of two real profiles.
inline double normalized_cross_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw InvalidArgument("normalized_cross_correlation: size mismatch");
  const double n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    ma += a[j];
    mb += b[j];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double da = a[j] - ma;
    const double db = b[j] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

} // namespace prdsim
