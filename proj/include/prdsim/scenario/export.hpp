#pragma once

#include <openssl/evp.h>

#include <algorithm>
#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "prdsim/errors.hpp"
#include "prdsim/field/grid.hpp"
#include "prdsim/field/optics.hpp"
#include "prdsim/field/pgm.hpp"
#include "prdsim/interferometer/ports.hpp"

namespace prdsim::scenario {

/// %.17g: enough digits to round-trip any double.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string correlation_csv(const Grid& grid, std::span<const Complex> values) {
  if (values.size() != grid.size()) throw InvalidArgument("correlation does not match its grid");
  std::string out = "x_m,re,im,abs2\n";
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double re = values[j].real();
    const double im = values[j].imag();
    out += format_number(grid.x(j)) + ',' + format_number(re) + ',' + format_number(im) + ',' +
           format_number(re * re + im * im) + '\n';
  }
  return out;
}

inline std::string ports_csv(const Grid& grid, const PortIntensities& ports) {
  if (ports.plus.size() != grid.size()) throw InvalidArgument("port intensities do not match their grid");
  const std::vector<double> diff = ports.difference();
  const std::vector<double> sum = ports.sum();
  std::string out = "x_m,i_plus,i_minus,diff,sum\n";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out += format_number(grid.x(j)) + ',' + format_number(ports.plus[j]) + ',' + format_number(ports.minus[j]) +
           ',' + format_number(diff[j]) + ',' + format_number(sum[j]) + '\n';
  }
  return out;
}

/// Min-max normalization to 0..255. A constant input maps to all zeros.
inline GrayImage normalized_image(std::span<const double> values, std::size_t width, std::size_t height) {
  if (values.empty() || values.size() != width * height) throw InvalidArgument("image size mismatch");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  GrayImage img{width, height, std::vector<std::uint8_t>(values.size(), 0)};
  if (range > 0.0) {
    for (std::size_t i = 0; i < values.size(); ++i)
      img.pixels[i] = static_cast<std::uint8_t>(std::lround(255.0 * (values[i] - *lo) / range));
  }
  return img;
}

inline void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw IoError("cannot write " + path.string() + ": " + std::strerror(errno));
  const std::size_t n = std::fwrite(bytes.data(), 1, bytes.size(), f);
  const int err = errno;
  if (std::fclose(f) != 0 || n != bytes.size())
    throw IoError("cannot write " + path.string() + ": " + std::strerror(err ? err : errno));
}

inline std::string sha256_hex(std::span<const unsigned char> data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw IoError("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

inline std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string() + ": " + std::strerror(errno));
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

} // namespace prdsim::scenario
