#pragma once

#include <cctype>
#include <cerrno>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "prdsim/errors.hpp"

namespace prdsim {

/// 8-bit grayscale raster, row-major, row 0 first.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(std::size_t col, std::size_t row) const { return pixels[row * width + col]; }
};

namespace detail {

inline void skip_pgm_space(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string comment;
      std::getline(in, comment);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

inline std::size_t read_pgm_number(std::istream& in) {
  skip_pgm_space(in);
  std::size_t v = 0;
  if (!(in >> v)) throw InvalidArgument("malformed PGM header");
  return v;
}

} // namespace detail

/// Binary PGM (P5) with maxval 255.
inline GrayImage read_pgm(std::istream& in) {
  char magic[2] = {};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5')
    throw InvalidArgument("not a binary PGM (expected P5 magic)");
  GrayImage img;
  img.width = detail::read_pgm_number(in);
  img.height = detail::read_pgm_number(in);
  const std::size_t maxval = detail::read_pgm_number(in);
  if (maxval != 255) throw InvalidArgument("only maxval 255 PGM files are supported");
  if (img.width == 0 || img.height == 0) throw InvalidArgument("empty PGM raster");
  in.get(); // single whitespace byte before the raster
  img.pixels.resize(img.width * img.height);
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (!in) throw InvalidArgument("PGM raster is truncated");
  return img;
}

inline GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + ": " + std::strerror(errno));
  return read_pgm(in);
}

inline void write_pgm(const std::string& path, const GrayImage& img) {
  if (img.pixels.size() != img.width * img.height) throw InvalidArgument("PGM size mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing: " + std::strerror(errno));
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw IoError("write failed for " + path + ": " + std::strerror(errno));
}

} // namespace prdsim
