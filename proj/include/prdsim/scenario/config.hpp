#pragma once

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "prdsim/errors.hpp"
#include "prdsim/field/pgm.hpp"
#include "prdsim/field/transmittance.hpp"
#include "prdsim/interferometer/spec.hpp"

namespace prdsim::scenario {

using Json = nlohmann::ordered_json;

/// Malformed JSON; line and column are 1-based.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed JSON that does not describe a valid scenario. `field()` is a
/// dotted path such as "object.slit_width" or "outputs[1].path".
class ValidationError : public std::invalid_argument {
public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

enum class Mode { analytic, ensemble, coherent };
enum class OutputKind { correlation_csv, ports_csv, image_pgm };

struct SegmentSpec {
  double length = 0.0;
  double index = 1.0;
};

/// Transmittance descriptor. Which fields matter depends on `kind`:
/// double_slit, phase_holes, raster (PGM file or inline pixels), uniform.
struct ObjectSpec {
  std::string kind;
  double slit_width = 0.0;
  double spacing = 0.0;
  double hole_width = 0.0;
  double separation = 0.0;
  double phase = 0.0;
  double pitch = 0.0;
  std::string pgm_path;
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<int> pixels;
  double re = 1.0;
  double im = 0.0;
};

struct GridSpec {
  double half_width = 0.0;
  std::int64_t n_samples = 0;
};

struct SourceSpec {
  double intensity = 1.0;
  double width = 10e-3;
  std::string kind = "plane_wave"; // coherent mode: plane_wave | pinhole
  double pinhole_width = 0.0;
};

struct EnsembleSpec {
  std::int64_t n_realizations = 0;
  std::uint64_t seed = 0;
  std::int64_t source_samples = 1024;
  std::int64_t workers = 0;
};

struct OutputSpec {
  OutputKind kind = OutputKind::correlation_csv;
  std::string path;
};

struct ScenarioConfig {
  std::string name;
  Mode mode = Mode::analytic;
  double wavelength = 0.0;
  double z_o1 = 0.0;
  double z_o2 = 0.0;
  std::vector<SegmentSpec> reference_segments;
  ObjectSpec object;
  GridSpec grid;
  SourceSpec source;
  std::optional<EnsembleSpec> ensemble;
  double coherence_tolerance = kDefaultCoherenceTolerance;
  std::vector<OutputSpec> outputs;
};

inline const char* to_string(Mode m) {
  switch (m) {
  case Mode::analytic: return "analytic";
  case Mode::ensemble: return "ensemble";
  case Mode::coherent: return "coherent";
  }
  return "?";
}

inline const char* to_string(OutputKind k) {
  switch (k) {
  case OutputKind::correlation_csv: return "correlation_csv";
  case OutputKind::ports_csv: return "ports_csv";
  case OutputKind::image_pgm: return "image_pgm";
  }
  return "?";
}

namespace detail {

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline void reject_unknown(const Json& obj, const std::string& path, std::initializer_list<const char*> known) {
  std::set<std::string> allowed(known.begin(), known.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw ValidationError(join(path, it.key()), "unknown field");
}

inline const Json& require(const Json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) throw ValidationError(join(path, key), "missing required field");
  return obj.at(key);
}

inline const Json& require_object(const Json& obj, const std::string& path, const char* key) {
  const Json& v = require(obj, path, key);
  if (!v.is_object()) throw ValidationError(join(path, key), "expected an object");
  return v;
}

inline double number(const Json& v, const std::string& path) {
  if (!v.is_number()) throw ValidationError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(path, "must be finite");
  return d;
}

inline double positive(const Json& v, const std::string& path) {
  const double d = number(v, path);
  if (!(d > 0.0)) throw ValidationError(path, "must be positive");
  return d;
}

inline std::int64_t integer(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ValidationError(path, "expected an integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
    throw ValidationError(path, "out of range");
  return v.get<std::int64_t>();
}

inline std::string text(const Json& v, const std::string& path) {
  if (!v.is_string()) throw ValidationError(path, "expected a string");
  return v.get<std::string>();
}

inline double optional_number(const Json& obj, const std::string& path, const char* key, double fallback) {
  return obj.contains(key) ? number(obj.at(key), join(path, key)) : fallback;
}

inline ObjectSpec parse_object(const Json& o, const std::string& path) {
  ObjectSpec s;
  s.kind = text(require(o, path, "kind"), join(path, "kind"));
  if (s.kind == "double_slit") {
    reject_unknown(o, path, {"kind", "slit_width", "spacing"});
    s.slit_width = positive(require(o, path, "slit_width"), join(path, "slit_width"));
    s.spacing = positive(require(o, path, "spacing"), join(path, "spacing"));
    if (s.slit_width >= s.spacing) throw ValidationError(join(path, "slit_width"), "slits overlap (slit_width >= spacing)");
  } else if (s.kind == "phase_holes") {
    reject_unknown(o, path, {"kind", "hole_width", "separation", "phase"});
    s.hole_width = positive(require(o, path, "hole_width"), join(path, "hole_width"));
    s.separation = positive(require(o, path, "separation"), join(path, "separation"));
    s.phase = number(require(o, path, "phase"), join(path, "phase"));
    if (s.hole_width >= s.separation) throw ValidationError(join(path, "hole_width"), "holes overlap (hole_width >= separation)");
  } else if (s.kind == "raster") {
    reject_unknown(o, path, {"kind", "pitch", "pgm_path", "width", "height", "pixels"});
    s.pitch = positive(require(o, path, "pitch"), join(path, "pitch"));
    if (o.contains("pgm_path")) {
      s.pgm_path = text(o.at("pgm_path"), join(path, "pgm_path"));
      if (s.pgm_path.empty()) throw ValidationError(join(path, "pgm_path"), "must not be empty");
      if (o.contains("pixels")) throw ValidationError(join(path, "pixels"), "give either pgm_path or pixels, not both");
    } else {
      const std::int64_t w = integer(require(o, path, "width"), join(path, "width"));
      const std::int64_t h = integer(require(o, path, "height"), join(path, "height"));
      if (w < 1) throw ValidationError(join(path, "width"), "must be >= 1");
      if (h < 1) throw ValidationError(join(path, "height"), "must be >= 1");
      s.width = static_cast<std::size_t>(w);
      s.height = static_cast<std::size_t>(h);
      const Json& px = require(o, path, "pixels");
      if (!px.is_array()) throw ValidationError(join(path, "pixels"), "expected an array");
      if (px.size() != s.width * s.height)
        throw ValidationError(join(path, "pixels"), "expected width * height entries");
      for (std::size_t i = 0; i < px.size(); ++i) {
        const std::string p = join(path, "pixels") + "[" + std::to_string(i) + "]";
        const std::int64_t v = integer(px[i], p);
        if (v < 0 || v > 255) throw ValidationError(p, "pixel must be in 0..255");
        s.pixels.push_back(static_cast<int>(v));
      }
    }
  } else if (s.kind == "uniform") {
    reject_unknown(o, path, {"kind", "re", "im"});
    s.re = number(require(o, path, "re"), join(path, "re"));
    s.im = optional_number(o, path, "im", 0.0);
    if (std::hypot(s.re, s.im) > 1.0 + 1e-12) throw ValidationError(join(path, "re"), "|T| must not exceed 1");
  } else {
    throw ValidationError(join(path, "kind"), "unknown object kind '" + s.kind + "'");
  }
  return s;
}

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

} // namespace detail

/// Structural parse of a scenario document. Geometry-level checks that need
/// the optics (equal paths, resolution) happen in build_spec().
inline ScenarioConfig parse_config(const Json& j) {
  using namespace detail;
  if (!j.is_object()) throw ValidationError("$", "scenario must be a JSON object");
  reject_unknown(j, "", {"name", "mode", "wavelength", "z_o1", "z_o2", "reference_segments", "object", "grid",
                         "source", "ensemble", "coherence_tolerance", "outputs"});
  ScenarioConfig c;
  c.name = text(require(j, "", "name"), "name");
  if (c.name.empty()) throw ValidationError("name", "must not be empty");

  const std::string mode = text(require(j, "", "mode"), "mode");
  if (mode == "analytic") c.mode = Mode::analytic;
  else if (mode == "ensemble") c.mode = Mode::ensemble;
  else if (mode == "coherent") c.mode = Mode::coherent;
  else throw ValidationError("mode", "expected analytic, ensemble or coherent");

  c.wavelength = positive(require(j, "", "wavelength"), "wavelength");
  c.z_o1 = positive(require(j, "", "z_o1"), "z_o1");
  c.z_o2 = positive(require(j, "", "z_o2"), "z_o2");

  const Json& segs = require(j, "", "reference_segments");
  if (!segs.is_array() || segs.empty()) throw ValidationError("reference_segments", "expected a non-empty array");
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string p = "reference_segments[" + std::to_string(i) + "]";
    if (!segs[i].is_object()) throw ValidationError(p, "expected an object");
    reject_unknown(segs[i], p, {"length", "index"});
    SegmentSpec s;
    s.length = positive(require(segs[i], p, "length"), p + ".length");
    s.index = number(require(segs[i], p, "index"), p + ".index");
    if (s.index == 0.0) throw ValidationError(p + ".index", "must be nonzero");
    c.reference_segments.push_back(s);
  }

  c.object = parse_object(require_object(j, "", "object"), "object");

  const Json& g = require_object(j, "", "grid");
  reject_unknown(g, "grid", {"half_width", "n_samples"});
  c.grid.half_width = positive(require(g, "grid", "half_width"), "grid.half_width");
  c.grid.n_samples = integer(require(g, "grid", "n_samples"), "grid.n_samples");
  if (c.grid.n_samples < 2) throw ValidationError("grid.n_samples", "must be >= 2");

  if (j.contains("source")) {
    const Json& s = j.at("source");
    if (!s.is_object()) throw ValidationError("source", "expected an object");
    reject_unknown(s, "source", {"intensity", "width", "kind", "pinhole_width"});
    if (s.contains("intensity")) c.source.intensity = positive(s.at("intensity"), "source.intensity");
    if (s.contains("width")) c.source.width = positive(s.at("width"), "source.width");
    if (s.contains("kind")) c.source.kind = text(s.at("kind"), "source.kind");
    if (c.source.kind != "plane_wave" && c.source.kind != "pinhole")
      throw ValidationError("source.kind", "expected plane_wave or pinhole");
    if (s.contains("pinhole_width")) c.source.pinhole_width = positive(s.at("pinhole_width"), "source.pinhole_width");
    if (c.source.kind == "pinhole" && c.source.pinhole_width == 0.0)
      throw ValidationError("source.pinhole_width", "required for a pinhole source");
  }
  if (c.mode != Mode::coherent && c.source.kind != "plane_wave")
    throw ValidationError("source.kind", "only coherent mode takes a source kind");

  if (j.contains("ensemble")) {
    const Json& e = j.at("ensemble");
    if (!e.is_object()) throw ValidationError("ensemble", "expected an object");
    reject_unknown(e, "ensemble", {"n_realizations", "seed", "source_samples", "workers"});
    EnsembleSpec es;
    es.n_realizations = integer(require(e, "ensemble", "n_realizations"), "ensemble.n_realizations");
    if (es.n_realizations < 1) throw ValidationError("ensemble.n_realizations", "must be >= 1");
    const Json& seed = require(e, "ensemble", "seed");
    if (!seed.is_number_integer() || (seed.is_number_integer() && !seed.is_number_unsigned() && seed.get<std::int64_t>() < 0))
      throw ValidationError("ensemble.seed", "expected a non-negative integer");
    es.seed = seed.get<std::uint64_t>();
    if (e.contains("source_samples")) {
      es.source_samples = integer(e.at("source_samples"), "ensemble.source_samples");
      if (es.source_samples < 2) throw ValidationError("ensemble.source_samples", "must be >= 2");
    }
    if (e.contains("workers")) {
      es.workers = integer(e.at("workers"), "ensemble.workers");
      if (es.workers < 0) throw ValidationError("ensemble.workers", "must be >= 0");
    }
    c.ensemble = es;
  }
  if (c.mode == Mode::ensemble && !c.ensemble) throw ValidationError("ensemble", "required in ensemble mode");

  if (j.contains("coherence_tolerance")) {
    c.coherence_tolerance = number(j.at("coherence_tolerance"), "coherence_tolerance");
    if (c.coherence_tolerance < 0.0) throw ValidationError("coherence_tolerance", "must be >= 0");
  }

  const Json& outs = require(j, "", "outputs");
  if (!outs.is_array()) throw ValidationError("outputs", "expected an array");
  for (std::size_t i = 0; i < outs.size(); ++i) {
    const std::string p = "outputs[" + std::to_string(i) + "]";
    if (!outs[i].is_object()) throw ValidationError(p, "expected an object");
    reject_unknown(outs[i], p, {"kind", "path"});
    OutputSpec o;
    const std::string kind = text(require(outs[i], p, "kind"), p + ".kind");
    if (kind == "correlation_csv") o.kind = OutputKind::correlation_csv;
    else if (kind == "ports_csv") o.kind = OutputKind::ports_csv;
    else if (kind == "image_pgm") o.kind = OutputKind::image_pgm;
    else throw ValidationError(p + ".kind", "expected correlation_csv, ports_csv or image_pgm");
    o.path = text(require(outs[i], p, "path"), p + ".path");
    if (o.path.empty()) throw ValidationError(p + ".path", "must not be empty");
    c.outputs.push_back(std::move(o));
  }
  return c;
}

/// Parses JSON text; syntax errors carry the line and column.
inline ScenarioConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(e.what(), line, column);
  }
  return parse_config(j);
}

inline ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

inline Json to_json(const ScenarioConfig& c) {
  Json j;
  j["name"] = c.name;
  j["mode"] = to_string(c.mode);
  j["wavelength"] = c.wavelength;
  j["z_o1"] = c.z_o1;
  j["z_o2"] = c.z_o2;
  j["reference_segments"] = Json::array();
  for (const SegmentSpec& s : c.reference_segments) j["reference_segments"].push_back({{"length", s.length}, {"index", s.index}});
  Json o;
  o["kind"] = c.object.kind;
  if (c.object.kind == "double_slit") {
    o["slit_width"] = c.object.slit_width;
    o["spacing"] = c.object.spacing;
  } else if (c.object.kind == "phase_holes") {
    o["hole_width"] = c.object.hole_width;
    o["separation"] = c.object.separation;
    o["phase"] = c.object.phase;
  } else if (c.object.kind == "raster") {
    o["pitch"] = c.object.pitch;
    if (!c.object.pgm_path.empty()) {
      o["pgm_path"] = c.object.pgm_path;
    } else {
      o["width"] = c.object.width;
      o["height"] = c.object.height;
      o["pixels"] = c.object.pixels;
    }
  } else if (c.object.kind == "uniform") {
    o["re"] = c.object.re;
    o["im"] = c.object.im;
  }
  j["object"] = o;
  j["grid"] = {{"half_width", c.grid.half_width}, {"n_samples", c.grid.n_samples}};
  Json s{{"intensity", c.source.intensity}, {"width", c.source.width}};
  if (c.mode == Mode::coherent) {
    s["kind"] = c.source.kind;
    if (c.source.kind == "pinhole") s["pinhole_width"] = c.source.pinhole_width;
  }
  j["source"] = s;
  if (c.ensemble) {
    j["ensemble"] = {{"n_realizations", c.ensemble->n_realizations},
                     {"seed", c.ensemble->seed},
                     {"source_samples", c.ensemble->source_samples},
                     {"workers", c.ensemble->workers}};
  }
  j["coherence_tolerance"] = c.coherence_tolerance;
  j["outputs"] = Json::array();
  for (const OutputSpec& out : c.outputs) j["outputs"].push_back({{"kind", to_string(out.kind)}, {"path", out.path}});
  return j;
}

inline Transmittance build_object(const ObjectSpec& o, const std::filesystem::path& base_dir) {
  if (o.kind == "double_slit") return double_slit(o.slit_width, o.spacing);
  if (o.kind == "phase_holes") return phase_holes(o.hole_width, o.separation, o.phase);
  if (o.kind == "uniform") return uniform_transmittance(Complex(o.re, o.im));
  if (o.kind == "raster") {
    if (!o.pgm_path.empty()) {
      std::filesystem::path p(o.pgm_path);
      if (p.is_relative()) p = base_dir / p;
      GrayImage img;
      try {
        img = read_pgm(p.string());
      } catch (const std::exception& e) {
        throw ValidationError("object.pgm_path", e.what());
      }
      return raster_to_transmittance(std::move(img), o.pitch);
    }
    GrayImage img{o.width, o.height, {}};
    for (int v : o.pixels) img.pixels.push_back(static_cast<std::uint8_t>(v));
    return raster_to_transmittance(std::move(img), o.pitch);
  }
  throw ValidationError("object.kind", "unknown object kind '" + o.kind + "'");
}

/// Library-level interferometer for a parsed scenario. Equal-path and
/// resolution problems are reported as ValidationError with a field path.
inline InterferometerSpec build_spec(const ScenarioConfig& c, const std::filesystem::path& base_dir) {
  std::vector<MediumSegment> ref;
  for (const SegmentSpec& s : c.reference_segments) ref.push_back(MediumSegment{s.length, s.index});
  InterferometerSpec spec{OpticsContext(c.wavelength), c.z_o1, c.z_o2, std::move(ref), build_object(c.object, base_dir),
                          c.source.intensity, c.source.width, c.coherence_tolerance};
  try {
    validate(spec);
  } catch (const UnequalPath& e) {
    throw ValidationError("z_o2", e.what());
  } catch (const DegenerateGeometry& e) {
    throw ValidationError("z_o1", e.what());
  } catch (const InvalidArgument& e) {
    throw ValidationError("reference_segments", e.what());
  }
  const double spacing = 2.0 * c.grid.half_width / static_cast<double>(c.grid.n_samples);
  const double feature = spec.object.smallest_feature();
  if (std::isfinite(feature) && spacing > feature / 4.0) {
    std::ostringstream os;
    os << "grid spacing " << spacing << " m does not resolve the object's smallest feature " << feature
       << " m (need spacing <= feature / 4)";
    throw ValidationError("grid.n_samples", os.str());
  }
  return spec;
}

} // namespace prdsim::scenario
