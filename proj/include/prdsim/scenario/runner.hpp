#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "prdsim/ensemble/ensemble.hpp"
#include "prdsim/interferometer/coherent.hpp"
#include "prdsim/interferometer/correlation.hpp"
#include "prdsim/interferometer/ports.hpp"
#include "prdsim/scenario/config.hpp"
#include "prdsim/scenario/export.hpp"

namespace prdsim::scenario {

struct LedgerEcho {
  double optical_path = 0.0;       // Z
  double diffraction_length = 0.0; // Zbar
  double effective_length = 0.0;   // Z_eff
  std::optional<double> imaging_detector_distance; // z_o2 at imaging
};

struct ManifestEntry {
  std::string path; // as declared in the config
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct OutputBundle {
  std::string name;
  LedgerEcho ledger;
  std::vector<ManifestEntry> files;
  std::filesystem::path manifest_path;
  std::vector<std::string> warnings;
};

/// Ledger quantities exactly as the cascade and interferometer modules
/// report them.
inline LedgerEcho resolve_ledger(const InterferometerSpec& spec) {
  const SpecSummary s = validate(spec);
  LedgerEcho e{s.reference.optical_path, s.reference.diffraction_length, s.effective_length, std::nullopt};
  if (s.imaging) e.imaging_detector_distance = s.imaging->detector_distance;
  return e;
}

inline std::string format_ledger(const LedgerEcho& e) {
  auto line = [](const char* label, double v) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-9s= %.17g m (%.4f cm)\n", label, v, 100.0 * v);
    return std::string(buf);
  };
  std::string out = line("Z", e.optical_path) + line("Zbar", e.diffraction_length) + line("Z_eff", e.effective_length);
  if (e.imaging_detector_distance) out += line("z_o2_img", *e.imaging_detector_distance);
  else out += "z_o2_img = none (Zbar exceeds Z)\n";
  return out;
}

namespace detail {

inline void append_unique(std::vector<std::string>& dst, const std::vector<std::string>& src) {
  for (const std::string& w : src)
    if (std::find(dst.begin(), dst.end(), w) == dst.end()) dst.push_back(w);
}

inline std::vector<double> twice_real(std::span<const Complex> c) {
  std::vector<double> v(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) v[j] = 2.0 * c[j].real();
  return v;
}

struct ModeResult {
  std::vector<Complex> correlation;
  std::vector<double> background; // empty until needed
  GrayImage image;
};

inline bool wants(const ScenarioConfig& c, OutputKind k) {
  return std::any_of(c.outputs.begin(), c.outputs.end(), [k](const OutputSpec& o) { return o.kind == k; });
}

inline ModeResult run_mode(const ScenarioConfig& c, const InterferometerSpec& spec, const Grid& grid,
                           std::vector<std::string>& warnings) {
  ModeResult r;
  switch (c.mode) {
  case Mode::analytic: {
    const CorrelationResult corr = correlation_analytic(spec, grid);
    append_unique(warnings, corr.warnings);
    r.correlation = corr.correlation;
    if (wants(c, OutputKind::ports_csv)) r.background = background_intensity(spec, grid);
    if (wants(c, OutputKind::image_pgm)) {
      if (spec.object.is_raster_2d()) {
        const CorrelationResult2D c2 = correlation_analytic_2d(spec, grid, grid);
        append_unique(warnings, c2.warnings);
        // PGM rows run top to bottom, i.e. from the largest y down.
        const std::size_t n = grid.size();
        std::vector<double> v(n * n);
        for (std::size_t row = 0; row < n; ++row)
          for (std::size_t ix = 0; ix < n; ++ix) v[row * n + ix] = 2.0 * c2.correlation[(n - 1 - row) * n + ix].real();
        r.image = normalized_image(v, n, n);
      } else {
        r.image = normalized_image(twice_real(r.correlation), grid.size(), 1);
      }
    }
    break;
  }
  case Mode::ensemble: {
    const EnsembleSpec& es = *c.ensemble;
    const EnsembleConfig ec{spec, Grid(0.0, 0.5 * spec.source_width, static_cast<std::size_t>(es.source_samples)), grid,
                            static_cast<std::size_t>(es.n_realizations), es.seed, static_cast<unsigned>(es.workers)};
    const EnsembleEstimate est = run_ensemble(ec);
    append_unique(warnings, est.warnings);
    r.correlation = est.correlation_mean;
    r.background.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) r.background[j] = est.intensity_o[j] + est.intensity_r[j];
    r.image = normalized_image(twice_real(r.correlation), grid.size(), 1);
    break;
  }
  case Mode::coherent: {
    CoherentIllumination illum;
    if (c.source.kind == "pinhole") {
      illum.kind = CoherentIllumination::Kind::pinhole;
      illum.pinhole_width = c.source.pinhole_width;
    }
    const CoherentResult res = run_coherent(spec, grid, illum);
    append_unique(warnings, res.warnings);
    r.correlation.resize(grid.size());
    r.background.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      r.correlation[j] = std::conj(res.reference_field[j]) * res.object_field[j];
      r.background[j] = std::norm(res.reference_field[j]) + std::norm(res.object_field[j]);
    }
    r.image = normalized_image(res.intensity, grid.size(), 1);
    break;
  }
  }
  return r;
}

inline std::string manifest_json(const OutputBundle& b) {
  Json j;
  j["scenario"] = b.name;
  j["ledger"] = {{"Z", b.ledger.optical_path},
                 {"Zbar", b.ledger.diffraction_length},
                 {"Z_eff", b.ledger.effective_length},
                 {"z_o2_img", b.ledger.imaging_detector_distance ? Json(*b.ledger.imaging_detector_distance) : Json()}};
  j["files"] = Json::array();
  for (const ManifestEntry& f : b.files) j["files"].push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  return j.dump(2) + "\n";
}

} // namespace detail

/// Runs a parsed scenario; relative output and raster paths resolve against
/// `base_dir`. Writes every declared output plus `<name>.manifest.json` next
/// to the first output.
inline OutputBundle run_scenario(const ScenarioConfig& config, const std::filesystem::path& base_dir) {
  namespace fs = std::filesystem;
  const InterferometerSpec spec = build_spec(config, base_dir);
  OutputBundle bundle;
  bundle.name = config.name;
  bundle.ledger = resolve_ledger(spec);
  detail::append_unique(bundle.warnings, validate(spec).warnings);

  const Grid grid(0.0, config.grid.half_width, static_cast<std::size_t>(config.grid.n_samples));
  const detail::ModeResult result = detail::run_mode(config, spec, grid, bundle.warnings);

  for (const OutputSpec& out : config.outputs) {
    fs::path path(out.path);
    if (path.is_relative()) path = base_dir / path;
    if (path.has_parent_path()) {
      std::error_code ec;
      fs::create_directories(path.parent_path(), ec);
    }
    std::string bytes;
    switch (out.kind) {
    case OutputKind::correlation_csv: bytes = correlation_csv(grid, result.correlation); break;
    case OutputKind::ports_csv:
      bytes = ports_csv(grid, detector_ports(std::span<const Complex>(result.correlation), result.background));
      break;
    case OutputKind::image_pgm: {
      const GrayImage& img = result.image;
      bytes = "P5\n" + std::to_string(img.width) + ' ' + std::to_string(img.height) + "\n255\n";
      bytes.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
      break;
    }
    }
    write_file(path, bytes);
    bundle.files.push_back(ManifestEntry{out.path, sha256_file(path), fs::file_size(path)});
  }
  if (!config.outputs.empty()) {
    fs::path first(config.outputs.front().path);
    if (first.is_relative()) first = base_dir / first;
    bundle.manifest_path = first.parent_path() / (config.name + ".manifest.json");
    write_file(bundle.manifest_path, detail::manifest_json(bundle));
  }
  return bundle;
}

inline OutputBundle run_scenario(const std::filesystem::path& config_path) {
  const ScenarioConfig config = load_config(config_path);
  return run_scenario(config, config_path.parent_path().empty() ? std::filesystem::path(".") : config_path.parent_path());
}

} // namespace prdsim::scenario
