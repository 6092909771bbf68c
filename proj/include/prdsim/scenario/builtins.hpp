#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "prdsim/cascade/ledger.hpp"
#include "prdsim/scenario/config.hpp"

namespace prdsim::scenario {

namespace detail {

// Sodium D line; 18.3 cm of air then a 15.5 cm glass rod.
inline constexpr double kSodium = 589.3e-9;
inline const std::vector<SegmentSpec> kGlassRodArm{{0.183, 1.0}, {0.155, 1.5163}};

inline PathLedger glass_rod_ledger() {
  std::vector<MediumSegment> segs;
  for (const SegmentSpec& s : kGlassRodArm) segs.push_back(MediumSegment{s.length, s.index});
  return ledger(segs);
}

// Two blocky glyphs, 23 x 11 cells.
inline std::vector<int> glyph_pixels() {
  static const char* rows[] = {
      ".....#.....:###########",
      ".....#.....:#.........#",
      "###########:#.#######.#",
      "#....#....#:#.....#...#",
      "#....#....#:#.....#...#",
      "#....#....#:#.#######.#",
      "###########:#.....#.#.#",
      ".....#.....:#.....#...#",
      ".....#.....:#.#######.#",
      ".....#.....:#.........#",
      ".....#.....:###########",
  };
  std::vector<int> px;
  for (const char* r : rows)
    for (const char* c = r; *c; ++c) px.push_back(*c == '#' ? 255 : 0);
  return px;
}

inline ScenarioConfig base_config(std::string name, Mode mode, double z_o1) {
  const PathLedger l = glass_rod_ledger();
  ScenarioConfig c;
  c.name = std::move(name);
  c.mode = mode;
  c.wavelength = kSodium;
  c.z_o1 = z_o1;
  c.z_o2 = l.optical_path - z_o1; // equal optical paths
  c.reference_segments = kGlassRodArm;
  c.object.kind = "double_slit";
  c.object.slit_width = 125e-6;
  c.object.spacing = 300e-6;
  c.grid = {0.5e-3, 1024};
  c.outputs = {{OutputKind::correlation_csv, c.name + "_correlation.csv"},
               {OutputKind::ports_csv, c.name + "_ports.csv"},
               {OutputKind::image_pgm, c.name + ".pgm"}};
  return c;
}

} // namespace detail

/// Reproductions of the glass-rod experiment. The imaging-position runs put
/// the object at z_o1 = Zbar exactly; the defocus series uses the listed
/// object distances as given.
inline std::vector<ScenarioConfig> builtin_scenarios() {
  using detail::base_config;
  const double zbar = detail::glass_rod_ledger().diffraction_length;
  std::vector<ScenarioConfig> out;

  ScenarioConfig amp = base_config("fig2_amplitude", Mode::analytic, zbar);
  amp.object = ObjectSpec{};
  amp.object.kind = "raster";
  amp.object.pitch = 60e-6;
  amp.object.width = 23;
  amp.object.height = 11;
  amp.object.pixels = detail::glyph_pixels();
  amp.grid = {1e-3, 2048};
  // In 2D the imaging prefactor k0 / (i 2 pi z_o2) is purely imaginary, so a
  // real mask gives no port difference at exactly equal paths. A quarter-wave
  // arm offset (well inside the coherence tolerance) turns it into the image.
  amp.z_o2 += detail::kSodium / 4.0;
  out.push_back(amp);

  ScenarioConfig phase = base_config("fig2_phase", Mode::analytic, zbar);
  phase.object = ObjectSpec{};
  phase.object.kind = "phase_holes";
  phase.object.hole_width = 100e-6;
  phase.object.separation = 300e-6;
  phase.object.phase = std::numbers::pi;
  out.push_back(phase);

  ScenarioConfig inc = base_config("fig3_incoherent", Mode::ensemble, zbar);
  inc.ensemble = EnsembleSpec{2000, 20240101, 1024, 0};
  out.push_back(inc);

  ScenarioConfig coh = base_config("fig3_coherent", Mode::coherent, zbar);
  coh.source.kind = "pinhole";
  coh.source.pinhole_width = 300e-6;
  coh.grid = {2e-3, 4096};
  out.push_back(coh);

  const char* names[] = {"fig4a", "fig4b", "fig4c", "fig4d", "fig4e"};
  const double z_o1[] = {0.310, zbar, 0.242, 0.200, 0.106};
  for (int i = 0; i < 5; ++i) {
    ScenarioConfig f = base_config(names[i], Mode::analytic, z_o1[i]);
    f.grid = {3e-3, 6144};
    out.push_back(f);
  }
  return out;
}

inline std::optional<ScenarioConfig> find_builtin(const std::string& name) {
  for (ScenarioConfig& c : builtin_scenarios())
    if (c.name == name) return c;
  return std::nullopt;
}

} // namespace prdsim::scenario
