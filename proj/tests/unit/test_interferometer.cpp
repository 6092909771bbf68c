#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "geometry.hpp"

using namespace prdsim;
using testgeo::kSodium;
using testgeo::double_slit_125_300;
using testgeo::real_part;
using testgeo::rod_ledger;
using testgeo::rod_setup;

namespace {

double zbar() { return rod_ledger().diffraction_length; }

Transmittance smooth_raster(double pitch, double sigma, double extent) {
  const int n = static_cast<int>(std::lround(extent / pitch)) + 1;
  GrayImage img{static_cast<std::size_t>(n), 1, {}};
  for (int c = 0; c < n; ++c) {
    const double x = (c - (n - 1) / 2.0) * pitch;
    img.pixels.push_back(static_cast<std::uint8_t>(std::lround(255 * std::exp(-x * x / (2 * sigma * sigma)))));
  }
  return raster_to_transmittance(img, pitch);
}

} // namespace

TEST(Spec, Validation) {
  auto bad = rod_setup(0.2, double_slit_125_300());
  bad.z_o2 = 0.1;
  EXPECT_THROW(validate(bad), UnequalPath);
  auto s = rod_setup(0.2, double_slit_125_300());
  s.source_width = 0.0;
  EXPECT_THROW(validate(s), InvalidArgument);
  const SpecSummary ok = validate(rod_setup(0.242, double_slit_125_300()));
  ASSERT_TRUE(ok.imaging);
  EXPECT_NEAR(ok.imaging->detector_distance, 0.1328, 1e-4);
  EXPECT_NEAR(ok.effective_length, -0.0573, 1e-4);
}

TEST(Correlation, ImagingReproducesTheObject) {
  const auto spec = rod_setup(zbar(), double_slit_125_300());
  const Grid g(0.0, 2e-3, 4096);
  const CorrelationResult c = correlation_analytic(spec, g);
  EXPECT_EQ(c.effective_length, 0.0);
  const auto t = real_part(spec.object.sample(g));
  EXPECT_GE(normalized_cross_correlation(real_part(c.pattern()), t), 0.99);
  EXPECT_GE(normalized_cross_correlation(real_part(c.correlation), t), 0.99);
}

TEST(Correlation, NearImagingStaysSharp) {
  // At 28.500 cm the object sits 0.22 mm short of Zbar; still clearly imaged.
  const auto spec = rod_setup(0.285, double_slit_125_300());
  const Grid g(0.0, 2e-3, 4096);
  const CorrelationResult c = correlation_analytic(spec, g);
  EXPECT_NEAR(c.effective_length, -2.2e-4, 0.1e-4);
  const auto t = real_part(spec.object.sample(g));
  EXPECT_GT(normalized_cross_correlation(testgeo::modulus(c.pattern()), t), 0.97);
}

TEST(Correlation, PrefactorAtImaging) {
  const auto spec = rod_setup(zbar(), double_slit_125_300());
  const CorrelationResult c = correlation_analytic(spec, Grid(0.0, 1e-3, 1024));
  const double z_o2 = spec.z_o2;
  const Complex want = std::sqrt(Complex(0.0, -kSodium.k0() / (kTwoPi * z_o2)));
  EXPECT_NEAR(std::abs(c.prefactor - want), 0.0, 1e-12 * std::abs(want));
  EXPECT_NEAR(std::arg(c.prefactor), -std::numbers::pi / 4, 1e-12);
}

TEST(Correlation, PrefactorAwayFromImaging) {
  // Product of the arm amplitudes collapses to one Fresnel amplitude over
  // z_o1 + z_o2 - Zbar.
  for (double z_o1 : {0.31, 0.242, 0.2, 0.106}) {
    const auto spec = rod_setup(z_o1, double_slit_125_300());
    const CorrelationResult c = correlation_analytic(spec, Grid(0.0, 1e-3, 1024));
    const Complex want = fresnel_amplitude(kSodium, spec.z_o1 + spec.z_o2 - zbar());
    EXPECT_NEAR(std::abs(c.prefactor - want), 0.0, 1e-9 * std::abs(want)) << z_o1;
  }
}

TEST(Correlation, PhaseReversedPatternIsConjugate) {
  const auto spec = rod_setup(0.242, double_slit_125_300());
  const Grid g(0.0, 1e-3, 1024);
  const CorrelationResult c = correlation_analytic(spec, g);
  ASSERT_LT(c.effective_length, 0.0);
  const ComplexField t(g, spec.object.sample(g));
  const ComplexField fwd = propagate(kSodium, t, 0.0, -c.effective_length);
  std::vector<Complex> want(fwd.values().begin(), fwd.values().end());
  for (Complex& v : want) v = std::conj(v);
  EXPECT_LT(relative_l2<Complex>(c.pattern(), want), 1e-6);
}

TEST(Correlation, PhaseHolesHaveOppositeSigns) {
  const auto spec = rod_setup(zbar(), phase_holes(100e-6, 300e-6, std::numbers::pi));
  const Grid g(0.0, 1e-3, 2048);
  const CorrelationResult c = correlation_analytic(spec, g);
  auto at = [&](double x) { return c.correlation[static_cast<std::size_t>((x - g.lower()) / g.spacing())]; };
  EXPECT_GT(at(-150e-6).real(), 0.0);
  EXPECT_LT(at(150e-6).real(), 0.0);
  EXPECT_NEAR(at(-150e-6).real(), -at(150e-6).real(), 1e-9 * std::abs(at(150e-6)));
}

TEST(Correlation, ResolutionGuard) {
  const auto spec = rod_setup(zbar(), double_slit_125_300());
  EXPECT_THROW(correlation_analytic(spec, Grid(0.0, 2e-3, 64)), ResolutionError);
  // Features below the source-aperture blur are flagged.
  const auto fine = rod_setup(zbar(), double_slit(10e-6, 30e-6));
  const CorrelationResult c = correlation_analytic(fine, Grid(0.0, 0.2e-3, 1024));
  EXPECT_TRUE(std::any_of(c.warnings.begin(), c.warnings.end(),
                          [](const std::string& w) { return w.find("point spread") != std::string::npos; }));
}

TEST(Correlation, BruteForceReducesToClosedFormForSmoothObjects) {
  const auto spec = rod_setup(zbar(), smooth_raster(5e-6, 300e-6, 1.2e-3));
  const Grid det(0.0, 0.6e-3, 1024);
  const CorrelationResult brute = correlation_bruteforce(spec, det, Grid(0.0, 5e-3, 1024), Grid(0.0, 0.6e-3, 600));
  const CorrelationResult closed = correlation_analytic(spec, det);
  EXPECT_LE(relative_l2<Complex>(brute.correlation, closed.correlation), 0.02);
}

TEST(Correlation, FiniteSourceBlursSharpSlits) {
  // A 10 mm source resolves ~lambda z_o1 / W = 17 um, so the 125 um slit
  // edges lose about a sixth of their L2 content relative to the ideal.
  const auto spec = rod_setup(zbar(), double_slit_125_300());
  const Grid det(0.0, 0.5e-3, 512);
  const CorrelationResult brute = correlation_bruteforce(spec, det, Grid(0.0, 5e-3, 1024), Grid(0.0, 0.25e-3, 256));
  const CorrelationResult closed = correlation_analytic(spec, det);
  const double err = relative_l2<Complex>(brute.correlation, closed.correlation);
  EXPECT_GT(err, 0.12);
  EXPECT_LT(err, 0.20);
  EXPECT_GT(normalized_cross_correlation(testgeo::modulus(brute.correlation), testgeo::modulus(closed.correlation)),
            0.95);
}

TEST(Background, ReferenceLevelAndFlatObjectTerm) {
  const auto spec = rod_setup(zbar(), double_slit_125_300());
  const Grid g(0.0, 0.5e-3, 1024);
  const std::vector<double> bg = background_intensity(spec, g);
  const double reference = kSodium.k0() * spec.source_width / (kTwoPi * zbar());
  EXPECT_NEAR(reference, 59.5e3, 0.1e3);
  // Object arm alone: about 2b / (lambda z_o2) for a wide source.
  const double object_level = 2 * 125e-6 / (589.3e-9 * spec.z_o2);
  const double center = bg[g.size() / 2] - reference;
  EXPECT_NEAR(center / object_level, 1.0, 0.05);
  double lo = bg[0];
  double hi = bg[0];
  for (double v : bg) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_LT((hi - lo) / hi, 0.01);
}

TEST(Ports, DifferenceAndSum) {
  const auto spec = rod_setup(zbar(), double_slit_125_300());
  const Grid g(0.0, 0.5e-3, 1024);
  const CorrelationResult c = correlation_analytic(spec, g);
  const std::vector<double> bg = background_intensity(spec, g);
  const PortIntensities p = detector_ports(c, bg);
  const auto diff = p.difference();
  const auto sum = p.sum();
  for (std::size_t j = 0; j < g.size(); ++j) {
    EXPECT_LE(std::abs(sum[j] - bg[j]), 1e-12 * bg[j]);
    EXPECT_LE(std::abs(diff[j] - 2 * c.correlation[j].real()), 4 * std::numeric_limits<double>::epsilon() * bg[j]);
    EXPECT_GE(p.minus[j], 0.0);
  }
}

TEST(Ports, NegativeIntensityRejected) {
  const std::vector<Complex> c{Complex(1.0, 0.0), Complex(-3.0, 0.0)};
  const std::vector<double> bg{4.0, 4.0};
  EXPECT_THROW(detector_ports(std::span<const Complex>(c), bg), NegativeIntensity);
  EXPECT_THROW(detector_ports(std::span<const Complex>(c), std::vector<double>{1.0}), InvalidArgument);
}

TEST(Coherent, PlaneWaveShowsNoImage) {
  const auto spec = rod_setup(zbar(), double_slit_125_300());
  const Grid g(0.0, 2e-3, 4096);
  const auto t = real_part(spec.object.sample(g));
  const CoherentResult r = run_coherent(spec, g, {});
  EXPECT_LE(normalized_cross_correlation(r.intensity, t), 0.9);
  const CorrelationResult inc = correlation_analytic(spec, g);
  EXPECT_GE(normalized_cross_correlation(real_part(inc.pattern()), t), 0.99);
}

TEST(Coherent, BlockedReferenceIsObjectArmOnly) {
  const auto spec = rod_setup(zbar(), double_slit_125_300());
  const Grid g(0.0, 1e-3, 2048);
  const CoherentResult r = run_coherent(spec, g, {}, {true});
  for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(r.intensity[j], std::norm(r.object_field[j]));
  // Far from the slits the object arm is dark, not the plane wave level.
  EXPECT_LT(r.intensity.front(), 0.2);
}

TEST(Coherent, PinholeSourceGivesFringes) {
  const auto spec = rod_setup(zbar(), double_slit_125_300());
  const Grid g(0.0, 2e-3, 4096);
  const CoherentResult r = run_coherent(spec, g, {CoherentIllumination::Kind::pinhole, 300e-6});
  const auto t = real_part(spec.object.sample(g));
  EXPECT_LE(normalized_cross_correlation(r.intensity, t), 0.9);
  EXPECT_THROW(run_coherent(spec, g, {CoherentIllumination::Kind::pinhole, 0.0}), InvalidArgument);
}

TEST(Coherent, OpenObjectArmIsConstructive) {
  const auto spec = rod_setup(zbar(), uniform_transmittance(1.0));
  const Grid g(0.0, 1e-3, 1024);
  const CoherentResult r = run_coherent(spec, g, {});
  for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(r.intensity[j], 4.0, 1e-9);
}
