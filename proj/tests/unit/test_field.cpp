#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "geometry.hpp"

using namespace prdsim;

TEST(Grid, MidpointSamples) {
  const Grid g(1.0, 2.0, 8);
  EXPECT_DOUBLE_EQ(g.spacing(), 0.5);
  EXPECT_DOUBLE_EQ(g.x(0), -0.75);
  EXPECT_DOUBLE_EQ(g.x(7), 2.75);
  EXPECT_DOUBLE_EQ(g.lower(), -1.0);
  EXPECT_DOUBLE_EQ(g.upper(), 3.0);
  EXPECT_EQ(g.coordinates().size(), 8u);
}

TEST(Grid, RejectsDegenerate) {
  EXPECT_THROW(Grid(0.0, 0.0, 16), InvalidArgument);
  EXPECT_THROW(Grid(0.0, -1.0, 16), InvalidArgument);
  EXPECT_THROW(Grid(0.0, 1.0, 1), InvalidArgument);
  EXPECT_THROW(make_grid(0.0, 1.0, 0), InvalidArgument);
  EXPECT_THROW(make_grid(0.0, 1.0, -4), InvalidArgument);
}

TEST(ComplexField, RejectsNonFinite) {
  const Grid g(0.0, 1.0, 4);
  EXPECT_THROW(ComplexField(g, std::vector<Complex>(3)), InvalidArgument);
  std::vector<Complex> v(4);
  v[2] = Complex(std::nan(""), 0.0);
  EXPECT_THROW(ComplexField(g, v), InvalidArgument);
}

TEST(Kernel, ModulusMatchesClosedForm) {
  // |H| = sqrt(k0 / (2 pi Zbar)) = 1 / sqrt(lambda Zbar).
  const double h = std::abs(fresnel_kernel(testgeo::kSodium, 1e-4, -2e-4, 0.418, 0.285));
  EXPECT_NEAR(h, 1.0 / std::sqrt(589.3e-9 * 0.285), 1e-9 * h);
  EXPECT_NEAR(h, 2440.11, 0.01);
}

TEST(Kernel, ConjugateIsNegatedLengths) {
  const OpticsContext& ctx = testgeo::kSodium;
  for (double zbar : {0.057, 0.285, 1.3}) {
    const Complex fwd = fresnel_kernel(ctx, 3e-4, -1e-4, 0.41, zbar);
    const Complex rev = fresnel_kernel(ctx, 3e-4, -1e-4, -0.41, -zbar);
    EXPECT_NEAR(std::abs(rev - std::conj(fwd)), 0.0, 1e-12 * std::abs(fwd));
  }
}

TEST(Kernel, ZeroDiffractionLengthThrows) {
  EXPECT_THROW(fresnel_kernel(testgeo::kSodium, 0.0, 0.0, 0.1, 0.0), DegenerateKernel);
  EXPECT_THROW(OpticsContext(0.0), InvalidArgument);
}

TEST(Kernel, CompositionOfGaussianBeams) {
  // Integrating H(a) * H(b) over the middle plane gives H(a + b), including
  // mixed signs; checked by quadrature on a fine grid.
  const OpticsContext& ctx = testgeo::kSodium;
  const Grid mid(0.0, 6e-3, 24000);
  for (auto [a, b] : {std::pair{0.05, 0.08}, std::pair{0.12, -0.04}, std::pair{-0.03, 0.09}}) {
    Complex acc{};
    const double xin = 1e-4;
    const double xout = -2e-4;
    for (std::size_t j = 0; j < mid.size(); ++j) {
      const double x = mid.x(j);
      // Soft window keeps the truncated chirp integral convergent.
      const double w = std::exp(-std::pow(x / 4e-3, 8));
      acc += fresnel_kernel(ctx, xout, x, a, a) * fresnel_kernel(ctx, x, xin, b, b) * w;
    }
    acc *= mid.spacing();
    const Complex direct = fresnel_kernel(ctx, xout, xin, a + b, a + b);
    EXPECT_LT(std::abs(acc - direct) / std::abs(direct), 2e-3) << a << " + " << b;
  }
}

TEST(Transmittance, DoubleSlitGeometry) {
  const Transmittance t = double_slit(125e-6, 300e-6);
  EXPECT_EQ(t(150e-6), Complex(1.0));
  EXPECT_EQ(t(-150e-6), Complex(1.0));
  EXPECT_EQ(t(0.0), Complex(0.0));
  EXPECT_EQ(t(220e-6), Complex(0.0));
  EXPECT_DOUBLE_EQ(t.smallest_feature(), 125e-6);
  ASSERT_TRUE(t.support());
  EXPECT_DOUBLE_EQ(t.support()->second, 212.5e-6);
  EXPECT_THROW(double_slit(300e-6, 300e-6), OverlappingApertures);
  EXPECT_THROW(double_slit(-1.0, 300e-6), InvalidArgument);
}

TEST(Transmittance, PhaseHolesCarryPhase) {
  const Transmittance t = phase_holes(100e-6, 300e-6, std::numbers::pi);
  EXPECT_NEAR(std::abs(t(-150e-6) - Complex(1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t(150e-6) - Complex(-1.0)), 0.0, 1e-15);
  EXPECT_EQ(t(0.0), Complex(0.0));
}

TEST(Transmittance, UniformBoundedByOne) {
  EXPECT_NO_THROW(uniform_transmittance(Complex(0.6, 0.8)));
  EXPECT_THROW(uniform_transmittance(Complex(1.0, 0.5)), InvalidArgument);
  EXPECT_EQ(uniform_transmittance(0.5).background(), Complex(0.5));
  EXPECT_FALSE(uniform_transmittance(0.5).support());
}

TEST(Transmittance, RasterTopRowIsLargestY) {
  GrayImage img{2, 2, {255, 0, 0, 128}};
  const Transmittance t = raster_to_transmittance(img, 1e-4);
  EXPECT_EQ(t(-0.5e-4, 0.5e-4), Complex(1.0));        // top-left
  EXPECT_EQ(t(0.5e-4, 0.5e-4), Complex(0.0));         // top-right
  EXPECT_NEAR(t(0.5e-4, -0.5e-4).real(), 128.0 / 255.0, 1e-15);
  EXPECT_EQ(t(3e-4, 0.0), Complex(0.0));
  EXPECT_TRUE(t.is_raster_2d());
  EXPECT_THROW(raster_to_transmittance(GrayImage{}, 1e-4), InvalidArgument);
}

TEST(Pgm, RoundTripAndErrors) {
  GrayImage img{3, 2, {0, 10, 20, 30, 40, 255}};
  const std::string path = ::testing::TempDir() + "/rt.pgm";
  write_pgm(path, img);
  const GrayImage back = read_pgm(path);
  EXPECT_EQ(back.width, 3u);
  EXPECT_EQ(back.height, 2u);
  EXPECT_EQ(back.pixels, img.pixels);

  std::istringstream truncated("P5\n3 2\n255\nabc");
  EXPECT_THROW(read_pgm(truncated), InvalidArgument);
  std::istringstream wrong("P2\n1 1\n255\n0");
  EXPECT_THROW(read_pgm(wrong), InvalidArgument);
  std::istringstream commented("P5\n# made by hand\n1 1\n255\n\x07");
  EXPECT_EQ(read_pgm(commented).pixels.at(0), 7);
  // A regular file as parent directory cannot be written through.
  EXPECT_THROW(write_pgm(path + "/x.pgm", img), IoError);
}
