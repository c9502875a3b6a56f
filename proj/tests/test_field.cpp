#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "beclab/field.hpp"
#include "beclab/snapshot.hpp"
#include "beclab/spectral.hpp"
#include "test_support.hpp"

using namespace beclab;
using std::numbers::pi;

namespace {

const Grid2D kGrid(256, 8.0);

ComplexField gaussian(const Grid2D& g, double scale = 1.0) {
  return ComplexField::sample(g, [&](double x1, double x2) {
    return cplx(std::exp(-scale * (x1 * x1 + x2 * x2)), 0.0);
  });
}

}  // namespace

TEST(Grid2D, RejectsBadSizes) {
  EXPECT_THROW(Grid2D(100, 8.0), InvalidArgument);
  EXPECT_THROW(Grid2D(16, 8.0), InvalidArgument);
  EXPECT_THROW(Grid2D(64, 0.0), InvalidArgument);
  const Grid2D g(64, 4.0);
  EXPECT_EQ(g.spacing(), 8.0 / 64);
}

TEST(InnerProduct, NormalizationAndLinearity) {
  const ComplexField u = normalize(gaussian(kGrid));
  EXPECT_NEAR(std::abs(inner_product(u, u) - 1.0), 0.0, 1e-14);
  const ComplexField v = u * cplx(0.0, 1.0);
  const cplx ip = inner_product(u, v);
  EXPECT_NEAR(ip.real(), 0.0, 1e-14);
  EXPECT_NEAR(ip.imag(), 1.0, 1e-14);
  // Conjugate symmetry.
  const ComplexField w = testing_support::random_smooth_field(kGrid, 7);
  EXPECT_NEAR(std::abs(inner_product(u, w) - std::conj(inner_product(w, u))), 0.0, 1e-14);
}

TEST(InnerProduct, GaussianClosedForm) {
  const ComplexField g = gaussian(kGrid);
  EXPECT_NEAR(inner_product(g, g).real(), pi / 2.0, 1e-10);
}

TEST(InnerProduct, GridMismatchIsAnError) {
  const ComplexField a(Grid2D(64, 8.0)), b(Grid2D(64, 4.0));
  EXPECT_THROW(inner_product(a, b), InvalidArgument);
}

TEST(SpectralGradient, PlaneWaveIsEigenfunction) {
  const double k1 = 3 * pi / kGrid.half_width(), k2 = -5 * pi / kGrid.half_width();
  const ComplexField u = ComplexField::sample(kGrid, [&](double x1, double x2) { return std::polar(1.0, k1 * x1 + k2 * x2); });
  auto [d1, d2] = spectral_gradient(u);
  double err = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    err = std::max(err, std::abs(d1[k] - cplx(0, k1) * u[k]));
    err = std::max(err, std::abs(d2[k] - cplx(0, k2) * u[k]));
  }
  EXPECT_LT(err, 1e-11);
}

TEST(SpectralGradient, ConstantHasZeroGradient) {
  ComplexField c(kGrid);
  for (auto& z : c.values()) z = cplx(2.5, -1.0);
  auto [d1, d2] = spectral_gradient(c);
  EXPECT_LT(max_abs(d1), 1e-13);
  EXPECT_LT(max_abs(d2), 1e-13);
}

TEST(SpectralGradient, GaussianVirial) {
  const ComplexField g = normalize(gaussian(kGrid, 0.5));
  auto [d1, d2] = spectral_gradient(g);
  const double grad2 = norm_squared(d1) + norm_squared(d2);
  EXPECT_NEAR(grad2, 1.0, 1e-8);
  EXPECT_NEAR(kinetic_integral(g), grad2, 1e-12);
}

TEST(AngularDerivative, RadialFieldGivesZero) {
  const ComplexField g = normalize(gaussian(kGrid, 0.5));
  EXPECT_LT(max_abs(angular_derivative(g)), 1e-10);
}

TEST(AngularDerivative, UnitVortexIsEigenfunction) {
  const ComplexField v = ComplexField::sample(kGrid, [](double x1, double x2) {
    return cplx(x1, x2) * std::exp(-0.5 * (x1 * x1 + x2 * x2));
  });
  const ComplexField d = angular_derivative(v);
  double err = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) err = std::max(err, std::abs(d[k] - cplx(0, 1) * v[k]));
  EXPECT_LT(err, 1e-8);
}

TEST(AngularDerivative, AngularMomentumIsReal) {
  for (unsigned seed = 1; seed <= 10; ++seed) {
    const ComplexField u = testing_support::random_smooth_field(kGrid, seed);
    // int x_perp.(iu, grad u) = -i <u, x_perp.grad u>; its imaginary part is -Re<u, D u>.
    const cplx lz = cplx(0, -1) * inner_product(u, angular_derivative(u));
    EXPECT_LT(std::abs(lz.imag()), 1e-10) << "seed " << seed;
    // Real fields carry no angular momentum.
    const ComplexField r = to_complex(real_part(u));
    EXPECT_LT(std::abs(inner_product(r, angular_derivative(r)).imag()), 1e-12);
  }
}

TEST(Normalize, IdempotentAndScaleFree) {
  const ComplexField u = normalize(testing_support::random_smooth_field(kGrid, 3));
  const ComplexField again = normalize(u);
  const ComplexField twice = normalize(u * cplx(2.0, 0.0));
  EXPECT_LT(max_abs(again - u), 1e-14);
  EXPECT_LT(max_abs(twice - u), 1e-14);
  EXPECT_NEAR(norm_squared(u), 1.0, 1e-12);
  EXPECT_THROW(normalize(ComplexField(kGrid)), InvalidArgument);
}

TEST(Spectral, ParsevalIdentity) {
  for (unsigned seed = 11; seed <= 15; ++seed) {
    const ComplexField u = testing_support::random_smooth_field(kGrid, seed);
    const ComplexField s = fft_forward(u);
    double spec = 0.0;
    for (const auto& z : s.values()) spec += std::norm(z);
    spec *= kGrid.cell_area() / static_cast<double>(u.size());
    EXPECT_NEAR(spec / norm_squared(u), 1.0, 1e-10);
  }
}

TEST(Spectral, IntegrationByParts) {
  const ComplexField u = testing_support::random_smooth_field(kGrid, 21);
  const ComplexField v = testing_support::random_smooth_field(kGrid, 22);
  auto [du1, du2] = spectral_gradient(u);
  auto [dv1, dv2] = spectral_gradient(v);
  EXPECT_LT(std::abs(inner_product(du1, v) + inner_product(u, dv1)), 1e-9);
  EXPECT_LT(std::abs(inner_product(du2, v) + inner_product(u, dv2)), 1e-9);
}

TEST(Spectral, ShiftMovesBandLimitedFields) {
  const ComplexField g = gaussian(kGrid, 0.5);
  const ComplexField shifted = spectral_shift(g, 1.25, -0.5);
  const ComplexField expect = ComplexField::sample(kGrid, [](double x1, double x2) {
    const double y1 = x1 + 1.25, y2 = x2 - 0.5;
    return cplx(std::exp(-0.5 * (y1 * y1 + y2 * y2)), 0.0);
  });
  // Compare away from the edge the shift wraps mass across.
  double err = 0.0;
  for (int iy = 0; iy < kGrid.n(); ++iy)
    for (int ix = 0; ix < kGrid.n(); ++ix)
      if (std::abs(kGrid.coord(ix)) < 6.0) err = std::max(err, std::abs(shifted(iy, ix) - expect(iy, ix)));
  EXPECT_LT(err, 1e-12);
}

TEST(Snapshot, RoundTripIsBitExact) {
  const Grid2D g(32, 3.5);
  const ComplexField u = testing_support::random_smooth_field(g, 5);
  std::stringstream ss;
  write_snapshot(ss, u);
  const std::string bytes = ss.str();
  ASSERT_EQ(bytes.size(), 4 + 4 + 8 + 16 * g.size());
  EXPECT_EQ(bytes.substr(0, 4), "GPF1");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 32u);  // little-endian n
  const ComplexField back = read_snapshot(ss);
  EXPECT_EQ(back.grid(), g);
  for (std::size_t k = 0; k < u.size(); ++k) ASSERT_EQ(back[k], u[k]);
}

TEST(Snapshot, LoaderValidatesMagicAndLength) {
  const Grid2D g(32, 1.0);
  std::stringstream ss;
  write_snapshot(ss, ComplexField(g));
  std::string bytes = ss.str();

  std::string bad_magic = bytes;
  bad_magic[3] = '2';
  std::istringstream in1(bad_magic);
  EXPECT_THROW(read_snapshot(in1), InvalidArgument);

  std::istringstream in2(bytes.substr(0, bytes.size() - 8));
  EXPECT_THROW(read_snapshot(in2), InvalidArgument);

  std::istringstream in3(bytes + "x");
  EXPECT_THROW(read_snapshot(in3), InvalidArgument);
}

TEST(Field, BoundaryBandMass) {
  const ComplexField g = normalize(gaussian(kGrid, 0.5));
  EXPECT_LT(boundary_band_mass(g), 1e-20);
  ComplexField flat(kGrid);
  for (auto& z : flat.values()) z = 1.0;
  // Nodes with max(|x1|,|x2|) >= 0.9 L: 1 - (fraction of interior nodes).
  EXPECT_GT(boundary_band_mass(flat), 0.15);
  EXPECT_LT(boundary_band_mass(flat), 0.25);
}
