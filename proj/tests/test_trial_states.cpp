#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "beclab/diagnostics.hpp"
#include "beclab/minimizer.hpp"
#include "beclab/spectral.hpp"
#include "beclab/trial_states.hpp"
#include "test_support.hpp"

using namespace beclab;

namespace {

const double kPi = std::numbers::pi;

double covariant_kinetic(const ComplexField& u) {
  return covariant_energy(normalize(u), GPParams{0.0, 2.0}, Trap::harmonic(1.0)).kinetic;
}

double w_expectation(const ComplexField& u) {
  const RealField w = RealField::sample(u.grid(), [](double x1, double x2) { return std::exp(-(x1 * x1 + x2 * x2)); });
  double acc = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) acc += w[k] * std::norm(u[k]);
  return acc * u.grid().cell_area();
}

}  // namespace

TEST(HexLattice, Geometry) {
  const HexLattice lat = HexLattice::from_sigma(2.0);
  EXPECT_NEAR(lat.cell_area(), 4.0 * kPi / 3.0, 1e-12);
  EXPECT_NEAR(lat.sigma(), 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(lat.R(), 8.0);
  for (const cplx& p : lat.points()) EXPECT_LT(std::abs(p), lat.R());
  // Nearest neighbours sit at distance v.
  int neighbours = 0;
  for (const cplx& p : lat.points())
    if (std::abs(std::abs(p) - lat.v()) < 1e-12) ++neighbours;
  EXPECT_EQ(neighbours, 6);
  EXPECT_THROW(HexLattice(1.5, 5.0), InvalidArgument);
  EXPECT_THROW(HexLattice::from_sigma(1.0), InvalidArgument);
}

TEST(GaussianState, Basics) {
  const Grid2D g(128, 10.0);
  const ComplexField u = gaussian_state(g);
  EXPECT_NEAR(norm_squared(u), 1.0, 1e-10);
  EXPECT_NEAR(covariant_kinetic(u), 2.0, 1e-8);
  EXPECT_NEAR(quartic_integral(u), 1.0 / (2.0 * kPi), 1e-8);
  EXPECT_THROW(gaussian_state(Grid2D(64, 5.0)), InvalidArgument);
}

TEST(LatticeState, FirstEigenvalueIdentity) {
  struct Case {
    HexLattice lat;
    Grid2D grid;
  };
  const Case cases[] = {{HexLattice::from_sigma(2.0), Grid2D(256, 12.0)},
                        {HexLattice(2.5, 6.0), Grid2D(256, 12.0)},
                        {HexLattice::from_sigma(4.0), Grid2D(512, 22.0)}};
  for (const Case& c : cases) {
    const ComplexField psi = lattice_state(c.lat, c.grid);
    EXPECT_NEAR(norm_squared(psi), 1.0, 1e-12);
    EXPECT_NEAR(covariant_kinetic(psi), 2.0, 1e-6);
  }
}

TEST(LatticeState, OneVortexPerLatticePoint) {
  const HexLattice lat = HexLattice::from_sigma(2.0);
  const Grid2D g(256, 12.0);
  const VortexReport rep = vortex_scan(lattice_state(lat, g));
  EXPECT_EQ(rep.total_winding, static_cast<int>(lat.points().size()));
  EXPECT_EQ(rep.vortices.size(), lat.points().size());
  for (const cplx& p : lat.points()) {
    const bool found = std::any_of(rep.vortices.begin(), rep.vortices.end(), [&](const Vortex& v) {
      return std::abs(cplx(v.x1, v.x2) - p) <= g.spacing() && v.winding == 1;
    });
    EXPECT_TRUE(found) << p;
  }
}

TEST(LatticeState, QuarticShrinksWithSigma) {
  const double q2 = quartic_integral(lattice_state(HexLattice::from_sigma(2.0), Grid2D(256, 12.0)));
  const double q4 = quartic_integral(lattice_state(HexLattice::from_sigma(4.0), Grid2D(512, 22.0)));
  EXPECT_GE(q2 / q4, 3.0);
  EXPECT_LE(q2 / q4, 6.0);
}

TEST(LatticeState, RejectsBoxThatCutsSupport) {
  EXPECT_THROW(lattice_state(HexLattice::from_sigma(4.0), Grid2D(256, 12.0)), InvalidArgument);
}

TEST(TranslatedLatticeState, InvariantsAndVanishingBump) {
  const HexLattice lat = HexLattice::from_sigma(2.0);
  const Grid2D g(512, 32.0);
  const ComplexField psi = lattice_state(lat, g);
  const ComplexField moved = translated_lattice_state(lat, g, 16.0);
  EXPECT_NEAR(covariant_kinetic(moved), 2.0, 1e-6);
  EXPECT_NEAR(quartic_integral(moved), quartic_integral(psi), 1e-10);
  EXPECT_LT(w_expectation(moved), 1e-6);
  EXPECT_GT(w_expectation(psi), 1e-2);
  EXPECT_THROW(translated_lattice_state(lat, Grid2D(256, 16.0), 12.0), InvalidArgument);
}

TEST(TranslateMagnetic, IdentityAndModulus) {
  const Grid2D g(128, 10.0);
  const ComplexField u = normalize(testing_support::random_smooth_field(g, 3));
  EXPECT_LT(max_abs(translate_magnetic(u, 0.0, 0.0, 2.0) - u), 1e-14);
  const ComplexField moved = translate_magnetic(u, 1.3, -0.7, 2.0);
  const ComplexField shifted = spectral_shift(u, 1.3, -0.7);
  for (std::size_t k = 0; k < u.size(); ++k) EXPECT_NEAR(std::abs(moved[k]), std::abs(shifted[k]), 1e-14);
  EXPECT_THROW(translate_magnetic(u, 9.0, 0.0, 2.0), InvalidArgument);
}

TEST(TranslateMagnetic, CovariantEnergyInvariantAtCriticalSpeed) {
  const Grid2D g(128, 10.0);
  const GPParams p{-1.5, 2.0};
  const Trap t = Trap::harmonic(1.0);
  for (unsigned seed = 0; seed < 10; ++seed) {
    const ComplexField u = normalize(testing_support::random_smooth_field(g, 200 + seed, 4, 2.0));
    const ComplexField v = translate_magnetic(u, 1.1, 0.6, 2.0);
    EXPECT_NEAR(covariant_energy(v, p, t).total, covariant_energy(u, p, t).total, 1e-8);
    EXPECT_NEAR(covariant_energy(v, p, t).kinetic, covariant_energy(u, p, t).kinetic, 1e-8);
  }
}

TEST(TranslateMagnetic, GaugeCheckOnConvergedState) {
  const Grid2D g(64, 8.0);
  const GPParams p{-2.0, 2.0};
  const Trap t = Trap::harmonic(1.0);
  const GroundStateResult r = minimize(make_seed(g, SeedKind::Gaussian, 1), p, t, SolverOptions{});
  ASSERT_EQ(r.status, SolveStatus::Converged);
  const double before = covariant_energy(r.field, p, t).total;
  const double after = covariant_energy(translate_magnetic(r.field, 0.8, -0.5, 2.0), p, t).total;
  EXPECT_LT(std::abs(after - before), 1e-6);
}

TEST(CertifyUpperBound, GaussianAtCriticalSpeed) {
  const Grid2D g(128, 10.0);
  const ComplexField u = gaussian_state(g);
  const TrialReport r0 = certify_upper_bound(u, GPParams{0.0, 2.0}, Trap::harmonic(1.0));
  EXPECT_NEAR(r0.certified_upper_bound, 2.0, 1e-8);
  EXPECT_NEAR(r0.norm_check, 1.0, 1e-10);
  EXPECT_NEAR(r0.trap_expectation, 1.0, 1e-8);
  // The quartic term of the Gaussian is |a|/2 * 1/(2 pi).
  for (double a : {-0.5, -2.0}) {
    const TrialReport r = certify_upper_bound(u, GPParams{a, 2.0}, Trap::harmonic(1.0));
    EXPECT_NEAR(r.certified_upper_bound, 2.0 - std::abs(a) / (4.0 * kPi), 1e-8);
    EXPECT_LT(r.certified_upper_bound, 2.0);
  }
}

TEST(CertifyUpperBound, LatticeBoundApproachesTwo) {
  const HexLattice lat = HexLattice::from_sigma(4.0);
  const ComplexField psi = lattice_state(lat, Grid2D(512, 22.0));
  const TrialReport r = certify_upper_bound(psi, GPParams{10.0, 2.0}, Trap::harmonic(1.0));
  EXPECT_NEAR(r.certified_upper_bound, 2.0 + 5.0 * r.quartic_integral, 1e-6);
  EXPECT_LT(r.certified_upper_bound, 2.1);
}

TEST(CertifyUpperBound, DominatesConvergedMinimizers) {
  const Grid2D g(64, 8.0);
  const Trap t = Trap::harmonic(1.0);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> da(-4.0, 6.0), dw(0.0, 1.5);
  int checked = 0;
  for (int cfg = 0; cfg < 5; ++cfg) {
    const GPParams p{da(rng), dw(rng)};
    const GroundStateResult r = minimize(make_seed(g, SeedKind::Gaussian, cfg), p, t, SolverOptions{});
    ASSERT_EQ(r.status, SolveStatus::Converged);
    for (unsigned s = 0; s < 4; ++s) {
      const ComplexField trial = normalize(testing_support::random_smooth_field(g, 900 + 4 * cfg + s, 3, 2.0));
      EXPECT_GE(certify_upper_bound(trial, p, t).certified_upper_bound, r.breakdown.total - 1e-9);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 20);
}
