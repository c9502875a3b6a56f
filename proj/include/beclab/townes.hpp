#pragma once

#include <array>
#include <vector>

#include "beclab/field.hpp"

namespace beclab {

/// Positive radial solution of w'' + w'/r - w + w^3 = 0 sampled at r_i = i*dr.
struct RadialProfile {
  double dr = 0.0;
  double w0 = 0.0;
  std::vector<double> r;
  std::vector<double> w;
  std::vector<double> dw;  // w'(r)
};

struct TownesConstants {
  double a_star = 0.0;  // 2*pi * int w^2 r dr
  // |K/M - 1|, |Q/(2M) - 1|, |2K/Q - 1| with K = int|grad w|^2, M = int w^2, Q = int w^4.
  std::array<double, 3> identity_residuals{};
  double decay_rate = 0.0;  // slope of log(sqrt(r) w) over r in [6, 10]
  bool converged = false;   // every identity residual below 1e-5
};

/// Shooting on w(0) with bisection. Requires dr <= 1e-3 and r_max >= 12.
RadialProfile solve_townes(double dr = 1e-4, double r_max = 16.0, double tol = 1e-14);

TownesConstants critical_mass(const RadialProfile& p);

/// Gagliardo-Nirenberg quotient  int f^4 * a_star / (2 int|grad f|^2 int f^2)
/// for a radial profile. Equals 1 exactly at the Townes profile.
double gn_sharpness_check(const RadialProfile& p, double a_star);
double gn_sharpness_check(const RadialProfile& p);

/// Builds a RadialProfile from an analytic radial function and its derivative.
template <typename F, typename DF>
RadialProfile radial_profile_from(F&& f, DF&& df, double dr, double r_max) {
  RadialProfile p;
  p.dr = dr;
  const auto count = static_cast<std::size_t>(r_max / dr) + 1;
  p.r.resize(count);
  p.w.resize(count);
  p.dw.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = static_cast<double>(i) * dr;
    p.r[i] = r;
    p.w[i] = f(r);
    p.dw[i] = df(r);
  }
  p.w0 = p.w.front();
  return p;
}

/// Evaluates amplitude * w(scale * |x|) on the grid by cubic Hermite interpolation.
/// Radii beyond the profile map to zero.
RealField embed_profile(const RadialProfile& p, const Grid2D& grid, double scale = 1.0, double amplitude = 1.0);

struct SpectralTownes {
  RealField w;
  double a_star = 0.0;
  int iterations = 0;
  double update_norm = 0.0;  // sup-norm of the last update
};

/// Independent 2D route: Petviashvili iteration for -Lap w + w - w^3 = 0 on a
/// periodic grid, started from a Gaussian. a_star is the quadrature of w^2.
SpectralTownes townes_spectral_relaxation(const Grid2D& grid, double tol = 1e-12, int max_iter = 2000);

}  // namespace beclab
