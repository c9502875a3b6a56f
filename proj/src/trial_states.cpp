#include "beclab/trial_states.hpp"

#include <cmath>
#include <numbers>

#include "beclab/spectral.hpp"

namespace beclab {

HexLattice::HexLattice(double v, double R) : v_(v), R_(R), q_area_(0.0), sigma_(0.0) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("lattice scale v must be positive");
  if (!(R > 0.0) || !std::isfinite(R)) throw InvalidArgument("lattice radius R must be positive");
  q_area_ = std::sqrt(3.0) * v * v / 2.0;
  if (!(q_area_ > std::numbers::pi)) throw InvalidArgument("lattice cell area must exceed pi");
  sigma_ = 1.0 / std::sqrt(1.0 - std::numbers::pi / q_area_);
  const cplx e = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  const int span = static_cast<int>(std::ceil(2.0 * R / v)) + 1;
  for (int m = -span; m <= span; ++m)
    for (int k = -span; k <= span; ++k) {
      const cplx j = v * (static_cast<double>(m) + static_cast<double>(k) * e);
      if (std::abs(j) < R) points_.push_back(j);
    }
}

HexLattice HexLattice::from_sigma(double sigma, double radius_factor) {
  if (!(sigma > 1.0)) throw InvalidArgument("sigma must exceed 1");
  const double q = std::numbers::pi / (1.0 - 1.0 / (sigma * sigma));
  return HexLattice(std::sqrt(2.0 * q / std::sqrt(3.0)), radius_factor * sigma);
}

ComplexField gaussian_state(const Grid2D& grid) {
  if (grid.half_width() < 6.0) throw InvalidArgument("gaussian_state: box half width must be at least 6");
  return normalize(ComplexField::sample(
      grid, [](double x1, double x2) { return cplx(std::exp(-0.5 * (x1 * x1 + x2 * x2)) / std::sqrt(std::numbers::pi), 0.0); }));
}

namespace {

// log|prod (z - j)| and the unit phase of the product, for z = (x1 + s1) + i (x2 + s2).
ComplexField lattice_values(const HexLattice& lat, const Grid2D& grid, double s1, double s2,
                            double phase_k1, double phase_k2) {
  const int n = grid.n();
  std::vector<double> logmag(grid.size());
  std::vector<cplx> phase(grid.size());
  const auto& pts = lat.points();
  double peak = -INFINITY;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const double y1 = grid.coord(ix) + s1, y2 = grid.coord(iy) + s2;
      const cplx z(y1, y2);
      double lm = -0.5 * (y1 * y1 + y2 * y2);
      cplx prod(1.0, 0.0);
      bool zero = false;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        prod *= z - pts[j];
        if ((j & 15u) == 15u || j + 1 == pts.size()) {
          const double m = std::abs(prod);
          if (m == 0.0) {
            zero = true;
            break;
          }
          lm += std::log(m);
          prod /= m;
        }
      }
      const std::size_t k = static_cast<std::size_t>(iy) * n + ix;
      logmag[k] = zero ? -INFINITY : lm;
      phase[k] = zero ? cplx(0.0, 0.0) : prod * std::polar(1.0, phase_k1 * grid.coord(ix) + phase_k2 * grid.coord(iy));
      if (!zero) peak = std::max(peak, lm);
    }
  }
  if (!std::isfinite(peak)) throw NumericalError("lattice_state: product vanished everywhere");
  ComplexField out(grid);
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = std::isfinite(logmag[k]) ? std::exp(logmag[k] - peak) * phase[k] : cplx(0.0, 0.0);
  if (boundary_band_mass(out) > 1e-8)
    throw InvalidArgument("lattice_state: support reaches the boundary band; enlarge the box");
  return normalize(out);
}

}  // namespace

ComplexField lattice_state(const HexLattice& lat, const Grid2D& grid) { return lattice_values(lat, grid, 0, 0, 0, 0); }

ComplexField translated_lattice_state(const HexLattice& lat, const Grid2D& grid, double offset) {
  // x_s = (offset, 0), x_s_perp = (0, offset): phase e^{-i offset x2}.
  return lattice_values(lat, grid, offset, 0.0, 0.0, -offset);
}

ComplexField translate_magnetic(const ComplexField& u, double x01, double x02, double omega) {
  const Grid2D& g = u.grid();
  const double L = g.half_width();
  const int n = g.n();
  double total = 0.0, lost = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    const double y2 = g.coord(iy) - x02;
    for (int ix = 0; ix < n; ++ix) {
      const double y1 = g.coord(ix) - x01;
      const double d = std::norm(u(iy, ix));
      total += d;
      if (y1 < -L || y1 >= L || y2 < -L || y2 >= L) lost += d;
    }
  }
  if (lost > 1e-10 * total) throw InvalidArgument("translate_magnetic: shifted support leaves the box");
  ComplexField out = spectral_shift(u, x01, x02);
  const double c = 0.5 * omega;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      // x0_perp . x = -x02 x1 + x01 x2
      const double arg = -c * (-x02 * g.coord(ix) + x01 * g.coord(iy));
      out(iy, ix) *= std::polar(1.0, arg);
    }
  return out;
}

TrialReport certify_upper_bound(const ComplexField& state, const GPParams& p, const Trap& t) {
  TrialReport rep;
  rep.norm_check = norm_squared(state);
  const EnergyBreakdown e = energy(state, p, t);
  const EnergyBreakdown cov = covariant_energy(state, p, t);
  rep.covariant_kinetic = cov.kinetic;
  rep.quartic_integral = quartic_integral(state);
  rep.trap_expectation = e.potential;
  rep.certified_upper_bound = e.total;
  return rep;
}

}  // namespace beclab
