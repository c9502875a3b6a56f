#pragma once

#include <vector>

#include "beclab/field.hpp"
#include "beclab/gp_model.hpp"
#include "beclab/trap.hpp"

namespace beclab {

/// Hexagonal lattice v(Z + e^{2 pi i/3} Z) truncated to the open disc |j| < R.
class HexLattice {
public:
  HexLattice(double v, double R);
  /// Chooses v so that 1/sigma^2 = 1 - pi/|Q|, and R = radius_factor * sigma.
  static HexLattice from_sigma(double sigma, double radius_factor = 4.0);

  double v() const noexcept { return v_; }
  double R() const noexcept { return R_; }
  double cell_area() const noexcept { return q_area_; }
  double sigma() const noexcept { return sigma_; }
  const std::vector<cplx>& points() const noexcept { return points_; }

private:
  double v_, R_, q_area_, sigma_;
  std::vector<cplx> points_;
};

/// Normalized e^{-|x|^2/2} / sqrt(pi). Requires L >= 6.
ComplexField gaussian_state(const Grid2D& grid);

/// Normalized A_R e^{-|z|^2/2} prod_j (z - j), in units where the trap is |x|^2.
/// The product is accumulated in chunks with a separate log-magnitude so that
/// hundreds of factors neither overflow nor underflow. Throws InvalidArgument
/// if more than 1e-8 of the mass sits in the boundary band.
ComplexField lattice_state(const HexLattice& lat, const Grid2D& grid);

/// psi_R(x + x_s) e^{-i x_s_perp . x} with x_s = (offset, 0): a magnetic
/// translate of the lattice state, evaluated directly (no periodic wrap).
ComplexField translated_lattice_state(const HexLattice& lat, const Grid2D& grid, double offset);

/// u(x + x0) e^{-i Omega x0_perp . x / 2}. Throws InvalidArgument when more
/// than 1e-10 of the mass of u would wrap around the periodic box.
ComplexField translate_magnetic(const ComplexField& u, double x01, double x02, double omega);

struct TrialReport {
  double norm_check = 0.0;          // ||u||^2
  double covariant_kinetic = 0.0;   // integral |(grad - i Omega x_perp/2) u|^2
  double quartic_integral = 0.0;    // integral |u|^4
  double trap_expectation = 0.0;    // integral V |u|^2
  double certified_upper_bound = 0.0;  // F_{Omega,a}(u)
};

TrialReport certify_upper_bound(const ComplexField& state, const GPParams& p, const Trap& t);

}  // namespace beclab
