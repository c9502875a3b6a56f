#pragma once

#include <utility>
#include <vector>

#include "beclab/field.hpp"
#include "beclab/gp_model.hpp"

namespace beclab {

struct PhaseAlignment {
  double theta = 0.0;          // in [0, 2 pi)
  double residual_l2 = 0.0;    // || u e^{i theta} - ref ||
  double orthogonality = 0.0;  // integral ref * Im(u e^{i theta})
  bool degenerate = false;     // <ref, u> vanished; theta is arbitrary (0)
};

/// theta = -arg <ref, u>, so that <ref, u e^{i theta}> is real and non-negative.
PhaseAlignment align_phase(const ComplexField& u, const RealField& ref);

/// Applies a constant phase: u e^{i theta}.
ComplexField rotate_phase(const ComplexField& u, double theta);

struct Decomposition {
  RealField q;      // Re(u e^{i theta})
  RealField r;      // Im(u e^{i theta})
  RealField w_dev;  // q - ref
};

Decomposition decompose(const ComplexField& u, const RealField& ref, const PhaseAlignment& alignment);

struct CoupledResidual {
  double res_q = 0.0;  // sup | L q - Omega x_perp.grad r |
  double res_r = 0.0;  // sup | L r + Omega x_perp.grad q |
};

/// Residuals of the real/imaginary split of the Euler-Lagrange equation with
/// L = -Lap + V - mu + a(q^2 + r^2).
CoupledResidual residual_coupled_system(const Decomposition& d, double omega, double mu, const GPParams& p,
                                        const Trap& t);

/// Linearizations around a real minimizer u0 of the non-rotating problem,
/// usable only as residual evaluators.
class LinearizedOps {
public:
  LinearizedOps(RealField u0, double mu0, double a, const Trap& t);

  /// (-Lap + V - mu0 + a u0^2) f
  RealField apply_L(const RealField& f) const;
  /// (-Lap + V - mu0 + 3 a u0^2) f
  RealField apply_N(const RealField& f) const;

  const RealField& u0() const noexcept { return u0_; }
  double mu0() const noexcept { return mu0_; }

private:
  RealField apply(const RealField& f, double factor) const;

  RealField u0_;
  double mu0_;
  double a_;
  RealField V_;
};

struct Vortex {
  double x1 = 0.0, x2 = 0.0;  // plaquette center, or the node for an exact zero
  int winding = 0;
  bool low_density = false;   // every corner below density_floor * max|u|
};

struct VortexReport {
  std::vector<Vortex> vortices;
  int total_winding = 0;
  /// Vortices outside low-density regions.
  int significant() const;
};

/// Sums wrapped phase differences around every grid plaquette. Nodes where u is
/// exactly zero are resolved by the ring of their eight neighbours instead.
VortexReport vortex_scan(const ComplexField& u, double density_floor = 1e-6);

/// Winding number of u along the boundary of the index rectangle
/// [ix0, ix1] x [iy0, iy1], traversed counter-clockwise.
int contour_winding(const ComplexField& u, int ix0, int iy0, int ix1, int iy1);

/// Least-squares slope of log|u| against |x| over nodes with r1 <= |x| <= r2.
/// Requires r2 <= 0.8 L.
double decay_fit(const ComplexField& u, double r1, double r2);

}  // namespace beclab
