#pragma once

#include "beclab/config.hpp"
#include "beclab/field.hpp"
#include "beclab/trap.hpp"

namespace beclab {

struct GPParams {
  double a = 0.0;      // interaction strength, negative is attractive
  double omega = 0.0;  // rotation speed
};

GPParams params_from_config(const Config& cfg);
void params_to_config(const GPParams& p, Config& cfg);

struct EnergyBreakdown {
  double kinetic = 0.0;
  double potential = 0.0;
  double rotation = 0.0;  // -Omega * integral of x_perp . Im(conj(u) grad u)
  double interaction = 0.0;
  double total = 0.0;
};

/// Discretized GP operator with V sampled once. Reuse one instance for repeated
/// evaluations on the same grid; the free functions below build a temporary.
class GPOperator {
public:
  GPOperator(const Grid2D& grid, const GPParams& p, const Trap& t);

  struct Evaluation {
    ComplexField h_u;  // -Lap u + V u + i Omega x_perp.grad u + a|u|^2 u
    EnergyBreakdown energy;
    double quartic = 0.0;  // integral of |u|^4
    double mu = 0.0;       // Re <u, H u> / ||u||^2
  };

  /// One forward and three inverse FFTs.
  Evaluation evaluate(const ComplexField& u) const;

  const Grid2D& grid() const noexcept { return grid_; }
  const GPParams& params() const noexcept { return p_; }
  const RealField& potential() const noexcept { return V_; }

private:
  Grid2D grid_;
  GPParams p_;
  RealField V_;
};

/// F_{Omega,a}(u) by quadrature, split into its four terms. Throws
/// InvalidArgument unless ||u|| = 1 within 1e-10.
EnergyBreakdown energy(const ComplexField& u, const GPParams& p, const Trap& t);

/// Same total written with the covariant derivative (grad - i Omega x_perp / 2):
/// kinetic holds the covariant kinetic term, potential holds
/// (V - Omega^2 |x|^2 / 4)|u|^2, rotation is zero.
EnergyBreakdown covariant_energy(const ComplexField& u, const GPParams& p, const Trap& t);

/// -Lap u + (V - mu) u + i Omega x_perp.grad u + a|u|^2 u.
ComplexField l2_gradient(const ComplexField& u, const GPParams& p, const Trap& t, double mu);

/// energy total + (a/2) integral |u|^4.
double chemical_potential(const ComplexField& u, const GPParams& p, const Trap& t);

/// Pointwise gradient of |u|, Re(conj(u) grad u)/|u|, zero where u vanishes.
std::pair<RealField, RealField> modulus_gradient(const ComplexField& u);

/// integral |(grad - i Omega x_perp/2) u|^2 - integral |grad |u||^2.
double check_diamagnetic(const ComplexField& u, double omega);

/// Gagliardo-Nirenberg quotient  a* integral|u|^4 / (2 integral|grad|u||^2 integral|u|^2),
/// at most 1 for every field.
double gn_quotient(const ComplexField& u, double a_star);

}  // namespace beclab
