#pragma once

#include <string>

#include "beclab/config.hpp"
#include "beclab/field.hpp"

namespace beclab {

/// Bounded perturbation W added to a harmonic trap.
///
///   Constant:      W = C
///   RadialBump:    W = B + sign * c * exp(-|x|^2)
///   AlgebraicTail: W = B + sign * c * (1 + |x|^2)^(-s/2),  0 < s < 2
///
/// sign = -1 gives W < B everywhere, the situation in which a weak attractive
/// or repulsive interaction keeps the condensate bound at the critical speed.
struct WSpec {
  enum class Kind { Constant, RadialBump, AlgebraicTail };
  Kind kind = Kind::Constant;
  double amplitude = 0.0;  // C for Constant, c otherwise
  int sign = -1;
  double far_field = 0.0;  // B
  double exponent = 1.0;   // s, AlgebraicTail only

  static WSpec constant(double c);
  static WSpec bump(double c, int sign, double far_field = 0.0);
  static WSpec tail(double c, int sign, double s, double far_field = 0.0);

  double operator()(double x1, double x2) const noexcept;
  /// Limit of W at infinity.
  double limit() const noexcept;
};

class Trap {
public:
  enum class Kind { Harmonic, HarmonicPlus, Power };

  /// V = A|x|^2, A >= 0.
  static Trap harmonic(double A);
  /// V = A|x|^2 + W(x).
  static Trap harmonic_plus(double A, const WSpec& w);
  /// V = |x|^s, s >= 2.
  static Trap power(double s);

  Kind kind() const noexcept { return kind_; }
  double stiffness() const noexcept { return A_; }
  double exponent() const noexcept { return s_; }
  const WSpec& perturbation() const noexcept { return w_; }

  double operator()(double x1, double x2) const noexcept;

  /// Samples V on the grid. For harmonic_plus the growth condition
  /// |W|/|x|^2 < 1e-3 is checked at |x| = L; a violation throws InvalidArgument.
  RealField sample(const Grid2D& grid) const;

  std::string describe() const;

private:
  Trap(Kind k, double A, double s, WSpec w) : kind_(k), A_(A), s_(s), w_(w) {}

  Kind kind_;
  double A_;
  double s_;
  WSpec w_;
};

/// Critical rotation speed: 2 sqrt(A) for harmonic traps, 2 for power(2) and
/// +infinity for power(s > 2).
double critical_velocity(const Trap& t);

/// Reads the [trap] section:
///   kind = harmonic | harmonic_plus | power
///   A = <stiffness>             (harmonic, harmonic_plus)
///   s = <exponent>              (power)
///   w = constant | bump | tail  (harmonic_plus)
///   w_amplitude, w_sign (+1/-1), w_limit (B), w_exponent
Trap trap_from_config(const Config& cfg);
void trap_to_config(const Trap& t, Config& cfg);

}  // namespace beclab
