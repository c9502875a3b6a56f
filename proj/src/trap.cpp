#include "beclab/trap.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace beclab {

WSpec WSpec::constant(double c) {
  if (!std::isfinite(c)) throw InvalidArgument("W constant must be finite");
  WSpec w;
  w.kind = Kind::Constant;
  w.amplitude = c;
  return w;
}

WSpec WSpec::bump(double c, int sign, double far_field) {
  if (!(c >= 0.0) || !std::isfinite(c) || !std::isfinite(far_field))
    throw InvalidArgument("W bump needs a finite amplitude c >= 0");
  if (sign != 1 && sign != -1) throw InvalidArgument("W sign must be +1 or -1");
  WSpec w;
  w.kind = Kind::RadialBump;
  w.amplitude = c;
  w.sign = sign;
  w.far_field = far_field;
  return w;
}

WSpec WSpec::tail(double c, int sign, double s, double far_field) {
  if (!(c > 0.0) || !std::isfinite(c) || !std::isfinite(far_field))
    throw InvalidArgument("W tail needs a finite amplitude c > 0");
  if (sign != 1 && sign != -1) throw InvalidArgument("W sign must be +1 or -1");
  if (!(s > 0.0 && s < 2.0)) throw InvalidArgument("W tail exponent must lie in (0, 2)");
  WSpec w;
  w.kind = Kind::AlgebraicTail;
  w.amplitude = c;
  w.sign = sign;
  w.exponent = s;
  w.far_field = far_field;
  return w;
}

double WSpec::operator()(double x1, double x2) const noexcept {
  const double r2 = x1 * x1 + x2 * x2;
  switch (kind) {
    case Kind::Constant:
      return amplitude;
    case Kind::RadialBump:
      return far_field + sign * amplitude * std::exp(-r2);
    case Kind::AlgebraicTail:
      return far_field + sign * amplitude * std::pow(1.0 + r2, -0.5 * exponent);
  }
  return 0.0;
}

double WSpec::limit() const noexcept { return kind == Kind::Constant ? amplitude : far_field; }

Trap Trap::harmonic(double A) {
  if (!(A >= 0.0) || !std::isfinite(A)) throw InvalidArgument("harmonic trap needs finite A >= 0");
  return Trap(Kind::Harmonic, A, 2.0, WSpec{});
}

Trap Trap::harmonic_plus(double A, const WSpec& w) {
  if (!(A > 0.0) || !std::isfinite(A)) throw InvalidArgument("harmonic_plus trap needs finite A > 0");
  return Trap(Kind::HarmonicPlus, A, 2.0, w);
}

Trap Trap::power(double s) {
  if (!std::isfinite(s)) throw InvalidArgument("power trap exponent must be finite");
  if (s < 2.0) throw InvalidArgument("power trap exponent below 2 does not confine a rotating condensate");
  return Trap(Kind::Power, 1.0, s, WSpec{});
}

double Trap::operator()(double x1, double x2) const noexcept {
  const double r2 = x1 * x1 + x2 * x2;
  switch (kind_) {
    case Kind::Harmonic:
      return A_ * r2;
    case Kind::HarmonicPlus:
      return A_ * r2 + w_(x1, x2);
    case Kind::Power:
      return std::pow(r2, 0.5 * s_);
  }
  return 0.0;
}

RealField Trap::sample(const Grid2D& grid) const {
  if (kind_ == Kind::HarmonicPlus) {
    const double L = grid.half_width();
    const double ratio = std::max(std::abs(w_(L, 0.0)), std::abs(w_.limit())) / (L * L);
    if (!(ratio < 1e-3))
      throw InvalidArgument("W/|x|^2 = " + format_double(ratio) + " at |x| = L; enlarge the box or shrink W");
  }
  return RealField::sample(grid, [this](double x1, double x2) { return (*this)(x1, x2); });
}

std::string Trap::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Harmonic:
      os << "harmonic(A=" << A_ << ")";
      break;
    case Kind::Power:
      os << "power(s=" << s_ << ")";
      break;
    case Kind::HarmonicPlus:
      os << "harmonic_plus(A=" << A_ << ", W=";
      if (w_.kind == WSpec::Kind::Constant)
        os << w_.amplitude;
      else
        os << w_.far_field << (w_.sign > 0 ? "+" : "-") << w_.amplitude
           << (w_.kind == WSpec::Kind::RadialBump ? "*exp(-r^2)" : "*(1+r^2)^(-" + format_double(w_.exponent) + "/2)");
      os << ")";
      break;
  }
  return os.str();
}

double critical_velocity(const Trap& t) {
  switch (t.kind()) {
    case Trap::Kind::Harmonic:
    case Trap::Kind::HarmonicPlus:
      return 2.0 * std::sqrt(t.stiffness());
    case Trap::Kind::Power:
      return t.exponent() == 2.0 ? 2.0 : std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

namespace {

int sign_from(const Config& cfg) {
  const Config::Entry* e = cfg.find("trap", "w_sign");
  if (!e) return -1;
  if (e->value == "+1" || e->value == "1" || e->value == "+") return 1;
  if (e->value == "-1" || e->value == "-") return -1;
  throw ConfigError("w_sign must be +1 or -1", e->line, "trap.w_sign");
}

template <typename Make>
auto checked(const Config& cfg, const std::string& key, Make&& make) {
  try {
    return make();
  } catch (const InvalidArgument& ex) {
    const Config::Entry* e = cfg.find("trap", key);
    throw ConfigError(ex.what(), e ? e->line : 0, "trap." + key);
  }
}

}  // namespace

Trap trap_from_config(const Config& cfg) {
  const std::string kind = cfg.get_string("trap", "kind", "harmonic");
  if (kind == "harmonic") {
    const double A = cfg.get_double("trap", "A", 1.0);
    return checked(cfg, "A", [&] { return Trap::harmonic(A); });
  }
  if (kind == "power") {
    const double s = cfg.get_double("trap", "s", 2.0);
    return checked(cfg, "s", [&] { return Trap::power(s); });
  }
  if (kind == "harmonic_plus") {
    const double A = cfg.get_double("trap", "A", 1.0);
    const std::string wk = cfg.get_string("trap", "w", "constant");
    const double c = cfg.get_double("trap", "w_amplitude", 0.0);
    const double B = cfg.get_double("trap", "w_limit", 0.0);
    const int sign = sign_from(cfg);
    WSpec w;
    if (wk == "constant")
      w = checked(cfg, "w_amplitude", [&] { return WSpec::constant(c); });
    else if (wk == "bump")
      w = checked(cfg, "w_amplitude", [&] { return WSpec::bump(c, sign, B); });
    else if (wk == "tail") {
      const double s = cfg.get_double("trap", "w_exponent", 1.0);
      w = checked(cfg, "w_exponent", [&] { return WSpec::tail(c, sign, s, B); });
    } else {
      const Config::Entry* e = cfg.find("trap", "w");
      throw ConfigError("unknown W family '" + wk + "'", e ? e->line : 0, "trap.w");
    }
    return checked(cfg, "A", [&] { return Trap::harmonic_plus(A, w); });
  }
  const Config::Entry* e = cfg.find("trap", "kind");
  throw ConfigError("unknown trap kind '" + kind + "'", e ? e->line : 0, "trap.kind");
}

void trap_to_config(const Trap& t, Config& cfg) {
  switch (t.kind()) {
    case Trap::Kind::Harmonic:
      cfg.set("trap", "kind", "harmonic");
      cfg.set("trap", "A", format_double(t.stiffness()));
      break;
    case Trap::Kind::Power:
      cfg.set("trap", "kind", "power");
      cfg.set("trap", "s", format_double(t.exponent()));
      break;
    case Trap::Kind::HarmonicPlus: {
      const WSpec& w = t.perturbation();
      cfg.set("trap", "kind", "harmonic_plus");
      cfg.set("trap", "A", format_double(t.stiffness()));
      cfg.set("trap", "w_amplitude", format_double(w.amplitude));
      if (w.kind == WSpec::Kind::Constant) {
        cfg.set("trap", "w", "constant");
        break;
      }
      cfg.set("trap", "w", w.kind == WSpec::Kind::RadialBump ? "bump" : "tail");
      cfg.set("trap", "w_sign", w.sign > 0 ? "+1" : "-1");
      cfg.set("trap", "w_limit", format_double(w.far_field));
      if (w.kind == WSpec::Kind::AlgebraicTail) cfg.set("trap", "w_exponent", format_double(w.exponent));
      break;
    }
  }
}

}  // namespace beclab
