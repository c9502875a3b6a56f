#include "beclab/gp_model.hpp"

#include <cmath>

#include "beclab/spectral.hpp"

namespace beclab {

GPParams params_from_config(const Config& cfg) {
  GPParams p;
  p.a = cfg.get_double("params", "a", 0.0);
  p.omega = cfg.get_double("params", "omega", 0.0);
  if (!std::isfinite(p.a)) {
    const Config::Entry* e = cfg.find("params", "a");
    throw ConfigError("a must be finite", e ? e->line : 0, "params.a");
  }
  if (!std::isfinite(p.omega) || p.omega < 0.0) {
    const Config::Entry* e = cfg.find("params", "omega");
    throw ConfigError("omega must be finite and non-negative", e ? e->line : 0, "params.omega");
  }
  return p;
}

void params_to_config(const GPParams& p, Config& cfg) {
  cfg.set("params", "a", format_double(p.a));
  cfg.set("params", "omega", format_double(p.omega));
}

namespace {

void require_normalized(const ComplexField& u, const char* who) {
  const double n2 = norm_squared(u);
  if (!(std::abs(n2 - 1.0) <= 1e-10))
    throw InvalidArgument(std::string(who) + ": field is not normalized (||u||^2 = " + format_double(n2) + ")");
}

struct Derivatives {
  ComplexField lap, d1, d2;
  double kinetic;  // Parseval sum of |k|^2 |u_hat|^2
};

Derivatives derivatives(const ComplexField& u, bool with_laplacian) {
  const Grid2D& g = u.grid();
  const int n = g.n();
  const ComplexField spec = fft_forward(u);
  ComplexField s1(g), s2(g), sl(g);
  double kin = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    const double k2 = g.wavenumber(iy);
    for (int ix = 0; ix < n; ++ix) {
      const double k1 = g.wavenumber(ix);
      const cplx c = spec(iy, ix);
      s1(iy, ix) = cplx(-k1 * c.imag(), k1 * c.real());
      s2(iy, ix) = cplx(-k2 * c.imag(), k2 * c.real());
      sl(iy, ix) = -(k1 * k1 + k2 * k2) * c;
      kin += (k1 * k1 + k2 * k2) * std::norm(c);
    }
  }
  const double nn = static_cast<double>(n) * n;
  return {with_laplacian ? fft_backward(sl) : ComplexField(g), fft_backward(s1), fft_backward(s2),
          kin * g.cell_area() / nn};
}

}  // namespace

GPOperator::GPOperator(const Grid2D& grid, const GPParams& p, const Trap& t)
    : grid_(grid), p_(p), V_(t.sample(grid)) {
  if (!std::isfinite(p.a) || !std::isfinite(p.omega)) throw InvalidArgument("GP parameters must be finite");
}

GPOperator::Evaluation GPOperator::evaluate(const ComplexField& u) const {
  require_same_grid(u.grid(), grid_);
  const Derivatives d = derivatives(u, true);
  const int n = grid_.n();
  const double area = grid_.cell_area();
  const double omega = p_.omega, a = p_.a;

  Evaluation ev{ComplexField(grid_), {}, 0.0, 0.0};
  double pot = 0.0, rot = 0.0, quart = 0.0, mass = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    const double x2 = grid_.coord(iy);
    for (int ix = 0; ix < n; ++ix) {
      const double x1 = grid_.coord(ix);
      const std::size_t k = static_cast<std::size_t>(iy) * n + ix;
      const cplx uk = u[k];
      const double dens = std::norm(uk);
      const cplx dtheta = -x2 * d.d1[k] + x1 * d.d2[k];
      pot += V_[k] * dens;
      rot += std::imag(std::conj(uk) * dtheta);
      quart += dens * dens;
      mass += dens;
      ev.h_u[k] = -d.lap[k] + (V_[k] + a * dens) * uk + cplx(-omega * dtheta.imag(), omega * dtheta.real());
    }
  }
  EnergyBreakdown& e = ev.energy;
  e.kinetic = d.kinetic;
  e.potential = pot * area;
  e.rotation = -omega * rot * area;
  e.interaction = 0.5 * a * quart * area;
  e.total = e.kinetic + e.potential + e.rotation + e.interaction;
  ev.quartic = quart * area;
  ev.mu = (e.total + e.interaction) / (mass * area);
  return ev;
}

EnergyBreakdown energy(const ComplexField& u, const GPParams& p, const Trap& t) {
  require_normalized(u, "energy");
  return GPOperator(u.grid(), p, t).evaluate(u).energy;
}

EnergyBreakdown covariant_energy(const ComplexField& u, const GPParams& p, const Trap& t) {
  require_normalized(u, "covariant_energy");
  const Grid2D& g = u.grid();
  const RealField V = t.sample(g);
  const Derivatives d = derivatives(u, false);
  const int n = g.n();
  const double h = 0.5 * p.omega;
  double kin = 0.0, pot = 0.0, quart = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    const double x2 = g.coord(iy);
    for (int ix = 0; ix < n; ++ix) {
      const double x1 = g.coord(ix);
      const std::size_t k = static_cast<std::size_t>(iy) * n + ix;
      const cplx iu(-u[k].imag(), u[k].real());
      // x_perp = (-x2, x1)
      kin += std::norm(d.d1[k] + h * x2 * iu) + std::norm(d.d2[k] - h * x1 * iu);
      const double dens = std::norm(u[k]);
      pot += (V[k] - h * h * (x1 * x1 + x2 * x2)) * dens;
      quart += dens * dens;
    }
  }
  const double area = g.cell_area();
  EnergyBreakdown e;
  e.kinetic = kin * area;
  e.potential = pot * area;
  e.interaction = 0.5 * p.a * quart * area;
  e.total = e.kinetic + e.potential + e.interaction;
  return e;
}

ComplexField l2_gradient(const ComplexField& u, const GPParams& p, const Trap& t, double mu) {
  ComplexField r = GPOperator(u.grid(), p, t).evaluate(u).h_u;
  for (std::size_t k = 0; k < r.size(); ++k) r[k] -= mu * u[k];
  return r;
}

double chemical_potential(const ComplexField& u, const GPParams& p, const Trap& t) {
  require_normalized(u, "chemical_potential");
  const auto ev = GPOperator(u.grid(), p, t).evaluate(u);
  return ev.energy.total + 0.5 * p.a * ev.quartic;
}

std::pair<RealField, RealField> modulus_gradient(const ComplexField& u) {
  const Derivatives d = derivatives(u, false);
  RealField g1(u.grid()), g2(u.grid());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double m = std::abs(u[k]);
    if (m == 0.0) continue;
    g1[k] = std::real(std::conj(u[k]) * d.d1[k]) / m;
    g2[k] = std::real(std::conj(u[k]) * d.d2[k]) / m;
  }
  return {std::move(g1), std::move(g2)};
}

double check_diamagnetic(const ComplexField& u, double omega) {
  const Grid2D& g = u.grid();
  const Derivatives d = derivatives(u, false);
  const int n = g.n();
  const double h = 0.5 * omega;
  double cov = 0.0, modg = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    const double x2 = g.coord(iy);
    for (int ix = 0; ix < n; ++ix) {
      const double x1 = g.coord(ix);
      const std::size_t k = static_cast<std::size_t>(iy) * n + ix;
      const cplx iu(-u[k].imag(), u[k].real());
      cov += std::norm(d.d1[k] + h * x2 * iu) + std::norm(d.d2[k] - h * x1 * iu);
      const double m = std::abs(u[k]);
      if (m > 0.0) {
        const double a1 = std::real(std::conj(u[k]) * d.d1[k]) / m;
        const double a2 = std::real(std::conj(u[k]) * d.d2[k]) / m;
        modg += a1 * a1 + a2 * a2;
      }
    }
  }
  return (cov - modg) * g.cell_area();
}

double gn_quotient(const ComplexField& u, double a_star) {
  const auto [g1, g2] = modulus_gradient(u);
  double grad = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) grad += g1[k] * g1[k] + g2[k] * g2[k];
  grad *= u.grid().cell_area();
  const double mass = norm_squared(u);
  if (!(grad > 0.0) || !(mass > 0.0)) throw InvalidArgument("gn_quotient: degenerate field");
  return a_star * quartic_integral(u) / (2.0 * grad * mass);
}

}  // namespace beclab
