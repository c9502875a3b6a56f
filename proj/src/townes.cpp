#include "beclab/townes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "beclab/spectral.hpp"

namespace beclab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Shot { CrossesZero, TurnsUp };

struct State {
  double w, p;
};

State rhs(double r, const State& s) { return {s.p, -s.p / r + s.w - s.w * s.w * s.w}; }

State rk4(double r, const State& s, double h) {
  const State k1 = rhs(r, s);
  const State k2 = rhs(r + 0.5 * h, {s.w + 0.5 * h * k1.w, s.p + 0.5 * h * k1.p});
  const State k3 = rhs(r + 0.5 * h, {s.w + 0.5 * h * k2.w, s.p + 0.5 * h * k2.p});
  const State k4 = rhs(r + h, {s.w + h * k3.w, s.p + h * k3.p});
  return {s.w + h / 6.0 * (k1.w + 2 * k2.w + 2 * k3.w + k4.w), s.p + h / 6.0 * (k1.p + 2 * k2.p + 2 * k3.p + k4.p)};
}

// Series start w = w0 + (w0 - w0^3) r^2 / 4 removes the w'/r singularity.
State series_start(double w0, double r) {
  const double c = (w0 - w0 * w0 * w0) / 4.0;
  return {w0 + c * r * r, 2.0 * c * r};
}

// Any w0 other than the exact one leaves the decaying branch before r ~ 20 in
// double precision, so the cap always yields a decision.
Shot classify(double w0, double dr) {
  constexpr double r_cap = 60.0;
  State s = series_start(w0, dr);
  const auto steps = static_cast<long>(r_cap / dr);
  for (long i = 1; i < steps; ++i) {
    if (s.w < 0.0) return Shot::CrossesZero;
    if (s.p > 0.0) return Shot::TurnsUp;
    s = rk4(static_cast<double>(i) * dr, s, dr);
  }
  throw NumericalError("townes shooting undecided at r = 60");
}

double composite_simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  if (n < 3) return 0.0;
  const std::size_t last = (n - 1) % 2 == 0 ? n - 1 : n - 2;
  double acc = f[0] + f[last];
  for (std::size_t i = 1; i < last; ++i) acc += (i % 2 ? 4.0 : 2.0) * f[i];
  double total = acc * h / 3.0;
  if (last != n - 1) total += 0.5 * h * (f[n - 2] + f[n - 1]);
  return total;
}

struct RadialMoments {
  double mass, grad, quartic;
};

RadialMoments moments(const RadialProfile& p) {
  const std::size_t n = p.r.size();
  std::vector<double> m(n), g(n), q(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w2 = p.w[i] * p.w[i];
    m[i] = w2 * p.r[i];
    g[i] = p.dw[i] * p.dw[i] * p.r[i];
    q[i] = w2 * w2 * p.r[i];
  }
  return {kTwoPi * composite_simpson(m, p.dr), kTwoPi * composite_simpson(g, p.dr),
          kTwoPi * composite_simpson(q, p.dr)};
}

}  // namespace

RadialProfile solve_townes(double dr, double r_max, double tol) {
  if (!(dr > 0.0) || dr > 1e-3) throw InvalidArgument("solve_townes: dr must lie in (0, 1e-3]");
  if (!(r_max >= 12.0)) throw InvalidArgument("solve_townes: r_max must be at least 12");

  double lo = 2.0, hi = 2.5;
  for (int widen = 0; classify(lo, dr) != Shot::TurnsUp; ++widen) {
    if (widen > 20) throw NumericalError("solve_townes: no turning-up shot below 2");
    lo /= 1.25;
  }
  for (int widen = 0; classify(hi, dr) != Shot::CrossesZero; ++widen) {
    if (widen > 20) throw NumericalError("solve_townes: no zero-crossing shot above 2.5");
    hi *= 1.25;
  }

  for (int it = 0; hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at adjacent doubles
    if (it > 200)
      throw NumericalError("solve_townes: bisection did not converge, last bracket [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
    (classify(mid, dr) == Shot::TurnsUp ? lo : hi) = mid;
  }

  // Integrate the undershooting side and cut the profile where it leaves the
  // decaying branch; beyond that point w is below double-precision resolution.
  RadialProfile prof;
  prof.dr = dr;
  prof.w0 = lo;
  const auto count = static_cast<std::size_t>(std::llround(r_max / dr)) + 1;
  prof.r.resize(count);
  prof.w.assign(count, 0.0);
  prof.dw.assign(count, 0.0);
  for (std::size_t i = 0; i < count; ++i) prof.r[i] = static_cast<double>(i) * dr;
  prof.w[0] = lo;
  State s = series_start(lo, dr);
  for (std::size_t i = 1; i < count; ++i) {
    if (s.w <= 0.0 || s.p > 0.0) break;
    prof.w[i] = s.w;
    prof.dw[i] = s.p;
    s = rk4(prof.r[i], s, dr);
  }
  return prof;
}

TownesConstants critical_mass(const RadialProfile& p) {
  if (p.r.size() < 3) throw InvalidArgument("critical_mass: empty profile");
  const RadialMoments m = moments(p);
  TownesConstants c;
  c.a_star = m.mass;
  c.identity_residuals = {std::abs(m.grad / m.mass - 1.0), std::abs(m.quartic / (2.0 * m.mass) - 1.0),
                          std::abs(2.0 * m.grad / m.quartic - 1.0)};
  c.converged = std::all_of(c.identity_residuals.begin(), c.identity_residuals.end(),
                            [](double res) { return res < 1e-5; });

  // Least-squares slope of log(sqrt(r) w) on [6, 10].
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = 0; i < p.r.size(); ++i) {
    if (p.r[i] < 6.0 || p.r[i] > 10.0 || p.w[i] <= 0.0) continue;
    const double y = std::log(p.w[i]) + 0.5 * std::log(p.r[i]);
    sx += p.r[i];
    sy += y;
    sxx += p.r[i] * p.r[i];
    sxy += p.r[i] * y;
    ++cnt;
  }
  if (cnt > 1) c.decay_rate = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return c;
}

double gn_sharpness_check(const RadialProfile& p, double a_star) {
  const RadialMoments m = moments(p);
  return m.quartic * a_star / (2.0 * m.grad * m.mass);
}

double gn_sharpness_check(const RadialProfile& p) { return gn_sharpness_check(p, critical_mass(p).a_star); }

RealField embed_profile(const RadialProfile& p, const Grid2D& grid, double scale, double amplitude) {
  const double r_end = p.r.back();
  return RealField::sample(grid, [&](double x1, double x2) {
    const double r = scale * std::hypot(x1, x2);
    if (r >= r_end) return 0.0;
    const auto i = static_cast<std::size_t>(r / p.dr);
    const double t = (r - p.r[i]) / p.dr;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return amplitude * (h00 * p.w[i] + h10 * p.dr * p.dw[i] + h01 * p.w[i + 1] + h11 * p.dr * p.dw[i + 1]);
  });
}

SpectralTownes townes_spectral_relaxation(const Grid2D& grid, double tol, int max_iter) {
  ComplexField w = ComplexField::sample(grid, [](double x1, double x2) {
    return cplx(2.0 * std::exp(-0.5 * (x1 * x1 + x2 * x2)), 0.0);
  });
  const int n = grid.n();
  SpectralTownes out{RealField(grid)};
  for (int it = 1; it <= max_iter; ++it) {
    ComplexField cube(grid);
    for (std::size_t k = 0; k < w.size(); ++k) cube[k] = std::norm(w[k]) * w[k];
    const ComplexField w_hat = fft_forward(w);
    ComplexField c_hat = fft_forward(cube);

    // Stabilizing factor M = <w, (1 - Lap) w> / <w, w^3>, exponent 3/2 for the cubic term.
    double num = 0.0, den = 0.0;
    for (int iy = 0; iy < n; ++iy) {
      const double k2 = grid.wavenumber(iy);
      for (int ix = 0; ix < n; ++ix) {
        const double k1 = grid.wavenumber(ix);
        const double sym = 1.0 + k1 * k1 + k2 * k2;
        num += sym * std::norm(w_hat(iy, ix));
        den += std::real(std::conj(w_hat(iy, ix)) * c_hat(iy, ix));
      }
    }
    const double factor = std::pow(num / den, 1.5);
    for (int iy = 0; iy < n; ++iy) {
      const double k2 = grid.wavenumber(iy);
      for (int ix = 0; ix < n; ++ix) {
        const double k1 = grid.wavenumber(ix);
        c_hat(iy, ix) *= factor / (1.0 + k1 * k1 + k2 * k2);
      }
    }
    ComplexField next = fft_backward(c_hat);
    for (auto& z : next.values()) z = cplx(z.real(), 0.0);
    double diff = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) diff = std::max(diff, std::abs(next[k] - w[k]));
    w = std::move(next);
    out.iterations = it;
    out.update_norm = diff;
    if (diff < tol) break;
  }
  if (out.update_norm >= tol) throw NumericalError("townes_spectral_relaxation: no convergence");
  out.w = real_part(w);
  out.a_star = norm_squared(w);
  return out;
}

}  // namespace beclab
