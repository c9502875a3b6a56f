#include "beclab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "beclab/spectral.hpp"

namespace beclab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double d) {
  // to (-pi, pi]
  d = std::remainder(d, kTwoPi);
  return d <= -std::numbers::pi ? d + kTwoPi : d;
}

}  // namespace

ComplexField rotate_phase(const ComplexField& u, double theta) { return u * std::polar(1.0, theta); }

PhaseAlignment align_phase(const ComplexField& u, const RealField& ref) {
  require_same_grid(u.grid(), ref.grid());
  cplx overlap{0.0, 0.0};
  for (std::size_t k = 0; k < u.size(); ++k) overlap += ref[k] * u[k];
  overlap *= u.grid().cell_area();

  PhaseAlignment out;
  double ref_norm = 0.0;
  for (double v : ref.values()) ref_norm += v * v;
  ref_norm = std::sqrt(ref_norm * u.grid().cell_area());
  if (std::abs(overlap) <= 1e-14 * ref_norm * std::sqrt(norm_squared(u))) {
    out.degenerate = true;
  } else {
    out.theta = std::fmod(-std::arg(overlap) + kTwoPi, kTwoPi);
    if (out.theta >= kTwoPi) out.theta = 0.0;
  }
  const cplx phase = std::polar(1.0, out.theta);
  double res = 0.0, orth = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const cplx z = u[k] * phase;
    res += std::norm(z - ref[k]);
    orth += ref[k] * z.imag();
  }
  out.residual_l2 = std::sqrt(res * u.grid().cell_area());
  out.orthogonality = orth * u.grid().cell_area();
  return out;
}

Decomposition decompose(const ComplexField& u, const RealField& ref, const PhaseAlignment& alignment) {
  require_same_grid(u.grid(), ref.grid());
  const ComplexField z = rotate_phase(u, alignment.theta);
  Decomposition d{real_part(z), imag_part(z), RealField(u.grid())};
  for (std::size_t k = 0; k < u.size(); ++k) d.w_dev[k] = d.q[k] - ref[k];
  return d;
}

CoupledResidual residual_coupled_system(const Decomposition& d, double omega, double mu, const GPParams& p,
                                        const Trap& t) {
  const Grid2D& g = d.q.grid();
  const RealField V = t.sample(g);
  const ComplexField q = to_complex(d.q), r = to_complex(d.r);
  const ComplexField lap_q = laplacian(q), lap_r = laplacian(r);
  const ComplexField dq = angular_derivative(q), dr = angular_derivative(r);
  CoupledResidual out;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double dens = d.q[k] * d.q[k] + d.r[k] * d.r[k];
    const double pot = V[k] - mu + p.a * dens;
    const double lq = -lap_q[k].real() + pot * d.q[k];
    const double lr = -lap_r[k].real() + pot * d.r[k];
    out.res_q = std::max(out.res_q, std::abs(lq - omega * dr[k].real()));
    out.res_r = std::max(out.res_r, std::abs(lr + omega * dq[k].real()));
  }
  return out;
}

LinearizedOps::LinearizedOps(RealField u0, double mu0, double a, const Trap& t)
    : u0_(std::move(u0)), mu0_(mu0), a_(a), V_(t.sample(u0_.grid())) {}

RealField LinearizedOps::apply(const RealField& f, double factor) const {
  require_same_grid(f.grid(), u0_.grid());
  const ComplexField lap = laplacian(to_complex(f));
  RealField out(f.grid());
  for (std::size_t k = 0; k < f.size(); ++k)
    out[k] = -lap[k].real() + (V_[k] - mu0_ + factor * a_ * u0_[k] * u0_[k]) * f[k];
  return out;
}

RealField LinearizedOps::apply_L(const RealField& f) const { return apply(f, 1.0); }
RealField LinearizedOps::apply_N(const RealField& f) const { return apply(f, 3.0); }

int VortexReport::significant() const {
  return static_cast<int>(std::count_if(vortices.begin(), vortices.end(), [](const Vortex& v) { return !v.low_density; }));
}

namespace {

// Wrapped phase increments along grid edges, each computed once in the +x or +y
// direction so that adjacent plaquettes see exactly opposite values.
struct EdgePhases {
  int n;
  std::vector<double> hx, hy;  // hx(iy, ix): (iy,ix)->(iy,ix+1); hy(iy, ix): (iy,ix)->(iy+1,ix)

  explicit EdgePhases(const ComplexField& u) : n(u.grid().n()), hx(u.size()), hy(u.size()) {
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const std::size_t k = static_cast<std::size_t>(iy) * n + ix;
        const double a = std::arg(u[k]);
        if (ix + 1 < n) hx[k] = wrap(std::arg(u[k + 1]) - a);
        if (iy + 1 < n) hy[k] = wrap(std::arg(u[k + n]) - a);
      }
  }
  double x(int iy, int ix) const { return hx[static_cast<std::size_t>(iy) * n + ix]; }
  double y(int iy, int ix) const { return hy[static_cast<std::size_t>(iy) * n + ix]; }

  // Counter-clockwise circulation around [ix0, ix1] x [iy0, iy1].
  double circulation(int ix0, int iy0, int ix1, int iy1) const {
    double total = 0.0;
    for (int ix = ix0; ix < ix1; ++ix) total += x(iy0, ix) - x(iy1, ix);
    for (int iy = iy0; iy < iy1; ++iy) total += y(iy, ix1) - y(iy, ix0);
    return total;
  }
};

int to_winding(double circulation) { return static_cast<int>(std::lround(circulation / kTwoPi)); }

}  // namespace

int contour_winding(const ComplexField& u, int ix0, int iy0, int ix1, int iy1) {
  const int n = u.grid().n();
  if (ix0 < 0 || iy0 < 0 || ix1 >= n || iy1 >= n || ix0 >= ix1 || iy0 >= iy1)
    throw InvalidArgument("contour_winding: bad rectangle");
  return to_winding(EdgePhases(u).circulation(ix0, iy0, ix1, iy1));
}

VortexReport vortex_scan(const ComplexField& u, double density_floor) {
  const Grid2D& g = u.grid();
  const int n = g.n();
  const double h = g.spacing();
  const double floor = density_floor * max_abs(u);
  const EdgePhases edges(u);
  std::vector<char> zero(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) zero[k] = u[k] == cplx(0.0, 0.0);
  auto is_zero = [&](int iy, int ix) { return zero[static_cast<std::size_t>(iy) * n + ix] != 0; };
  auto low_density = [&](int iy0, int ix0, int span) {
    for (int dy = 0; dy <= span; ++dy)
      for (int dx = 0; dx <= span; ++dx)
        if (std::abs(u(iy0 + dy, ix0 + dx)) >= floor) return false;
    return true;
  };

  VortexReport rep;
  for (int iy = 0; iy + 1 < n; ++iy) {
    for (int ix = 0; ix + 1 < n; ++ix) {
      if (is_zero(iy, ix) || is_zero(iy, ix + 1) || is_zero(iy + 1, ix) || is_zero(iy + 1, ix + 1)) continue;
      const int w = to_winding(edges.circulation(ix, iy, ix + 1, iy + 1));
      if (w != 0) rep.vortices.push_back({g.coord(ix) + 0.5 * h, g.coord(iy) + 0.5 * h, w, low_density(iy, ix, 1)});
    }
  }
  // Exact zeros: the four plaquettes around the node merge into its 3x3 ring.
  for (int iy = 1; iy + 1 < n; ++iy) {
    for (int ix = 1; ix + 1 < n; ++ix) {
      if (!is_zero(iy, ix)) continue;
      const int w = to_winding(edges.circulation(ix - 1, iy - 1, ix + 1, iy + 1));
      if (w != 0) rep.vortices.push_back({g.coord(ix), g.coord(iy), w, low_density(iy - 1, ix - 1, 2)});
    }
  }
  for (const Vortex& v : rep.vortices) rep.total_winding += v.winding;
  return rep;
}

double decay_fit(const ComplexField& u, double r1, double r2) {
  const Grid2D& g = u.grid();
  if (!(r1 >= 0.0 && r2 > r1)) throw InvalidArgument("decay_fit: window must satisfy 0 <= r1 < r2");
  if (r2 > 0.8 * g.half_width() + 1e-12) throw InvalidArgument("decay_fit: window must end inside 0.8 L");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long cnt = 0;
  const int n = g.n();
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const double r = std::hypot(g.coord(ix), g.coord(iy));
      const double m = std::abs(u(iy, ix));
      if (r < r1 || r > r2 || !(m > 0.0)) continue;
      const double y = std::log(m);
      sx += r;
      sy += y;
      sxx += r * r;
      sxy += r * y;
      ++cnt;
    }
  }
  const double det = cnt * sxx - sx * sx;
  if (cnt < 2 || !(det > 0.0)) throw NumericalError("decay_fit: annulus holds no non-zero samples");
  return (cnt * sxy - sx * sy) / det;
}

}  // namespace beclab
