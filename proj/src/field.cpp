#include "beclab/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace beclab {

Grid2D::Grid2D(int n, double half_width) : n_(n), half_width_(half_width), spacing_(0.0) {
  if (n < 32 || (n & (n - 1)) != 0) throw InvalidArgument("grid size must be a power of two >= 32");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw InvalidArgument("grid half width must be positive");
  spacing_ = 2.0 * half_width / n;
}

double Grid2D::wavenumber(int i) const noexcept {
  if (i == n_ / 2) return 0.0;
  const int m = i < n_ / 2 ? i : i - n_;
  return std::numbers::pi * m / half_width_;
}

void require_same_grid(const Grid2D& a, const Grid2D& b) {
  if (!(a == b)) throw InvalidArgument("fields live on different grids");
}

cplx inner_product(const ComplexField& u, const ComplexField& v) {
  require_same_grid(u.grid(), v.grid());
  cplx acc{0.0, 0.0};
  for (std::size_t k = 0; k < u.size(); ++k) acc += std::conj(u[k]) * v[k];
  return acc * u.grid().cell_area();
}

double norm_squared(const ComplexField& u) {
  double acc = 0.0;
  for (const auto& z : u.values()) acc += std::norm(z);
  return acc * u.grid().cell_area();
}

double integrate(const RealField& f) {
  double acc = 0.0;
  for (double v : f.values()) acc += v;
  return acc * f.grid().cell_area();
}

ComplexField normalize(const ComplexField& u) {
  const double n2 = norm_squared(u);
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw InvalidArgument("cannot normalize a zero or non-finite field");
  return u * cplx(1.0 / std::sqrt(n2), 0.0);
}

RealField modulus(const ComplexField& u) {
  RealField out(u.grid());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = std::abs(u[k]);
  return out;
}

RealField real_part(const ComplexField& u) {
  RealField out(u.grid());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = u[k].real();
  return out;
}

RealField imag_part(const ComplexField& u) {
  RealField out(u.grid());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = u[k].imag();
  return out;
}

ComplexField to_complex(const RealField& f) {
  ComplexField out(f.grid());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = f[k];
  return out;
}

double max_abs(const ComplexField& u) {
  double m = 0.0;
  for (const auto& z : u.values()) m = std::max(m, std::abs(z));
  return m;
}

double max_abs(const RealField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(const ComplexField& u) {
  return std::all_of(u.values().begin(), u.values().end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

double quartic_integral(const ComplexField& u) {
  double acc = 0.0;
  for (const auto& z : u.values()) {
    const double d = std::norm(z);
    acc += d * d;
  }
  return acc * u.grid().cell_area();
}

namespace {

template <typename Visit>
void for_each_band_node(const Grid2D& g, double band, Visit&& visit) {
  const double edge = (1.0 - band) * g.half_width();
  const int n = g.n();
  for (int iy = 0; iy < n; ++iy) {
    const double ay = std::abs(g.coord(iy));
    for (int ix = 0; ix < n; ++ix) {
      const bool in_band = std::max(ay, std::abs(g.coord(ix))) >= edge;
      visit(static_cast<std::size_t>(iy) * n + ix, in_band);
    }
  }
}

}  // namespace

double boundary_band_mass(const ComplexField& u, double band) {
  double total = 0.0, outer = 0.0;
  for_each_band_node(u.grid(), band, [&](std::size_t k, bool in_band) {
    const double d = std::norm(u[k]);
    total += d;
    if (in_band) outer += d;
  });
  return total > 0.0 ? outer / total : 0.0;
}

double boundary_band_density_ratio(const ComplexField& u, double band) {
  double peak = 0.0, outer = 0.0;
  for_each_band_node(u.grid(), band, [&](std::size_t k, bool in_band) {
    const double d = std::norm(u[k]);
    peak = std::max(peak, d);
    if (in_band) outer = std::max(outer, d);
  });
  return peak > 0.0 ? outer / peak : 0.0;
}

}  // namespace beclab
