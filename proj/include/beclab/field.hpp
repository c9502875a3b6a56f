#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "beclab/error.hpp"

namespace beclab {

using cplx = std::complex<double>;

/// Uniform square grid on the periodic box [-L, L)^2 with n points per axis.
///
/// Samples are stored row-major: index = iy * n + ix, with x1 = -L + ix*h and
/// x2 = -L + iy*h.
class Grid2D {
public:
  Grid2D(int n, double half_width);

  int n() const noexcept { return n_; }
  double half_width() const noexcept { return half_width_; }
  double spacing() const noexcept { return spacing_; }
  double cell_area() const noexcept { return spacing_ * spacing_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_; }

  double coord(int i) const noexcept { return -half_width_ + i * spacing_; }

  /// Angular wavenumber of FFT bin i. The Nyquist bin maps to zero so that the
  /// discrete derivative is real-preserving and exactly anti-symmetric.
  double wavenumber(int i) const noexcept;

  friend bool operator==(const Grid2D& a, const Grid2D& b) noexcept {
    return a.n_ == b.n_ && a.half_width_ == b.half_width_;
  }

private:
  int n_;
  double half_width_;
  double spacing_;
};

template <typename T>
class BasicField {
public:
  explicit BasicField(const Grid2D& grid) : grid_(grid), values_(grid.size()) {}

  BasicField(const Grid2D& grid, std::vector<T> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw InvalidArgument("field sample count does not match grid");
  }

  /// Samples f(x1, x2) at every grid node.
  template <typename F>
  static BasicField sample(const Grid2D& grid, F&& f) {
    BasicField out(grid);
    const int n = grid.n();
    for (int iy = 0; iy < n; ++iy) {
      const double x2 = grid.coord(iy);
      for (int ix = 0; ix < n; ++ix) out.values_[static_cast<std::size_t>(iy) * n + ix] = f(grid.coord(ix), x2);
    }
    return out;
  }

  const Grid2D& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  T& operator()(int iy, int ix) noexcept { return values_[static_cast<std::size_t>(iy) * grid_.n() + ix]; }
  const T& operator()(int iy, int ix) const noexcept {
    return values_[static_cast<std::size_t>(iy) * grid_.n() + ix];
  }
  T& operator[](std::size_t k) noexcept { return values_[k]; }
  const T& operator[](std::size_t k) const noexcept { return values_[k]; }

  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }
  T* data() noexcept { return values_.data(); }
  const T* data() const noexcept { return values_.data(); }

  BasicField& operator+=(const BasicField& o) {
    check_grid(o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
    return *this;
  }
  BasicField& operator-=(const BasicField& o) {
    check_grid(o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
    return *this;
  }
  BasicField& operator*=(T s) noexcept {
    for (auto& v : values_) v *= s;
    return *this;
  }

  friend BasicField operator+(BasicField a, const BasicField& b) { return a += b; }
  friend BasicField operator-(BasicField a, const BasicField& b) { return a -= b; }
  friend BasicField operator*(BasicField a, T s) { return a *= s; }
  friend BasicField operator*(T s, BasicField a) { return a *= s; }

private:
  void check_grid(const BasicField& o) const {
    if (!(grid_ == o.grid_)) throw InvalidArgument("fields live on different grids");
  }

  Grid2D grid_;
  std::vector<T> values_;
};

using ComplexField = BasicField<cplx>;
using RealField = BasicField<double>;

void require_same_grid(const Grid2D& a, const Grid2D& b);

/// Rectangle-rule quadrature h^2 * sum conj(u) v.
cplx inner_product(const ComplexField& u, const ComplexField& v);
double norm_squared(const ComplexField& u);
double integrate(const RealField& f);

/// Returns u / ||u||_2. Throws InvalidArgument for a zero (or non-finite) field.
ComplexField normalize(const ComplexField& u);

RealField modulus(const ComplexField& u);
RealField real_part(const ComplexField& u);
RealField imag_part(const ComplexField& u);
ComplexField to_complex(const RealField& f);

double max_abs(const ComplexField& u);
double max_abs(const RealField& f);
bool all_finite(const ComplexField& u);

/// Integral of |u|^4.
double quartic_integral(const ComplexField& u);

/// Fraction of the L2 mass carried by nodes with max(|x1|,|x2|) >= (1 - band) * L.
double boundary_band_mass(const ComplexField& u, double band = 0.1);

/// Largest |u|^2 on the boundary band divided by the largest |u|^2 overall.
double boundary_band_density_ratio(const ComplexField& u, double band = 0.1);

}  // namespace beclab
