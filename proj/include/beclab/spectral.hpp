#pragma once

#include <utility>

#include "beclab/field.hpp"

namespace beclab {

// Fourier-space coefficients of a field, in FFTW ordering on the same grid.
// Stored as a ComplexField so the bin layout matches the physical layout.
ComplexField fft_forward(const ComplexField& u);
// Inverse of fft_forward (includes the 1/n^2 normalization).
ComplexField fft_backward(const ComplexField& spectrum);

/// Returns (d/dx1 u, d/dx2 u) by Fourier differentiation with periodic extension.
std::pair<ComplexField, ComplexField> spectral_gradient(const ComplexField& u);

ComplexField laplacian(const ComplexField& u);

/// x_perp . grad u with x_perp = (-x2, x1), i.e. the angular derivative d/dtheta.
ComplexField angular_derivative(const ComplexField& u);

/// Integral of |grad u|^2, evaluated in Fourier space (Parseval).
double kinetic_integral(const ComplexField& u);

/// Returns x -> u(x + offset) by a Fourier phase ramp. Exact for band-limited
/// periodic fields; callers are responsible for checking support.
ComplexField spectral_shift(const ComplexField& u, double dx1, double dx2);

/// Multiplies the spectrum of u by symbol(k1, k2) and transforms back.
template <typename Symbol>
ComplexField apply_symbol(const ComplexField& u, Symbol&& symbol) {
  ComplexField spec = fft_forward(u);
  const Grid2D& g = u.grid();
  const int n = g.n();
  for (int iy = 0; iy < n; ++iy) {
    const double k2 = g.wavenumber(iy);
    for (int ix = 0; ix < n; ++ix) spec(iy, ix) *= symbol(g.wavenumber(ix), k2);
  }
  return fft_backward(spec);
}

}  // namespace beclab
