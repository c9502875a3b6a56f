#pragma once

#include <cmath>
#include <random>

#include "beclab/field.hpp"

namespace testing_support {

// Smooth, decaying, complex random field: a sum of Gaussian blobs with random
// centers, widths and complex amplitudes. Band-limited on the grids used in tests.
inline beclab::ComplexField random_smooth_field(const beclab::Grid2D& g, unsigned seed, int blobs = 4,
                                                 double spread = 2.5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-spread, spread), width(0.7, 1.4), amp(-1.0, 1.0);
  struct Blob {
    double c1, c2, s;
    beclab::cplx a;
  };
  std::vector<Blob> bs;
  for (int b = 0; b < blobs; ++b) bs.push_back({pos(rng), pos(rng), width(rng), {amp(rng), amp(rng)}});
  return beclab::ComplexField::sample(g, [&](double x1, double x2) {
    beclab::cplx acc{0.0, 0.0};
    for (const auto& b : bs) {
      const double d1 = x1 - b.c1, d2 = x2 - b.c2;
      acc += b.a * std::exp(-(d1 * d1 + d2 * d2) / (2 * b.s * b.s));
    }
    return acc;
  });
}

inline beclab::RealField random_smooth_real_field(const beclab::Grid2D& g, unsigned seed, int blobs = 4) {
  return beclab::real_part(random_smooth_field(g, seed, blobs));
}

}  // namespace testing_support
