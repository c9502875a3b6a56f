#include "beclab/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace beclab {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
// Plans are created once per grid size and shared.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  PlanPair get(int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    const std::size_t count = static_cast<std::size_t>(n) * n;
    std::vector<cplx> a(count), b(count);
    auto* in = reinterpret_cast<fftw_complex*>(a.data());
    auto* out = reinterpret_cast<fftw_complex*>(b.data());
    // ESTIMATE plans depend only on n, so results are bit-reproducible across runs.
    const unsigned effort = FFTW_ESTIMATE;
    PlanPair p;
    p.forward = fftw_plan_dft_2d(n, n, in, out, FFTW_FORWARD, effort | FFTW_UNALIGNED);
    p.backward = fftw_plan_dft_2d(n, n, in, out, FFTW_BACKWARD, effort | FFTW_UNALIGNED);
    if (!p.forward || !p.backward) throw NumericalError("FFTW failed to create a plan");
    plans_.emplace(n, p);
    return p;
  }

private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void execute(fftw_plan plan, const ComplexField& in, ComplexField& out) {
  // fftw_execute_dft does not modify the input of an out-of-place plan.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data()));
  fftw_execute_dft(plan, src, reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

ComplexField fft_forward(const ComplexField& u) {
  ComplexField out(u.grid());
  execute(plan_cache().get(u.grid().n()).forward, u, out);
  return out;
}

ComplexField fft_backward(const ComplexField& spectrum) {
  ComplexField out(spectrum.grid());
  execute(plan_cache().get(spectrum.grid().n()).backward, spectrum, out);
  out *= cplx(1.0 / static_cast<double>(spectrum.size()), 0.0);
  return out;
}

std::pair<ComplexField, ComplexField> spectral_gradient(const ComplexField& u) {
  const ComplexField spec = fft_forward(u);
  const Grid2D& g = u.grid();
  const int n = g.n();
  ComplexField d1(g), d2(g);
  for (int iy = 0; iy < n; ++iy) {
    const double k2 = g.wavenumber(iy);
    for (int ix = 0; ix < n; ++ix) {
      const cplx c = spec(iy, ix);
      d1(iy, ix) = cplx(0.0, g.wavenumber(ix)) * c;
      d2(iy, ix) = cplx(0.0, k2) * c;
    }
  }
  return {fft_backward(d1), fft_backward(d2)};
}

ComplexField laplacian(const ComplexField& u) {
  return apply_symbol(u, [](double k1, double k2) { return -(k1 * k1 + k2 * k2); });
}

ComplexField angular_derivative(const ComplexField& u) {
  auto [d1, d2] = spectral_gradient(u);
  const Grid2D& g = u.grid();
  const int n = g.n();
  ComplexField out(g);
  for (int iy = 0; iy < n; ++iy) {
    const double x2 = g.coord(iy);
    for (int ix = 0; ix < n; ++ix) out(iy, ix) = -x2 * d1(iy, ix) + g.coord(ix) * d2(iy, ix);
  }
  return out;
}

double kinetic_integral(const ComplexField& u) {
  const ComplexField spec = fft_forward(u);
  const Grid2D& g = u.grid();
  const int n = g.n();
  double acc = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    const double k2 = g.wavenumber(iy);
    for (int ix = 0; ix < n; ++ix) {
      const double k1 = g.wavenumber(ix);
      acc += (k1 * k1 + k2 * k2) * std::norm(spec(iy, ix));
    }
  }
  return acc * g.cell_area() / static_cast<double>(u.size());
}

ComplexField spectral_shift(const ComplexField& u, double dx1, double dx2) {
  // The Nyquist bins carry wavenumber zero here, which keeps real fields real.
  return apply_symbol(u, [&](double k1, double k2) { return std::polar(1.0, k1 * dx1 + k2 * dx2); });
}

}  // namespace beclab
