#include "beclab/minimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <numeric>
#include <numbers>
#include <random>
#include <thread>

#include "beclab/config.hpp"
#include "beclab/diagnostics.hpp"
#include "beclab/spectral.hpp"

namespace beclab {

void SolverOptions::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("solver tau must be positive");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InvalidArgument("solver tol must be positive");
  if (max_iters < 1) throw InvalidArgument("solver max_iters must be at least 1");
  if (!(collapse_threshold > 1.0)) throw InvalidArgument("collapse_threshold must exceed 1");
  if (!(boundary_threshold > 0.0 && boundary_threshold < 1.0))
    throw InvalidArgument("boundary_threshold must lie in (0, 1)");
  if (boundary_patience < 1) throw InvalidArgument("boundary_patience must be at least 1");
}

SolverOptions solver_options_from_config(const Config& cfg) {
  SolverOptions o;
  o.tau = cfg.get_double("solver", "tau", o.tau);
  o.max_iters = cfg.get_int("solver", "max_iters", o.max_iters);
  o.tol = cfg.get_double("solver", "tol", o.tol);
  o.collapse_threshold = cfg.get_double("solver", "collapse_threshold", o.collapse_threshold);
  o.boundary_threshold = cfg.get_double("solver", "boundary_threshold", o.boundary_threshold);
  o.boundary_patience = static_cast<int>(cfg.get_int("solver", "boundary_patience", o.boundary_patience));
  try {
    o.validate();
  } catch (const InvalidArgument& e) {
    // Attribute the failure to the first key named in the message.
    const std::string msg = e.what();
    for (const char* key : {"tau", "tol", "max_iters", "collapse_threshold", "boundary_threshold", "boundary_patience"}) {
      if (msg.find(key) == std::string::npos) continue;
      const Config::Entry* entry = cfg.find("solver", key);
      throw ConfigError(msg, entry ? entry->line : 0, std::string("solver.") + key);
    }
    throw ConfigError(msg, 0, "solver");
  }
  return o;
}

void solver_options_to_config(const SolverOptions& o, Config& cfg) {
  cfg.set("solver", "tau", format_double(o.tau));
  cfg.set("solver", "max_iters", std::to_string(o.max_iters));
  cfg.set("solver", "tol", format_double(o.tol));
  cfg.set("solver", "collapse_threshold", format_double(o.collapse_threshold));
  cfg.set("solver", "boundary_threshold", format_double(o.boundary_threshold));
  cfg.set("solver", "boundary_patience", std::to_string(o.boundary_patience));
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged:
      return "Converged";
    case SolveStatus::CollapseDetected:
      return "CollapseDetected";
    case SolveStatus::DeconfinementDetected:
      return "DeconfinementDetected";
    case SolveStatus::MaxIters:
      return "MaxIters";
  }
  return "?";
}

GroundStateResult minimize(const ComplexField& initial, const GPParams& p, const Trap& t, const SolverOptions& opts) {
  opts.validate();
  const Grid2D& g = initial.grid();
  if (std::abs(norm_squared(initial) - 1.0) > 1e-10) throw InvalidArgument("minimize: initial field is not normalized");
  const double omega_star = critical_velocity(t);
  if (p.omega < 0.0 || p.omega > 1.5 * omega_star)
    throw InvalidArgument("minimize: rotation speed outside [0, 1.5 Omega*]");

  const GPOperator op(g, p, t);
  const int n = g.n();
  const double h = g.spacing();

  // Largest explicit linear coefficient: V plus the part of the rotation term
  // not dominated by the implicit Laplacian.
  double explicit_max = 0.0;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const double x1 = g.coord(ix), x2 = g.coord(iy);
      explicit_max =
          std::max(explicit_max, op.potential()(iy, ix) + 0.25 * p.omega * p.omega * (x1 * x1 + x2 * x2));
    }
  std::vector<double> k2(g.size());
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const double a = g.wavenumber(ix), b = g.wavenumber(iy);
      k2[static_cast<std::size_t>(iy) * n + ix] = a * a + b * b;
    }

  GroundStateResult out(initial);
  out.box_confined = std::isfinite(omega_star) && p.omega >= 0.98 * omega_star && p.omega <= omega_star;
  ComplexField& u = out.field;
  const double q0 = quartic_integral(u);
  int band_streak = 0;

  for (long it = 0;; ++it) {
    const GPOperator::Evaluation ev = op.evaluate(u);
    if (!std::isfinite(ev.energy.total) || !std::isfinite(ev.mu))
      throw NumericalError("minimize: non-finite energy at iteration " + std::to_string(it));
    ComplexField r = ev.h_u;
    double res = 0.0, peak = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      r[k] -= ev.mu * u[k];
      res = std::max(res, std::abs(r[k]));
      peak = std::max(peak, std::norm(u[k]));
    }
    if (it > 10 && !out.energy_history.empty())
      out.max_energy_rise = std::max(out.max_energy_rise, ev.energy.total - out.energy_history.back());
    out.energy_history.push_back(ev.energy.total);
    out.breakdown = ev.energy;
    out.mu = ev.mu;
    out.quartic = ev.quartic;
    out.residual = res;
    out.iters = it;
    out.boundary_mass = boundary_band_mass(u);

    band_streak = out.boundary_mass >= opts.boundary_threshold ? band_streak + 1 : 0;
    if (res <= opts.tol && out.boundary_mass <= opts.boundary_threshold) {
      out.status = SolveStatus::Converged;
      break;
    }
    const double width = 1.0 / std::sqrt(2.0 * std::numbers::pi * ev.quartic);
    if (ev.quartic > opts.collapse_threshold * q0 && width < 4.0 * h) {
      out.status = SolveStatus::CollapseDetected;
      break;
    }
    if (band_streak >= opts.boundary_patience) {
      out.status = SolveStatus::DeconfinementDetected;
      break;
    }
    if (it >= opts.max_iters) break;

    const double beta = std::max(0.0, explicit_max + std::max(p.a, 0.0) * peak - 1.0 / opts.tau);
    const double shift = 1.0 / opts.tau + beta;
    ComplexField spec = fft_forward(r);
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] /= shift + k2[k];
    u -= fft_backward(spec);
    u = normalize(u);
  }
  out.truncated = boundary_band_density_ratio(u) > 1e-8;
  return out;
}

ComplexField make_seed(const Grid2D& grid, SeedKind kind, std::uint64_t seed, double width, double noise) {
  if (!(width > 0.0)) throw InvalidArgument("make_seed: width must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double s2 = 2.0 * width * width;
  ComplexField u(grid);
  switch (kind) {
    case SeedKind::Gaussian:
      u = ComplexField::sample(grid, [&](double x1, double x2) { return cplx(std::exp(-(x1 * x1 + x2 * x2) / s2), 0); });
      break;
    case SeedKind::OffCenterVortex: {
      const cplx c(0.4 * width * (1.0 + 0.25 * uni(rng)), 0.3 * width * (1.0 + 0.25 * uni(rng)));
      u = ComplexField::sample(grid, [&](double x1, double x2) {
        return (cplx(x1, x2) - c) * std::exp(-(x1 * x1 + x2 * x2) / s2);
      });
      break;
    }
    case SeedKind::RandomPhase: {
      // Smooth phase: a few long-wavelength modes with random coefficients.
      double c[6];
      for (double& v : c) v = 1.5 * uni(rng);
      u = ComplexField::sample(grid, [&](double x1, double x2) {
        const double y1 = x1 / width, y2 = x2 / width;
        const double phi = c[0] * y1 + c[1] * y2 + c[2] * y1 * y2 + c[3] * std::sin(y1 + c[4]) + c[5] * std::cos(y2);
        return std::polar(std::exp(-(x1 * x1 + x2 * x2) / s2), phi);
      });
      break;
    }
  }
  if (noise > 0.0) {
    std::normal_distribution<double> nd(0.0, noise * max_abs(u));
    for (auto& z : u.values()) z += cplx(nd(rng), nd(rng));
  }
  return normalize(u);
}

std::vector<SweepEntry> continuation_sweep(const Grid2D& grid, const std::vector<SweepCell>& cells, const Trap& t,
                                           const SolverOptions& opts, int threads, std::uint64_t seed) {
  opts.validate();
  const std::size_t m = cells.size();
  std::vector<SweepEntry> out(m, SweepEntry{{}, GroundStateResult(ComplexField(grid)), -1});
  std::vector<std::promise<void>> done(m);
  std::vector<std::shared_future<void>> ready;
  for (auto& pr : done) ready.push_back(pr.get_future().share());

  auto solve_cell = [&](std::size_t i) {
    const SweepCell& c = cells[i];
    std::vector<std::size_t> order(i);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto dist = [&](std::size_t j) { return std::abs(cells[j].a - c.a) + std::abs(cells[j].omega - c.omega); };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return dist(x) < dist(y); });

    ComplexField start(grid);
    int from = -1;
    for (std::size_t j : order) {
      ready[j].wait();
      if (out[j].result.status == SolveStatus::Converged) {
        from = static_cast<int>(j);
        break;
      }
    }
    const std::uint64_t cell_seed = seed * 0x9E3779B97F4A7C15ull + i;
    if (from >= 0) {
      start = out[from].result.field;
      std::mt19937_64 rng(cell_seed);
      std::normal_distribution<double> nd(0.0, 1e-4 * max_abs(start));
      for (auto& z : start.values()) z += cplx(nd(rng), nd(rng));
      start = normalize(start);
    } else {
      start = make_seed(grid, SeedKind::Gaussian, cell_seed);
    }
    GroundStateResult res = minimize(start, GPParams{c.a, c.omega}, t, opts);
    res.energy_history.clear();
    res.energy_history.shrink_to_fit();
    out[i] = SweepEntry{c, std::move(res), from};
  };

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < m;) {
      try {
        solve_cell(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        out[i].cell = cells[i];
        out[i].result.status = SolveStatus::MaxIters;
      }
      done[i].set_value();
    }
  };
  const int count = std::max(1, std::min<int>(threads, static_cast<int>(m)));
  std::vector<std::thread> pool;
  for (int w = 1; w < count; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

UniquenessReport multistart_uniqueness_probe(const Grid2D& grid, const GPParams& p, const Trap& t,
                                             const SolverOptions& opts, int k, std::uint64_t seed) {
  if (k < 3) throw InvalidArgument("multistart_uniqueness_probe: need at least 3 restarts");
  UniquenessReport rep;
  std::vector<ComplexField> fields;
  for (int i = 0; i < k; ++i) {
    const SeedKind kind = i == 0 ? SeedKind::Gaussian : i == 1 ? SeedKind::OffCenterVortex : SeedKind::RandomPhase;
    const GroundStateResult res = minimize(make_seed(grid, kind, seed + 7919u * i, 1.2), p, t, opts);
    rep.seeds.push_back(kind);
    rep.statuses.push_back(res.status);
    rep.energies.push_back(res.breakdown.total);
    if (res.status == SolveStatus::Converged) {
      ++rep.converged;
      fields.push_back(res.field);
    }
  }
  if (fields.empty()) return rep;
  const ComplexField first = rotate_phase(fields[0], align_phase(fields[0], modulus(fields[0])).theta);
  const RealField ref = real_part(first);
  for (std::size_t i = 1; i < fields.size(); ++i) {
    const ComplexField aligned = rotate_phase(fields[i], align_phase(fields[i], ref).theta);
    rep.discrepancy = std::max(rep.discrepancy, max_abs(aligned - first));
  }
  return rep;
}

}  // namespace beclab
