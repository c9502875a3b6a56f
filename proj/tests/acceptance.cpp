// Acceptance runner: `acceptance --criterion N` checks criterion N (1..7) and
// prints detail lines followed by a single "ACn PASS" or "ACn FAIL" line.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "beclab/diagnostics.hpp"
#include "beclab/experiments.hpp"
#include "beclab/gp_model.hpp"
#include "beclab/minimizer.hpp"
#include "beclab/townes.hpp"
#include "beclab/trial_states.hpp"
#include "test_support.hpp"

using namespace beclab;
using nlohmann::json;

namespace {

class Criterion {
public:
  explicit Criterion(int id) : id_(id), start_(std::chrono::steady_clock::now()) {}

  void check(bool ok, const std::string& what) {
    std::printf("  [%s] %s\n", ok ? "ok" : "!!", what.c_str());
    all_ &= ok;
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  int finish(double budget_s) {
    const double t = elapsed();
    check(t < budget_s, fmt("runtime %.1f s < %.0f s", t, budget_s));
    std::printf("AC%d %s\n", id_, all_ ? "PASS" : "FAIL");
    std::fflush(stdout);
    return all_ ? 0 : 1;
  }

  template <typename... Args>
  static std::string fmt(const char* f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
  }

private:
  int id_;
  bool all_ = true;
  std::chrono::steady_clock::time_point start_;
};

double a_star() {
  static const double v = critical_mass(solve_townes(1e-4, 16.0)).a_star;
  return v;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "beclab_acceptance" / name;
  std::filesystem::create_directories(dir);
  return dir;
}

ExperimentConfig experiment(const std::string& text, ExperimentKind kind, const std::string& dir) {
  Overrides ov;
  ov.out_dir = scratch(dir);
  return make_experiment(Config::parse(text), kind, ov);
}

std::string four_digits(double v) { return Criterion::fmt("%.4g", v); }

// ---------------------------------------------------------------------------

int townes_constants() {
  Criterion c(1);
  const RadialProfile p = solve_townes(1e-4, 16.0);
  const TownesConstants k = critical_mass(p);
  const SpectralTownes s = townes_spectral_relaxation(Grid2D(256, 20.0));
  std::printf("  a* shooting %.12f, spectral %.12f\n", k.a_star, s.a_star);
  c.check(four_digits(k.a_star) == four_digits(s.a_star), "shooting and spectral a* agree to 4 significant digits");
  for (std::size_t i = 0; i < k.identity_residuals.size(); ++i)
    c.check(k.identity_residuals[i] <= 1e-5, Criterion::fmt("identity %zu relative residual %.3g", i + 1, k.identity_residuals[i]));
  const double gn = gn_sharpness_check(p, k.a_star);
  c.check(std::abs(gn - 1.0) <= 1e-5, Criterion::fmt("GN ratio at the ground state %.12f", gn));
  return c.finish(60.0);
}

int harmonic_benchmark() {
  Criterion c(2);
  const Grid2D g(128, 10.0);
  const Trap t = Trap::harmonic(1.0);
  const ComplexField exact = gaussian_state(g);
  SolverOptions o;
  struct Case {
    double omega, width, noise;
  };
  for (const Case& cs : {Case{0.0, 1.0, 1e-4}, Case{2.0, 1.5, 0.0}}) {
    const GroundStateResult r = minimize(make_seed(g, SeedKind::Gaussian, 1, cs.width, cs.noise), GPParams{0.0, cs.omega}, t, o);
    const PhaseAlignment al = align_phase(r.field, real_part(exact));
    const double sup = max_abs(rotate_phase(r.field, al.theta) - exact);
    c.check(r.status == SolveStatus::Converged,
            Criterion::fmt("Omega=%g status %s after %ld iterations%s", cs.omega, to_string(r.status).c_str(), r.iters,
                           r.box_confined ? " (box-confined)" : ""));
    c.check(std::abs(r.breakdown.total - 2.0) <= 5e-6, Criterion::fmt("Omega=%g energy %.12f", cs.omega, r.breakdown.total));
    c.check(sup <= 1e-5, Criterion::fmt("Omega=%g sup distance to the Gaussian %.3g", cs.omega, sup));
  }
  return c.finish(120.0);
}

int small_omega() {
  Criterion c(3);
  for (const char* a : {"-0.5a*", "0", "5"}) {
    const std::string text = std::string("[params]\na = ") + a + "\n[sweep]\nomega = 0.2, 0.1, 0.05, 0.025\n";
    const json j = run_smallomega(experiment(text, ExperimentKind::SmallOmega, std::string("smallomega_") + a));
    std::printf("  a = %s\n", a);
    for (const json& row : j["rows"])
      std::printf("    Omega %-6g gap %+.3e  |r|inf %.3e  dmu %+.3e  vortices %d  %s\n", row["omega"].get<double>(),
                  row["gap"].get<double>(), row["r_inf"].get<double>(), row["dmu"].get<double>(),
                  row["vortices"].get<int>(), row["status"].get<std::string>().c_str());
    c.check(j["complete"].get<bool>(), "all four cells converged");
    if (!j["complete"].get<bool>()) continue;
    c.check(j["gap_nonnegative"].get<bool>(), "(i) e(a) - e(Omega,a) >= 0 within 10 tol");
    if (j["gap_slope"].is_null())
      c.check(false, Criterion::fmt("(i) log-log gap slope undefined: %d gaps above the floor %.2g",
                                    j["fit_points"].get<int>(), j["gap_floor"].get<double>()));
    else {
      const double slope = j["gap_slope"].get<double>();
      c.check(std::abs(slope - 2.0) <= 0.2, Criterion::fmt("(i) log-log gap slope %.3f", slope));
    }
    c.check(j["vortex_free"].get<bool>(), "(ii) no vortices");
    for (const json& ratio : j["r_halving_ratios"]) {
      if (ratio.is_null())
        c.check(false, Criterion::fmt("(iii) |r|inf ratio undefined: |r|inf below the resolution floor %.2g",
                                      j["r_floor"].get<double>()));
      else
        c.check(std::abs(ratio.get<double>() - 2.0) <= 0.6, Criterion::fmt("(iii) |r|inf ratio on halving %.3f", ratio.get<double>()));
    }
    c.check(j["mu_gap_monotone"].get<bool>(), "(iv) |mu - mu0| shrinks monotonically");
  }
  return c.finish(1200.0);
}

int lattice_trials() {
  Criterion c(4);
  const json j = run_trial(experiment("[trial]\nsigmas = 2, 4, 8\n[sweep]\na = 1, 10\n", ExperimentKind::Trial, "trial"));
  const json& states = j["states"];
  for (const json& s : states) {
    const double cov = s["covariant_kinetic"].get<double>();
    c.check(std::abs(cov - 2.0) <= 1e-6,
            Criterion::fmt("sigma %g (v=%.4f, R=%.2f, %d zeros): covariant kinetic %.12f", s["sigma"].get<double>(),
                           s["v"].get<double>(), s["R"].get<double>(), s["points"].get<int>(), cov));
  }
  for (const json& r : j["quartic_ratios"])
    c.check(r.get<double>() >= 3.0 && r.get<double>() <= 6.0, Criterion::fmt("quartic ratio on sigma doubling %.4f", r.get<double>()));
  const double q_last = states.back()["quartic_integral"].get<double>();
  for (std::size_t ia = 0; ia < states.front()["reports"].size(); ++ia) {
    const double a = states.front()["reports"][ia]["a"].get<double>();
    const double target = 2.0 + a * q_last / 2.0;
    double best = INFINITY, prev = INFINITY;
    bool decreasing = true;
    for (const json& s : states) {
      const double b = s["reports"][ia]["certified_upper_bound"].get<double>();
      std::printf("    a=%g sigma=%g bound %.10f\n", a, s["sigma"].get<double>(), b);
      decreasing &= b < prev;
      prev = b;
      best = std::min(best, b);
    }
    c.check(best <= target + 1e-6, Criterion::fmt("a=%g best bound %.10f vs 2 + a q/2 = %.10f", a, best, target));
    c.check(decreasing && best - 2.0 < 0.2 * (states.front()["reports"][ia]["certified_upper_bound"].get<double>() - 2.0),
            Criterion::fmt("a=%g bounds decrease toward 2", a));
  }
  return c.finish(600.0);
}

int nonexistence() {
  Criterion c(5);
  const Grid2D g(128, 10.0);
  const Trap t = Trap::harmonic(1.0);
  const SolverOptions o;
  const GroundStateResult col = minimize(make_seed(g, SeedKind::Gaussian, 1), GPParams{-1.1 * a_star(), 0.0}, t, o);
  c.check(col.status == SolveStatus::CollapseDetected, "a=-1.1a*, Omega=0: " + to_string(col.status));
  const GroundStateResult dec = minimize(make_seed(g, SeedKind::Gaussian, 1), GPParams{1.0, 2.4}, t, o);
  c.check(dec.status == SolveStatus::DeconfinementDetected, "a=1, Omega=1.2 Omega*: " + to_string(dec.status));

  const json j = run_sweep(experiment("[sweep]\na = -1.1a*, 5\nomega = 0.5, 2.4\n", ExperimentKind::Sweep, "quadrants"));
  for (const json& cell : j["cells"]) {
    const std::string status = cell["status"], expected = cell["expected"];
    const std::string want = expected == "exists" ? "Converged" : expected == "collapse" ? "CollapseDetected" : "DeconfinementDetected";
    c.check(status == want, Criterion::fmt("cell a=%.4g Omega=%g: %s, expected %s", cell["a"].get<double>(),
                                           cell["omega"].get<double>(), status.c_str(), expected.c_str()));
  }
  c.check(j["misclassified"].get<int>() == 0, Criterion::fmt("%d misclassified cells", j["misclassified"].get<int>()));
  return c.finish(600.0);
}

int property_suites() {
  Criterion c(6);
  using testing_support::random_smooth_field;
  const Grid2D g(64, 8.0);
  const double as = a_star();
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  int gn_bad = 0, dia_bad = 0;
  double gn_worst = 0.0, dia_worst = INFINITY;
  for (unsigned s = 0; s < 200; ++s) {
    const double q = gn_quotient(random_smooth_field(g, 7000 + s, 1 + s % 5, 2.0), as);
    gn_worst = std::max(gn_worst, q);
    gn_bad += q > 1.0;
    const double d = check_diamagnetic(normalize(random_smooth_field(g, 9000 + s, 1 + s % 5, 2.0)), 2.0 * unif(rng));
    dia_worst = std::min(dia_worst, d);
    dia_bad += d < -1e-9;
  }
  c.check(gn_bad == 0, Criterion::fmt("GN: %d violations in 200 fields, largest quotient %.6f", gn_bad, gn_worst));
  c.check(dia_bad == 0, Criterion::fmt("diamagnetic: %d violations in 200 fields, smallest gap %.3g", dia_bad, dia_worst));

  const Grid2D gd(128, 10.0);
  const Trap traps[] = {Trap::harmonic(1.0), Trap::power(3.0), Trap::harmonic_plus(1.0, WSpec::bump(1.0, -1.0))};
  double dd_worst = 0.0;
  for (unsigned s = 0; s < 20; ++s) {
    const Trap& t = traps[s % 3];
    const GPParams p{-6.0 + 12.0 * unif(rng), 1.9 * unif(rng)};
    const ComplexField u = normalize(random_smooth_field(gd, 300 + s));
    ComplexField v = random_smooth_field(gd, 1300 + s);
    v -= u * inner_product(u, v);
    const double eps = 1e-6;
    const double fp = energy(normalize(u + v * cplx(eps, 0.0)), p, t).total;
    const double fm = energy(normalize(u - v * cplx(eps, 0.0)), p, t).total;
    const double analytic = 2.0 * inner_product(l2_gradient(u, p, t, chemical_potential(u, p, t)), v).real();
    dd_worst = std::max(dd_worst, std::abs((fp - fm) / (2.0 * eps) - analytic) / std::abs(analytic));
  }
  c.check(dd_worst <= 1e-5, Criterion::fmt("directional derivatives, 20 configurations: worst relative error %.3g", dd_worst));

  double cov_worst = 0.0;
  for (unsigned s = 0; s < 50; ++s) {
    const ComplexField u = normalize(random_smooth_field(gd, 500 + s));
    const GPParams p{-5.0 + 10.0 * unif(rng), 2.0 * unif(rng)};
    const Trap& t = traps[s % 3];
    cov_worst = std::max(cov_worst, std::abs(covariant_energy(u, p, t).total - energy(u, p, t).total));
  }
  c.check(cov_worst <= 1e-9, Criterion::fmt("covariant and standard totals, 50 fields: worst difference %.3g", cov_worst));

  double orth_worst = 0.0;
  for (unsigned s = 0; s < 100; ++s) {
    const ComplexField u = normalize(random_smooth_field(g, 700 + s));
    RealField ref = testing_support::random_smooth_real_field(g, 1700 + s, 3);
    for (auto& x : ref.values()) x = std::abs(x) + 0.1;
    orth_worst = std::max(orth_worst, std::abs(align_phase(u, ref).orthogonality));
  }
  c.check(orth_worst <= 1e-8, Criterion::fmt("phase alignment orthogonality, 100 pairs: worst %.3g", orth_worst));
  return c.finish(600.0);
}

int uniqueness() {
  Criterion c(7);
  struct Case {
    const char* a;
    double omega;
  };
  for (const Case& cs : {Case{"5", 0.05}, Case{"-0.5a*", 0.02}}) {
    const std::string text = std::string("[params]\na = ") + cs.a + "\nomega = " + format_double(cs.omega) + "\n";
    const json j = run_uniqueness(experiment(text, ExperimentKind::Uniqueness, std::string("uniqueness_") + cs.a));
    std::printf("  a=%s Omega=%g energies", cs.a, cs.omega);
    for (const json& e : j["energies"]) std::printf(" %.12f", e.get<double>());
    std::printf("\n");
    c.check(j["converged"].get<int>() == 3, Criterion::fmt("a=%s: %d of 3 restarts converged", cs.a, j["converged"].get<int>()));
    const double d = j["discrepancy"].get<double>();
    c.check(d <= 1e-4, Criterion::fmt("a=%s Omega=%g: aligned sup discrepancy %.3g", cs.a, cs.omega, d));
  }
  return c.finish(600.0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int which = 0;
  app.add_option("--criterion", which, "criterion number")->required()->check(CLI::Range(1, 7));
  CLI11_PARSE(app, argc, argv);
  const std::function<int()> runs[] = {townes_constants, harmonic_benchmark, small_omega, lattice_trials,
                                       nonexistence,     property_suites,    uniqueness};
  try {
    return runs[which - 1]();
  } catch (const std::exception& e) {
    std::printf("  exception: %s\nAC%d FAIL\n", e.what(), which);
    return 1;
  }
}
