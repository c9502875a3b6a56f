#include "beclab/experiments.hpp"

#include <fftw3.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "beclab/diagnostics.hpp"
#include "beclab/snapshot.hpp"
#include "beclab/townes.hpp"
#include "beclab/trial_states.hpp"

namespace beclab {

using nlohmann::json;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"run", {"kind", "seed", "threads", "seed_kind", "seed_width", "restarts"}},
      {"trap", {"kind", "A", "s", "w", "w_amplitude", "w_sign", "w_limit", "w_exponent"}},
      {"params", {"a", "omega"}},
      {"grid", {"n", "L"}},
      {"solver", {"tau", "max_iters", "tol", "collapse_threshold", "boundary_threshold", "boundary_patience"}},
      {"sweep", {"a", "omega"}},
      {"trial", {"sigmas", "radius_factor"}},
      {"output", {"dir", "snapshots"}},
  };
  return keys;
}

void reject_unknown_keys(const Config& cfg) {
  for (const auto& [section, entries] : cfg.sections()) {
    const auto known = known_keys().find(section);
    for (const auto& [key, e] : entries) {
      if (known == known_keys().end()) throw ConfigError("unknown section [" + section + "]", e.line, key);
      if (!known->second.count(key)) throw ConfigError("unknown key", e.line, section + "." + key);
    }
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::vector<double> interaction_list(const Config& cfg, const std::string& section, double a_star,
                                     const std::vector<double>& fallback) {
  const Config::Entry* e = cfg.find(section, "a");
  if (!e) return fallback;
  std::vector<double> out;
  std::stringstream ss(e->value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_interaction(item, a_star, e->line, section + ".a"));
  if (out.empty()) throw ConfigError("empty list", e->line, section + ".a");
  return out;
}

bool parse_bool(const Config& cfg, const std::string& section, const std::string& key, bool fallback) {
  const Config::Entry* e = cfg.find(section, key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
  if (e->value == "false" || e->value == "0" || e->value == "no") return false;
  throw ConfigError("expected true or false", e->line, section + "." + key);
}

int entry_line(const Config& cfg, const std::string& section, const std::string& key) {
  const Config::Entry* e = cfg.find(section, key);
  return e ? e->line : 0;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json num_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string tag(double v) {
  std::string s = format_double(v);
  std::replace(s.begin(), s.end(), '.', 'p');
  std::replace(s.begin(), s.end(), '-', 'm');
  return s;
}

double safe_decay(const ComplexField& u) {
  const double L = u.grid().half_width();
  try {
    return decay_fit(u, 0.6 * L, 0.8 * L);
  } catch (const Error&) {
    return std::nan("");
  }
}

SeedKind seed_kind_from(const Config& cfg) {
  const std::string s = cfg.get_string("run", "seed_kind", "gaussian");
  if (s == "gaussian") return SeedKind::Gaussian;
  if (s == "vortex") return SeedKind::OffCenterVortex;
  if (s == "random_phase") return SeedKind::RandomPhase;
  throw ConfigError("seed_kind must be gaussian, vortex or random_phase", entry_line(cfg, "run", "seed_kind"),
                    "run.seed_kind");
}

// Real, non-negative reference obtained by rotating u onto its own modulus.
RealField real_reference(const ComplexField& u) {
  return real_part(rotate_phase(u, align_phase(u, modulus(u)).theta));
}

int next_pow2(int v) {
  int p = 32;
  while (p < v) p *= 2;
  return p;
}

}  // namespace

ExperimentKind experiment_kind_from_string(const std::string& s) {
  static const std::map<std::string, ExperimentKind> kinds = {
      {"townes", ExperimentKind::Townes},         {"solve", ExperimentKind::Solve},
      {"sweep", ExperimentKind::Sweep},           {"smallomega", ExperimentKind::SmallOmega},
      {"critical", ExperimentKind::Critical},     {"trial", ExperimentKind::Trial},
      {"uniqueness", ExperimentKind::Uniqueness}};
  const auto it = kinds.find(s);
  if (it == kinds.end()) throw ConfigError("unknown experiment kind '" + s + "'", 0, "run.kind");
  return it->second;
}

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Townes:
      return "townes";
    case ExperimentKind::Solve:
      return "solve";
    case ExperimentKind::Sweep:
      return "sweep";
    case ExperimentKind::SmallOmega:
      return "smallomega";
    case ExperimentKind::Critical:
      return "critical";
    case ExperimentKind::Trial:
      return "trial";
    case ExperimentKind::Uniqueness:
      return "uniqueness";
  }
  return "?";
}

double parse_interaction(const std::string& text, double a_star, int line, const std::string& key) {
  std::string t = trim(text);
  double factor = 1.0;
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "a*") == 0) {
    t = trim(t.substr(0, t.size() - 2));
    if (!t.empty() && t.back() == '*') t = trim(t.substr(0, t.size() - 1));
    if (t.empty() || t == "+") t = "1";
    if (t == "-") t = "-1";
    factor = a_star;
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(t, &pos);
    if (pos != t.size() || !std::isfinite(v)) throw std::invalid_argument(t);
    return v * factor;
  } catch (const std::exception&) {
    throw ConfigError("expected a number or a multiple of a*, got '" + trim(text) + "'", line, key);
  }
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string expected_phase(double a, double omega, double a_star, double omega_star) {
  if (omega > omega_star) return "deconfinement";
  if (a <= -a_star) return "collapse";
  return "exists";
}

ExperimentConfig make_experiment(const Config& cfg, ExperimentKind kind, const Overrides& ov) {
  reject_unknown_keys(cfg);
  ExperimentConfig ec;
  ec.kind = kind;
  ec.source = cfg;
  ec.a_star = critical_mass(solve_townes(1e-4, 16.0)).a_star;

  ec.trap = trap_from_config(cfg);
  const Config::Entry* a_entry = cfg.find("params", "a");
  ec.params.a = a_entry ? parse_interaction(a_entry->value, ec.a_star, a_entry->line, "params.a") : 0.0;
  ec.params.omega = cfg.get_double("params", "omega", 0.0);
  if (ov.a) ec.params.a = *ov.a;
  if (ov.omega) ec.params.omega = *ov.omega;
  if (!(ec.params.omega >= 0.0) || !std::isfinite(ec.params.omega))
    throw ConfigError("omega must be finite and non-negative", entry_line(cfg, "params", "omega"), "params.omega");

  ec.solver = solver_options_from_config(cfg);
  ec.n = static_cast<int>(cfg.get_int("grid", "n", 128));
  ec.half_width = cfg.get_double("grid", "L", 10.0);
  try {
    (void)ec.grid();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what(), entry_line(cfg, "grid", "n"), "grid");
  }

  const double omega_star = critical_velocity(ec.trap);
  switch (kind) {
    case ExperimentKind::SmallOmega:
      ec.omega_values = cfg.get_doubles("sweep", "omega", {0.2, 0.1, 0.05, 0.025});
      break;
    case ExperimentKind::Critical:
      ec.omega_values = {omega_star};
      break;
    case ExperimentKind::Trial:
      ec.omega_values = {2.0};
      break;
    default:
      ec.omega_values = cfg.get_doubles("sweep", "omega", {ec.params.omega});
  }
  const std::vector<double> a_default =
      kind == ExperimentKind::Trial ? std::vector<double>{1.0, 10.0} : std::vector<double>{ec.params.a};
  ec.a_values = interaction_list(cfg, "sweep", ec.a_star, a_default);
  if (ov.a && kind != ExperimentKind::Trial) ec.a_values = {*ov.a};
  if (ov.omega && kind == ExperimentKind::Sweep) ec.omega_values = {*ov.omega};
  for (double w : ec.omega_values)
    if (!(w >= 0.0) || !std::isfinite(w))
      throw ConfigError("omega values must be finite and non-negative", entry_line(cfg, "sweep", "omega"), "sweep.omega");

  if (kind == ExperimentKind::SmallOmega) {
    for (double w : ec.omega_values)
      if (w > 0.3 * omega_star || w <= 0.0)
        throw ConfigError("small-omega values must lie in (0, 0.3 Omega*]", entry_line(cfg, "sweep", "omega"),
                          "sweep.omega");
  }
  if (kind == ExperimentKind::Critical && ec.trap.kind() != Trap::Kind::HarmonicPlus)
    throw ConfigError("critical runs need kind = harmonic_plus", entry_line(cfg, "trap", "kind"), "trap.kind");

  ec.sigmas = cfg.get_doubles("trial", "sigmas", {2.0, 4.0, 8.0});
  for (double s : ec.sigmas)
    if (!(s > 1.0)) throw ConfigError("sigma values must exceed 1", entry_line(cfg, "trial", "sigmas"), "trial.sigmas");
  ec.radius_factor = cfg.get_double("trial", "radius_factor", 4.0);
  ec.restarts = static_cast<int>(cfg.get_int("run", "restarts", 3));
  if (kind == ExperimentKind::Uniqueness && ec.restarts < 3)
    throw ConfigError("at least 3 restarts are required", entry_line(cfg, "run", "restarts"), "run.restarts");
  ec.seed_width = cfg.get_double("run", "seed_width", 1.2);
  if (!(ec.seed_width > 0.0)) throw ConfigError("seed_width must be positive", entry_line(cfg, "run", "seed_width"), "run.seed_width");
  ec.seed = static_cast<std::uint64_t>(cfg.get_int("run", "seed", 1));
  ec.threads = static_cast<int>(cfg.get_int("run", "threads", 1));
  if (ov.threads) ec.threads = *ov.threads;
  if (ec.threads < 1) throw ConfigError("threads must be at least 1", entry_line(cfg, "run", "threads"), "run.threads");

  ec.out_dir = cfg.get_string("output", "dir", "bec_lab_out");
  if (ov.out_dir) ec.out_dir = *ov.out_dir;
  ec.snapshots = parse_bool(cfg, "output", "snapshots", false);
  std::error_code err;
  std::filesystem::create_directories(ec.out_dir, err);
  const auto probe = ec.out_dir / ".write_probe";
  {
    std::ofstream test(probe);
    if (err || !test) throw ConfigError("output directory is not writable: " + ec.out_dir.string(), entry_line(cfg, "output", "dir"), "output.dir");
  }
  std::filesystem::remove(probe, err);
  return ec;
}

json to_json(const EnergyBreakdown& e) {
  return {{"kinetic", e.kinetic}, {"potential", e.potential}, {"rotation", e.rotation},
          {"interaction", e.interaction}, {"total", e.total}};
}

json to_json(const GroundStateResult& r) {
  return {{"status", to_string(r.status)},
          {"energy", to_json(r.breakdown)},
          {"mu", r.mu},
          {"residual", r.residual},
          {"iters", r.iters},
          {"quartic", r.quartic},
          {"boundary_mass", r.boundary_mass},
          {"truncated", r.truncated},
          {"box_confined", r.box_confined},
          {"max_energy_rise", r.max_energy_rise}};
}

json run_townes(const ExperimentConfig& cfg) {
  const RadialProfile p = solve_townes(1e-4, 16.0);
  const TownesConstants c = critical_mass(p);
  const SpectralTownes s = townes_spectral_relaxation(Grid2D(256, 20.0));
  json j = {{"w0", p.w0},
            {"a_star", c.a_star},
            {"residuals", c.identity_residuals},
            {"decay_rate", c.decay_rate},
            {"converged", c.converged},
            {"gn_ratio", gn_sharpness_check(p, c.a_star)},
            {"spectral_a_star", s.a_star},
            {"spectral_relative_difference", std::abs(s.a_star - c.a_star) / c.a_star}};
  std::ostringstream csv;
  csv << "r,w\n";
  for (std::size_t i = 0; i < p.r.size(); i += 100) csv << num(p.r[i]) << ',' << num(p.w[i]) << '\n';
  write_text(cfg.out_dir / "townes_profile.csv", csv.str());
  write_json(cfg.out_dir / "townes.json", j);
  return j;
}

json run_solve(const ExperimentConfig& cfg) {
  const Grid2D g = cfg.grid();
  const ComplexField start = make_seed(g, seed_kind_from(cfg.source), cfg.seed, cfg.seed_width);
  const GroundStateResult r = minimize(start, cfg.params, cfg.trap, cfg.solver);
  json j = to_json(r);
  j["a"] = cfg.params.a;
  j["omega"] = cfg.params.omega;
  j["trap"] = cfg.trap.describe();
  j["decay_rate"] = num_or_null(safe_decay(r.field));
  j["vortices"] = vortex_scan(r.field).significant();
  j["mu_identity_error"] = std::abs(r.mu - (r.breakdown.total + r.breakdown.interaction));
  if (cfg.snapshots) write_snapshot(cfg.out_dir / "ground_state.gpf", r.field);
  write_json(cfg.out_dir / "solve.json", j);
  return j;
}

json run_sweep(const ExperimentConfig& cfg) {
  const Grid2D g = cfg.grid();
  std::vector<SweepCell> cells;
  for (std::size_t i = 0; i < cfg.a_values.size(); ++i) {
    // Snake order so consecutive cells differ in one parameter.
    for (std::size_t k = 0; k < cfg.omega_values.size(); ++k) {
      const std::size_t kk = i % 2 == 0 ? k : cfg.omega_values.size() - 1 - k;
      cells.push_back({cfg.a_values[i], cfg.omega_values[kk]});
    }
  }
  const auto rows = continuation_sweep(g, cells, cfg.trap, cfg.solver, cfg.threads, cfg.seed);
  const double omega_star = critical_velocity(cfg.trap);

  std::ostringstream csv;
  csv << "a,omega,status,energy,kinetic,potential,rotation,interaction,mu,residual,iters,decay_rate,box_confined,expected\n";
  json cells_json = json::array();
  int misclassified = 0;
  for (const SweepEntry& e : rows) {
    const GroundStateResult& r = e.result;
    const std::string expected = expected_phase(e.cell.a, e.cell.omega, cfg.a_star, omega_star);
    const bool converged = r.status == SolveStatus::Converged;
    const double decay = converged ? safe_decay(r.field) : std::nan("");
    csv << num(e.cell.a) << ',' << num(e.cell.omega) << ',' << to_string(r.status) << ',' << num(r.breakdown.total)
        << ',' << num(r.breakdown.kinetic) << ',' << num(r.breakdown.potential) << ',' << num(r.breakdown.rotation)
        << ',' << num(r.breakdown.interaction) << ',' << num(r.mu) << ',' << num(r.residual) << ',' << r.iters << ','
        << num(decay) << ',' << (r.box_confined ? 1 : 0) << ',' << expected << '\n';
    const bool wrong = converged ? expected != "exists" : (expected == "exists" && !r.box_confined);
    if (wrong) ++misclassified;
    cells_json.push_back({{"a", e.cell.a},
                          {"omega", e.cell.omega},
                          {"status", to_string(r.status)},
                          {"expected", expected},
                          {"misclassified", wrong},
                          {"warm_from", e.warm_from},
                          {"energy", r.breakdown.total}});
    if (cfg.snapshots && converged)
      write_snapshot(cfg.out_dir / ("sweep_a" + tag(e.cell.a) + "_w" + tag(e.cell.omega) + ".gpf"), r.field);
  }
  const auto csv_path = cfg.out_dir / "sweep.csv";
  write_text(csv_path, csv.str());
  const double audit = audit_mu_identity(csv_path);
  json j = {{"cells", cells_json}, {"misclassified", misclassified}, {"mu_audit_max_error", audit},
            {"a_star", cfg.a_star}, {"omega_star", num_or_null(omega_star)}};
  write_json(cfg.out_dir / "sweep.json", j);
  return j;
}

double audit_mu_identity(const std::filesystem::path& csv, double tol) {
  std::ifstream in(csv);
  if (!in) throw Error("cannot read " + csv.string());
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string h;
    while (std::getline(ss, h, ',')) header.push_back(h);
  }
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error("sweep CSV lacks column " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_mu = col("mu"), c_e = col("energy"), c_i = col("interaction");
  double worst = 0.0;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string v;
    while (std::getline(ss, v, ',')) f.push_back(v);
    const double mu = std::stod(f.at(c_mu)), e = std::stod(f.at(c_e)), inter = std::stod(f.at(c_i));
    const double dev = std::abs(mu - (e + inter));
    worst = std::max(worst, dev);
    if (!(dev <= tol)) throw NumericalError("mu identity violated on CSV row " + std::to_string(row));
  }
  return worst;
}

json run_smallomega(const ExperimentConfig& cfg) {
  const Grid2D g = cfg.grid();
  const double a = cfg.params.a;
  std::vector<double> omegas = cfg.omega_values;
  std::sort(omegas.begin(), omegas.end(), std::greater<>());

  const GroundStateResult base =
      minimize(make_seed(g, SeedKind::Gaussian, cfg.seed, cfg.seed_width), GPParams{a, 0.0}, cfg.trap, cfg.solver);
  if (base.status != SolveStatus::Converged)
    throw NumericalError("smallomega: the Omega = 0 reference did not converge (" + to_string(base.status) + ")");
  const RealField u0 = real_reference(base.field);
  const double e0 = base.breakdown.total, mu0 = base.mu;
  double u0_max = max_abs(u0);

  std::ostringstream csv;
  csv << "omega,energy,gap,r_inf,w_dev_inf,mu,dmu,vortices,min_over_max,status,residual\n";
  json rows = json::array();
  bool complete = true;
  std::vector<double> fit_w, fit_gap, r_inf_list, dmu_list;
  bool gap_nonnegative = true, vortex_free = true;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    const double w = omegas[i];
    // Cold start with a symmetry-breaking perturbation; no warm start from u0.
    const ComplexField seed = make_seed(g, SeedKind::RandomPhase, cfg.seed + 101 * (i + 1), cfg.seed_width);
    const GroundStateResult r = minimize(seed, GPParams{a, w}, cfg.trap, cfg.solver);
    const bool ok = r.status == SolveStatus::Converged;
    const PhaseAlignment al = align_phase(r.field, u0);
    const Decomposition d = decompose(r.field, u0, al);
    const double gap = e0 - r.breakdown.total;
    const double r_inf = max_abs(d.r), w_inf = max_abs(d.w_dev);
    const int vort = vortex_scan(r.field).significant();
    double lo = INFINITY, hi = 0.0;
    for (std::size_t k = 0; k < u0.size(); ++k) {
      if (u0[k] < 1e-3 * u0_max) continue;
      const double m = std::abs(r.field[k]);
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    csv << num(w) << ',' << num(r.breakdown.total) << ',' << num(gap) << ',' << num(r_inf) << ',' << num(w_inf) << ','
        << num(r.mu) << ',' << num(r.mu - mu0) << ',' << vort << ',' << num(lo / hi) << ',' << to_string(r.status)
        << ',' << num(r.residual) << '\n';
    rows.push_back({{"omega", w},
                    {"energy", r.breakdown.total},
                    {"gap", gap},
                    {"r_inf", r_inf},
                    {"w_dev_inf", w_inf},
                    {"mu", r.mu},
                    {"dmu", r.mu - mu0},
                    {"vortices", vort},
                    {"min_over_max", lo / hi},
                    {"status", to_string(r.status)},
                    {"residual", r.residual}});
    if (!ok) {
      complete = false;
      break;
    }
    if (gap < -10.0 * cfg.solver.tol) gap_nonnegative = false;
    if (vort != 0) vortex_free = false;
    fit_w.push_back(w);
    fit_gap.push_back(gap);
    r_inf_list.push_back(r_inf);
    dmu_list.push_back(std::abs(r.mu - mu0));
  }
  write_text(cfg.out_dir / "smallomega.csv", csv.str());

  json j = {{"a", a}, {"e0", e0}, {"mu0", mu0}, {"rows", rows}, {"complete", complete}};
  // Gaps at or below the energy resolution carry no slope information.
  const double floor = 1e-11 * std::max(1.0, std::abs(e0));
  j["gap_floor"] = floor;
  if (complete) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < fit_w.size(); ++i) {
      if (!(fit_gap[i] > floor)) continue;
      const double x = std::log(fit_w[i]), y = std::log(fit_gap[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++m;
    }
    j["fit_points"] = m;
    j["gap_slope"] = m >= 2 ? json((m * sxy - sx * sy) / (m * sxx - sx * sx)) : json(nullptr);
    j["gap_nonnegative"] = gap_nonnegative;
    j["vortex_free"] = vortex_free;
    // Imaginary parts below the solver tolerance are residue of the iteration,
    // so their ratios say nothing about the Omega dependence.
    const double r_floor = 10.0 * cfg.solver.tol;
    j["r_floor"] = r_floor;
    json ratios = json::array();
    for (std::size_t i = 0; i + 1 < r_inf_list.size(); ++i) {
      const bool resolved = r_inf_list[i] > r_floor && r_inf_list[i + 1] > r_floor;
      ratios.push_back(resolved ? json(r_inf_list[i] / r_inf_list[i + 1]) : json(nullptr));
    }
    j["r_halving_ratios"] = ratios;
    bool mono = true;
    for (std::size_t i = 0; i + 1 < dmu_list.size(); ++i)
      if (dmu_list[i + 1] > dmu_list[i] + 10.0 * cfg.solver.tol) mono = false;
    j["mu_gap_monotone"] = mono;
  }
  write_json(cfg.out_dir / "smallomega.json", j);
  return j;
}

json run_critical(const ExperimentConfig& cfg) {
  const double A = cfg.trap.stiffness();
  const double omega_star = critical_velocity(cfg.trap);
  const double B = cfg.trap.perturbation().limit();
  const double threshold = 2.0 * std::sqrt(A) + B;
  const Grid2D coarse = cfg.grid();
  const Grid2D wide(2 * cfg.n, 2.0 * cfg.half_width);

  // Trial states in the lowest Landau level of the harmonic part.
  const double ell = std::pow(A, -0.25);
  const Grid2D trial_grid(256, std::max(12.0 * ell, 6.0));
  const ComplexField gauss = normalize(ComplexField::sample(trial_grid, [ell](double x1, double x2) {
    return cplx(std::exp(-0.5 * (x1 * x1 + x2 * x2) / (ell * ell)), 0.0);
  }));

  std::ostringstream csv;
  csv << "a,status_n,status_2n,energy_n,energy_2n,boundary_mass_n,boundary_mass_2n,residual_n,residual_2n,"
         "classification,threshold,gaussian_bound\n";
  json rows = json::array();
  for (double a : cfg.a_values) {
    const GPParams p{a, omega_star};
    const GroundStateResult r1 = minimize(make_seed(coarse, SeedKind::Gaussian, cfg.seed, cfg.seed_width), p, cfg.trap, cfg.solver);
    const GroundStateResult r2 = minimize(make_seed(wide, SeedKind::Gaussian, cfg.seed, cfg.seed_width), p, cfg.trap, cfg.solver);
    std::string cls;
    if (r1.status == SolveStatus::CollapseDetected || r2.status == SolveStatus::CollapseDetected)
      cls = "collapsed";
    else if (r1.status == SolveStatus::Converged && r2.status == SolveStatus::Converged && r1.boundary_mass < 1e-8 &&
             r2.boundary_mass < 1e-8 && std::abs(r1.breakdown.total - r2.breakdown.total) < 1e-4)
      cls = "converged-confined";
    else
      cls = "box-confined/deconfining";
    const double gbound = certify_upper_bound(gauss, p, cfg.trap).certified_upper_bound;
    csv << num(a) << ',' << to_string(r1.status) << ',' << to_string(r2.status) << ',' << num(r1.breakdown.total) << ','
        << num(r2.breakdown.total) << ',' << num(r1.boundary_mass) << ',' << num(r2.boundary_mass) << ','
        << num(r1.residual) << ',' << num(r2.residual) << ',' << cls << ',' << num(threshold) << ',' << num(gbound)
        << '\n';
    rows.push_back({{"a", a},
                    {"classification", cls},
                    {"below_threshold", r1.breakdown.total < threshold && r2.breakdown.total < threshold},
                    {"coarse", to_json(r1)},
                    {"wide", to_json(r2)},
                    {"energy_trend", r2.breakdown.total - r1.breakdown.total},
                    {"gaussian_bound", gbound}});
    if (cfg.snapshots && cls == "converged-confined")
      write_snapshot(cfg.out_dir / ("critical_a" + tag(a) + ".gpf"), r2.field);
  }
  write_text(cfg.out_dir / "critical.csv", csv.str());
  json j = {{"trap", cfg.trap.describe()}, {"omega_star", omega_star}, {"threshold", threshold}, {"rows", rows}};
  write_json(cfg.out_dir / "critical.json", j);
  return j;
}

json run_trial(const ExperimentConfig& cfg) {
  const Trap trap = Trap::harmonic(1.0);
  json states = json::array();
  std::vector<double> quartics;
  for (double sigma : cfg.sigmas) {
    const HexLattice lat = HexLattice::from_sigma(sigma, cfg.radius_factor);
    const double L = std::max(5.0 * sigma + 2.0, lat.R() + 8.0);
    const Grid2D g(next_pow2(static_cast<int>(std::ceil(2.0 * L / 0.1))), L);
    const ComplexField psi = lattice_state(lat, g);
    json reports = json::array();
    double cov = 0.0, q = 0.0;
    for (double a : cfg.a_values) {
      const TrialReport r = certify_upper_bound(psi, GPParams{a, 2.0}, trap);
      cov = r.covariant_kinetic;
      q = r.quartic_integral;
      reports.push_back({{"a", a},
                         {"norm_check", r.norm_check},
                         {"covariant_kinetic", r.covariant_kinetic},
                         {"quartic_integral", r.quartic_integral},
                         {"trap_expectation", r.trap_expectation},
                         {"certified_upper_bound", r.certified_upper_bound}});
    }
    quartics.push_back(q);
    states.push_back({{"sigma", sigma},
                      {"v", lat.v()},
                      {"R", lat.R()},
                      {"cell_area", lat.cell_area()},
                      {"points", lat.points().size()},
                      {"n", g.n()},
                      {"L", g.half_width()},
                      {"covariant_kinetic", cov},
                      {"quartic_integral", q},
                      {"vortex_total_winding", vortex_scan(psi).total_winding},
                      {"reports", reports}});
    if (cfg.snapshots) write_snapshot(cfg.out_dir / ("lattice_sigma" + tag(sigma) + ".gpf"), psi);
  }
  json ratios = json::array();
  for (std::size_t i = 0; i + 1 < quartics.size(); ++i) ratios.push_back(quartics[i] / quartics[i + 1]);
  const ComplexField gauss = gaussian_state(Grid2D(128, 10.0));
  json gaussian = json::array();
  for (double a : cfg.a_values)
    gaussian.push_back({{"a", a}, {"certified_upper_bound", certify_upper_bound(gauss, GPParams{a, 2.0}, trap).certified_upper_bound}});
  json j = {{"states", states}, {"quartic_ratios", ratios}, {"gaussian", gaussian}};
  write_json(cfg.out_dir / "trial.json", j);
  return j;
}

json run_uniqueness(const ExperimentConfig& cfg) {
  const UniquenessReport rep =
      multistart_uniqueness_probe(cfg.grid(), cfg.params, cfg.trap, cfg.solver, cfg.restarts, cfg.seed);
  json statuses = json::array(), seeds = json::array();
  for (SolveStatus s : rep.statuses) statuses.push_back(to_string(s));
  for (SeedKind k : rep.seeds)
    seeds.push_back(k == SeedKind::Gaussian ? "gaussian" : k == SeedKind::OffCenterVortex ? "vortex" : "random_phase");
  json j = {{"a", cfg.params.a},           {"omega", cfg.params.omega},   {"seeds", seeds},
            {"statuses", statuses},        {"energies", rep.energies},    {"converged", rep.converged},
            {"discrepancy", rep.discrepancy}};
  write_json(cfg.out_dir / "uniqueness.json", j);
  return j;
}

json run_experiment(const ExperimentConfig& cfg) {
  const std::string started = utc_now();
  json results;
  switch (cfg.kind) {
    case ExperimentKind::Townes:
      results = run_townes(cfg);
      break;
    case ExperimentKind::Solve:
      results = run_solve(cfg);
      break;
    case ExperimentKind::Sweep:
      results = run_sweep(cfg);
      break;
    case ExperimentKind::SmallOmega:
      results = run_smallomega(cfg);
      break;
    case ExperimentKind::Critical:
      results = run_critical(cfg);
      break;
    case ExperimentKind::Trial:
      results = run_trial(cfg);
      break;
    case ExperimentKind::Uniqueness:
      results = run_uniqueness(cfg);
      break;
  }
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(cfg.source.to_string())));
  json record = {{"kind", to_string(cfg.kind)},
                 {"config_hash", hash},
                 {"started", started},
                 {"finished", utc_now()},
                 {"environment",
                  {{"n", cfg.n},
                   {"L", cfg.half_width},
                   {"tol", cfg.solver.tol},
                   {"tau", cfg.solver.tau},
                   {"max_iters", cfg.solver.max_iters},
                   {"threads", cfg.threads},
                   {"seed", cfg.seed},
                   {"a_star", cfg.a_star},
                   {"fftw", std::string(fftw_version)},
                   {"compiler", std::string(__VERSION__)}}},
                 {"results", results}};
  write_json(cfg.out_dir / "record.json", record);
  return record;
}

}  // namespace beclab
