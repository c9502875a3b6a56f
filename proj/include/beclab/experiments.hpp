#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "beclab/config.hpp"
#include "beclab/field.hpp"
#include "beclab/gp_model.hpp"
#include "beclab/minimizer.hpp"
#include "beclab/trap.hpp"

namespace beclab {

enum class ExperimentKind { Townes, Solve, Sweep, SmallOmega, Critical, Trial, Uniqueness };

ExperimentKind experiment_kind_from_string(const std::string& s);
std::string to_string(ExperimentKind k);

/// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<double> a;
  std::optional<double> omega;
  std::optional<std::filesystem::path> out_dir;
  std::optional<int> threads;
};

/// Validated experiment description. Values of a may be written as multiples of
/// the critical mass, e.g. "a = -0.5a*"; they are resolved to absolute numbers here.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Solve;
  Config source;
  Trap trap = Trap::harmonic(1.0);
  GPParams params;
  SolverOptions solver;
  int n = 128;
  double half_width = 10.0;
  std::vector<double> a_values;
  std::vector<double> omega_values;
  std::vector<double> sigmas;     // trial
  double radius_factor = 4.0;     // trial
  int restarts = 3;               // uniqueness
  double seed_width = 1.2;
  std::filesystem::path out_dir = "bec_lab_out";
  bool snapshots = false;
  int threads = 1;
  std::uint64_t seed = 1;
  double a_star = 0.0;

  Grid2D grid() const { return Grid2D(n, half_width); }
};

ExperimentConfig make_experiment(const Config& cfg, ExperimentKind kind, const Overrides& ov = {});

/// Parses one a value, accepting an "a*" suffix.
double parse_interaction(const std::string& text, double a_star, int line, const std::string& key);

/// 64-bit FNV-1a of the text.
std::uint64_t fnv1a(const std::string& text);

/// Runs the experiment, writes its artifacts and record.json into cfg.out_dir and
/// returns the record (config hash, timestamps, environment, results).
nlohmann::json run_experiment(const ExperimentConfig& cfg);

nlohmann::json run_townes(const ExperimentConfig& cfg);
nlohmann::json run_solve(const ExperimentConfig& cfg);
nlohmann::json run_sweep(const ExperimentConfig& cfg);
nlohmann::json run_smallomega(const ExperimentConfig& cfg);
nlohmann::json run_critical(const ExperimentConfig& cfg);
nlohmann::json run_trial(const ExperimentConfig& cfg);
nlohmann::json run_uniqueness(const ExperimentConfig& cfg);

nlohmann::json to_json(const EnergyBreakdown& e);
nlohmann::json to_json(const GroundStateResult& r);

/// Expected existence class for a cell: "exists", "collapse" or "deconfinement".
std::string expected_phase(double a, double omega, double a_star, double omega_star);

/// Re-reads a sweep CSV and checks |mu - (energy + interaction)| <= tol on every row.
/// Returns the largest deviation; throws NumericalError on a violation.
double audit_mu_identity(const std::filesystem::path& csv, double tol = 1e-8);

}  // namespace beclab
