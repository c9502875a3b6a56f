#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "beclab/field.hpp"
#include "beclab/gp_model.hpp"
#include "beclab/trap.hpp"

namespace beclab {

struct SolverOptions {
  double tau = 5e-3;                 // pseudo-time step
  long max_iters = 200000;
  double tol = 1e-7;                 // sup-norm of the Euler-Lagrange residual
  double collapse_threshold = 50.0;  // growth factor of integral |u|^4
  double boundary_threshold = 0.05;  // mass fraction in the outer 10% band
  int boundary_patience = 200;       // consecutive steps above boundary_threshold

  void validate() const;
};

SolverOptions solver_options_from_config(const class Config& cfg);
void solver_options_to_config(const SolverOptions& o, Config& cfg);

enum class SolveStatus { Converged, CollapseDetected, DeconfinementDetected, MaxIters };
std::string to_string(SolveStatus s);

struct GroundStateResult {
  explicit GroundStateResult(ComplexField f) : field(std::move(f)) {}

  ComplexField field;
  EnergyBreakdown breakdown;
  double mu = 0.0;
  double residual = 0.0;
  long iters = 0;
  SolveStatus status = SolveStatus::MaxIters;

  double quartic = 0.0;
  double boundary_mass = 0.0;
  bool truncated = false;      // boundary density above 1e-8 of the peak
  bool box_confined = false;   // 0.98 Omega* <= Omega <= Omega*
  double max_energy_rise = 0.0;  // largest step-to-step increase after step 10
  std::vector<double> energy_history;
};

/// Normalized gradient flow
///   u <- normalize(u - P (H u - mu u)),  P = (1/tau + beta - Lap)^{-1},
/// with the Laplacian inverted in Fourier space and the potential, rotation and
/// nonlinearity explicit. beta >= 0 is a stabilizing shift sized so that the
/// explicit terms never exceed the implicit ones.
GroundStateResult minimize(const ComplexField& initial, const GPParams& p, const Trap& t, const SolverOptions& opts);

enum class SeedKind { Gaussian, OffCenterVortex, RandomPhase };

/// Initial fields for cold starts. Every seed carries a small deterministic
/// complex perturbation (relative size `noise`) so no symmetry sector is empty.
ComplexField make_seed(const Grid2D& grid, SeedKind kind, std::uint64_t seed, double width = 1.0,
                       double noise = 1e-4);

struct SweepCell {
  double a = 0.0;
  double omega = 0.0;
};

struct SweepEntry {
  SweepCell cell;
  GroundStateResult result;
  int warm_from = -1;  // index of the warm-start source, -1 for a cold start
};

/// Solves every cell; cells warm-start from the nearest earlier converged
/// neighbour (distance |da| + |dOmega|). Runs on up to `threads` workers and is
/// deterministic: the dependency graph depends only on the cell list.
std::vector<SweepEntry> continuation_sweep(const Grid2D& grid, const std::vector<SweepCell>& cells, const Trap& t,
                                           const SolverOptions& opts, int threads = 1, std::uint64_t seed = 1);

struct UniquenessReport {
  std::vector<SeedKind> seeds;
  std::vector<SolveStatus> statuses;
  std::vector<double> energies;
  double discrepancy = 0.0;  // max sup-norm difference after phase alignment
  int converged = 0;
};

/// Runs k >= 3 cold starts (Gaussian, off-centre vortex, random phase, then
/// further random-phase seeds) and compares converged results after phase alignment.
UniquenessReport multistart_uniqueness_probe(const Grid2D& grid, const GPParams& p, const Trap& t,
                                             const SolverOptions& opts, int k = 3, std::uint64_t seed = 1);

}  // namespace beclab
