#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "conlap/bundles.hpp"
#include "conlap/eigensolver.hpp"
#include "conlap/nets.hpp"

namespace conlap {

struct ScaleLevel {
  double rho = 0.0;
  double eps = 0.0;  // declared target covering radius
};

struct ExperimentConfig {
  BundleModel bundle =
      BundleModel::trivial_real(ManifoldModel::flat_torus({1.0, 1.0}), 1);
  int k = 6;
  std::vector<ScaleLevel> levels;
  enum class NetKind { Fps, Grid } net_kind = NetKind::Fps;
  int grid_points_per_dim = 0;  // grid nets: 0 -> derived from eps
  std::int64_t mc_samples = 0;  // Voronoi-measure samples; 0 -> 400 * N
  std::uint64_t seed = 1;
  double tol = 1e-8;
  int max_iter = 0;  // 0 -> 500*k + 3000 (room for deflation restarts)
  EigenOptions::Method method = EigenOptions::Method::Auto;
};

/// One comparison row: a single eigenvalue at one scale level (CSV row).
struct LevelRow {
  int level = 0;
  double rho = 0.0;
  double eps = 0.0;
  int n_points = 0;
  int rank = 1;
  double covering_radius = 0.0;
  double separation = 0.0;
  int k_index = 1;  // 1-based
  double lambda_tilde = 0.0;
  double lambda_analytic = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;  // relative to analytic; absolute when analytic == 0
  double residual = 0.0;
  bool regime_eps_ok = false;     // eps < rho / 4
  bool regime_lambda_ok = false;  // analytic lambda < rho^-2 / 16
  double wall_ms = 0.0;
};

struct LevelResult {
  int level = 0;
  double rho = 0.0;
  double eps = 0.0;
  int n_points = 0;
  int rank = 1;
  double covering_radius = 0.0;
  double separation = 0.0;
  double lambda_bound = 0.0;   // Gershgorin scale of the assembled operator
  double essential_gap = 0.0;  // spectral floor diagnostic a(rho, alpha, beta)
  double wall_ms = 0.0;
  bool failed = false;
  std::string error;
  SpectrumResult spectrum;
  std::vector<double> analytic;
  std::vector<LevelRow> rows;
};

struct ConvergenceReport {
  std::vector<LevelResult> levels;
  /// decay_orders[t][i] = log2(err_t / err_{t+1}) for eigenvalue index i
  /// across the level transition t -> t+1 (clamped to [-64, 64]).
  std::vector<std::vector<double>> decay_orders;
  /// Per eigenvalue index: errors strictly decreasing across all levels.
  std::vector<bool> decay_monotone;
};

/// Net for one scale level: farthest-point net with Monte Carlo Voronoi
/// measures, or an equal-measure grid whose exact covering radius is the
/// declared eps (pitch 2*eps/sqrt(n) per axis).
Net build_level_net(const ExperimentConfig& cfg, const ScaleLevel& level,
                    std::uint64_t seed);

/// Single-scale pipeline (levels[0]): net -> measures -> operator ->
/// spectrum -> comparison rows against the analytic spectrum.  Throws
/// ConfigError for invalid configs, RegimeError when the net cannot support
/// the scale (N < 2, 4*covering >= rho, or rho >= r_inj), SolverError when
/// eigenpairs fail to converge.
LevelResult run_spectrum(const ExperimentConfig& cfg);

/// Multi-scale sweep (>= 3 levels).  A level that throws is recorded as
/// failed with its message and the sweep continues; decay orders and
/// monotonicity are computed over the successful levels.
ConvergenceReport run_convergence_sweep(const ExperimentConfig& cfg);

/// Contiguous clusters of an ascending list: a new cluster starts whenever
/// the gap between consecutive values exceeds `gap`.  Returns (first index,
/// count) per cluster.
std::vector<std::pair<int, int>> cluster_partition(
    const std::vector<double>& ascending, double gap);

struct LemmaCheck {
  std::string name;
  bool pass = false;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string witness;  // inputs and margins backing the verdict
};

struct LemmaReport {
  std::vector<LemmaCheck> checks;
  bool all_pass = true;
};

/// Numeric inequality battery:
///  - transport path comparison on the sphere tangent bundle (two- and
///    three-leg paths vs the direct geodesic, curvature * (rho + 2 eps) * eps
///    bound, 1e-10 slack);
///  - continuum pair-energy bound D^rho(u) <= (nu_n/(n+2)) rho^{n+2}
///    ||grad u||^2 for analytic flat-model modes (closed forms both sides);
///  - discretized-mode energy vs the continuum energy at radius rho + 2 eps
///    with factor (1 + 2 rho^2) (flat, zero curvature term);
///  - extension energy at radius rho - 2 eps vs the discrete energy with
///    factor (1 + 2 rho^2) (flat; Monte Carlo left side, 3 sigma allowance);
///  - smoothing lower bound theta_max ||I u||^2 >= theta_min ||u||^2 -
///    (n+2)/(2 nu_n rho^n) * sum mu mu |Gamma|^2, exact at net scale.
LemmaReport verify_lemma_suite(std::uint64_t seed);

}  // namespace conlap
