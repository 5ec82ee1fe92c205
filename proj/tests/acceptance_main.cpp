// Acceptance gate: end-to-end checks of the spectral-approximation pipeline.
// Each criterion prints one [PASS]/[FAIL] line with its witness numbers; the
// exit status is the number of failed criteria.  Tolerances are fixed here.

#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "conlap/assembly.hpp"
#include "conlap/bundles.hpp"
#include "conlap/eigensolver.hpp"
#include "conlap/harness.hpp"
#include "conlap/nets.hpp"

using namespace conlap;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct CriterionOutcome {
  bool pass = false;
  std::string detail;
};

Net measured_net(const ManifoldModel& m, double eps, std::uint64_t seed,
                 std::int64_t samples_per_point) {
  Net net = build_net(m, eps, seed);
  estimate_measures(
      m, net, samples_per_point * static_cast<std::int64_t>(net.points.size()),
      seed);
  return net;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(4);
  out << x;
  return out.str();
}

// Criterion 1: three-level grid refinement on the flat 2-torus, trivial real
// line bundle.  The zero mode must be pinned at machine scale on every level,
// the five nonzero eigenvalues (4 pi^2 cluster plus the first 8 pi^2 mode)
// must improve strictly per index across levels and land below 10% relative
// error on the finest level.
CriterionOutcome torus_grid_refinement() {
  ExperimentConfig cfg;
  cfg.bundle = BundleModel::trivial_real(ManifoldModel::flat_torus({1.0, 1.0}), 1);
  cfg.k = 6;
  cfg.levels = {{0.4, 0.05}, {0.2, 0.025}, {0.1, 0.0125}};
  cfg.net_kind = ExperimentConfig::NetKind::Grid;
  cfg.seed = 1;

  const ConvergenceReport report = run_convergence_sweep(cfg);
  CriterionOutcome out;
  if (report.levels.size() != 3) {
    out.detail = "expected 3 levels";
    return out;
  }
  for (const LevelResult& level : report.levels) {
    if (level.failed) {
      out.detail = "level " + std::to_string(level.level) + " failed: " + level.error;
      return out;
    }
    if (std::abs(level.rows.at(0).lambda_tilde) > 1e-6 * level.lambda_bound) {
      out.detail = "zero mode drifted to " + fmt(level.rows[0].lambda_tilde);
      return out;
    }
  }
  const std::vector<double> expected = {4 * kPi * kPi, 4 * kPi * kPi,
                                        4 * kPi * kPi, 4 * kPi * kPi,
                                        8 * kPi * kPi};
  const LevelResult& finest = report.levels.back();
  double worst_finest = 0.0;
  for (int i = 1; i <= 5; ++i) {
    if (std::abs(finest.rows.at(i).lambda_analytic - expected[i - 1]) >
        1e-9 * expected[i - 1]) {
      out.detail = "analytic reference mismatch at index " + std::to_string(i + 1);
      return out;
    }
    worst_finest = std::max(worst_finest, finest.rows[i].rel_err);
    if (!report.decay_monotone.at(i)) {
      out.detail = "error not strictly decreasing for eigenvalue " +
                   std::to_string(i + 1);
      return out;
    }
  }
  if (worst_finest > 0.10) {
    out.detail = "finest-level worst relative error " + fmt(worst_finest);
    return out;
  }
  out.pass = true;
  out.detail = "zero mode <= 1e-6 * bound on all levels, per-index decay strict, "
               "finest worst rel err " + fmt(worst_finest) + " <= 0.10";
  return out;
}

// Criterion 2: U(1) bundle with holonomy 0.25 over the unit circle.  The
// fractional holonomy shifts the Fourier spectrum off zero; both of the two
// smallest eigenvalues must match their closed forms within 10%.
CriterionOutcome shifted_circle_spectrum() {
  ExperimentConfig cfg;
  cfg.bundle = BundleModel::flat_u1(ManifoldModel::flat_torus({1.0}), {0.25});
  cfg.k = 2;
  cfg.levels = {{0.05, 0.00625}};
  cfg.net_kind = ExperimentConfig::NetKind::Grid;
  cfg.grid_points_per_dim = 1000;
  cfg.seed = 1;

  const LevelResult level = run_spectrum(cfg);
  const std::vector<double> expected = {kPi * kPi / 4.0,
                                        4 * kPi * kPi * 0.5625};
  CriterionOutcome out;
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    const LevelRow& row = level.rows.at(i);
    if (std::abs(row.lambda_analytic - expected[i]) > 1e-9 * expected[i]) {
      out.detail = "analytic reference mismatch at index " + std::to_string(i + 1);
      return out;
    }
    worst = std::max(worst, row.rel_err);
  }
  if (worst > 0.10) {
    out.detail = "worst relative error " + fmt(worst);
    return out;
  }
  out.pass = true;
  out.detail = "lambda_1 rel err " + fmt(level.rows[0].rel_err) +
               ", lambda_2 rel err " + fmt(level.rows[1].rel_err) + " <= 0.10";
  return out;
}

// Criterion 3: tangent bundle of the round unit sphere at rho = 0.3.
//  (a) On a mid-size net the iterative solver and the dense reference agree
//      to 1e-8 of the operator scale.
//  (b) A fine farthest-point run recovers the multiplicity-6 bottom cluster
//      (all six within 25% of 1) separated from the next eigenvalue.
//  (c) The worst bottom-cluster error decreases under mesh refinement
//      (eps 0.15 -> 0.11 dense, then the fine run).
CriterionOutcome sphere_tangent_pipeline() {
  const BundleModel bundle = BundleModel::tangent_sphere2(ManifoldModel::sphere2(1.0));
  const double rho = 0.3;
  CriterionOutcome out;

  ExperimentConfig net_cfg;
  net_cfg.bundle = bundle;
  net_cfg.net_kind = ExperimentConfig::NetKind::Fps;
  net_cfg.seed = 3;

  // (a) solver cross-check on the eps = 0.15 net.
  const Net net_coarse = build_level_net(net_cfg, {rho, 0.15}, 3);
  const BlockOperator op_coarse = assemble_graph_laplacian(bundle, net_coarse, rho);
  const SpectrumResult dense_coarse = dense_reference_spectrum(op_coarse);
  EigenOptions lanczos_opts;
  lanczos_opts.method = EigenOptions::Method::Lanczos;
  lanczos_opts.max_iter = 500 * 8 + 3000;
  const SpectrumResult lanczos = smallest_eigenpairs(op_coarse, 8, lanczos_opts);
  const double bound = gershgorin_upper_bound(op_coarse);
  double max_dev = 0.0;
  for (int i = 0; i < 8; ++i) {
    if (!lanczos.converged.at(i)) {
      out.detail = "iterative pair " + std::to_string(i + 1) + " did not converge";
      return out;
    }
    max_dev = std::max(max_dev,
                       std::abs(lanczos.eigenvalues(i) - dense_coarse.eigenvalues(i)));
  }
  if (max_dev > 1e-8 * bound) {
    out.detail = "solver disagreement " + fmt(max_dev) + " vs bound " +
                 fmt(1e-8 * bound);
    return out;
  }

  auto worst_cluster_err = [](const Eigen::VectorXd& values) {
    double worst = 0.0;
    for (int i = 0; i < 6; ++i)
      worst = std::max(worst, std::abs(values(i) - 1.0));
    return worst;
  };
  const double err_eps_015 = worst_cluster_err(dense_coarse.eigenvalues);

  // (c) dense refinement step eps 0.15 -> 0.11.
  const Net net_fine = build_level_net(net_cfg, {rho, 0.11}, 3);
  const BlockOperator op_fine = assemble_graph_laplacian(bundle, net_fine, rho);
  const double err_eps_011 = worst_cluster_err(dense_reference_spectrum(op_fine).eigenvalues);

  // (b) fine farthest-point run.
  ExperimentConfig run_cfg;
  run_cfg.bundle = bundle;
  run_cfg.k = 7;
  run_cfg.levels = {{rho, 0.0375}};
  run_cfg.net_kind = ExperimentConfig::NetKind::Fps;
  run_cfg.seed = 1;
  const LevelResult fine = run_spectrum(run_cfg);
  const std::vector<std::pair<int, int>> clusters =
      cluster_partition(to_vector(fine.spectrum.eigenvalues), 0.15);
  if (clusters.size() != 2 || clusters[0] != std::make_pair(0, 6) ||
      clusters[1] != std::make_pair(6, 1)) {
    out.detail = "bottom cluster is not multiplicity 6 plus a separated mode";
    return out;
  }
  const double err_run = worst_cluster_err(fine.spectrum.eigenvalues);
  if (err_run > 0.25) {
    out.detail = "fine-run cluster error " + fmt(err_run) + " > 0.25";
    return out;
  }
  if (!(err_eps_011 < err_eps_015 && err_run < err_eps_011)) {
    out.detail = "cluster error not improving under refinement: " +
                 fmt(err_eps_015) + " -> " + fmt(err_eps_011) + " -> " + fmt(err_run);
    return out;
  }
  out.pass = true;
  out.detail = "solver dev " + fmt(max_dev) + " <= " + fmt(1e-8 * bound) +
               ", cluster (0,6)+(6,1), errors " + fmt(err_eps_015) + " -> " +
               fmt(err_eps_011) + " -> " + fmt(err_run);
  return out;
}

// Criterion 4: the assembled operator and the pair energy realize the same
// sesquilinear form, <v, A u>_alpha = D(v, u), across bundle types, both for
// the plain normalization and for the general form with non-unitary perturbed
// transports.
CriterionOutcome form_identity() {
  const ManifoldModel torus = ManifoldModel::flat_torus({1.0, 1.0});
  const std::vector<BundleModel> bundles = {
      BundleModel::trivial_real(torus, 1),
      BundleModel::trivial_complex(ManifoldModel::circle(1.0), 2),
      BundleModel::flat_u1(torus, {0.25, 0.5}),
      BundleModel::tangent_sphere2(ManifoldModel::sphere2(1.0)),
  };
  CriterionOutcome out;
  double worst_ratio = 0.0;
  int checked = 0;
  for (const BundleModel& b : bundles) {
    const double rho = (b.kind() == BundleKind::TangentSphere2) ? 1.1 : 0.3;
    const Net net = measured_net(b.base(), rho / 3.0, 31, 150);

    WeightScheme scheme;
    scheme.rho = rho;
    std::vector<AssemblyOptions> setups(2);
    setups[1].general_form = true;
    setups[1].modifier = seeded_perturbation(0.2, 5);

    for (const AssemblyOptions& opts : setups) {
      const BlockOperator op = assemble_weighted_laplacian(b, net, scheme, opts);
      const double lam = gershgorin_upper_bound(op);
      const Eigen::VectorXd alpha = alpha_weights(b.base(), net, scheme);
      for (int trial = 0; trial < 100; ++trial) {
        const DiscreteSection u =
            random_section(b, net, 100 + static_cast<std::uint64_t>(trial));
        const DiscreteSection v =
            random_section(b, net, 900 + static_cast<std::uint64_t>(trial));
        const DiscreteSection au{u.rank, op.apply_raw(u.values)};
        const std::complex<double> lhs = weighted_inner(net, alpha, v, au);
        const std::complex<double> rhs = dirichlet_form(b, net, scheme, v, u, opts);
        const double scale =
            (1.0 + lam) * std::sqrt(weighted_norm_sq(net, alpha, u) *
                                    weighted_norm_sq(net, alpha, v));
        worst_ratio = std::max(worst_ratio, std::abs(lhs - rhs) / scale);
        ++checked;
      }
    }
  }
  if (worst_ratio > 1e-10) {
    out.detail = "worst normalized deviation " + fmt(worst_ratio);
    return out;
  }
  out.pass = true;
  out.detail = std::to_string(checked) + " pairings, worst normalized deviation " +
               fmt(worst_ratio) + " <= 1e-10";
  return out;
}

// Criterion 5: the numeric inequality battery (transport path comparison,
// continuum pair-energy bound, discretization/extension energy comparisons,
// smoothing lower bound) passes in full.
CriterionOutcome inequality_battery() {
  const LemmaReport report = verify_lemma_suite(1);
  CriterionOutcome out;
  int passed = 0;
  std::string first_failure;
  for (const LemmaCheck& check : report.checks) {
    if (check.pass) {
      ++passed;
    } else if (first_failure.empty()) {
      first_failure = check.name;
    }
  }
  if (report.checks.size() < 20) {
    out.detail = "only " + std::to_string(report.checks.size()) + " checks ran";
    return out;
  }
  if (!report.all_pass) {
    out.detail = "first failing check: " + first_failure;
    return out;
  }
  out.pass = true;
  out.detail = "all " + std::to_string(passed) + " inequality checks hold";
  return out;
}

// Criterion 6: Monte Carlo validation of the ball second-moment identity
// int_{B_rho} <x, S x> dx = nu_n rho^{n+2} tr(S) / (n+2) in dimensions 1-3;
// every trial must sit within 3 estimated standard errors.
CriterionOutcome ball_moment_identity() {
  CriterionOutcome out;
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const double dev = ball_moment_check(n, 0.8, 5, 1000000, 1);
    worst = std::max(worst, dev);
    if (dev >= 3.0) {
      out.detail = "dimension " + std::to_string(n) + " deviated by " + fmt(dev) +
                   " sigma";
      return out;
    }
  }
  out.pass = true;
  out.detail = "worst deviation " + fmt(worst) + " sigma < 3 across n = 1, 2, 3";
  return out;
}

// Criterion 7: the iterative solver agrees with the dense reference to 1e-8 of
// the operator scale on twenty assembled operators spanning all bundle types,
// scales, and net seeds.
CriterionOutcome solver_agreement() {
  CriterionOutcome out;
  double worst_dev_ratio = 0.0;
  for (int i = 0; i < 20; ++i) {
    const std::uint64_t seed = 211 + static_cast<std::uint64_t>(i);
    BundleModel bundle = BundleModel::trivial_real(ManifoldModel::flat_torus({1.0, 1.0}), 1);
    double rho = 0.3, eps = 0.1;
    switch (i % 4) {
      case 0:
        break;
      case 1:
        bundle = BundleModel::flat_u1(ManifoldModel::flat_torus({1.0, 1.0}),
                                      {0.25, 0.5});
        rho = 0.35;
        eps = 0.12;
        break;
      case 2:
        bundle = BundleModel::trivial_complex(ManifoldModel::circle(1.0), 2);
        rho = 0.2;
        eps = 0.02;
        break;
      default:
        bundle = BundleModel::tangent_sphere2(ManifoldModel::sphere2(1.0));
        rho = 0.8;
        eps = 0.3;
        break;
    }
    const Net net = measured_net(bundle.base(), eps, seed, 200);
    const BlockOperator op = assemble_graph_laplacian(bundle, net, rho);
    if (op.dim() > 600) {
      out.detail = "case " + std::to_string(i) + " produced dim " +
                   std::to_string(op.dim());
      return out;
    }
    const SpectrumResult dense = dense_reference_spectrum(op);
    EigenOptions opts;
    opts.method = EigenOptions::Method::Lanczos;
    opts.max_iter = 500 * 10 + 3000;
    const SpectrumResult iterative = smallest_eigenpairs(op, 10, opts);
    const double bound = gershgorin_upper_bound(op);
    for (int j = 0; j < 10; ++j) {
      if (!iterative.converged.at(j)) {
        out.detail = "case " + std::to_string(i) + " pair " + std::to_string(j + 1) +
                     " did not converge";
        return out;
      }
      const double dev =
          std::abs(iterative.eigenvalues(j) - dense.eigenvalues(j));
      worst_dev_ratio = std::max(worst_dev_ratio, dev / (1e-8 * bound));
      if (dev > 1e-8 * bound) {
        out.detail = "case " + std::to_string(i) + " deviation " + fmt(dev) +
                     " above " + fmt(1e-8 * bound);
        return out;
      }
    }
  }
  out.pass = true;
  out.detail = "20 operators, worst deviation at " + fmt(100.0 * worst_dev_ratio) +
               "% of the 1e-8 * scale budget";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<CriterionOutcome()>>>
      criteria = {
          {"flat-torus grid refinement with per-index error decay",
           torus_grid_refinement},
          {"holonomy-shifted circle spectrum within 10%",
           shifted_circle_spectrum},
          {"sphere tangent bundle: solver cross-check, multiplicity-6 cluster, "
           "mesh refinement",
           sphere_tangent_pipeline},
          {"operator/energy form identity across bundles and assembly forms",
           form_identity},
          {"inequality battery", inequality_battery},
          {"ball second-moment identity", ball_moment_identity},
          {"iterative vs dense spectra on 20 assembled operators",
           solver_agreement},
      };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    CriterionOutcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    if (!outcome.pass) ++failures;
    std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << "criterion " << (i + 1)
              << ": " << criteria[i].first << " — " << outcome.detail << "\n"
              << std::flush;
  }
  std::cout << "acceptance: " << (criteria.size() - static_cast<std::size_t>(failures))
            << "/" << criteria.size() << " criteria passed\n";
  return failures;
}
