#include "conlap/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "conlap/assembly.hpp"
#include "conlap/continuum.hpp"
#include "conlap/errors.hpp"
#include "conlap/geometry.hpp"
#include "conlap/rng.hpp"

namespace conlap {

namespace {

constexpr std::uint64_t kLevelTag = 0x6c65766cULL;
constexpr std::uint64_t kLemmaTag = 0x6c656d61ULL;

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

WeightScheme constant_scheme(double rho) {
  WeightScheme s;
  s.rho = rho;
  s.alpha = WeightScheme::Alpha::Unit;
  s.beta = WeightScheme::Beta::ConstantNormalized;
  return s;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.levels.empty()) throw ConfigError("no scale levels configured");
  if (cfg.k < 1) throw ConfigError("k must be at least 1");
  if (!(cfg.tol > 0.0)) throw ConfigError("tol must be positive");
  for (const ScaleLevel& level : cfg.levels) {
    if (!(level.rho > 0.0) || !std::isfinite(level.rho)) {
      throw ConfigError("rho must be positive and finite");
    }
    if (!(level.eps > 0.0) || !(level.eps < level.rho)) {
      throw ConfigError("eps must satisfy 0 < eps < rho");
    }
  }
  if (cfg.net_kind == ExperimentConfig::NetKind::Grid &&
      cfg.bundle.base().kind() == ManifoldKind::Sphere2) {
    throw ConfigError("grid nets are defined on circle/torus models only");
  }
}

LevelResult run_level(const ExperimentConfig& cfg, int level_index) {
  const ScaleLevel& level = cfg.levels[static_cast<std::size_t>(level_index)];
  const ManifoldModel& m = cfg.bundle.base();
  const double r_inj = curvature_and_injectivity(m).injectivity_radius;
  if (!(level.rho < r_inj)) {
    throw RegimeError("rho must stay below the injectivity radius");
  }

  const double t0 = now_ms();
  const std::uint64_t level_seed =
      CounterRng::substream(cfg.seed, kLevelTag + level_index);
  Net net = build_level_net(cfg, level, level_seed);
  if (net.points.size() < 2) {
    throw RegimeError("degenerate net: fewer than two points at this scale");
  }
  if (!(4.0 * net.covering_radius_est < level.rho)) {
    std::ostringstream os;
    os << "scale regime violated: 4 * covering radius ("
       << 4.0 * net.covering_radius_est << ") must stay below rho ("
       << level.rho << ")";
    throw RegimeError(os.str());
  }

  BlockOperator op = assemble_graph_laplacian(cfg.bundle, net, level.rho);
  const double lambda_bound = gershgorin_upper_bound(op);

  EigenOptions opts;
  opts.tol = cfg.tol;
  // Degenerate clusters cost one deflated restart per extra copy plus a
  // verification segment, so the harness budget is far above the solver's
  // bare default.
  opts.max_iter = cfg.max_iter > 0 ? cfg.max_iter : 500 * cfg.k + 3000;
  opts.seed = level_seed;
  opts.method = cfg.method;
  SpectrumResult spectrum = smallest_eigenpairs(op, cfg.k, opts);
  for (int i = 0; i < cfg.k; ++i) {
    if (!spectrum.converged[static_cast<std::size_t>(i)]) {
      std::ostringstream os;
      os << "eigenpair " << (i + 1) << " did not converge (scaled residual "
         << spectrum.residual_norms(i) << ", tol " << cfg.tol << ")";
      throw SolverError(os.str());
    }
  }

  LevelResult out;
  out.level = level_index;
  out.rho = level.rho;
  out.eps = level.eps;
  out.n_points = static_cast<int>(net.points.size());
  out.rank = cfg.bundle.rank();
  out.covering_radius = net.covering_radius_est;
  out.separation = net.separation_est;
  out.lambda_bound = lambda_bound;
  out.essential_gap = essential_gap_bound(m, net, constant_scheme(level.rho));
  out.spectrum = std::move(spectrum);
  out.analytic =
      analytic_spectrum(cfg.bundle, static_cast<std::size_t>(cfg.k));
  out.wall_ms = now_ms() - t0;

  const double lambda_regime = 1.0 / (16.0 * level.rho * level.rho);
  for (int i = 0; i < cfg.k; ++i) {
    LevelRow row;
    row.level = level_index;
    row.rho = level.rho;
    row.eps = level.eps;
    row.n_points = out.n_points;
    row.rank = out.rank;
    row.covering_radius = out.covering_radius;
    row.separation = out.separation;
    row.k_index = i + 1;
    row.lambda_tilde = out.spectrum.eigenvalues(i);
    row.lambda_analytic = out.analytic[static_cast<std::size_t>(i)];
    row.abs_err = std::abs(row.lambda_tilde - row.lambda_analytic);
    row.rel_err = row.lambda_analytic != 0.0
                      ? row.abs_err / std::abs(row.lambda_analytic)
                      : row.abs_err;
    row.residual = out.spectrum.residual_norms(i);
    row.regime_eps_ok = level.eps < level.rho / 4.0;
    row.regime_lambda_ok = row.lambda_analytic < lambda_regime;
    row.wall_ms = out.wall_ms;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace

Net build_level_net(const ExperimentConfig& cfg, const ScaleLevel& level,
                    std::uint64_t seed) {
  const ManifoldModel& m = cfg.bundle.base();
  if (cfg.net_kind == ExperimentConfig::NetKind::Grid) {
    std::vector<int> per_dim;
    if (cfg.grid_points_per_dim > 0) {
      per_dim.assign(m.lengths().size(), cfg.grid_points_per_dim);
    } else {
      const int n = m.dim();
      const double pitch = 2.0 * level.eps / std::sqrt(static_cast<double>(n));
      for (double len : m.lengths()) {
        per_dim.push_back(std::max(1, static_cast<int>(std::ceil(len / pitch))));
      }
    }
    return build_grid_net(m, per_dim, seed);
  }
  Net net = build_net(m, level.eps, seed);
  const std::int64_t n_pts = static_cast<std::int64_t>(net.points.size());
  const std::int64_t mc =
      cfg.mc_samples > 0 ? cfg.mc_samples : 400 * n_pts;
  estimate_measures(m, net, mc, seed);
  return net;
}

LevelResult run_spectrum(const ExperimentConfig& cfg) {
  validate_config(cfg);
  return run_level(cfg, 0);
}

ConvergenceReport run_convergence_sweep(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (cfg.levels.size() < 3) {
    throw ConfigError("a convergence sweep needs at least 3 scale levels");
  }
  ConvergenceReport report;
  for (int l = 0; l < static_cast<int>(cfg.levels.size()); ++l) {
    try {
      report.levels.push_back(run_level(cfg, l));
    } catch (const std::exception& e) {
      LevelResult failed;
      failed.level = l;
      failed.rho = cfg.levels[static_cast<std::size_t>(l)].rho;
      failed.eps = cfg.levels[static_cast<std::size_t>(l)].eps;
      failed.failed = true;
      failed.error = e.what();
      report.levels.push_back(std::move(failed));
    }
  }

  const int k = cfg.k;
  report.decay_monotone.assign(static_cast<std::size_t>(k), true);
  bool any_pair = false;
  for (std::size_t l = 0; l + 1 < report.levels.size(); ++l) {
    const LevelResult& a = report.levels[l];
    const LevelResult& b = report.levels[l + 1];
    std::vector<double> orders(static_cast<std::size_t>(k),
                               std::numeric_limits<double>::quiet_NaN());
    if (!a.failed && !b.failed) {
      any_pair = true;
      for (int i = 0; i < k; ++i) {
        const double e0 = a.rows[static_cast<std::size_t>(i)].abs_err;
        const double e1 = b.rows[static_cast<std::size_t>(i)].abs_err;
        if (!(e0 > e1)) report.decay_monotone[static_cast<std::size_t>(i)] = false;
        double order;
        if (e1 == 0.0) {
          order = 64.0;
        } else if (e0 == 0.0) {
          order = -64.0;
        } else {
          order = std::clamp(std::log2(e0 / e1), -64.0, 64.0);
        }
        orders[static_cast<std::size_t>(i)] = order;
      }
    }
    report.decay_orders.push_back(std::move(orders));
  }
  if (!any_pair) {
    report.decay_monotone.assign(static_cast<std::size_t>(k), false);
  }
  return report;
}

std::vector<std::pair<int, int>> cluster_partition(
    const std::vector<double>& ascending, double gap) {
  std::vector<std::pair<int, int>> clusters;
  if (ascending.empty()) return clusters;
  int start = 0;
  for (int i = 1; i <= static_cast<int>(ascending.size()); ++i) {
    if (i == static_cast<int>(ascending.size()) ||
        ascending[static_cast<std::size_t>(i)] -
                ascending[static_cast<std::size_t>(i - 1)] >
            gap) {
      clusters.emplace_back(start, i - start);
      start = i;
    }
  }
  return clusters;
}

// ---------------------------------------------------------------------------
// Lemma suite
// ---------------------------------------------------------------------------

namespace {

std::string format_witness(std::initializer_list<std::pair<const char*, double>>
                               fields) {
  std::ostringstream os;
  os.precision(6);
  bool first = true;
  for (const auto& [name, value] : fields) {
    if (!first) os << ", ";
    os << name << "=" << value;
    first = false;
  }
  return os.str();
}

void add_check(LemmaReport& report, std::string name, bool pass, double lhs,
               double rhs, std::string witness) {
  report.checks.push_back(
      {std::move(name), pass, lhs, rhs, std::move(witness)});
  report.all_pass = report.all_pass && pass;
}

/// Uniform point of the geodesic disc of radius `rad` around x on the
/// sphere, via the tangent frame (area distortion inside these small discs is
/// irrelevant: the checks only need the distance constraint d < rad).
ManifoldPoint sphere_disc_point(const ManifoldModel& m, const ManifoldPoint& x,
                                double rad, const CounterRng& rng,
                                std::uint64_t& counter) {
  const double r = rad * std::sqrt(rng.uniform(counter++)) * (1.0 - 1e-12);
  const double ang = 2.0 * 3.14159265358979323846 * rng.uniform(counter++);
  const Eigen::Matrix<double, 3, 2> frame = detail::sphere_frame(m, x);
  const Eigen::Vector3d dir =
      frame.col(0) * std::cos(ang) + frame.col(1) * std::sin(ang);
  return exp_map(m, x, r * dir);
}

void check_path_comparison(LemmaReport& report, std::uint64_t seed) {
  const ManifoldModel m = ManifoldModel::sphere2(1.0);
  const BundleModel b = BundleModel::tangent_sphere2(m);
  const double k_e = curvature_norm_bound(b);
  const double rho = 0.3;
  const int quads = 1000;

  for (double eps : {0.05, 0.025}) {
    CounterRng rng(CounterRng::substream(seed, kLemmaTag ^ (eps > 0.03 ? 1 : 2)));
    std::uint64_t counter = 0;
    const double bound = k_e * (rho + 2.0 * eps) * eps + 1e-10;
    double max_two = 0.0, max_three = 0.0;
    int violations = 0;
    for (int q = 0; q < quads; ++q) {
      // x_i anywhere; x_j within rho; y, z within eps of x_i, x_j.
      const double z0 = 1.0 - 2.0 * rng.uniform(counter++);
      const double ph = 2.0 * 3.14159265358979323846 * rng.uniform(counter++);
      const double st = std::sqrt(std::max(0.0, 1.0 - z0 * z0));
      ManifoldPoint xi;
      xi.coords = Eigen::Vector3d(st * std::cos(ph), st * std::sin(ph), z0);
      const ManifoldPoint xj = sphere_disc_point(m, xi, rho, rng, counter);
      const ManifoldPoint y = sphere_disc_point(m, xi, eps, rng, counter);
      const ManifoldPoint z = sphere_disc_point(m, xj, eps, rng, counter);

      Eigen::VectorXcd v(2);
      const double a0 = rng.normal(counter), a1 = rng.normal(counter + 1);
      counter += 2;
      const double nv = std::hypot(a0, a1);
      if (nv < 1e-12) continue;
      v << a0 / nv, a1 / nv;

      const Eigen::VectorXcd direct = transport(b, y, z).matrix * v;
      const Eigen::VectorXcd two_leg =
          transport(b, y, xi).matrix * (transport(b, xi, z).matrix * v);
      const Eigen::VectorXcd three_leg =
          transport(b, y, xi).matrix *
          (transport(b, xi, xj).matrix * (transport(b, xj, z).matrix * v));
      const double dev_two = (two_leg - direct).norm();
      const double dev_three = (three_leg - direct).norm();
      max_two = std::max(max_two, dev_two);
      max_three = std::max(max_three, dev_three);
      if (dev_two > bound || dev_three > bound) ++violations;
    }
    std::ostringstream name;
    name << "sphere-path-comparison eps=" << eps;
    add_check(report, name.str(), violations == 0,
              std::max(max_two, max_three), bound,
              format_witness({{"rho", rho},
                              {"eps", eps},
                              {"quadruples", quads},
                              {"violations", violations},
                              {"max_two_leg", max_two},
                              {"max_three_leg", max_three}}));
  }
}

void check_mode_energy_bound(LemmaReport& report) {
  struct Case {
    BundleModel bundle;
    std::size_t mode_index;
    double rho;
    const char* label;
  };
  const ManifoldModel circle = ManifoldModel::circle(1.0);
  const ManifoldModel torus = ManifoldModel::flat_torus({1.0, 1.0});
  const std::vector<Case> cases = {
      {BundleModel::trivial_complex(circle, 1), 1, 0.1, "circle m=1"},
      {BundleModel::trivial_complex(circle, 1), 3, 0.1, "circle m=2"},
      {BundleModel::trivial_real(torus, 1), 1, 0.2, "torus first"},
      {BundleModel::trivial_real(torus, 1), 5, 0.2, "torus diagonal"},
      {BundleModel::flat_u1(circle, {0.25}), 0, 0.1, "holonomy lowest"},
  };
  for (const Case& c : cases) {
    const ManifoldModel& m = c.bundle.base();
    const int n = m.dim();
    const Eigensection sec = analytic_eigensection(c.bundle, c.mode_index);
    const double lhs = mode_pair_energy(m, sec.omega, c.rho);
    const double grad_sq = sec.eigenvalue * m.volume();
    const double rhs = unit_ball_volume(n) / (n + 2) *
                       std::pow(c.rho, n + 2) * grad_sq;
    const bool pass = lhs <= rhs * (1.0 + 1e-8);
    std::ostringstream name;
    name << "mode-energy-bound " << c.label;
    add_check(report, name.str(), pass, lhs, rhs,
              format_witness({{"rho", c.rho},
                              {"eigenvalue", sec.eigenvalue},
                              {"omega_norm", sec.omega.norm()}}));
  }
}

void check_discretized_energy(LemmaReport& report, std::uint64_t seed) {
  struct Case {
    BundleModel bundle;
    std::vector<int> grid;
    bool fps;
    double eps_target;
    std::size_t mode_index;
    double rho;
    std::int64_t quad;
    const char* label;
  };
  const ManifoldModel circle = ManifoldModel::circle(1.0);
  const ManifoldModel torus = ManifoldModel::flat_torus({1.0, 1.0});
  const std::vector<Case> cases = {
      {BundleModel::trivial_complex(circle, 1), {200}, false, 0.0, 0, 0.1,
       200000, "circle constant"},
      {BundleModel::trivial_complex(circle, 1), {200}, false, 0.0, 1, 0.1,
       200000, "circle m=1"},
      {BundleModel::trivial_complex(circle, 1), {200}, false, 0.0, 5, 0.1,
       200000, "circle m=3"},
      {BundleModel::flat_u1(circle, {0.25}), {200}, false, 0.0, 0, 0.1,
       200000, "holonomy lowest"},
      {BundleModel::trivial_complex(circle, 1), {}, true, 0.005, 1, 0.1, 0,
       "circle m=1 sampled-net"},
      {BundleModel::trivial_complex(torus, 1), {40, 40}, false, 0.0, 1, 0.2,
       300000, "torus first"},
      {BundleModel::trivial_complex(torus, 1), {40, 40}, false, 0.0, 5, 0.2,
       300000, "torus diagonal"},
  };
  int case_id = 0;
  for (const Case& c : cases) {
    const ManifoldModel& m = c.bundle.base();
    const int n = m.dim();
    Net net;
    std::int64_t quad = c.quad;
    const std::uint64_t case_seed =
        CounterRng::substream(seed, kLemmaTag + 100 + case_id++);
    if (c.fps) {
      net = build_net(m, c.eps_target, case_seed);
      estimate_measures(m, net, 400 * static_cast<std::int64_t>(net.points.size()),
                        case_seed);
      quad = net.mc_sample_count;
    } else {
      net = build_grid_net(m, c.grid, case_seed);
    }
    const double eps = net.covering_radius_est;
    const Eigensection sec = analytic_eigensection(c.bundle, c.mode_index);
    const DiscreteSection qu = discretize_section(c.bundle, net, sec.value, quad);
    const double lhs =
        dirichlet_energy(c.bundle, net, constant_scheme(c.rho), qu);
    const double continuum =
        mode_pair_energy(m, sec.omega, c.rho + 2.0 * eps);
    const double rhs = (n + 2) /
                       (unit_ball_volume(n) * std::pow(c.rho, n + 2)) *
                       (1.0 + 2.0 * c.rho * c.rho) * continuum;
    const bool pass = lhs <= rhs * (1.0 + 1e-8) + 1e-12;
    std::ostringstream name;
    name << "discretized-energy-bound " << c.label;
    add_check(report, name.str(), pass, lhs, rhs,
              format_witness({{"rho", c.rho},
                              {"eps", eps},
                              {"N", static_cast<double>(net.points.size())},
                              {"mode", static_cast<double>(c.mode_index)}}));
  }
}

void check_extension_energy(LemmaReport& report, std::uint64_t seed) {
  struct Case {
    BundleModel bundle;
    std::vector<int> grid;
    std::size_t mode_index;
    double rho;
    std::int64_t pairs;
    const char* label;
  };
  const ManifoldModel circle = ManifoldModel::circle(1.0);
  const ManifoldModel torus = ManifoldModel::flat_torus({1.0, 1.0});
  const std::vector<Case> cases = {
      {BundleModel::trivial_complex(circle, 1), {200}, 1, 0.1, 200000,
       "circle m=1"},
      {BundleModel::trivial_complex(circle, 1), {200}, 5, 0.1, 200000,
       "circle m=3"},
      {BundleModel::flat_u1(circle, {0.25}), {200}, 0, 0.1, 200000,
       "holonomy lowest"},
      {BundleModel::trivial_complex(torus, 1), {30, 30}, 5, 0.25, 120000,
       "torus diagonal"},
  };
  int case_id = 0;
  for (const Case& c : cases) {
    const ManifoldModel& m = c.bundle.base();
    const int n = m.dim();
    const std::uint64_t case_seed =
        CounterRng::substream(seed, kLemmaTag + 200 + case_id++);
    const Net net = build_grid_net(m, c.grid, case_seed);
    const double eps = net.covering_radius_est;
    const double reach = c.rho - 2.0 * eps;
    const Eigensection sec = analytic_eigensection(c.bundle, c.mode_index);
    const DiscreteSection u = section_from_function(c.bundle, net, sec.value);
    auto ext = extend_section(c.bundle, net, u);

    // Monte Carlo D^{rho-2eps} of the extension.
    CounterRng rng(case_seed);
    std::uint64_t counter = 0;
    double mean = 0.0, m2 = 0.0;
    std::int64_t count = 0;
    Eigen::VectorXd delta(n);
    while (count < c.pairs) {
      Eigen::VectorXd yc(n);
      for (int a = 0; a < n; ++a) {
        yc(a) = rng.uniform(counter++) * m.lengths()[static_cast<std::size_t>(a)];
      }
      double norm_sq = 0.0;
      for (int a = 0; a < n; ++a) {
        delta(a) = reach * rng.symmetric(counter++);
        norm_sq += delta(a) * delta(a);
      }
      if (norm_sq >= reach * reach) continue;
      ++count;
      const ManifoldPoint y = m.point(yc);
      const ManifoldPoint z = m.point(yc + delta);
      const Eigen::VectorXcd uy = ext(y);
      const Eigen::VectorXcd uz = ext(z);
      const double f =
          (uy - transport(c.bundle, y, z).matrix * uz).squaredNorm();
      const double d = f - mean;
      mean += d / static_cast<double>(count);
      m2 += d * (f - mean);
    }
    const double cell = m.volume() * unit_ball_volume(n) * std::pow(reach, n);
    const double lhs = cell * mean;
    const double sigma =
        cell * std::sqrt(m2 / static_cast<double>(c.pairs - 1) /
                         static_cast<double>(c.pairs));

    const double delta_energy =
        dirichlet_energy(c.bundle, net, constant_scheme(c.rho), u);
    const double rhs = unit_ball_volume(n) * std::pow(c.rho, n + 2) / (n + 2) *
                       (1.0 + 2.0 * c.rho * c.rho) * delta_energy;
    const bool pass = lhs <= rhs * (1.0 + 1e-8) + 3.0 * sigma;
    std::ostringstream name;
    name << "extension-energy-bound " << c.label;
    add_check(report, name.str(), pass, lhs, rhs,
              format_witness({{"rho", c.rho},
                              {"eps", eps},
                              {"mc_pairs", static_cast<double>(c.pairs)},
                              {"mc_sigma", sigma}}));
  }
}

void check_smoothing_lower_bound(LemmaReport& report, std::uint64_t seed) {
  struct Case {
    BundleModel bundle;
    std::vector<int> grid;
    double rho;
    int mode_index;  // -1 -> random section
    const char* label;
  };
  const ManifoldModel circle = ManifoldModel::circle(1.0);
  const ManifoldModel torus = ManifoldModel::flat_torus({1.0, 1.0});
  const std::vector<Case> cases = {
      {BundleModel::trivial_complex(circle, 1), {150}, 0.12, 1, "circle m=1"},
      {BundleModel::trivial_complex(circle, 1), {150}, 0.12, -1,
       "circle random"},
      {BundleModel::trivial_complex(torus, 1), {25, 25}, 0.25, 5,
       "torus diagonal"},
      {BundleModel::trivial_complex(torus, 1), {25, 25}, 0.25, -1,
       "torus random"},
  };
  int case_id = 0;
  for (const Case& c : cases) {
    const ManifoldModel& m = c.bundle.base();
    const int n = m.dim();
    const std::uint64_t case_seed =
        CounterRng::substream(seed, kLemmaTag + 300 + case_id++);
    const Net net = build_grid_net(m, c.grid, case_seed);
    DiscreteSection u;
    if (c.mode_index >= 0) {
      u = section_from_function(
          c.bundle, net,
          analytic_eigensection(c.bundle, static_cast<std::size_t>(c.mode_index))
              .value);
    } else {
      u = random_section(c.bundle, net, case_seed);
    }
    const Eigen::VectorXd th = theta_weights(m, net, c.rho);
    const DiscreteSection iu = smoothing_apply(c.bundle, net, c.rho, u);
    const Eigen::VectorXd unit;
    const double norm_u = weighted_norm_sq(net, unit, u);
    const double norm_iu = weighted_norm_sq(net, unit, iu);

    WeightScheme indicator;
    indicator.rho = c.rho;
    indicator.alpha = WeightScheme::Alpha::Unit;
    indicator.beta = WeightScheme::Beta::UnitIndicator;
    const double pair_sum = 2.0 * dirichlet_energy(c.bundle, net, indicator, u);

    const double lhs = th.maxCoeff() * norm_iu;
    const double rhs = th.minCoeff() * norm_u -
                       (n + 2) / (2.0 * unit_ball_volume(n) * std::pow(c.rho, n)) *
                           pair_sum;
    const double scale = th.maxCoeff() * norm_u;
    const bool pass = lhs >= rhs - 1e-10 * scale;
    std::ostringstream name;
    name << "smoothing-lower-bound " << c.label;
    add_check(report, name.str(), pass, lhs, rhs,
              format_witness({{"rho", c.rho},
                              {"theta_min", th.minCoeff()},
                              {"theta_max", th.maxCoeff()},
                              {"norm_u", norm_u}}));
  }
}

}  // namespace

LemmaReport verify_lemma_suite(std::uint64_t seed) {
  LemmaReport report;
  check_path_comparison(report, seed);
  check_mode_energy_bound(report);
  check_discretized_energy(report, seed);
  check_extension_energy(report, seed);
  check_smoothing_lower_bound(report, seed);
  return report;
}

}  // namespace conlap
