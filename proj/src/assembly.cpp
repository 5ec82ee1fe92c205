#include "conlap/assembly.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "conlap/geometry.hpp"
#include "conlap/neighbor_index.hpp"
#include "conlap/rng.hpp"

namespace conlap {

namespace {

constexpr std::uint64_t kSectionTag = 0x73656374ULL;
constexpr std::uint64_t kBallTag = 0x62616c6cULL;

void validate_net(const Net& net) {
  if (net.points.empty()) {
    throw std::invalid_argument("assembly: empty net");
  }
  if (net.measures.size() != net.points.size()) {
    throw std::invalid_argument("assembly: net has no measures");
  }
}

void validate_rho(const ManifoldModel& m, double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("assembly: rho must be positive and finite");
  }
  const double r_inj = curvature_and_injectivity(m).injectivity_radius;
  if (rho > r_inj) {
    throw std::domain_error(
        "assembly: rho exceeds the injectivity radius, transports undefined");
  }
}

struct Pair {
  int i;
  int j;
  double d;
};

/// All unordered pairs with d(x_i, x_j) < rho, i < j, ordered by (i, j).
std::vector<Pair> collect_pairs(const ManifoldModel& m, const Net& net,
                                double rho) {
  NeighborIndex index(m, net.points, rho);
  std::vector<Pair> pairs;
  const int n_pts = static_cast<int>(net.points.size());
  for (int i = 0; i < n_pts; ++i) {
    for (int j : index.radius_query(net.points[i], rho)) {
      if (j <= i) continue;
      pairs.push_back({i, j, distance(m, net.points[i], net.points[j])});
    }
  }
  return pairs;
}

double beta_weight(const WeightScheme& scheme, int n, double d) {
  switch (scheme.beta) {
    case WeightScheme::Beta::ConstantNormalized:
      return 2.0 * (n + 2) /
             (unit_ball_volume(n) * std::pow(scheme.rho, n + 2));
    case WeightScheme::Beta::UnitIndicator:
      return 1.0;
    case WeightScheme::Beta::Kernel:
      return kernel_k_rho(n, scheme.rho, d);
  }
  return 0.0;
}

Eigen::VectorXd alpha_from_pairs(const ManifoldModel& m, const Net& net,
                                 const WeightScheme& scheme,
                                 const std::vector<Pair>& pairs) {
  const int n_pts = static_cast<int>(net.points.size());
  const int n = m.dim();
  switch (scheme.alpha) {
    case WeightScheme::Alpha::Unit:
      return Eigen::VectorXd::Ones(n_pts);
    case WeightScheme::Alpha::VolumeNormalized: {
      Eigen::VectorXd mass(n_pts);
      for (int i = 0; i < n_pts; ++i) mass(i) = net.measures[i];
      for (const Pair& p : pairs) {
        mass(p.i) += net.measures[p.j];
        mass(p.j) += net.measures[p.i];
      }
      return scheme.rho * scheme.rho * mass;
    }
    case WeightScheme::Alpha::KernelTheta: {
      Eigen::VectorXd th(n_pts);
      const double k0 = kernel_k_rho(n, scheme.rho, 0.0);
      for (int i = 0; i < n_pts; ++i) th(i) = k0 * net.measures[i];
      for (const Pair& p : pairs) {
        const double k = kernel_k_rho(n, scheme.rho, p.d);
        th(p.i) += k * net.measures[p.j];
        th(p.j) += k * net.measures[p.i];
      }
      return th;
    }
  }
  return Eigen::VectorXd::Ones(n_pts);
}

bool regime_holds(const Net& net, double rho, double r_inj) {
  return 4.0 * net.covering_radius_est < rho && rho < r_inj;
}

Eigen::MatrixXcd modified_transport(const BundleModel& b,
                                    const TransportModifier& modifier,
                                    const Net& net, int i, int j) {
  Eigen::MatrixXcd p = transport(b, net.points[i], net.points[j]).matrix;
  if (modifier) p = modifier(i, j, p);
  return p;
}

}  // namespace

TransportModifier seeded_perturbation(double delta, std::uint64_t seed) {
  return [delta, seed](int i, int j, const Eigen::MatrixXcd& p) {
    const int r = static_cast<int>(p.rows());
    const std::uint64_t tag =
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) ^
        static_cast<std::uint64_t>(static_cast<std::uint32_t>(j));
    CounterRng rng(CounterRng::substream(seed, tag));
    Eigen::MatrixXcd e(r, r);
    const double inv_sqrt2 = 0.7071067811865475244;
    for (int a = 0; a < r; ++a) {
      for (int c = 0; c < r; ++c) {
        const std::uint64_t k = 2 * (static_cast<std::uint64_t>(a) * r + c);
        e(a, c) = std::complex<double>(rng.symmetric(k) * inv_sqrt2,
                                       rng.symmetric(k + 1) * inv_sqrt2);
      }
    }
    return (Eigen::MatrixXcd::Identity(r, r) + delta * e) * p;
  };
}

Eigen::VectorXcd gamma(const BundleModel& b, const FiberVector& ux,
                       const FiberVector& uy) {
  return ux.components - transport(b, ux.base, uy.base).matrix * uy.components;
}

BlockOperator assemble_graph_laplacian(const BundleModel& b, const Net& net,
                                       double rho) {
  validate_net(net);
  const ManifoldModel& m = b.base();
  validate_rho(m, rho);
  const int n = m.dim();
  const int n_pts = static_cast<int>(net.points.size());
  const int r = b.rank();
  const double c = 2.0 * (n + 2) / (unit_ball_volume(n) * std::pow(rho, n + 2));

  BlockOperator op(n_pts, r);
  std::vector<double> diag_scalar(n_pts, 0.0);
  Eigen::VectorXd scale(n_pts);
  for (int i = 0; i < n_pts; ++i) scale(i) = std::sqrt(net.measures[i]);
  op.set_scale(scale);

  for (const Pair& p : collect_pairs(m, net, rho)) {
    const Eigen::MatrixXcd pij =
        transport(b, net.points[p.i], net.points[p.j]).matrix;
    const double w = c * std::sqrt(net.measures[p.i] * net.measures[p.j]);
    op.add_off_diagonal(p.i, p.j, -w * pij);
    op.add_off_diagonal(p.j, p.i, (-w * pij).adjoint().eval());
    diag_scalar[p.i] += c * net.measures[p.j];
    diag_scalar[p.j] += c * net.measures[p.i];
  }
  for (int i = 0; i < n_pts; ++i) {
    op.set_diagonal(i, diag_scalar[i] * Eigen::MatrixXcd::Identity(r, r));
  }
  op.regime_ok =
      regime_holds(net, rho, curvature_and_injectivity(m).injectivity_radius);
  return op;
}

BlockOperator assemble_weighted_laplacian(const BundleModel& b, const Net& net,
                                          const WeightScheme& scheme,
                                          const AssemblyOptions& opts) {
  validate_net(net);
  const ManifoldModel& m = b.base();
  validate_rho(m, scheme.rho);
  const int n = m.dim();
  const int n_pts = static_cast<int>(net.points.size());
  const int r = b.rank();

  const std::vector<Pair> pairs = collect_pairs(m, net, scheme.rho);
  const Eigen::VectorXd alpha = alpha_from_pairs(m, net, scheme, pairs);
  if ((alpha.array() <= 0.0).any()) {
    throw std::runtime_error("assembly: nonpositive alpha weight");
  }

  BlockOperator op(n_pts, r);
  Eigen::VectorXd scale(n_pts);
  for (int i = 0; i < n_pts; ++i) {
    scale(i) = std::sqrt(alpha(i) * net.measures[i]);
  }
  op.set_scale(scale);

  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(r, r);
  std::vector<Eigen::MatrixXcd> diag(n_pts, Eigen::MatrixXcd::Zero(r, r));
  for (const Pair& p : pairs) {
    const double bw = beta_weight(scheme, n, p.d);
    const double cross =
        bw * std::sqrt(net.measures[p.i] * net.measures[p.j] /
                       (alpha(p.i) * alpha(p.j)));
    const Eigen::MatrixXcd pij =
        modified_transport(b, opts.modifier, net, p.i, p.j);
    if (opts.general_form) {
      const Eigen::MatrixXcd pji =
          modified_transport(b, opts.modifier, net, p.j, p.i);
      const Eigen::MatrixXcd bij = -0.5 * cross * (pij + pji.adjoint());
      op.add_off_diagonal(p.i, p.j, bij);
      op.add_off_diagonal(p.j, p.i, bij.adjoint().eval());
      diag[p.i] += (0.5 * bw * net.measures[p.j] / alpha(p.i)) *
                   (id + pji.adjoint() * pji);
      diag[p.j] += (0.5 * bw * net.measures[p.i] / alpha(p.j)) *
                   (id + pij.adjoint() * pij);
    } else {
      const Eigen::MatrixXcd bij = -cross * pij;
      op.add_off_diagonal(p.i, p.j, bij);
      op.add_off_diagonal(p.j, p.i, bij.adjoint().eval());
      diag[p.i] += (bw * net.measures[p.j] / alpha(p.i)) * id;
      diag[p.j] += (bw * net.measures[p.i] / alpha(p.j)) * id;
    }
  }
  for (int i = 0; i < n_pts; ++i) op.set_diagonal(i, diag[i]);
  op.regime_ok = regime_holds(net, scheme.rho,
                              curvature_and_injectivity(m).injectivity_radius);
  return op;
}

DiscreteSection section_from_function(
    const BundleModel& b, const Net& net,
    const std::function<Eigen::VectorXcd(const ManifoldPoint&)>& fn) {
  const int r = b.rank();
  DiscreteSection u;
  u.rank = r;
  u.values.resize(static_cast<Eigen::Index>(net.points.size()) * r);
  for (std::size_t i = 0; i < net.points.size(); ++i) {
    Eigen::VectorXcd v = fn(net.points[i]);
    if (v.size() != r) {
      throw std::invalid_argument("section_from_function: wrong fiber size");
    }
    u.values.segment(static_cast<Eigen::Index>(i) * r, r) = v;
  }
  return u;
}

DiscreteSection random_section(const BundleModel& b, const Net& net,
                               std::uint64_t seed) {
  const int r = b.rank();
  const Eigen::Index total = static_cast<Eigen::Index>(net.points.size()) * r;
  CounterRng rng(CounterRng::substream(seed, kSectionTag));
  DiscreteSection u;
  u.rank = r;
  u.values.resize(total);
  const double inv_sqrt2 = 0.7071067811865475244;
  for (Eigen::Index k = 0; k < total; ++k) {
    if (b.complex_field()) {
      u.values(k) = std::complex<double>(rng.normal(2 * k) * inv_sqrt2,
                                         rng.normal(2 * k + 1) * inv_sqrt2);
    } else {
      u.values(k) = rng.normal(k);
    }
  }
  return u;
}

std::complex<double> weighted_inner(const Net& net, const Eigen::VectorXd& w,
                                    const DiscreteSection& u,
                                    const DiscreteSection& v) {
  const int r = u.rank;
  const int n_pts = static_cast<int>(net.points.size());
  if (v.rank != r || u.values.size() != v.values.size() ||
      u.values.size() != static_cast<Eigen::Index>(n_pts) * r) {
    throw std::invalid_argument("weighted_inner: section size mismatch");
  }
  if (w.size() != 0 && w.size() != n_pts) {
    throw std::invalid_argument("weighted_inner: weight size mismatch");
  }
  std::complex<double> acc(0.0, 0.0);
  for (int i = 0; i < n_pts; ++i) {
    const double wi = (w.size() == 0 ? 1.0 : w(i)) * net.measures[i];
    acc += wi * u.values.segment(static_cast<Eigen::Index>(i) * r, r)
                    .dot(v.values.segment(static_cast<Eigen::Index>(i) * r, r));
  }
  return acc;
}

double weighted_norm_sq(const Net& net, const Eigen::VectorXd& w,
                        const DiscreteSection& u) {
  return weighted_inner(net, w, u, u).real();
}

Eigen::VectorXd alpha_weights(const ManifoldModel& m, const Net& net,
                              const WeightScheme& scheme) {
  validate_net(net);
  validate_rho(m, scheme.rho);
  return alpha_from_pairs(m, net, scheme, collect_pairs(m, net, scheme.rho));
}

std::complex<double> dirichlet_form(const BundleModel& b, const Net& net,
                                    const WeightScheme& scheme,
                                    const DiscreteSection& u,
                                    const DiscreteSection& v,
                                    const AssemblyOptions& opts) {
  validate_net(net);
  const ManifoldModel& m = b.base();
  validate_rho(m, scheme.rho);
  const int n = m.dim();
  const int r = b.rank();
  auto fiber = [r](const DiscreteSection& s, int i) {
    return s.values.segment(static_cast<Eigen::Index>(i) * r, r);
  };
  std::complex<double> acc(0.0, 0.0);
  for (const Pair& p : collect_pairs(m, net, scheme.rho)) {
    const double bw = beta_weight(scheme, n, p.d);
    const double w = 0.5 * bw * net.measures[p.i] * net.measures[p.j];
    const Eigen::MatrixXcd pij =
        modified_transport(b, opts.modifier, net, p.i, p.j);
    const Eigen::MatrixXcd pji =
        modified_transport(b, opts.modifier, net, p.j, p.i);
    const Eigen::VectorXcd gu_ij = fiber(u, p.i) - pij * fiber(u, p.j);
    const Eigen::VectorXcd gv_ij = fiber(v, p.i) - pij * fiber(v, p.j);
    const Eigen::VectorXcd gu_ji = fiber(u, p.j) - pji * fiber(u, p.i);
    const Eigen::VectorXcd gv_ji = fiber(v, p.j) - pji * fiber(v, p.i);
    acc += w * (gu_ij.dot(gv_ij) + gu_ji.dot(gv_ji));
  }
  return acc;
}

double dirichlet_energy(const BundleModel& b, const Net& net,
                        const WeightScheme& scheme, const DiscreteSection& u,
                        const AssemblyOptions& opts) {
  return dirichlet_form(b, net, scheme, u, u, opts).real();
}

double kernel_psi(int n, double t) {
  if (t < 0.0) throw std::invalid_argument("kernel_psi: negative argument");
  if (t >= 1.0) return 0.0;
  return (n + 2) / (2.0 * unit_ball_volume(n)) * (1.0 - t * t);
}

double kernel_k_rho(int n, double rho, double dist) {
  return std::pow(rho, -n) * kernel_psi(n, dist / rho);
}

Eigen::VectorXd theta_weights(const ManifoldModel& m, const Net& net,
                              double rho) {
  validate_net(net);
  validate_rho(m, rho);
  WeightScheme scheme;
  scheme.rho = rho;
  scheme.alpha = WeightScheme::Alpha::KernelTheta;
  return alpha_from_pairs(m, net, scheme, collect_pairs(m, net, rho));
}

DiscreteSection smoothing_apply(const BundleModel& b, const Net& net,
                                double rho, const DiscreteSection& u) {
  validate_net(net);
  const ManifoldModel& m = b.base();
  validate_rho(m, rho);
  const int n = m.dim();
  const int r = b.rank();
  const int n_pts = static_cast<int>(net.points.size());
  const std::vector<Pair> pairs = collect_pairs(m, net, rho);

  WeightScheme scheme;
  scheme.rho = rho;
  scheme.alpha = WeightScheme::Alpha::KernelTheta;
  const Eigen::VectorXd th = alpha_from_pairs(m, net, scheme, pairs);

  auto fiber = [r, &u](int i) {
    return u.values.segment(static_cast<Eigen::Index>(i) * r, r);
  };
  std::vector<Eigen::VectorXcd> acc(n_pts);
  const double k0 = kernel_k_rho(n, rho, 0.0);
  for (int i = 0; i < n_pts; ++i) acc[i] = k0 * net.measures[i] * fiber(i);
  for (const Pair& p : pairs) {
    const double k = kernel_k_rho(n, rho, p.d);
    const Eigen::MatrixXcd pij =
        transport(b, net.points[p.i], net.points[p.j]).matrix;
    acc[p.i] += k * net.measures[p.j] * (pij * fiber(p.j));
    acc[p.j] += k * net.measures[p.i] * (pij.adjoint() * fiber(p.i));
  }
  DiscreteSection out;
  out.rank = r;
  out.values.resize(static_cast<Eigen::Index>(n_pts) * r);
  for (int i = 0; i < n_pts; ++i) {
    out.values.segment(static_cast<Eigen::Index>(i) * r, r) = acc[i] / th(i);
  }
  return out;
}

double essential_gap_bound(const ManifoldModel& m, const Net& net,
                           const WeightScheme& scheme) {
  validate_net(net);
  validate_rho(m, scheme.rho);
  const int n = m.dim();
  const int n_pts = static_cast<int>(net.points.size());
  const std::vector<Pair> pairs = collect_pairs(m, net, scheme.rho);
  const Eigen::VectorXd alpha = alpha_from_pairs(m, net, scheme, pairs);
  const double b0 = beta_weight(scheme, n, 0.0);
  Eigen::VectorXd sums(n_pts);
  for (int i = 0; i < n_pts; ++i) sums(i) = b0 * net.measures[i];
  for (const Pair& p : pairs) {
    const double bw = beta_weight(scheme, n, p.d);
    sums(p.i) += bw * net.measures[p.j];
    sums(p.j) += bw * net.measures[p.i];
  }
  return (sums.array() / (2.0 * alpha.array())).minCoeff();
}

DiscreteSection discretize_section(
    const BundleModel& b, const Net& net,
    const std::function<Eigen::VectorXcd(const ManifoldPoint&)>& u,
    std::int64_t quad_samples) {
  validate_net(net);
  const ManifoldModel& m = b.base();
  const int r = b.rank();
  const int n_pts = static_cast<int>(net.points.size());

  const std::vector<ManifoldPoint> samples = measure_stream(m, net, quad_samples);
  NeighborIndex index(m, net.points,
                      std::max(net.covering_radius_est, net.separation_est));
  std::vector<Eigen::VectorXcd> acc(n_pts, Eigen::VectorXcd::Zero(r));
  std::vector<std::int64_t> counts(n_pts, 0);
  for (const ManifoldPoint& s : samples) {
    const int i = index.nearest(s);
    acc[i] += transport(b, net.points[i], s).matrix * u(s);
    ++counts[i];
  }
  DiscreteSection out;
  out.rank = r;
  out.values.resize(static_cast<Eigen::Index>(n_pts) * r);
  for (int i = 0; i < n_pts; ++i) {
    if (counts[i] == 0) {
      throw std::runtime_error(
          "discretize_section: empty cell (no quadrature sample landed)");
    }
    out.values.segment(static_cast<Eigen::Index>(i) * r, r) =
        acc[i] / static_cast<double>(counts[i]);
  }
  return out;
}

std::function<Eigen::VectorXcd(const ManifoldPoint&)> extend_section(
    const BundleModel& b, const Net& net, DiscreteSection u) {
  struct Closure {
    BundleModel bundle;
    Net net;
    DiscreteSection u;
    NeighborIndex index;
    Closure(const BundleModel& b_, const Net& n_, DiscreteSection u_)
        : bundle(b_),
          net(n_),
          u(std::move(u_)),
          index(bundle.base(), net.points,
                std::max(net.covering_radius_est, net.separation_est)) {}
  };
  auto closure = std::make_shared<Closure>(b, net, std::move(u));
  return [closure](const ManifoldPoint& y) -> Eigen::VectorXcd {
    const int i = closure->index.nearest(y);
    return transport(closure->bundle, y, closure->net.points[i]).matrix *
           closure->u.fiber(i);
  };
}

McEstimate ball_quadratic_integral_mc(int n, double rho,
                                      const Eigen::MatrixXd& s,
                                      std::int64_t samples,
                                      std::uint64_t seed) {
  if (n < 1 || !(rho > 0.0) || samples < 100 || s.rows() != n ||
      s.cols() != n) {
    throw std::invalid_argument("ball_quadratic_integral_mc: bad arguments");
  }
  CounterRng rng(seed);
  std::uint64_t counter = 0;
  // Uniform points in the rho-ball by rejection from the enclosing cube.
  double mean = 0.0, m2 = 0.0;
  std::int64_t accepted = 0;
  Eigen::VectorXd x(n);
  while (accepted < samples) {
    double norm_sq = 0.0;
    for (int a = 0; a < n; ++a) {
      x(a) = rho * rng.symmetric(counter++);
      norm_sq += x(a) * x(a);
    }
    if (norm_sq >= rho * rho) continue;
    ++accepted;
    const double f = x.dot(s * x);
    const double delta = f - mean;
    mean += delta / static_cast<double>(accepted);
    m2 += delta * (f - mean);
  }
  const double var = m2 / static_cast<double>(samples - 1);
  const double ball_vol = unit_ball_volume(n) * std::pow(rho, n);
  McEstimate out;
  out.value = ball_vol * mean;
  out.std_err = ball_vol * std::sqrt(var / static_cast<double>(samples));
  return out;
}

double ball_moment_check(int n, double rho, int trials, std::int64_t samples,
                         std::uint64_t seed) {
  if (n < 1 || !(rho > 0.0) || trials < 1 || samples < 100) {
    throw std::invalid_argument("ball_moment_check: bad arguments");
  }
  const double nu_n = unit_ball_volume(n);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = CounterRng::substream(seed, kBallTag + t);
    CounterRng rng(trial_seed);
    Eigen::MatrixXd s(n, n);
    std::uint64_t counter = 0;
    for (int a = 0; a < n; ++a) {
      for (int c = a; c < n; ++c) {
        s(a, c) = rng.symmetric(counter++);
        s(c, a) = s(a, c);
      }
    }
    const McEstimate est =
        ball_quadratic_integral_mc(n, rho, s, samples, trial_seed + 1);
    const double exact = nu_n * std::pow(rho, n + 2) / (n + 2) * s.trace();
    const double diff = std::abs(est.value - exact);
    // A zero-variance integrand (e.g. S = 0) is exact; treat it as zero
    // deviations rather than dividing by a zero standard error.
    const double dev = est.std_err > 0.0 ? diff / est.std_err
                       : diff > 0.0      ? std::numeric_limits<double>::infinity()
                                         : 0.0;
    if (dev > worst) worst = dev;
  }
  return worst;
}

}  // namespace conlap
