#include <doctest.h>

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "conlap/assembly.hpp"
#include "conlap/continuum.hpp"
#include "conlap/eigensolver.hpp"
#include "conlap/errors.hpp"
#include "conlap/rng.hpp"

using namespace conlap;

namespace {

constexpr double kPi = 3.14159265358979323846;

ManifoldPoint pt(const ManifoldModel& m, std::initializer_list<double> coords) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) v(i++) = c;
  return m.point(v);
}

Net two_point_circle_net(const ManifoldModel& circle, double mu0, double mu1) {
  Net net;
  net.points = {pt(circle, {0.0}), pt(circle, {0.4})};
  net.measures = {mu0, mu1};
  net.covering_radius_est = 0.3;
  net.separation_est = 0.4;
  return net;
}

WeightScheme plain_scheme(double rho) {
  WeightScheme s;
  s.rho = rho;
  return s;
}

Net measured_net(const ManifoldModel& m, double eps, std::uint64_t seed) {
  Net net = build_net(m, eps, seed);
  estimate_measures(m, net,
                    150 * static_cast<std::int64_t>(net.points.size()), seed);
  return net;
}

double constant_rate(int n, double rho) {
  return 2.0 * (n + 2) / (unit_ball_volume(n) * std::pow(rho, n + 2));
}

}  // namespace

TEST_CASE("two-point operator matches the hand-written matrix") {
  const ManifoldModel circle = ManifoldModel::circle(1.0);
  const BundleModel b = BundleModel::trivial_real(circle, 1);
  const double mu0 = 0.55, mu1 = 0.45, rho = 0.45;
  const Net net = two_point_circle_net(circle, mu0, mu1);
  const BlockOperator op = assemble_graph_laplacian(b, net, rho);

  const double c = constant_rate(1, rho);
  CHECK(op.block_raw(0, 0)(0, 0).real() == doctest::Approx(c * mu1).epsilon(1e-13));
  CHECK(op.block_raw(0, 1)(0, 0).real() == doctest::Approx(-c * mu1).epsilon(1e-13));
  CHECK(op.block_raw(1, 0)(0, 0).real() == doctest::Approx(-c * mu0).epsilon(1e-13));
  CHECK(op.block_raw(1, 1)(0, 0).real() == doctest::Approx(c * mu0).epsilon(1e-13));

  // Spectrum {0, c (mu0 + mu1)}.
  const SpectrumResult sr = dense_reference_spectrum(op);
  CHECK(sr.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sr.eigenvalues(1) ==
        doctest::Approx(c * (mu0 + mu1)).epsilon(1e-12));

  // Pointwise application agrees with the formula.
  Eigen::VectorXcd u(2);
  u << 1.0, 2.0;
  const Eigen::VectorXcd au = op.apply_raw(u);
  CHECK(std::abs(au(0) - std::complex<double>(c * mu1 * (1.0 - 2.0))) < 1e-10);
  CHECK(std::abs(au(1) - std::complex<double>(c * mu0 * (2.0 - 1.0))) < 1e-10);
}

TEST_CASE("pairs at distance exactly rho do not couple") {
  const ManifoldModel circle = ManifoldModel::circle(1.0);
  const BundleModel b = BundleModel::trivial_real(circle, 1);
  Net net;
  net.points = {pt(circle, {0.0}), pt(circle, {0.25})};
  net.measures = {0.5, 0.5};
  net.covering_radius_est = 0.125;
  const BlockOperator op = assemble_graph_laplacian(b, net, 0.25);
  CHECK(op.to_dense().norm() == 0.0);
  CHECK(op.stored_off_diagonal() == 0);
}

TEST_CASE("difference vector gamma") {
  const ManifoldModel torus = ManifoldModel::flat_torus({1.0});
  const BundleModel triv = BundleModel::trivial_real(torus, 2);
  FiberVector ux{pt(torus, {0.2}), Eigen::VectorXcd::Ones(2)};
  FiberVector uy{pt(torus, {0.3}), Eigen::VectorXcd::Ones(2)};
  CHECK(gamma(triv, ux, uy).norm() < 1e-15);

  const BundleModel u1 = BundleModel::flat_u1(torus, {0.25});
  FiberVector vx{pt(torus, {0.0}), Eigen::VectorXcd::Ones(1)};
  FiberVector vy{pt(torus, {0.1}), Eigen::VectorXcd::Ones(1)};
  const std::complex<double> phase =
      std::exp(std::complex<double>(0.0, 2.0 * kPi * 0.25 * (0.0 - 0.1)));
  const Eigen::VectorXcd g = gamma(u1, vx, vy);
  CHECK(std::abs(g(0) - (1.0 - phase)) < 1e-14);

  CHECK(gamma(u1, vx, vx).norm() == 0.0);
}

TEST_CASE("graph assembly equals the unit/constant weighted form") {
  const ManifoldModel torus = ManifoldModel::flat_torus({1.0, 1.0});
  struct Case {
    BundleModel bundle;
    double rho;
  };
  const std::vector<Case> cases = {
      {BundleModel::trivial_real(torus, 2), 0.3},
      {BundleModel::flat_u1(torus, {0.25, 0.5}), 0.3},
      {BundleModel::tangent_sphere2(ManifoldModel::sphere2(1.0)), 1.1},
  };
  for (const Case& c : cases) {
    const Net net = measured_net(c.bundle.base(), c.rho / 3.0, 23);
    const BlockOperator a = assemble_graph_laplacian(c.bundle, net, c.rho);
    const BlockOperator w =
        assemble_weighted_laplacian(c.bundle, net, plain_scheme(c.rho));
    const Eigen::MatrixXcd da = a.to_dense(), dw = w.to_dense();
    CHECK((da - dw).norm() <= 1e-14 * std::max(1.0, da.norm()));
  }
}

TEST_CASE("assembled operators are positive semidefinite and self-adjoint") {
  const ManifoldModel torus = ManifoldModel::flat_torus({1.0, 1.0});
  const std::vector<BundleModel> bundles = {
      BundleModel::trivial_real(torus, 1),
      BundleModel::flat_u1(torus, {0.25, 0.5}),
      BundleModel::tangent_sphere2(ManifoldModel::sphere2(1.0)),
  };
  for (const BundleModel& b : bundles) {
    const double rho = (b.kind() == BundleKind::TangentSphere2) ? 1.1 : 0.3;
    const Net net = measured_net(b.base(), rho / 3.0, 29);
    const BlockOperator op = assemble_graph_laplacian(b, net, rho);
    const Eigen::MatrixXcd d = op.to_dense();
    const double lam = gershgorin_upper_bound(op);
    CHECK((d - d.adjoint()).norm() <= 1e-12 * lam);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * lam);
    // Rayleigh quotients bound the bottom of the spectrum from above.
    const DiscreteSection u = random_section(b, net, 83);
    const DiscreteSection au{u.rank, op.apply_raw(u.values)};
    const Eigen::VectorXd w;  // unit alpha
    const double rayleigh = weighted_inner(net, w, au, u).real() /
                            weighted_norm_sq(net, w, u);
    CHECK(es.eigenvalues().minCoeff() <= rayleigh + 1e-10 * lam);
  }
}

TEST_CASE("weighted operator and pair energy satisfy the form identity") {
  const ManifoldModel torus = ManifoldModel::flat_torus({1.0, 1.0});
  const std::vector<BundleModel> bundles = {
      BundleModel::trivial_real(torus, 1),
      BundleModel::trivial_complex(ManifoldModel::circle(1.0), 2),
      BundleModel::flat_u1(torus, {0.25, 0.5}),
      BundleModel::tangent_sphere2(ManifoldModel::sphere2(1.0)),
  };
  for (const BundleModel& b : bundles) {
    const double rho = (b.kind() == BundleKind::TangentSphere2) ? 1.1 : 0.3;
    const Net net = measured_net(b.base(), rho / 3.0, 31);

    std::vector<std::pair<WeightScheme, AssemblyOptions>> setups;
    setups.emplace_back(plain_scheme(rho), AssemblyOptions{});
    WeightScheme vol = plain_scheme(rho);
    vol.alpha = WeightScheme::Alpha::VolumeNormalized;
    vol.beta = WeightScheme::Beta::UnitIndicator;
    setups.emplace_back(vol, AssemblyOptions{});
    WeightScheme ker = plain_scheme(rho);
    ker.alpha = WeightScheme::Alpha::KernelTheta;
    ker.beta = WeightScheme::Beta::Kernel;
    setups.emplace_back(ker, AssemblyOptions{});
    AssemblyOptions perturbed;
    perturbed.general_form = true;
    perturbed.modifier = seeded_perturbation(0.2, 5);
    setups.emplace_back(plain_scheme(rho), perturbed);

    for (const auto& [scheme, opts] : setups) {
      const BlockOperator op =
          assemble_weighted_laplacian(b, net, scheme, opts);
      const double lam = gershgorin_upper_bound(op);
      const Eigen::VectorXd alpha = alpha_weights(b.base(), net, scheme);
      for (int trial = 0; trial < 25; ++trial) {
        const DiscreteSection u =
            random_section(b, net, 100 + static_cast<std::uint64_t>(trial));
        const DiscreteSection v =
            random_section(b, net, 900 + static_cast<std::uint64_t>(trial));
        const DiscreteSection au{u.rank, op.apply_raw(u.values)};
        const std::complex<double> lhs = weighted_inner(net, alpha, v, au);
        const std::complex<double> rhs =
            dirichlet_form(b, net, scheme, v, u, opts);
        const double scale =
            (1.0 + lam) * std::sqrt(weighted_norm_sq(net, alpha, u) *
                                    weighted_norm_sq(net, alpha, v));
        CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("volume-normalized weights are constant on a grid") {
  const ManifoldModel torus = ManifoldModel::flat_torus({1.0, 1.0});
  const Net net = build_grid_net(torus, {12, 12}, 3);
  WeightScheme scheme = plain_scheme(0.3);
  scheme.alpha = WeightScheme::Alpha::VolumeNormalized;
  const Eigen::VectorXd alpha = alpha_weights(torus, net, scheme);
  CHECK(alpha.minCoeff() > 0.0);
  CHECK(alpha.maxCoeff() - alpha.minCoeff() <= 1e-12 * alpha.mean());
}

TEST_CASE("pair energy closed forms") {
  const ManifoldModel circle = ManifoldModel::circle(1.0);
  const BundleModel b = BundleModel::trivial_complex(circle, 1);
  const double rho = 0.45;
  const Net net = two_point_circle_net(circle, 0.55, 0.45);

  DiscreteSection constant;
  constant.rank = 1;
  constant.values = Eigen::VectorXcd::Ones(2);
  CHECK(dirichlet_energy(b, net, plain_scheme(rho), constant) <= 1e-15);

  DiscreteSection u;
  u.rank = 1;
  u.values.resize(2);
  u.values << std::complex<double>(1.0, 0.0), std::complex<double>(0.0, 2.0);
  const double c = constant_rate(1, rho);
  const double expected =
      c * 0.55 * 0.45 * std::norm(u.values(0) - u.values(1));
  CHECK(dirichlet_energy(b, net, plain_scheme(rho), u) ==
        doctest::Approx(expected).epsilon(1e-12));

  // A global phase never changes the energy.
  DiscreteSection rotated = u;
  rotated.values *= std::exp(std::complex<double>(0.0, 0.7));
  CHECK(dirichlet_energy(b, net, plain_scheme(rho), rotated) ==
        doctest::Approx(dirichlet_energy(b, net, plain_scheme(rho), u))
            .epsilon(1e-12));
}

TEST_CASE("pair energy of an analytic mode approaches the continuum value") {
  const ManifoldModel torus = ManifoldModel::flat_torus({1.0, 1.0});
  const BundleModel b = BundleModel::trivial_complex(torus, 1);
  const double rho = 0.3;
  const Net net = build_grid_net(torus, {40, 40}, 7);
  const Eigensection mode = analytic_eigensection(b, 1);
  const DiscreteSection u = section_from_function(b, net, mode.value);
  WeightScheme scheme = plain_scheme(rho);
  scheme.beta = WeightScheme::Beta::UnitIndicator;
  // dirichlet_form carries a 1/2; the ordered-pair energy is twice it.
  const double discrete = 2.0 * dirichlet_energy(b, net, scheme, u);
  const double continuum = mode_pair_energy(torus, mode.omega, rho);
  CHECK(std::abs(discrete - continuum) <= 0.08 * continuum);
}

TEST_CASE("cell averaging reproduces closed-form sections") {
  const ManifoldModel circle = ManifoldModel::circle(1.0);
  const BundleModel b = BundleModel::trivial_complex(circle, 1);
  const Net net = build_grid_net(circle, {64}, 5);

  const auto constant_fn = [](const ManifoldPoint&) {
    return Eigen::VectorXcd::Ones(1).eval();
  };
  const DiscreteSection qc = discretize_section(b, net, constant_fn, 60000);
  for (int i = 0; i < 64; ++i)
    CHECK(std::abs(qc.fiber(i)(0) - 1.0) < 1e-12);

  const Eigensection mode = analytic_eigensection(b, 1);
  const DiscreteSection qm = discretize_section(b, net, mode.value, 60000);
  const DiscreteSection sampled = section_from_function(b, net, mode.value);
  const double cell_radius = net.covering_radius_est;
  for (int i = 0; i < 64; ++i) {
    CHECK((qm.fiber(i) - sampled.fiber(i)).norm() <=
          1.3 * mode.omega.norm() * cell_radius);
  }
}

TEST_CASE("extension and cell averaging are consistent") {
  const ManifoldModel torus = ManifoldModel::flat_torus({1.0, 1.0});
  const BundleModel b = BundleModel::flat_u1(torus, {0.25, 0.5});
  Net net = build_net(torus, 0.12, 41);
  estimate_measures(torus, net,
                    120 * static_cast<std::int64_t>(net.points.size()), 41);

  // Averaging the piecewise extension over the defining sample stream gives
  // back exactly the section it extends (round-trip transport cancels).
  const DiscreteSection u = random_section(b, net, 77);
  const auto ext = extend_section(b, net, u);
  const DiscreteSection round =
      discretize_section(b, net, ext, net.mc_sample_count);
  CHECK((round.values - u.values).norm() <= 1e-12 * u.values.norm());

  // Extension with one net point transports a single fiber across its
  // neighborhood (transport needs the target within the injectivity radius).
  Net solo;
  solo.points = {pt(torus, {0.5, 0.5})};
  solo.measures = {1.0};
  DiscreteSection one;
  one.rank = 1;
  one.values = Eigen::VectorXcd::Constant(1, std::complex<double>(0.3, -0.4));
  const auto solo_ext = extend_section(b, solo, one);
  for (const ManifoldPoint& s : sample_uniform(torus, 50, 3)) {
    if (distance(torus, solo.points[0], s) >= 0.45) continue;
    CHECK(std::abs(std::abs(solo_ext(s)(0)) - 0.5) < 1e-12);
  }

  // The extension preserves the weighted L2 mass up to sampling error.
  const double mass = weighted_norm_sq(net, Eigen::VectorXd(), u);
  const std::size_t fresh = 40000;
  double mean = 0.0, m2 = 0.0;
  std::size_t count = 0;
  for (const ManifoldPoint& s : sample_uniform(torus, fresh, 99)) {
    const double val = torus.volume() * ext(s).squaredNorm();
    ++count;
    const double d = val - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (val - mean);
  }
  const double var = m2 / static_cast<double>(count - 1);
  const double sigma = std::sqrt(
      var / static_cast<double>(fresh) +
      var / static_cast<double>(net.mc_sample_count));
  CHECK(std::abs(mean - mass) <= 3.0 * sigma);
}

TEST_CASE("kernel profile and theta weights") {
  CHECK(kernel_psi(1, 1.0) == 0.0);
  CHECK(kernel_psi(1, 2.0) == 0.0);
  CHECK(kernel_psi(1, 0.0) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(kernel_psi(2, 0.0) == doctest::Approx(2.0 / kPi).epsilon(1e-14));
  CHECK_THROWS_AS(kernel_psi(1, -0.1), std::invalid_argument);
  CHECK(kernel_k_rho(2, 0.5, 0.7) == 0.0);
  CHECK(kernel_k_rho(1, 0.5, 0.1) ==
        doctest::Approx(2.0 * kernel_psi(1, 0.2)).epsilon(1e-14));

  // Unit mass: int_{B_1} psi(|x|) dx = 1, via the radial quadrature.
  for (int n = 1; n <= 3; ++n) {
    const Quadrature q = gauss_legendre(64);
    double mass = 0.0;
    for (Eigen::Index i = 0; i < q.nodes.size(); ++i) {
      const double r = 0.5 * (q.nodes(i) + 1.0);
      mass += 0.5 * q.weights(i) * kernel_psi(n, r) * n *
              unit_ball_volume(n) * std::pow(r, n - 1);
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  }

  // On a fine net theta approximates the unit kernel mass.
  const ManifoldModel torus = ManifoldModel::flat_torus({1.0, 1.0});
  const Net net = build_grid_net(torus, {40, 40}, 9);
  const Eigen::VectorXd theta = theta_weights(torus, net, 0.25);
  CHECK((theta.array() - 1.0).abs().maxCoeff() <= 0.02);
}

TEST_CASE("kernel smoothing properties") {
  const ManifoldModel torus = ManifoldModel::flat_torus({1.0, 1.0});
  const double rho = 0.3;
  const Net net = build_grid_net(torus, {16, 16}, 13);

  // Smoothing is an average: constants are fixed points on trivial bundles.
  const BundleModel triv = BundleModel::trivial_real(torus, 2);
  DiscreteSection constant;
  constant.rank = 2;
  constant.values = Eigen::VectorXcd::Ones(2 * 256);
  const DiscreteSection sc = smoothing_apply(triv, net, rho, constant);
  CHECK((sc.values - constant.values).norm() <= 1e-12 * constant.values.norm());

  // Smoothing is exactly the identity minus the kernel-weighted operator.
  const BundleModel u1 = BundleModel::flat_u1(torus, {0.25, 0.5});
  WeightScheme ker = plain_scheme(rho);
  ker.alpha = WeightScheme::Alpha::KernelTheta;
  ker.beta = WeightScheme::Beta::Kernel;
  const BlockOperator a_theta = assemble_weighted_laplacian(u1, net, ker);
  const DiscreteSection u = random_section(u1, net, 55);
  const DiscreteSection su = smoothing_apply(u1, net, rho, u);
  const Eigen::VectorXcd expect = u.values - a_theta.apply_raw(u.values);
  CHECK((su.values - expect).norm() <= 1e-10 * u.values.norm());

  // Phase equivariance.
  DiscreteSection rotated = u;
  rotated.values *= std::exp(std::complex<double>(0.0, 1.1));
  const DiscreteSection sr = smoothing_apply(u1, net, rho, rotated);
  CHECK((sr.values -
         su.values * std::exp(std::complex<double>(0.0, 1.1)))
            .norm() <= 1e-12 * u.values.norm());
}

TEST_CASE("essential gap bound") {
  const ManifoldModel circle = ManifoldModel::circle(1.0);
  Net solo;
  solo.points = {pt(circle, {0.0})};
  solo.measures = {1.0};
  const double rho = 0.3;
  const double c = constant_rate(1, rho);
  CHECK(essential_gap_bound(circle, solo, plain_scheme(rho)) ==
        doctest::Approx(0.5 * c).epsilon(1e-13));

  // Fine grids approach the continuum value (n+2)/rho^2.
  const ManifoldModel torus = ManifoldModel::flat_torus({1.0, 1.0});
  const Net grid = build_grid_net(torus, {40, 40}, 3);
  const double gap = essential_gap_bound(torus, grid, plain_scheme(0.25));
  CHECK(std::abs(gap - 4.0 / 0.0625) <= 0.05 * (4.0 / 0.0625));

  // The bound is linear in the measures (unit outer weights).
  Net doubled = grid;
  for (double& mu : doubled.measures) mu *= 2.0;
  CHECK(essential_gap_bound(torus, doubled, plain_scheme(0.25)) ==
        doctest::Approx(2.0 * gap).epsilon(1e-12));
}

TEST_CASE("ball quadratic integrals") {
  Eigen::MatrixXd eye2 = Eigen::MatrixXd::Identity(2, 2);
  const McEstimate est = ball_quadratic_integral_mc(2, 0.7, eye2, 400000, 11);
  const double exact = kPi * std::pow(0.7, 4) / 2.0;
  CHECK(std::abs(est.value - exact) <= 3.0 * est.std_err);
  CHECK(est.std_err > 0.0);

  const McEstimate zero =
      ball_quadratic_integral_mc(2, 0.7, Eigen::MatrixXd::Zero(2, 2), 5000, 3);
  CHECK(zero.value == 0.0);
  CHECK(zero.std_err == 0.0);

  Eigen::MatrixXd traceless(2, 2);
  traceless << 1.0, 0.0, 0.0, -1.0;
  const McEstimate t =
      ball_quadratic_integral_mc(2, 0.7, traceless, 400000, 17);
  CHECK(std::abs(t.value) <= 3.0 * t.std_err);

  for (int n = 1; n <= 3; ++n)
    CHECK(ball_moment_check(n, 0.8, 3, 120000, 21) < 3.5);

  CHECK_THROWS_AS(ball_quadratic_integral_mc(0, 0.7, eye2, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      ball_quadratic_integral_mc(2, 0.7, Eigen::MatrixXd::Zero(3, 2), 100, 1),
      std::invalid_argument);
}

TEST_CASE("operator text export round-trips exactly") {
  const ManifoldModel torus = ManifoldModel::flat_torus({1.0, 1.0});
  const BundleModel b = BundleModel::flat_u1(torus, {0.25, 0.5});
  const Net net = measured_net(torus, 0.1, 61);
  const BlockOperator op = assemble_graph_laplacian(b, net, 0.3);

  std::stringstream ss;
  op.write_text(ss);
  const BlockOperator back = BlockOperator::read_text(ss);
  CHECK(back.num_points() == op.num_points());
  CHECK(back.block_size() == op.block_size());
  CHECK(back.regime_ok == op.regime_ok);
  CHECK(back.stored_off_diagonal() == op.stored_off_diagonal());
  CHECK((back.scale() - op.scale()).norm() == 0.0);
  CHECK((back.to_dense() - op.to_dense()).norm() == 0.0);
}

TEST_CASE("assembly guards") {
  const ManifoldModel torus = ManifoldModel::flat_torus({1.0, 1.0});
  const BundleModel b = BundleModel::trivial_real(torus, 1);
  const Net net = build_grid_net(torus, {8, 8}, 1);
  // rho beyond the injectivity radius invalidates the transport closed forms.
  CHECK_THROWS_AS(assemble_graph_laplacian(b, net, 0.6), std::domain_error);
  // The regime flag reports nets too coarse for the radius.
  const BlockOperator coarse = assemble_graph_laplacian(b, net, 0.3);
  CHECK_FALSE(coarse.regime_ok);
  const Net fine = build_grid_net(torus, {32, 32}, 1);
  const BlockOperator ok = assemble_graph_laplacian(b, fine, 0.3);
  CHECK(ok.regime_ok);
}
