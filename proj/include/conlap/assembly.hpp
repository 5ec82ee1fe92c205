#pragma once

#include <complex>
#include <cstdint>
#include <functional>

#include <Eigen/Core>

#include "conlap/block_operator.hpp"
#include "conlap/bundles.hpp"
#include "conlap/nets.hpp"

namespace conlap {

/// Weight recipe for the averaging operator.  `alpha` scales the outer
/// (per-point) normalization, `beta` the pair weights inside the sum:
///
///   (A u)(x_i) = (1 / alpha_i) * sum_{d(x_i,x_j) < rho} beta_ij * mu_j
///                * (u(x_i) - P_{x_i x_j} u(x_j)) / 2-conventions below.
///
/// With Alpha::Unit and Beta::ConstantNormalized this reproduces the plain
/// graph Laplacian normalization 2(n+2) / (nu_n rho^{n+2}).
struct WeightScheme {
  enum class Alpha {
    Unit,              // alpha_i = 1
    VolumeNormalized,  // alpha_i = rho^2 * mu(B_rho(x_i)), ball mass from the net
    KernelTheta,       // alpha_i = theta_i = sum_j k_rho(d_ij) mu_j  (includes j = i)
  };
  enum class Beta {
    ConstantNormalized,  // beta = 2(n+2) / (nu_n rho^{n+2}) on d < rho
    UnitIndicator,       // beta = 1 on d < rho
    Kernel,              // beta = k_rho(d) = rho^{-n} psi(d / rho)
  };

  double rho = 0.0;
  Alpha alpha = Alpha::Unit;
  Beta beta = Beta::ConstantNormalized;
};

/// Optional hook replacing each transport block before it enters the matrix.
/// Arguments: (i, j, P) for the block carrying u(x_j) to the fiber over x_i.
using TransportModifier =
    std::function<Eigen::MatrixXcd(int i, int j, const Eigen::MatrixXcd&)>;

struct AssemblyOptions {
  TransportModifier modifier;  // identity when empty
  /// Use the adjoint-carrying form -(beta/2)(P_ij + P_ji^*) with diagonal
  /// (1/(2 alpha_i)) sum beta mu_j (I + P_ji^* P_ji).  Required whenever the
  /// modified transports are not unitary with P_ji = P_ij^{-1}; for unmodified
  /// transports it agrees with the simplified one-block-per-pair form.
  bool general_form = false;
};

/// Deterministic non-unitary perturbation factory for stress-testing the
/// general assembly form: P -> (I + delta * E_ij) P with a fixed random E_ij
/// of unit max-entry scale per ordered pair.
TransportModifier seeded_perturbation(double delta, std::uint64_t seed);

/// Difference vector u(x) - P_{xy} u(y) for fiber values at two points.
Eigen::VectorXcd gamma(const BundleModel& b, const FiberVector& ux,
                       const FiberVector& uy);

/// Graph connection Laplacian with the standard normalization:
///   (A u)(x_i) = (2(n+2) / (nu_n rho^{n+2})) sum_{d < rho} mu_j
///                (u(x_i) - P_{x_i x_j} u(x_j)),
/// pairs strictly inside the rho-ball, the j = i term dropped (it vanishes).
/// Throws std::domain_error when rho exceeds the injectivity radius; sets
/// regime_ok = (4 * covering_radius < rho < r_inj) on the result.
BlockOperator assemble_graph_laplacian(const BundleModel& b, const Net& net,
                                       double rho);

/// General weighted form; see WeightScheme.  With unit alpha and constant
/// normalized beta it must coincide with assemble_graph_laplacian.
BlockOperator assemble_weighted_laplacian(const BundleModel& b, const Net& net,
                                          const WeightScheme& scheme,
                                          const AssemblyOptions& opts = {});

/// Section sampled on the net, fibers stacked in point order.
struct DiscreteSection {
  int rank = 1;
  Eigen::VectorXcd values;

  Eigen::VectorXcd fiber(int i) const {
    return values.segment(static_cast<Eigen::Index>(i) * rank, rank);
  }
};

DiscreteSection section_from_function(
    const BundleModel& b, const Net& net,
    const std::function<Eigen::VectorXcd(const ManifoldPoint&)>& fn);

/// Independent standard entries per fiber slot (complex entries have
/// independent real/imaginary parts of variance 1/2).  Deterministic in seed.
DiscreteSection random_section(const BundleModel& b, const Net& net,
                               std::uint64_t seed);

/// Discrete L2 pairing sum_i w_i mu_i <u_i, v_i>, conjugate-linear in u.
/// Pass an empty weight vector for w = 1.
std::complex<double> weighted_inner(const Net& net, const Eigen::VectorXd& w,
                                    const DiscreteSection& u,
                                    const DiscreteSection& v);
double weighted_norm_sq(const Net& net, const Eigen::VectorXd& w,
                        const DiscreteSection& u);

/// Outer normalization weights alpha_i of a scheme (used for the inner
/// product in which the assembled operator is self-adjoint).
Eigen::VectorXd alpha_weights(const ManifoldModel& m, const Net& net,
                              const WeightScheme& scheme);

/// Pair energy D(u, v) = (1/2) sum_{i != j, d < rho} beta_ij mu_i mu_j
/// <Gamma_ij u, Gamma_ij v>, conjugate-linear in u.  For the constant
/// normalized beta this is the squared difference norm
/// ((n+2)/(nu_n rho^{n+2})) sum mu mu |Gamma|^2.
std::complex<double> dirichlet_form(const BundleModel& b, const Net& net,
                                    const WeightScheme& scheme,
                                    const DiscreteSection& u,
                                    const DiscreteSection& v,
                                    const AssemblyOptions& opts = {});
double dirichlet_energy(const BundleModel& b, const Net& net,
                        const WeightScheme& scheme, const DiscreteSection& u,
                        const AssemblyOptions& opts = {});

/// Bump profile psi(t) = ((n+2) / (2 nu_n)) (1 - t^2) on [0, 1], zero beyond;
/// normalized to unit mass: int_{B_1} psi(|x|) dx = 1 for every n.
double kernel_psi(int n, double t);
/// Scaled kernel k_rho(d) = rho^{-n} psi(d / rho).
double kernel_k_rho(int n, double rho, double dist);
/// theta_i = sum_j k_rho(d_ij) mu_j over d < rho including j = i.
Eigen::VectorXd theta_weights(const ManifoldModel& m, const Net& net,
                              double rho);

/// Kernel smoothing (I u)(x_i) = theta_i^{-1} sum_{d < rho} k_rho(d_ij) mu_j
/// P_{x_i x_j} u(x_j), including the j = i term.  Satisfies I = id - A_theta
/// exactly, where A_theta is the weighted Laplacian with KernelTheta alpha
/// and Kernel beta.
DiscreteSection smoothing_apply(const BundleModel& b, const Net& net,
                                double rho, const DiscreteSection& u);

/// Lower bound for the spectrum above the approximation window:
/// min_i (1 / (2 alpha_i)) sum_{d < rho} beta_ij mu_j, j = i included.
double essential_gap_bound(const ManifoldModel& m, const Net& net,
                           const WeightScheme& scheme);

/// Cell-averaged discretization: replays the net's quadrature sample stream,
/// assigns each sample to its nearest net point, and averages the transported
/// values P_{x_i s} u(s) over each cell.  `quad_samples` must equal the
/// stream length the net's measures were estimated with (grid nets accept
/// any positive count).  Throws std::runtime_error on an empty cell.
DiscreteSection discretize_section(
    const BundleModel& b, const Net& net,
    const std::function<Eigen::VectorXcd(const ManifoldPoint&)>& u,
    std::int64_t quad_samples);

/// Piecewise extension: evaluates a discrete section at an arbitrary point by
/// transporting the value at the nearest net point.
std::function<Eigen::VectorXcd(const ManifoldPoint&)> extend_section(
    const BundleModel& b, const Net& net, DiscreteSection u);

/// Monte Carlo estimate with its standard error.
struct McEstimate {
  double value = 0.0;
  double std_err = 0.0;
};

/// Monte Carlo estimate of int_{B_rho} <x, S x> dx over the Euclidean
/// rho-ball in R^n for a fixed symmetric matrix S (uniform rejection
/// sampling from the enclosing cube).
McEstimate ball_quadratic_integral_mc(int n, double rho,
                                      const Eigen::MatrixXd& s,
                                      std::int64_t samples,
                                      std::uint64_t seed);

/// Monte Carlo check of the second-moment ball identity
/// int_{B_rho} <x, S x> dx = (nu_n rho^{n+2} / (n+2)) tr(S) for random
/// symmetric S.  Returns the worst deviation across trials measured in
/// estimated standard errors.
double ball_moment_check(int n, double rho, int trials, std::int64_t samples,
                         std::uint64_t seed);

}  // namespace conlap
