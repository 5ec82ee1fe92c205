#pragma once

#include <Eigen/Core>

#include "conlap/geometry.hpp"

namespace conlap {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct Quadrature {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
Quadrature gauss_legendre(int n);

/// Closed-form integral over the Euclidean rho-ball in R^n of
/// 2 (1 - cos(omega . x)) dx, reduced to one dimension by slicing
/// perpendicular to omega and substituting t = rho sin(phi) so the
/// integrand is analytic (exponentially convergent quadrature):
///   nu_{n-1} rho^n Int_{-pi/2}^{pi/2} 2 (1 - cos(|omega| rho sin phi))
///   cos^n(phi) dphi.
double ball_cos_deficit_integral(int n, double omega_norm, double rho);

/// Continuum pair energy Int_M Int_{B_rho(x)} |u(x) - P u(y)|^2 dy dx of a
/// flat-model analytic eigensection with frequency vector omega: the phase
/// difference depends only on the displacement, so the double integral
/// collapses to vol(M) * ball_cos_deficit_integral(n, |omega|, rho).  The
/// value is the same for the complex modes (unit amplitude) and the real
/// sqrt(2)-amplitude cosine/sine modes.  Flat models only.
double mode_pair_energy(const ManifoldModel& m, const Eigen::VectorXd& omega,
                        double rho);

}  // namespace conlap
