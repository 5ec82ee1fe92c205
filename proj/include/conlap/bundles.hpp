#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <vector>

#include "conlap/geometry.hpp"

namespace conlap {

enum class BundleKind { TrivialReal, TrivialComplex, FlatU1Torus, TangentSphere2 };

/// Vector bundles with closed-form parallel transport over the model
/// manifolds: trivial bundles of any rank, a flat U(1) line bundle over a
/// torus with prescribed holonomy, and the tangent bundle of the round
/// 2-sphere with its Levi-Civita connection.
class BundleModel {
 public:
  static BundleModel trivial_real(ManifoldModel base, int rank);
  static BundleModel trivial_complex(ManifoldModel base, int rank);
  /// Holonomy angles a_j in [0, 1): transport around the fundamental loop in
  /// direction j multiplies fibers by exp(2*pi*i*a_j).
  static BundleModel flat_u1(ManifoldModel torus_base, std::vector<double> holonomy);
  static BundleModel tangent_sphere2(ManifoldModel sphere_base);

  BundleKind kind() const { return kind_; }
  const ManifoldModel& base() const { return base_; }
  int rank() const { return rank_; }
  bool complex_field() const {
    return kind_ == BundleKind::TrivialComplex || kind_ == BundleKind::FlatU1Torus;
  }
  const std::vector<double>& holonomy() const { return holonomy_; }

 private:
  BundleKind kind_ = BundleKind::TrivialReal;
  ManifoldModel base_ = ManifoldModel::circle(1.0);
  int rank_ = 1;
  std::vector<double> holonomy_;
};

/// Fiber element in the model's canonical frame at `base` (global frame for
/// trivial/U(1); the (e_theta, e_phi) coordinate frame for the sphere
/// tangent bundle).  Real bundles carry zero imaginary parts.
struct FiberVector {
  ManifoldPoint base;
  Eigen::VectorXcd components;
};

/// Parallel transport along the unique minimizing geodesic: `matrix` maps
/// frame components at `source` to frame components at `target`.
struct TransportMap {
  ManifoldPoint source;
  ManifoldPoint target;
  Eigen::MatrixXcd matrix;
};

/// P_{xy}: fiber over y -> fiber over x (source y, target x).  Unitary, with
/// P_{yx} = P_{xy}^{-1}.  Throws std::domain_error when d(x, y) >= r_inj.
TransportMap transport(const BundleModel& b, const ManifoldPoint& x,
                       const ManifoldPoint& y);

/// Uniform bound on the curvature of the connection (0 for flat bundles,
/// 1/R^2 for the sphere tangent bundle).
double curvature_norm_bound(const BundleModel& b);

/// First `count` eigenvalues of the connection Laplacian, ascending, with
/// multiplicity.  Supported: trivial bundles over circle/torus (Fourier),
/// flat-U1 over a torus (shifted Fourier), trivial bundles over the sphere
/// (spherical harmonics), and the sphere tangent bundle.
std::vector<double> analytic_spectrum(const BundleModel& b, std::size_t count);

/// Closed-form eigensection with pointwise evaluators.  `omega` is the
/// effective frequency vector (|omega|^2 = eigenvalue); complex modes have
/// constant |u| = 1 and |grad u| = |omega|.
struct Eigensection {
  double eigenvalue = 0.0;
  Eigen::VectorXd omega;
  bool complex_mode = true;
  std::function<Eigen::VectorXcd(const ManifoldPoint&)> value;
  std::function<double(const ManifoldPoint&)> grad_norm;
};

/// Eigensection for the index-th entry of analytic_spectrum.  Supported for
/// trivial and flat-U1 bundles over circle/torus (closed-form Fourier data).
Eigensection analytic_eigensection(const BundleModel& b, std::size_t index);

namespace detail {
/// Orthonormal (e_theta, e_phi) frame as a 3x2 matrix.  Points within
/// 1e-9*R of a pole are perturbed deterministically along the phi = 0
/// meridian before evaluation.
Eigen::Matrix<double, 3, 2> sphere_frame(const ManifoldModel& m,
                                         const ManifoldPoint& p);
}  // namespace detail

}  // namespace conlap
