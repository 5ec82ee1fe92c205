#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace conlap {

enum class ManifoldKind { Circle, FlatTorus, Sphere2 };

/// A point on a model manifold.  Chart coordinates for circle/torus factors
/// (reduced to [0, L_i) per factor); ambient 3-vector of norm R for the
/// round sphere.
struct ManifoldPoint {
  Eigen::VectorXd coords;
};

/// Tangent vector attached to a base point.  Chart components for flat
/// models, ambient 3-vector orthogonal to the base point for the sphere.
struct TangentVector {
  ManifoldPoint base;
  Eigen::VectorXd components;
};

struct CurvatureInfo {
  double sectional_bound;    // |K_M|
  double injectivity_radius;
};

/// Model Riemannian manifolds with closed-form metric data: a circle of
/// length L, a flat rectangular torus with edge lengths L_1..L_d, and the
/// round 2-sphere of radius R.
class ManifoldModel {
 public:
  static ManifoldModel circle(double length);
  static ManifoldModel flat_torus(std::vector<double> lengths);
  static ManifoldModel sphere2(double radius);

  ManifoldKind kind() const { return kind_; }
  int dim() const;                 // intrinsic dimension n
  double volume() const;
  const std::vector<double>& lengths() const { return lengths_; }
  double radius() const { return radius_; }

  /// Canonicalize raw coordinates into a valid point: reduces flat charts to
  /// the fundamental domain, rescales sphere points onto the radius-R shell.
  /// Throws std::invalid_argument for non-finite input, wrong sizes, or
  /// sphere points further than 1e-6*R from the shell.
  ManifoldPoint point(const Eigen::VectorXd& raw) const;

 private:
  ManifoldKind kind_;
  std::vector<double> lengths_;  // circle: {L}; torus: L_1..L_d
  double radius_ = 0.0;          // sphere only
};

/// Geodesic distance.
double distance(const ManifoldModel& m, const ManifoldPoint& x,
                const ManifoldPoint& y);

/// Riemannian logarithm at x: the tangent vector v with exp_x(v) = y and
/// |v| = d(x, y).  Throws std::domain_error when d(x, y) >= injectivity
/// radius (no unique minimizing geodesic guaranteed).
TangentVector log_map(const ManifoldModel& m, const ManifoldPoint& x,
                      const ManifoldPoint& y);

/// Riemannian exponential at x (inverse contract of log_map; used for ball
/// sampling and round-trip tests).
ManifoldPoint exp_map(const ManifoldModel& m, const ManifoldPoint& x,
                      const Eigen::VectorXd& components);

/// `count` points drawn i.i.d. from the normalized volume measure, driven by
/// the counter-based generator seeded with `seed` (bit-reproducible).
std::vector<ManifoldPoint> sample_uniform(const ManifoldModel& m,
                                          std::size_t count,
                                          std::uint64_t seed);

/// Exact volume of the metric ball of radius r.  Valid (and guarded) for
/// r < L_min/2 on flat models and r < pi*R on the sphere.
double ball_volume(const ManifoldModel& m, double r);

CurvatureInfo curvature_and_injectivity(const ManifoldModel& m);

/// Volume nu_n of the unit ball in R^n.
double unit_ball_volume(int n);

namespace detail {
/// Signed representative of t modulo L in [-L/2, L/2).  A difference of
/// exactly L/2 maps to the negative representative, which pins behavior on
/// the cut locus deterministically.
double nearest_lift(double t, double length);
/// Representative of t modulo L in [0, L).
double reduce_mod(double t, double length);
}  // namespace detail

}  // namespace conlap
