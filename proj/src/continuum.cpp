#include "conlap/continuum.hpp"

#include <cmath>
#include <stdexcept>

namespace conlap {

Quadrature gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const double pi = 3.14159265358979323846;
  // Newton iteration from the Chebyshev-like initial guess; symmetric pairs.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre P_n(x) and derivative by the three-term recurrence.
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    q.nodes(i) = -x;
    q.nodes(n - 1 - i) = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.weights(i) = w;
    q.weights(n - 1 - i) = w;
  }
  return q;
}

double ball_cos_deficit_integral(int n, double omega_norm, double rho) {
  if (n < 1 || !(rho > 0.0)) {
    throw std::invalid_argument("ball_cos_deficit_integral: bad arguments");
  }
  if (omega_norm == 0.0) return 0.0;
  static const Quadrature q = gauss_legendre(96);
  const double half_pi = 1.5707963267948966;
  double integral = 0.0;
  for (int i = 0; i < q.nodes.size(); ++i) {
    const double phi = half_pi * q.nodes(i);
    const double t = rho * std::sin(phi);
    integral += half_pi * q.weights(i) * 2.0 *
                (1.0 - std::cos(omega_norm * t)) *
                std::pow(std::cos(phi), n);
  }
  return unit_ball_volume(n - 1) * std::pow(rho, n) * integral;
}

double mode_pair_energy(const ManifoldModel& m, const Eigen::VectorXd& omega,
                        double rho) {
  if (m.kind() == ManifoldKind::Sphere2) {
    throw std::invalid_argument("mode_pair_energy: flat models only");
  }
  if (omega.size() != m.dim()) {
    throw std::invalid_argument("mode_pair_energy: frequency dimension mismatch");
  }
  for (double len : m.lengths()) {
    if (!(rho < 0.5 * len)) {
      throw std::invalid_argument(
          "mode_pair_energy: rho must stay below half the shortest period");
    }
  }
  return m.volume() * ball_cos_deficit_integral(m.dim(), omega.norm(), rho);
}

}  // namespace conlap
