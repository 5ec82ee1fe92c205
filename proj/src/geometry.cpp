#include "conlap/geometry.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <stdexcept>

#include "conlap/rng.hpp"

namespace conlap {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}
}  // namespace

namespace detail {

double reduce_mod(double t, double length) {
  double r = std::fmod(t, length);
  if (r < 0.0) r += length;
  if (r >= length) r = 0.0;  // guard fmod rounding at the seam
  return r;
}

double nearest_lift(double t, double length) {
  double r = std::fmod(t, length);
  if (r < -0.5 * length) r += length;
  if (r >= 0.5 * length) r -= length;
  return r;
}

}  // namespace detail

ManifoldModel ManifoldModel::circle(double length) {
  require(std::isfinite(length) && length > 0.0, "circle length must be positive");
  ManifoldModel m;
  m.kind_ = ManifoldKind::Circle;
  m.lengths_ = {length};
  return m;
}

ManifoldModel ManifoldModel::flat_torus(std::vector<double> lengths) {
  require(!lengths.empty(), "torus needs at least one edge length");
  for (double l : lengths)
    require(std::isfinite(l) && l > 0.0, "torus edge lengths must be positive");
  ManifoldModel m;
  m.kind_ = ManifoldKind::FlatTorus;
  m.lengths_ = std::move(lengths);
  return m;
}

ManifoldModel ManifoldModel::sphere2(double radius) {
  require(std::isfinite(radius) && radius > 0.0, "sphere radius must be positive");
  ManifoldModel m;
  m.kind_ = ManifoldKind::Sphere2;
  m.radius_ = radius;
  return m;
}

int ManifoldModel::dim() const {
  switch (kind_) {
    case ManifoldKind::Circle: return 1;
    case ManifoldKind::FlatTorus: return static_cast<int>(lengths_.size());
    case ManifoldKind::Sphere2: return 2;
  }
  return 0;
}

double ManifoldModel::volume() const {
  switch (kind_) {
    case ManifoldKind::Circle: return lengths_[0];
    case ManifoldKind::FlatTorus: {
      double v = 1.0;
      for (double l : lengths_) v *= l;
      return v;
    }
    case ManifoldKind::Sphere2: return 4.0 * kPi * radius_ * radius_;
  }
  return 0.0;
}

ManifoldPoint ManifoldModel::point(const Eigen::VectorXd& raw) const {
  require(raw.allFinite(), "point coordinates must be finite");
  ManifoldPoint p;
  if (kind_ == ManifoldKind::Sphere2) {
    require(raw.size() == 3, "sphere point needs 3 ambient coordinates");
    const double nrm = raw.norm();
    require(std::abs(nrm - radius_) <= 1e-6 * radius_,
            "sphere point too far from the radius-R shell");
    p.coords = raw * (radius_ / nrm);
  } else {
    require(raw.size() == static_cast<Eigen::Index>(lengths_.size()),
            "point dimension does not match the model");
    p.coords.resize(raw.size());
    for (Eigen::Index j = 0; j < raw.size(); ++j)
      p.coords[j] = detail::reduce_mod(raw[j], lengths_[j]);
  }
  return p;
}

double distance(const ManifoldModel& m, const ManifoldPoint& x,
                const ManifoldPoint& y) {
  if (m.kind() == ManifoldKind::Sphere2) {
    const Eigen::Vector3d a = x.coords, b = y.coords;
    // atan2(|a x b|, a.b) is accurate near both 0 and pi.
    return m.radius() * std::atan2(a.cross(b).norm(), a.dot(b));
  }
  double s = 0.0;
  for (Eigen::Index j = 0; j < x.coords.size(); ++j) {
    const double d = detail::nearest_lift(y.coords[j] - x.coords[j],
                                          m.lengths()[static_cast<std::size_t>(j)]);
    s += d * d;
  }
  return std::sqrt(s);
}

TangentVector log_map(const ManifoldModel& m, const ManifoldPoint& x,
                      const ManifoldPoint& y) {
  const double d = distance(m, x, y);
  const double r_inj = curvature_and_injectivity(m).injectivity_radius;
  if (d >= r_inj)
    throw std::domain_error("log_map: points at or beyond the injectivity radius");
  TangentVector v;
  v.base = x;
  if (m.kind() == ManifoldKind::Sphere2) {
    Eigen::Vector3d xa = x.coords, ya = y.coords;
    const double r2 = m.radius() * m.radius();
    Eigen::Vector3d w = ya - (xa.dot(ya) / r2) * xa;  // projection of y onto T_x
    const double wn = w.norm();
    v.components = (wn < 1e-14 * m.radius() || d == 0.0)
                       ? Eigen::Vector3d::Zero().eval()
                       : Eigen::Vector3d((d / wn) * w);
  } else {
    v.components.resize(x.coords.size());
    for (Eigen::Index j = 0; j < x.coords.size(); ++j)
      v.components[j] = detail::nearest_lift(
          y.coords[j] - x.coords[j], m.lengths()[static_cast<std::size_t>(j)]);
  }
  return v;
}

ManifoldPoint exp_map(const ManifoldModel& m, const ManifoldPoint& x,
                      const Eigen::VectorXd& components) {
  if (m.kind() == ManifoldKind::Sphere2) {
    require(components.size() == 3, "sphere tangent needs 3 ambient components");
    const double t = components.norm();
    if (t == 0.0) return x;
    const double R = m.radius();
    Eigen::Vector3d dir = components / t;
    Eigen::Vector3d raw =
        std::cos(t / R) * Eigen::Vector3d(x.coords) + std::sin(t / R) * R * dir;
    return m.point(raw);
  }
  return m.point(Eigen::VectorXd(x.coords + components));
}

std::vector<ManifoldPoint> sample_uniform(const ManifoldModel& m,
                                          std::size_t count,
                                          std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<ManifoldPoint> out;
  out.reserve(count);
  if (m.kind() == ManifoldKind::Sphere2) {
    const double R = m.radius();
    for (std::size_t i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * rng.uniform(2 * i);
      const double ph = 2.0 * kPi * rng.uniform(2 * i + 1);
      const double st = std::sqrt(std::max(0.0, 1.0 - z * z));
      ManifoldPoint p;
      p.coords = Eigen::Vector3d(R * st * std::cos(ph), R * st * std::sin(ph), R * z);
      out.push_back(std::move(p));
    }
    return out;
  }
  const auto& L = m.lengths();
  const std::size_t d = L.size();
  for (std::size_t i = 0; i < count; ++i) {
    ManifoldPoint p;
    p.coords.resize(static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j)
      p.coords[static_cast<Eigen::Index>(j)] = rng.uniform(i * d + j) * L[j];
    out.push_back(std::move(p));
  }
  return out;
}

double ball_volume(const ManifoldModel& m, double r) {
  require(std::isfinite(r) && r > 0.0, "ball radius must be positive");
  switch (m.kind()) {
    case ManifoldKind::Circle:
    case ManifoldKind::FlatTorus: {
      double lmin = m.lengths()[0];
      for (double l : m.lengths()) lmin = std::min(lmin, l);
      require(r < 0.5 * lmin, "ball radius outside the flat exactness range");
      const int n = m.dim();
      return unit_ball_volume(n) * std::pow(r, n);
    }
    case ManifoldKind::Sphere2: {
      const double R = m.radius();
      require(r < kPi * R, "ball radius outside the sphere exactness range");
      return 2.0 * kPi * R * R * (1.0 - std::cos(r / R));
    }
  }
  return 0.0;
}

CurvatureInfo curvature_and_injectivity(const ManifoldModel& m) {
  switch (m.kind()) {
    case ManifoldKind::Circle:
      return {0.0, 0.5 * m.lengths()[0]};
    case ManifoldKind::FlatTorus: {
      double lmin = m.lengths()[0];
      for (double l : m.lengths()) lmin = std::min(lmin, l);
      return {0.0, 0.5 * lmin};
    }
    case ManifoldKind::Sphere2: {
      const double R = m.radius();
      return {1.0 / (R * R), kPi * R};
    }
  }
  return {0.0, 0.0};
}

double unit_ball_volume(int n) {
  // n = 0 (a point, volume 1) is a valid base case for slice recursions.
  require(n >= 0, "dimension must be nonnegative");
  return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

}  // namespace conlap
