#include "conlap/bundles.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conlap {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool flat_base(const ManifoldModel& m) {
  return m.kind() == ManifoldKind::Circle || m.kind() == ManifoldKind::FlatTorus;
}

struct FlatMode {
  double value;
  std::vector<long> m;
  int channel;
};

bool mode_less(const FlatMode& a, const FlatMode& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.m != b.m) return a.m < b.m;
  return a.channel < b.channel;
}

// Smallest `count` lattice modes of 4*pi^2 * sum_j ((m_j + a_j)/L_j)^2, each
// lattice point contributing `per_mode` channels.  The search box grows until
// it provably contains every mode below the cutoff.
std::vector<FlatMode> enumerate_flat_modes(const std::vector<double>& lengths,
                                           const std::vector<double>& shift,
                                           int per_mode, std::size_t count) {
  const std::size_t d = lengths.size();
  double lmax = lengths[0];
  for (double l : lengths) lmax = std::max(lmax, l);
  for (long box = 2;; box *= 2) {
    std::vector<FlatMode> modes;
    std::vector<long> m(d, -box);
    for (;;) {
      double v = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double f = (static_cast<double>(m[j]) + shift[j]) / lengths[j];
        v += f * f;
      }
      v *= kTwoPi * kTwoPi;
      for (int c = 0; c < per_mode; ++c) modes.push_back({v, m, c});
      std::size_t j = 0;
      while (j < d && ++m[j] > box) m[j++] = -box;
      if (j == d) break;
    }
    std::sort(modes.begin(), modes.end(), mode_less);
    if (modes.size() >= count) {
      // Any mode outside the box has some |m_j| >= box+1, hence
      // value >= 4*pi^2*(box/lmax)^2; stop once the cutoff sits below that.
      const double guarantee = kTwoPi * kTwoPi * (box / lmax) * (box / lmax);
      if (modes[count - 1].value < guarantee) {
        modes.resize(count);
        return modes;
      }
    }
  }
}

Eigen::Matrix3d rotation_taking(const Eigen::Vector3d& from,
                                const Eigen::Vector3d& to) {
  // Rodrigues rotation about (from x to); callers exclude antipodal pairs.
  Eigen::Vector3d ax = from.cross(to);
  const double s = ax.norm();
  const double c = from.dot(to);
  if (s < 1e-14) return Eigen::Matrix3d::Identity();
  ax /= s;
  const double th = std::atan2(s, c);
  Eigen::Matrix3d K;
  K << 0, -ax.z(), ax.y(), ax.z(), 0, -ax.x(), -ax.y(), ax.x(), 0;
  return Eigen::Matrix3d::Identity() + std::sin(th) * K +
         (1.0 - std::cos(th)) * (K * K);
}

}  // namespace

BundleModel BundleModel::trivial_real(ManifoldModel base, int rank) {
  require(rank >= 1, "bundle rank must be positive");
  BundleModel b;
  b.kind_ = BundleKind::TrivialReal;
  b.base_ = std::move(base);
  b.rank_ = rank;
  return b;
}

BundleModel BundleModel::trivial_complex(ManifoldModel base, int rank) {
  require(rank >= 1, "bundle rank must be positive");
  BundleModel b;
  b.kind_ = BundleKind::TrivialComplex;
  b.base_ = std::move(base);
  b.rank_ = rank;
  return b;
}

BundleModel BundleModel::flat_u1(ManifoldModel torus_base,
                                 std::vector<double> holonomy) {
  require(flat_base(torus_base), "flat-U1 bundle needs a circle/torus base");
  require(holonomy.size() == static_cast<std::size_t>(torus_base.dim()),
          "one holonomy angle per torus direction required");
  for (double a : holonomy)
    require(std::isfinite(a) && a >= 0.0 && a < 1.0,
            "holonomy angles must lie in [0, 1)");
  BundleModel b;
  b.kind_ = BundleKind::FlatU1Torus;
  b.base_ = std::move(torus_base);
  b.rank_ = 1;
  b.holonomy_ = std::move(holonomy);
  return b;
}

BundleModel BundleModel::tangent_sphere2(ManifoldModel sphere_base) {
  require(sphere_base.kind() == ManifoldKind::Sphere2,
          "tangent-sphere2 needs the round sphere as base");
  BundleModel b;
  b.kind_ = BundleKind::TangentSphere2;
  b.base_ = std::move(sphere_base);
  b.rank_ = 2;
  return b;
}

namespace detail {

Eigen::Matrix<double, 3, 2> sphere_frame(const ManifoldModel& m,
                                         const ManifoldPoint& p) {
  const double R = m.radius();
  const Eigen::Vector3d q = Eigen::Vector3d(p.coords) / R;
  double st = std::hypot(q.x(), q.y());
  double ct = q.z();
  double cp, sp;
  if (st < 1e-9) {
    // Pole: evaluate at the deterministic nudge along the phi = 0 meridian.
    const double t0 = 1e-9;
    st = std::sin(t0);
    ct = std::copysign(std::cos(t0), ct >= 0.0 ? 1.0 : -1.0);
    cp = 1.0;
    sp = 0.0;
  } else {
    cp = q.x() / st;
    sp = q.y() / st;
  }
  Eigen::Matrix<double, 3, 2> frame;
  frame.col(0) = Eigen::Vector3d(ct * cp, ct * sp, -st);  // e_theta
  frame.col(1) = Eigen::Vector3d(-sp, cp, 0.0);           // e_phi
  return frame;
}

}  // namespace detail

TransportMap transport(const BundleModel& b, const ManifoldPoint& x,
                       const ManifoldPoint& y) {
  const ManifoldModel& m = b.base();
  const double d = distance(m, x, y);
  if (d >= curvature_and_injectivity(m).injectivity_radius)
    throw std::domain_error("transport: points at or beyond the injectivity radius");

  TransportMap t;
  t.source = y;
  t.target = x;
  switch (b.kind()) {
    case BundleKind::TrivialReal:
    case BundleKind::TrivialComplex:
      t.matrix = Eigen::MatrixXcd::Identity(b.rank(), b.rank());
      break;
    case BundleKind::FlatU1Torus: {
      // Phase exp(2*pi*i * sum_j a_j * Delta_j / L_j) with Delta the
      // minimizing lift from y to x; composing around loop j yields the
      // prescribed holonomy exp(2*pi*i*a_j).
      double phase = 0.0;
      const auto& L = m.lengths();
      for (Eigen::Index j = 0; j < x.coords.size(); ++j) {
        const std::size_t ju = static_cast<std::size_t>(j);
        const double delta =
            conlap::detail::nearest_lift(x.coords[j] - y.coords[j], L[ju]);
        phase += b.holonomy()[ju] * delta / L[ju];
      }
      t.matrix = Eigen::MatrixXcd::Constant(
          1, 1, std::exp(std::complex<double>(0.0, kTwoPi * phase)));
      break;
    }
    case BundleKind::TangentSphere2: {
      const double R = m.radius();
      const Eigen::Vector3d xh = Eigen::Vector3d(x.coords) / R;
      const Eigen::Vector3d yh = Eigen::Vector3d(y.coords) / R;
      const Eigen::Matrix3d rot = rotation_taking(yh, xh);
      const auto fx = detail::sphere_frame(m, x);
      const auto fy = detail::sphere_frame(m, y);
      t.matrix = (fx.transpose() * rot * fy).cast<std::complex<double>>();
      break;
    }
  }
  return t;
}

double curvature_norm_bound(const BundleModel& b) {
  if (b.kind() == BundleKind::TangentSphere2) {
    const double R = b.base().radius();
    return 1.0 / (R * R);
  }
  return 0.0;
}

std::vector<double> analytic_spectrum(const BundleModel& b, std::size_t count) {
  if (count == 0) return {};
  const ManifoldModel& m = b.base();
  std::vector<double> out;
  out.reserve(count);

  if (m.kind() == ManifoldKind::Sphere2) {
    const double r2 = m.radius() * m.radius();
    if (b.kind() == BundleKind::TangentSphere2) {
      for (long k = 1; out.size() < count; ++k) {
        const double v = (static_cast<double>(k) * (k + 1) - 1.0) / r2;
        for (long c = 0; c < 2 * (2 * k + 1) && out.size() < count; ++c)
          out.push_back(v);
      }
      return out;
    }
    if (b.kind() == BundleKind::TrivialReal || b.kind() == BundleKind::TrivialComplex) {
      for (long k = 0; out.size() < count; ++k) {
        const double v = static_cast<double>(k) * (k + 1) / r2;
        for (long c = 0; c < (2 * k + 1) * b.rank() && out.size() < count; ++c)
          out.push_back(v);
      }
      return out;
    }
    throw std::invalid_argument("analytic_spectrum: unsupported bundle over the sphere");
  }

  if (!flat_base(m))
    throw std::invalid_argument("analytic_spectrum: unsupported base manifold");
  std::vector<double> shift(static_cast<std::size_t>(m.dim()), 0.0);
  int per_mode = b.rank();
  if (b.kind() == BundleKind::FlatU1Torus) {
    shift = b.holonomy();
    per_mode = 1;
  }
  const auto modes = enumerate_flat_modes(m.lengths(), shift, per_mode, count);
  for (const auto& mode : modes) out.push_back(mode.value);
  return out;
}

Eigensection analytic_eigensection(const BundleModel& b, std::size_t index) {
  const ManifoldModel& m = b.base();
  if (!flat_base(m) || b.kind() == BundleKind::TangentSphere2)
    throw std::invalid_argument(
        "analytic_eigensection: closed-form sections are Fourier modes over "
        "circle/torus bases");

  const std::size_t d = static_cast<std::size_t>(m.dim());
  std::vector<double> shift(d, 0.0);
  int per_mode = b.rank();
  const bool u1 = b.kind() == BundleKind::FlatU1Torus;
  if (u1) per_mode = 1;
  if (u1) shift = b.holonomy();
  const auto modes = enumerate_flat_modes(m.lengths(), shift, per_mode, index + 1);
  const FlatMode mode = modes[index];

  const auto lengths = m.lengths();
  Eigen::VectorXd omega(static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j)
    omega[static_cast<Eigen::Index>(j)] =
        kTwoPi * (static_cast<double>(mode.m[j]) + shift[j]) / lengths[j];

  Eigensection sec;
  sec.eigenvalue = mode.value;
  sec.omega = omega;
  const int rank = b.rank();
  const int channel = mode.channel;
  std::vector<long> mv = mode.m;

  if (b.kind() == BundleKind::TrivialComplex || u1) {
    const double sign = u1 ? -1.0 : 1.0;  // e^{-2pi i m.x} pairs with (m+a)^2
    sec.complex_mode = true;
    sec.value = [rank, channel, mv, lengths, sign](const ManifoldPoint& p) {
      double ph = 0.0;
      for (std::size_t j = 0; j < mv.size(); ++j)
        ph += static_cast<double>(mv[j]) * p.coords[static_cast<Eigen::Index>(j)] /
              lengths[j];
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(rank);
      v[channel] = std::exp(std::complex<double>(0.0, sign * kTwoPi * ph));
      return v;
    };
    const double wn = omega.norm();
    sec.grad_norm = [wn](const ManifoldPoint&) { return wn; };
    return sec;
  }

  // Real Fourier basis: lexicographically positive m -> sqrt(2)*cos, negative
  // m -> sqrt(2)*sin (of the positive representative), zero mode -> constant.
  sec.complex_mode = false;
  const bool zero = std::all_of(mv.begin(), mv.end(), [](long v) { return v == 0; });
  const bool positive = !zero && mv > std::vector<long>(d, 0);
  std::vector<long> rep = mv;
  if (!positive)
    for (long& v : rep) v = -v;
  auto phase_of = [rep, lengths](const ManifoldPoint& p) {
    double ph = 0.0;
    for (std::size_t j = 0; j < rep.size(); ++j)
      ph += static_cast<double>(rep[j]) * p.coords[static_cast<Eigen::Index>(j)] /
            lengths[j];
    return kTwoPi * ph;
  };
  if (!positive) sec.omega = -omega;  // frequency of the positive representative
  const double wn = omega.norm();
  const double amp = zero ? 1.0 : std::sqrt(2.0);
  sec.value = [rank, channel, phase_of, zero, positive, amp](const ManifoldPoint& p) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(rank);
    const double ph = zero ? 0.0 : phase_of(p);
    v[channel] = amp * (zero ? 1.0 : (positive ? std::cos(ph) : std::sin(ph)));
    return v;
  };
  sec.grad_norm = [phase_of, zero, positive, amp, wn](const ManifoldPoint& p) {
    if (zero) return 0.0;
    const double ph = phase_of(p);
    return amp * wn * std::abs(positive ? std::sin(ph) : std::cos(ph));
  };
  return sec;
}

}  // namespace conlap
