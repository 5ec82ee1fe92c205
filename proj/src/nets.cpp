#include "conlap/nets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <json.hpp>

#include "conlap/errors.hpp"
#include "conlap/neighbor_index.hpp"
#include "conlap/rng.hpp"

namespace conlap {

namespace {

// Fixed substream tags: dense FPS sample, statistics sample, measure stream.
constexpr std::uint64_t kDenseTag = 0x64656e7365ULL;
constexpr std::uint64_t kStatsTag = 0x7374617473ULL;
constexpr std::uint64_t kMeasureTag = 0x6d65617375ULL;

double spacing_hint(const ManifoldModel& m, std::size_t n) {
  return std::pow(m.volume() / static_cast<double>(std::max<std::size_t>(n, 1)),
                  1.0 / m.dim());
}

// Incremental farthest-point search over a dense sample.  The sphere path
// tracks the best dot product per sample (geodesic distance is monotone in
// it), which vectorizes the update.
class FarthestPoint {
 public:
  FarthestPoint(const ManifoldModel& m, const std::vector<ManifoldPoint>& dense)
      : m_(m), dense_(dense) {
    const std::size_t n = dense.size();
    if (m.kind() == ManifoldKind::Sphere2) {
      q_.resize(3, static_cast<Eigen::Index>(n));
      for (std::size_t j = 0; j < n; ++j)
        q_.col(static_cast<Eigen::Index>(j)) =
            Eigen::Vector3d(dense[j].coords) / m.radius();
      best_dot_ = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), -1.0);
    } else {
      dist_.assign(n, std::numeric_limits<double>::infinity());
    }
  }

  void add(int c) {
    if (m_.kind() == ManifoldKind::Sphere2) {
      best_dot_ = best_dot_.cwiseMax(q_.transpose() * q_.col(c));
    } else {
      for (std::size_t j = 0; j < dense_.size(); ++j)
        dist_[j] = std::min(dist_[j], distance(m_, dense_[j], dense_[c]));
    }
  }

  std::pair<double, int> farthest() const {
    if (m_.kind() == ManifoldKind::Sphere2) {
      Eigen::Index j;
      const double d = best_dot_.minCoeff(&j);
      return {m_.radius() * std::acos(std::min(1.0, std::max(-1.0, d))),
              static_cast<int>(j)};
    }
    const auto it = std::max_element(dist_.begin(), dist_.end());
    return {*it, static_cast<int>(it - dist_.begin())};
  }

 private:
  const ManifoldModel& m_;
  const std::vector<ManifoldPoint>& dense_;
  std::vector<double> dist_;
  Eigen::Matrix3Xd q_;
  Eigen::VectorXd best_dot_;
};

}  // namespace

Net build_net(const ManifoldModel& m, double target_epsilon, std::uint64_t seed,
              std::size_t max_points) {
  if (!(std::isfinite(target_epsilon) && target_epsilon > 0.0))
    throw ConfigError("target epsilon must be positive");
  const double vol = m.volume();
  const double r_inj = curvature_and_injectivity(m).injectivity_radius;
  const double exactness_sup =
      (m.kind() == ManifoldKind::Sphere2) ? r_inj : r_inj;  // pi*R / L_min/2
  const double r_density = std::min(target_epsilon, 0.999 * exactness_sup);
  const double need = vol / ball_volume(m, r_density);
  if (r_density == target_epsilon && need > static_cast<double>(max_points))
    throw ConfigError("target epsilon needs more net points than the budget allows");

  const std::size_t n_dense = static_cast<std::size_t>(
      std::max(10000.0, std::ceil(50.0 * need)));
  const auto dense =
      sample_uniform(m, n_dense, CounterRng::substream(seed, kDenseTag));

  FarthestPoint fps(m, dense);
  std::vector<int> centers{0};
  fps.add(0);
  double thresh = 0.95 * target_epsilon;

  Net net;
  net.seed = seed;
  for (int attempt = 0;; ++attempt) {
    for (;;) {
      const auto [dmax, arg] = fps.farthest();
      if (dmax <= thresh) break;
      if (centers.size() >= max_points)
        throw ConfigError("farthest-point sampling exceeded the point budget");
      centers.push_back(arg);
      fps.add(arg);
    }
    net.points.clear();
    net.points.reserve(centers.size());
    for (int c : centers) net.points.push_back(dense[static_cast<std::size_t>(c)]);
    const NetStats st = net_stats(m, net);
    net.covering_radius_est = st.covering_radius_est;
    net.separation_est = st.separation_est;
    if (st.covering_radius_est <= target_epsilon) break;
    if (attempt >= 6 || centers.size() >= max_points)
      throw ConfigError("could not reach the target covering radius within budget");
    thresh *= 0.85;
  }
  return net;
}

Net build_grid_net(const ManifoldModel& m, const std::vector<int>& points_per_dim,
                   std::uint64_t seed) {
  if (m.kind() == ManifoldKind::Sphere2)
    throw ConfigError("grid nets require a flat model");
  const auto& L = m.lengths();
  if (points_per_dim.size() != L.size())
    throw ConfigError("one grid count per torus direction required");
  std::size_t total = 1;
  for (int k : points_per_dim) {
    if (k < 1) throw ConfigError("grid counts must be positive");
    total *= static_cast<std::size_t>(k);
  }

  Net net;
  net.seed = seed;
  net.exact_measures = true;
  net.points.reserve(total);
  const std::size_t d = L.size();
  std::vector<int> idx(d, 0);
  for (;;) {
    Eigen::VectorXd c(static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j)
      c[static_cast<Eigen::Index>(j)] = L[j] * idx[j] / points_per_dim[j];
    net.points.push_back(m.point(c));
    std::size_t j = 0;
    while (j < d && ++idx[j] == points_per_dim[j]) idx[j++] = 0;
    if (j == d) break;
  }
  net.measures.assign(total, m.volume() / static_cast<double>(total));

  double half_diag2 = 0.0;
  double sep = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < d; ++j) {
    const double pitch = L[j] / points_per_dim[j];
    // a one-point direction contributes nothing to covering or separation
    if (points_per_dim[j] > 1) sep = std::min(sep, pitch);
    const double reach = (points_per_dim[j] > 1) ? 0.5 * pitch : 0.5 * L[j];
    half_diag2 += reach * reach;
  }
  net.covering_radius_est = std::sqrt(half_diag2);
  net.separation_est = std::isfinite(sep) ? sep : 0.0;
  return net;
}

void estimate_measures(const ManifoldModel& m, Net& net, std::int64_t mc_samples,
                       std::uint64_t seed) {
  const std::size_t n = net.points.size();
  if (n == 0) throw ConfigError("net has no points");
  if (mc_samples < 100 * static_cast<std::int64_t>(n))
    throw ConfigError("measure estimation needs >= 100 samples per cell");

  const auto samples = sample_uniform(
      m, static_cast<std::size_t>(mc_samples), CounterRng::substream(seed, kMeasureTag));
  NeighborIndex index(m, net.points, spacing_hint(m, n));
  std::vector<std::int64_t> counts(n, 0);
  double max_assign = 0.0;
  for (const auto& s : samples) {
    double d = 0.0;
    const int i = index.nearest(s, &d);
    ++counts[static_cast<std::size_t>(i)];
    max_assign = std::max(max_assign, d);
  }
  for (std::size_t i = 0; i < n; ++i)
    if (counts[i] == 0)
      throw ConfigError("empty Voronoi cell in measure estimation");

  const double vol = m.volume();
  net.measures.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    net.measures[i] =
        vol * static_cast<double>(counts[i]) / static_cast<double>(mc_samples);
  net.mc_sample_count = mc_samples;
  net.seed = seed;
  net.exact_measures = false;
  // keep the containment guarantee: every assigned sample is covered
  net.covering_radius_est = std::max(net.covering_radius_est, max_assign);
}

std::vector<ManifoldPoint> measure_stream(const ManifoldModel& m, const Net& net,
                                          std::int64_t count) {
  if (net.mc_sample_count > 0 && count != net.mc_sample_count)
    throw ConfigError(
        "cell quadrature must replay the stored assignment stream length");
  return sample_uniform(m, static_cast<std::size_t>(count),
                        CounterRng::substream(net.seed, kMeasureTag));
}

NetStats net_stats(const ManifoldModel& m, const Net& net) {
  const std::size_t n = net.points.size();
  if (n == 0) throw ConfigError("net has no points");
  const std::size_t n_stats = std::min<std::size_t>(
      400000, std::max<std::size_t>(20000, 20 * n));
  const auto probes =
      sample_uniform(m, n_stats, CounterRng::substream(net.seed, kStatsTag));
  NeighborIndex index(m, net.points, spacing_hint(m, n));
  double cov = 0.0;
  for (const auto& p : probes) {
    double d = 0.0;
    index.nearest(p, &d);
    cov = std::max(cov, d);
  }
  double sep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      sep = std::min(sep, distance(m, net.points[i], net.points[j]));
  return {cov, std::isfinite(sep) ? sep : 0.0};
}

namespace {

nlohmann::json model_to_json(const ManifoldModel& m) {
  switch (m.kind()) {
    case ManifoldKind::Circle:
      return {{"kind", "circle"}, {"lengths", m.lengths()}};
    case ManifoldKind::FlatTorus:
      return {{"kind", "torus"}, {"lengths", m.lengths()}};
    case ManifoldKind::Sphere2:
      return {{"kind", "sphere2"}, {"radius", m.radius()}};
  }
  throw std::logic_error("unreachable");
}

ManifoldModel model_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "circle")
    return ManifoldModel::circle(j.at("lengths").at(0).get<double>());
  if (kind == "torus")
    return ManifoldModel::flat_torus(j.at("lengths").get<std::vector<double>>());
  if (kind == "sphere2")
    return ManifoldModel::sphere2(j.at("radius").get<double>());
  throw ConfigError("unknown manifold kind in net file: " + kind);
}

}  // namespace

std::string net_to_json(const ManifoldModel& m, const Net& net) {
  nlohmann::json j;
  j["model"] = model_to_json(m);
  auto& pts = j["points"] = nlohmann::json::array();
  for (const auto& p : net.points) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < p.coords.size(); ++k) row.push_back(p.coords[k]);
    pts.push_back(std::move(row));
  }
  j["measures"] = net.measures;
  j["covering_radius_est"] = net.covering_radius_est;
  j["separation_est"] = net.separation_est;
  j["mc_samples"] = net.mc_sample_count;
  j["seed"] = net.seed;
  j["exact_measures"] = net.exact_measures;
  return j.dump(2);
}

std::pair<ManifoldModel, Net> net_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    ManifoldModel m = model_from_json(j.at("model"));
    Net net;
    for (const auto& row : j.at("points")) {
      ManifoldPoint p;
      p.coords.resize(static_cast<Eigen::Index>(row.size()));
      for (std::size_t k = 0; k < row.size(); ++k)
        p.coords[static_cast<Eigen::Index>(k)] = row.at(k).get<double>();
      if (!p.coords.allFinite())
        throw ConfigError("non-finite point coordinates in net file");
      net.points.push_back(std::move(p));
    }
    net.measures = j.at("measures").get<std::vector<double>>();
    net.covering_radius_est = j.at("covering_radius_est").get<double>();
    net.separation_est = j.at("separation_est").get<double>();
    net.mc_sample_count = j.at("mc_samples").get<std::int64_t>();
    net.seed = j.at("seed").get<std::uint64_t>();
    net.exact_measures = j.value("exact_measures", false);
    return {std::move(m), std::move(net)};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed net file: ") + e.what());
  }
}

}  // namespace conlap
