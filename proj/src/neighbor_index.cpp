#include "conlap/neighbor_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conlap {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr std::size_t kBruteThreshold = 3000;
}  // namespace

NeighborIndex::NeighborIndex(const ManifoldModel& m,
                             const std::vector<ManifoldPoint>& points,
                             double cell_hint)
    : model_(&m), points_(&points) {
  if (points.size() <= kBruteThreshold) {
    brute_ = true;
    return;
  }
  if (m.kind() == ManifoldKind::Sphere2) {
    const double dtheta = std::max(1e-6, cell_hint / m.radius());
    band_count_ = std::max(1, static_cast<int>(std::floor(kPi / dtheta)));
    band_height_ = kPi / band_count_;
    bands_.assign(static_cast<std::size_t>(band_count_), {});
    for (std::size_t i = 0; i < points.size(); ++i)
      bands_[static_cast<std::size_t>(band_of(points[i]))].push_back(
          static_cast<int>(i));
    return;
  }
  const auto& L = m.lengths();
  cells_per_dim_.resize(L.size());
  cell_size_.resize(L.size());
  std::size_t total = 1;
  for (std::size_t j = 0; j < L.size(); ++j) {
    cells_per_dim_[j] =
        std::max(1, static_cast<int>(std::floor(L[j] / std::max(1e-12, cell_hint))));
    cell_size_[j] = L[j] / cells_per_dim_[j];
    total *= static_cast<std::size_t>(cells_per_dim_[j]);
  }
  buckets_.assign(total, {});
  for (std::size_t i = 0; i < points.size(); ++i)
    buckets_[static_cast<std::size_t>(flat_bucket_of(points[i]))].push_back(
        static_cast<int>(i));
}

int NeighborIndex::flat_bucket_of(const ManifoldPoint& p) const {
  int id = 0;
  for (std::size_t j = 0; j < cells_per_dim_.size(); ++j) {
    int c = static_cast<int>(p.coords[static_cast<Eigen::Index>(j)] / cell_size_[j]);
    c = std::min(std::max(c, 0), cells_per_dim_[j] - 1);
    id = id * cells_per_dim_[j] + c;
  }
  return id;
}

int NeighborIndex::band_of(const ManifoldPoint& p) const {
  const double z = p.coords[2] / model_->radius();
  const double theta = std::acos(std::min(1.0, std::max(-1.0, z)));
  return std::min(band_count_ - 1,
                  std::max(0, static_cast<int>(theta / band_height_)));
}

std::vector<int> NeighborIndex::radius_query(const ManifoldPoint& q,
                                             double radius) const {
  const auto& pts = *points_;
  std::vector<int> out;
  if (brute_) {
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (distance(*model_, q, pts[j]) < radius) out.push_back(static_cast<int>(j));
    return out;
  }
  if (model_->kind() == ManifoldKind::Sphere2) {
    const int bq = band_of(q);
    const int span = static_cast<int>(radius / (model_->radius() * band_height_)) + 1;
    for (int b = std::max(0, bq - span); b <= std::min(band_count_ - 1, bq + span); ++b)
      for (int j : bands_[static_cast<std::size_t>(b)])
        if (distance(*model_, q, pts[static_cast<std::size_t>(j)]) < radius)
          out.push_back(j);
    std::sort(out.begin(), out.end());
    return out;
  }
  const std::size_t d = cells_per_dim_.size();
  std::vector<std::vector<int>> axis_cells(d);
  for (std::size_t j = 0; j < d; ++j) {
    const int n = cells_per_dim_[j];
    const int cq = static_cast<int>(q.coords[static_cast<Eigen::Index>(j)] /
                                    cell_size_[j]);
    const int span = static_cast<int>(radius / cell_size_[j]) + 1;
    if (2 * span + 1 >= n) {
      for (int c = 0; c < n; ++c) axis_cells[j].push_back(c);
    } else {
      for (int o = -span; o <= span; ++o)
        axis_cells[j].push_back(((cq + o) % n + n) % n);
    }
  }
  std::vector<std::size_t> pick(d, 0);
  for (;;) {
    int id = 0;
    for (std::size_t j = 0; j < d; ++j)
      id = id * cells_per_dim_[j] + axis_cells[j][pick[j]];
    for (int j : buckets_[static_cast<std::size_t>(id)])
      if (distance(*model_, q, pts[static_cast<std::size_t>(j)]) < radius)
        out.push_back(j);
    std::size_t j = 0;
    while (j < d && ++pick[j] == axis_cells[j].size()) pick[j++] = 0;
    if (j == d) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

int NeighborIndex::nearest(const ManifoldPoint& q, double* dist_out) const {
  const auto& pts = *points_;
  double best = std::numeric_limits<double>::infinity();
  int best_idx = -1;
  auto consider = [&](int j) {
    const double d = distance(*model_, q, pts[static_cast<std::size_t>(j)]);
    if (d < best || (d == best && j < best_idx)) {
      best = d;
      best_idx = j;
    }
  };
  if (brute_) {
    for (std::size_t j = 0; j < pts.size(); ++j) consider(static_cast<int>(j));
    if (dist_out) *dist_out = best;
    return best_idx;
  }
  if (model_->kind() == ManifoldKind::Sphere2) {
    const int bq = band_of(q);
    for (int ring = 0; ring <= band_count_; ++ring) {
      // Any point in a band `ring` rings away differs from q by at least
      // (ring-1) band heights of polar angle.
      if (best_idx >= 0 &&
          best <= model_->radius() * band_height_ * std::max(0, ring - 1))
        break;
      const int lo = bq - ring, hi = bq + ring;
      if (lo >= 0)
        for (int j : bands_[static_cast<std::size_t>(lo)]) consider(j);
      if (hi != lo && hi < band_count_)
        for (int j : bands_[static_cast<std::size_t>(hi)]) consider(j);
      if (lo < 0 && hi >= band_count_) break;  // every band visited
    }
    if (dist_out) *dist_out = best;
    return best_idx;
  }
  const std::size_t d = cells_per_dim_.size();
  double min_cell = cell_size_[0];
  int max_ring = 0;
  std::vector<int> cq(d);
  for (std::size_t j = 0; j < d; ++j) {
    min_cell = std::min(min_cell, cell_size_[j]);
    max_ring = std::max(max_ring, cells_per_dim_[j]);
    cq[j] = static_cast<int>(q.coords[static_cast<Eigen::Index>(j)] / cell_size_[j]);
    cq[j] = std::min(std::max(cq[j], 0), cells_per_dim_[j] - 1);
  }
  std::vector<char> visited(buckets_.size(), 0);
  for (int ring = 0; ring <= max_ring; ++ring) {
    if (best_idx >= 0 && best <= min_cell * std::max(0, ring - 1)) break;
    // Enumerate the Chebyshev ring with wraparound, deduped via visited flags.
    std::vector<int> offs;
    for (int o = -ring; o <= ring; ++o) offs.push_back(o);
    std::vector<std::size_t> pick(d, 0);
    for (;;) {
      int cheb = 0;
      for (std::size_t j = 0; j < d; ++j) cheb = std::max(cheb, std::abs(offs[pick[j]]));
      if (cheb == ring) {
        int id = 0;
        for (std::size_t j = 0; j < d; ++j) {
          const int n = cells_per_dim_[j];
          id = id * n + (((cq[j] + offs[pick[j]]) % n) + n) % n;
        }
        if (!visited[static_cast<std::size_t>(id)]) {
          visited[static_cast<std::size_t>(id)] = 1;
          for (int j : buckets_[static_cast<std::size_t>(id)]) consider(j);
        }
      }
      std::size_t j = 0;
      while (j < d && ++pick[j] == offs.size()) pick[j++] = 0;
      if (j == d) break;
    }
  }
  if (dist_out) *dist_out = best;
  return best_idx;
}

}  // namespace conlap
