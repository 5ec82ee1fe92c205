#pragma once

#include <vector>

#include "conlap/geometry.hpp"

namespace conlap {

/// Spatial index over a fixed point set: periodic grid buckets on circle and
/// torus charts, latitude bands on the sphere, plain scan below 3000 points.
/// Distances are geodesic; radius queries are strict (d < radius) and nearest
/// queries break exact ties toward the lowest index.
class NeighborIndex {
 public:
  /// `cell_hint` sets the bucket/band pitch (typically the query radius or
  /// the expected point spacing).
  NeighborIndex(const ManifoldModel& m, const std::vector<ManifoldPoint>& points,
                double cell_hint);

  /// Indices j with d(q, points[j]) < radius, ascending.
  std::vector<int> radius_query(const ManifoldPoint& q, double radius) const;

  /// Index of the closest point (ties -> lowest index); `dist_out` optional.
  int nearest(const ManifoldPoint& q, double* dist_out = nullptr) const;

  std::size_t size() const { return points_->size(); }

 private:
  const ManifoldModel* model_;
  const std::vector<ManifoldPoint>* points_;
  bool brute_ = false;

  // flat models: per-dimension cell counts and sizes, bucket -> point ids
  std::vector<int> cells_per_dim_;
  std::vector<double> cell_size_;
  std::vector<std::vector<int>> buckets_;

  // sphere: latitude bands
  int band_count_ = 0;
  double band_height_ = 0.0;  // polar angle per band
  std::vector<std::vector<int>> bands_;

  int flat_bucket_of(const ManifoldPoint& p) const;
  int band_of(const ManifoldPoint& p) const;
};

}  // namespace conlap
