#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "conlap/geometry.hpp"

namespace conlap {

/// Finite sample net with Voronoi cell measures.  `seed` drives every stream
/// derived from the net (measure estimation, cell quadrature, statistics);
/// `mc_sample_count` is the length of the measure/assignment stream (0 until
/// measures exist).  Grid nets carry exact equal measures
/// (`exact_measures` = true) and an exact covering radius.
struct Net {
  std::vector<ManifoldPoint> points;
  std::vector<double> measures;
  double covering_radius_est = 0.0;
  double separation_est = 0.0;
  std::int64_t mc_sample_count = 0;
  std::uint64_t seed = 0;
  bool exact_measures = false;
};

struct NetStats {
  double covering_radius_est;
  double separation_est;
};

/// Farthest-point net over a dense uniform sample (>= 50 expected points per
/// epsilon-ball), greedy until the covering radius estimate drops to
/// `target_epsilon`.  Measures are not set; call estimate_measures.
/// Throws ConfigError when the target cannot be met within `max_points`.
Net build_net(const ManifoldModel& m, double target_epsilon, std::uint64_t seed,
              std::size_t max_points = 20000);

/// Regular grid net on circle/torus with exact equal measures and exact
/// covering radius (half cell diagonal).  `seed` feeds downstream quadrature
/// streams.
Net build_grid_net(const ManifoldModel& m, const std::vector<int>& points_per_dim,
                   std::uint64_t seed);

/// Monte Carlo Voronoi measures: mc_samples uniform draws assigned to the
/// nearest net point (ties -> lowest index), mu_i = vol(M) * count_i / mc.
/// Requires mc_samples >= 100 * N; throws on an empty cell.  Updates the
/// net's seed/mc_sample_count so cell quadrature can replay the stream, and
/// raises covering_radius_est to cover every assigned sample.
void estimate_measures(const ManifoldModel& m, Net& net, std::int64_t mc_samples,
                       std::uint64_t seed);

/// Replays the uniform stream behind the net's Voronoi assignment so cell
/// quadrature sees exactly the samples that defined the measures.  For nets
/// with Monte Carlo measures `count` must equal mc_sample_count; exact-measure
/// grid nets accept any count.
std::vector<ManifoldPoint> measure_stream(const ManifoldModel& m, const Net& net,
                                          std::int64_t count);

/// Covering radius (fresh dense sample) and exact minimal separation.
NetStats net_stats(const ManifoldModel& m, const Net& net);

/// JSON serialization (model + net, decimal doubles that round-trip
/// bit-exactly).
std::string net_to_json(const ManifoldModel& m, const Net& net);
std::pair<ManifoldModel, Net> net_from_json(const std::string& text);

}  // namespace conlap
