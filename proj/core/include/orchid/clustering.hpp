#pragma once

#include <optional>
#include <random>
#include <span>
#include <vector>

#include "orchid/geometry.hpp"

namespace orchid::clustering {

struct ClusteringResult {
  std::vector<Vec2> centroids;
  std::vector<int> assignments;
  double wcss = 0.0;
  std::vector<double> wcss_history;  // one entry per assignment pass
  int iterations = 0;
  std::optional<int> discarded_index;  // set by gbs_filter_assign
};

// Within-cluster sum of squared distances under the given assignment.
double wcss(std::span<const Vec2> points, std::span<const Vec2> centroids,
            std::span<const int> assignments);

// K-Means++ seeding: first centroid uniform, later ones drawn with
// probability proportional to squared distance to the nearest chosen one.
// Throws std::invalid_argument when k exceeds the number of distinct points.
std::vector<Vec2> kmeanspp_seed(std::span<const Vec2> points, int k, std::mt19937_64& rng);

// Lloyd iterations until the largest centroid shift drops below `tol` or
// `max_iters` updates have run. Empty clusters take the point farthest
// from its current centroid.
ClusteringResult lloyd_refine(std::span<const Vec2> points, std::vector<Vec2> init_centroids,
                              int max_iters = 300, double tol = 1e-6);

// Drops the centroid horizontally nearest to the GBS (lowest index on ties)
// and lifts the remaining ones, in ascending index order, to `h_init`.
std::vector<Vec3> gbs_filter_assign(ClusteringResult& result, const Vec3& gbs_position,
                                    double h_init);

struct Phase1Result {
  ClusteringResult clustering;
  std::vector<Vec3> poses;
};

// Full GBS-aware initialization: best of `restarts` seeded K-Means++/Lloyd
// runs with num_uavs + 1 clusters, then GBS filtering.
Phase1Result phase1_initialize(std::span<const Vec2> users, int num_uavs,
                               const Vec3& gbs_position, double h_init, int restarts,
                               std::mt19937_64& rng, int max_iters = 300, double tol = 1e-6);

}  // namespace orchid::clustering
