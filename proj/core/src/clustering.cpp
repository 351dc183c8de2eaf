#include "orchid/clustering.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace orchid::clustering {
namespace {

std::size_t count_distinct(std::span<const Vec2> points) {
  std::vector<Vec2> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

int nearest(const Vec2& p, std::span<const Vec2> centroids) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < centroids.size(); ++k) {
    const double d = squared_distance(p, centroids[k]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(k);
    }
  }
  return best;
}

// Nearest-centroid assignment followed by empty-cluster reseeding.
void assign(std::span<const Vec2> points, std::vector<Vec2>& centroids,
            std::vector<int>& assignments) {
  const std::size_t k = centroids.size();
  std::vector<int> sizes(k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    assignments[i] = nearest(points[i], centroids);
    ++sizes[static_cast<std::size_t>(assignments[i])];
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (sizes[j] > 0) continue;
    int far = -1;
    double far_d = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto owner = static_cast<std::size_t>(assignments[i]);
      if (sizes[owner] <= 1) continue;
      const double d = squared_distance(points[i], centroids[owner]);
      if (d > far_d) {
        far_d = d;
        far = static_cast<int>(i);
      }
    }
    if (far < 0) break;  // fewer points than clusters
    const auto fi = static_cast<std::size_t>(far);
    --sizes[static_cast<std::size_t>(assignments[fi])];
    assignments[fi] = static_cast<int>(j);
    sizes[j] = 1;
    centroids[j] = points[fi];
  }
}

}  // namespace

double wcss(std::span<const Vec2> points, std::span<const Vec2> centroids,
            std::span<const int> assignments) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    total += squared_distance(points[i], centroids[static_cast<std::size_t>(assignments[i])]);
  }
  return total;
}

std::vector<Vec2> kmeanspp_seed(std::span<const Vec2> points, int k, std::mt19937_64& rng) {
  if (k < 1) throw std::invalid_argument("kmeanspp_seed: k must be at least 1");
  if (static_cast<std::size_t>(k) > count_distinct(points)) {
    throw std::invalid_argument("kmeanspp_seed: k exceeds the number of distinct points");
  }
  std::vector<Vec2> centroids;
  centroids.reserve(static_cast<std::size_t>(k));
  std::uniform_int_distribution<std::size_t> first(0, points.size() - 1);
  centroids.push_back(points[first(rng)]);

  std::vector<double> d2(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) d2[i] = squared_distance(points[i], centroids[0]);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (centroids.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (double v : d2) total += v;
    const double target = unit(rng) * total;
    std::size_t pick = 0;
    double acc = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (d2[i] <= 0.0) continue;
      acc += d2[i];
      pick = i;
      if (acc > target) break;
    }
    centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < points.size(); ++i) {
      d2[i] = std::min(d2[i], squared_distance(points[i], points[pick]));
    }
  }
  return centroids;
}

ClusteringResult lloyd_refine(std::span<const Vec2> points, std::vector<Vec2> init_centroids,
                              int max_iters, double tol) {
  if (init_centroids.empty()) throw std::invalid_argument("lloyd_refine: no centroids");
  ClusteringResult r;
  r.centroids = std::move(init_centroids);
  r.assignments.assign(points.size(), 0);
  const std::size_t k = r.centroids.size();

  while (true) {
    assign(points, r.centroids, r.assignments);
    r.wcss = wcss(points, r.centroids, r.assignments);
    r.wcss_history.push_back(r.wcss);
    if (r.iterations >= max_iters) break;

    std::vector<Vec2> sums(k);
    std::vector<int> sizes(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto c = static_cast<std::size_t>(r.assignments[i]);
      sums[c].x += points[i].x;
      sums[c].y += points[i].y;
      ++sizes[c];
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) continue;
      const Vec2 next{sums[c].x / sizes[c], sums[c].y / sizes[c]};
      shift = std::max(shift, distance(next, r.centroids[c]));
      r.centroids[c] = next;
    }
    ++r.iterations;
    if (shift < tol) {
      assign(points, r.centroids, r.assignments);
      r.wcss = wcss(points, r.centroids, r.assignments);
      r.wcss_history.push_back(r.wcss);
      break;
    }
  }
  return r;
}

std::vector<Vec3> gbs_filter_assign(ClusteringResult& result, const Vec3& gbs_position,
                                    double h_init) {
  if (result.centroids.size() < 2) {
    throw std::invalid_argument("gbs_filter_assign: need at least two centroids");
  }
  const Vec2 gbs = gbs_position.horizontal();
  int drop = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < result.centroids.size(); ++k) {
    const double d = distance(result.centroids[k], gbs);
    if (d < best) {
      best = d;
      drop = static_cast<int>(k);
    }
  }
  result.discarded_index = drop;
  std::vector<Vec3> poses;
  poses.reserve(result.centroids.size() - 1);
  for (std::size_t k = 0; k < result.centroids.size(); ++k) {
    if (static_cast<int>(k) == drop) continue;
    poses.push_back({result.centroids[k].x, result.centroids[k].y, h_init});
  }
  return poses;
}

Phase1Result phase1_initialize(std::span<const Vec2> users, int num_uavs,
                               const Vec3& gbs_position, double h_init, int restarts,
                               std::mt19937_64& rng, int max_iters, double tol) {
  if (num_uavs < 1) throw std::invalid_argument("phase1_initialize: need at least one UAV");
  if (restarts < 1) throw std::invalid_argument("phase1_initialize: restarts must be >= 1");
  std::optional<ClusteringResult> best;
  for (int r = 0; r < restarts; ++r) {
    auto seeds = kmeanspp_seed(users, num_uavs + 1, rng);
    auto result = lloyd_refine(users, std::move(seeds), max_iters, tol);
    if (!best || result.wcss < best->wcss) best = std::move(result);
  }
  Phase1Result out;
  out.clustering = std::move(*best);
  out.poses = gbs_filter_assign(out.clustering, gbs_position, h_init);
  return out;
}

}  // namespace orchid::clustering
