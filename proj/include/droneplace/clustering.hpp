#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "droneplace/model.hpp"

namespace droneplace {

struct Assignment {
  std::vector<int> col_of_row;  // permutation: row i -> column col_of_row[i]
  double total_cost = 0.0;
};

// O(n^3) shortest-augmenting-path assignment on a square cost matrix.
// Throws std::domain_error on non-square or non-finite input.
Assignment hungarian_min_cost(const std::vector<std::vector<double>>& cost);

struct Clustering {
  int k = 0;
  std::vector<int> label;       // per point, 0..k-1
  std::vector<Point> centroid;  // k entries
  int iterations = 0;
  // Within-cluster squared-distance sum after each iteration.
  std::vector<double> objective_trace;
};

// Balanced k-means: alternates a size-balanced optimal assignment (cluster
// sizes differ by at most one) with centroid updates, deterministic given
// the seed (k-means++ initialization). Throws std::domain_error when
// k < 1 or k > n.
Clustering balanced_kmeans(std::span<const Point> points, int k,
                           std::uint64_t seed, int max_iters = 100);

// Within-cluster squared-distance sum about the cluster means.
double clustering_objective(std::span<const Point> points,
                            std::span<const int> labels, int k);

namespace detail {
// One balanced assignment given fixed centroids; exposed for tests.
// `use_hungarian` forces the literal n-by-n slot-matrix path.
std::vector<int> balanced_assignment(std::span<const Point> points,
                                     std::span<const Point> centroids,
                                     bool use_hungarian);
}  // namespace detail

}  // namespace droneplace
