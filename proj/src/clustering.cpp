#include "droneplace/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "droneplace/rng.hpp"

namespace droneplace {

Assignment hungarian_min_cost(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  for (const auto& row : cost) {
    if (static_cast<int>(row.size()) != n)
      throw std::domain_error("hungarian_min_cost: matrix must be square");
    for (double v : row)
      if (!std::isfinite(v))
        throw std::domain_error("hungarian_min_cost: entries must be finite");
  }
  Assignment result;
  if (n == 0) return result;

  const double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials/matching; p[j] is the row matched to column j.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  result.col_of_row.assign(n, -1);
  for (int j = 1; j <= n; ++j) {
    result.col_of_row[p[j] - 1] = j - 1;
    result.total_cost += cost[p[j] - 1][j - 1];
  }
  return result;
}

namespace {

// Cluster capacities under the slot construction: slot s belongs to
// cluster s mod k, so cluster c gets ceil(n/k) slots when c < n mod k.
std::vector<int> cluster_capacities(int n, int k) {
  std::vector<int> cap(k, n / k);
  for (int c = 0; c < n % k; ++c) ++cap[c];
  return cap;
}

std::vector<double> cost_matrix(std::span<const Point> points,
                                std::span<const Point> centroids) {
  std::size_t n = points.size(), k = centroids.size();
  std::vector<double> m(n * k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < k; ++c)
      m[i * k + c] = squared_distance(points[i], centroids[c]);
  return m;
}

// Literal formulation: one slot per point, slot s costed against centroid
// s mod k, solved as an n-by-n assignment.
std::vector<int> assign_by_hungarian(std::span<const Point> points,
                                     std::span<const Point> centroids) {
  int n = static_cast<int>(points.size());
  int k = static_cast<int>(centroids.size());
  std::vector<std::vector<double>> slot_cost(
      static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < n; ++s)
      slot_cost[i][s] = squared_distance(points[i], centroids[s % k]);
  Assignment a = hungarian_min_cost(slot_cost);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = a.col_of_row[i] % k;
  return labels;
}

// Equivalent capacitated formulation solved by successive shortest
// augmenting paths over the k cluster nodes; same optimal cost as the
// slot-matrix assignment with far better scaling in n.
std::vector<int> assign_by_transport(std::span<const Point> points,
                                     std::span<const Point> centroids) {
  const int n = static_cast<int>(points.size());
  const int k = static_cast<int>(centroids.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cost = cost_matrix(points, centroids);
  std::vector<int> cap = cluster_capacities(n, k);

  std::vector<std::vector<int>> members(k);
  std::vector<int> labels(n, -1);

  std::vector<double> move(static_cast<std::size_t>(k) * k);
  std::vector<int> move_arg(static_cast<std::size_t>(k) * k);
  std::vector<double> dist(k);
  std::vector<int> pred_cluster(k), pred_point(k);

  for (int i = 0; i < n; ++i) {
    // Cheapest single reassignment out of cluster c into cluster c2.
    std::fill(move.begin(), move.end(), inf);
    std::fill(move_arg.begin(), move_arg.end(), -1);
    for (int c = 0; c < k; ++c) {
      for (int p : members[c]) {
        const double base = cost[static_cast<std::size_t>(p) * k + c];
        for (int c2 = 0; c2 < k; ++c2) {
          if (c2 == c) continue;
          double w = cost[static_cast<std::size_t>(p) * k + c2] - base;
          std::size_t e = static_cast<std::size_t>(c) * k + c2;
          if (w < move[e]) {
            move[e] = w;
            move_arg[e] = p;
          }
        }
      }
    }

    for (int c = 0; c < k; ++c) {
      dist[c] = cost[static_cast<std::size_t>(i) * k + c];
      pred_cluster[c] = -1;
      pred_point[c] = i;
    }
    // Bellman-Ford over at most k relaxation sweeps.
    for (int sweep = 0; sweep < k; ++sweep) {
      bool improved = false;
      for (int c = 0; c < k; ++c) {
        if (dist[c] == inf) continue;
        for (int c2 = 0; c2 < k; ++c2) {
          std::size_t e = static_cast<std::size_t>(c) * k + c2;
          if (move[e] == inf) continue;
          double cand = dist[c] + move[e];
          if (cand < dist[c2] - 1e-12) {
            dist[c2] = cand;
            pred_cluster[c2] = c;
            pred_point[c2] = move_arg[e];
            improved = true;
          }
        }
      }
      if (!improved) break;
    }

    int target = -1;
    for (int c = 0; c < k; ++c) {
      if (static_cast<int>(members[c].size()) >= cap[c]) continue;
      if (target == -1 || dist[c] < dist[target]) target = c;
    }

    // Apply the displacement chain back to the entry cluster.
    int cur = target;
    while (pred_cluster[cur] != -1) {
      int moved = pred_point[cur];
      int from = pred_cluster[cur];
      auto& src = members[from];
      src.erase(std::find(src.begin(), src.end(), moved));
      members[cur].push_back(moved);
      labels[moved] = cur;
      cur = from;
    }
    members[cur].push_back(i);
    labels[i] = cur;
  }
  return labels;
}

std::vector<Point> kmeanspp_init(std::span<const Point> points, int k,
                                 Rng& rng) {
  int n = static_cast<int>(points.size());
  std::vector<Point> centroids;
  centroids.reserve(k);
  centroids.push_back(points[rng.uniform_index(n)]);
  std::vector<double> d2(n);
  while (static_cast<int>(centroids.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      d2[i] = squared_distance(points[i], centroids[0]);
      for (std::size_t c = 1; c < centroids.size(); ++c)
        d2[i] = std::min(d2[i], squared_distance(points[i], centroids[c]));
      total += d2[i];
    }
    int pick;
    if (total <= 0.0) {
      pick = static_cast<int>(rng.uniform_index(n));
    } else {
      double r = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= r) {
          pick = i;
          break;
        }
      }
    }
    centroids.push_back(points[pick]);
  }
  return centroids;
}

std::vector<Point> cluster_means(std::span<const Point> points,
                                 std::span<const int> labels,
                                 std::span<const Point> fallback, int k) {
  std::vector<Point> mean(k, Point{0.0, 0.0});
  std::vector<int> count(k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    mean[labels[i]].x += points[i].x;
    mean[labels[i]].y += points[i].y;
    ++count[labels[i]];
  }
  for (int c = 0; c < k; ++c) {
    if (count[c] > 0) {
      mean[c].x /= count[c];
      mean[c].y /= count[c];
    } else {
      mean[c] = fallback[c];  // unreachable under the slot construction
    }
  }
  return mean;
}

constexpr int kHungarianPathCutoff = 256;

}  // namespace

namespace detail {
std::vector<int> balanced_assignment(std::span<const Point> points,
                                     std::span<const Point> centroids,
                                     bool use_hungarian) {
  return use_hungarian ? assign_by_hungarian(points, centroids)
                       : assign_by_transport(points, centroids);
}
}  // namespace detail

double clustering_objective(std::span<const Point> points,
                            std::span<const int> labels, int k) {
  std::vector<Point> mean(k, Point{0.0, 0.0});
  std::vector<int> count(k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    mean[labels[i]].x += points[i].x;
    mean[labels[i]].y += points[i].y;
    ++count[labels[i]];
  }
  for (int c = 0; c < k; ++c)
    if (count[c] > 0) {
      mean[c].x /= count[c];
      mean[c].y /= count[c];
    }
  double obj = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    obj += squared_distance(points[i], mean[labels[i]]);
  return obj;
}

Clustering balanced_kmeans(std::span<const Point> points, int k,
                           std::uint64_t seed, int max_iters) {
  const int n = static_cast<int>(points.size());
  if (k < 1 || k > n)
    throw std::domain_error("balanced_kmeans: k must be in [1, n]");

  Rng rng(seed);
  Clustering out;
  out.k = k;
  out.centroid = kmeanspp_init(points, k, rng);

  const bool literal = n <= kHungarianPathCutoff;
  std::vector<int> labels;
  for (int iter = 1; iter <= max_iters; ++iter) {
    std::vector<int> next =
        detail::balanced_assignment(points, out.centroid, literal);
    out.centroid = cluster_means(points, next, out.centroid, k);
    out.iterations = iter;
    out.objective_trace.push_back(clustering_objective(points, next, k));
    if (next == labels) break;
    labels = std::move(next);
  }
  out.label = std::move(labels);
  return out;
}

}  // namespace droneplace
