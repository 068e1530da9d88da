#pragma once
// Lloyd's k-means. Init picks k distinct data rows; an emptied cluster is
// reseeded with the point currently farthest from its own centroid.

#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "matrix.hpp"
#include "rng.hpp"

namespace drbmclust {

struct KMeansResult {
  Matrix centroids;  // k x d
  std::vector<int> assignments;
  double inertia = 0.0;
  size_t iterations_used = 0;
};

inline KMeansResult kmeans(const Matrix& data, size_t k, uint64_t seed, size_t max_iter = 300) {
  size_t n = data.rows, d = data.cols;
  if (k == 0 || k > n) throw std::invalid_argument("kmeans: need 1 <= k <= n_samples");
  Rng rng(seed);

  // choose k distinct rows
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), size_t{0});
  rng.shuffle(idx);
  KMeansResult res;
  res.centroids = Matrix(k, d);
  for (size_t c = 0; c < k; ++c)
    for (size_t j = 0; j < d; ++j) res.centroids(c, j) = data(idx[c], j);

  res.assignments.assign(n, -1);
  std::vector<int> prev(n, -2);
  std::vector<size_t> counts(k, 0);

  for (size_t it = 0; it < max_iter; ++it) {
    res.iterations_used = it + 1;
    // assign
    for (size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int arg = 0;
      for (size_t c = 0; c < k; ++c) {
        double dist = sq_dist(data.row(i), res.centroids.row(c), d);
        if (dist < best) {
          best = dist;
          arg = static_cast<int>(c);
        }
      }
      res.assignments[i] = arg;
    }
    // reseed empty clusters before the centroid update
    counts.assign(k, 0);
    for (int a : res.assignments) counts[static_cast<size_t>(a)]++;
    for (size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      double worst = -1.0;
      size_t pick = 0;
      for (size_t i = 0; i < n; ++i) {
        size_t owner = static_cast<size_t>(res.assignments[i]);
        if (counts[owner] <= 1) continue;  // don't empty another cluster
        double dist = sq_dist(data.row(i), res.centroids.row(owner), d);
        if (dist > worst) {
          worst = dist;
          pick = i;
        }
      }
      counts[static_cast<size_t>(res.assignments[pick])]--;
      res.assignments[pick] = static_cast<int>(c);
      counts[c] = 1;
    }
    // update
    for (size_t v = 0; v < k * d; ++v) res.centroids.a[v] = 0.0;
    for (size_t i = 0; i < n; ++i) {
      size_t c = static_cast<size_t>(res.assignments[i]);
      for (size_t j = 0; j < d; ++j) res.centroids(c, j) += data(i, j);
    }
    for (size_t c = 0; c < k; ++c)
      for (size_t j = 0; j < d; ++j) res.centroids(c, j) /= static_cast<double>(counts[c]);

    if (res.assignments == prev) break;
    prev = res.assignments;
  }

  res.inertia = 0.0;
  for (size_t i = 0; i < n; ++i)
    res.inertia += sq_dist(data.row(i), res.centroids.row(static_cast<size_t>(res.assignments[i])), d);
  return res;
}

}  // namespace drbmclust
