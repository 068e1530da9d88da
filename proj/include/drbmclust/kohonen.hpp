#pragma once
// 1-D Kohonen network. Learning rate and neighborhood radius both decay
// exponentially; the radius time constant is chosen so the radius ends at 1.

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "matrix.hpp"
#include "rng.hpp"

namespace drbmclust {

enum class NeighborhoodDenom {
  sigma_squared,  // exp(-d^2 / (2 sigma(t)^2))
  sigma,          // exp(-d^2 / (2 sigma(t)))
};

struct KohonenNet {
  Matrix w;  // n_outputs x n_inputs
  double alpha0 = 0.5;
  double sigma0 = 1.0;
  double t1 = 1.0;  // learning-rate time constant
  double t2 = 1.0;  // radius time constant
  NeighborhoodDenom denom = NeighborhoodDenom::sigma_squared;
  size_t n_outputs() const { return w.rows; }
  size_t n_inputs() const { return w.cols; }
};

inline KohonenNet init_kohonen(size_t n_inputs, size_t n_outputs, size_t total_iterations,
                               uint64_t seed,
                               NeighborhoodDenom denom = NeighborhoodDenom::sigma_squared) {
  if (n_outputs == 0) throw std::invalid_argument("init_kohonen: n_outputs must be positive");
  KohonenNet net;
  net.w = Matrix(n_outputs, n_inputs);
  Rng rng(seed);
  for (size_t i = 0; i < n_outputs * n_inputs; ++i) net.w.a[i] = rng.uniform(0.1, 0.9);
  net.alpha0 = 0.5;
  net.sigma0 = n_outputs >= 2 ? static_cast<double>(n_outputs) / 2.0 : 1.0;
  net.t1 = static_cast<double>(total_iterations);
  net.t2 = static_cast<double>(total_iterations) / std::log(net.sigma0 > 1.0 + 1e-9 ? net.sigma0 : 1.0 + 1e-9);
  net.denom = denom;
  return net;
}

inline double kohonen_alpha(const KohonenNet& net, double t) {
  return net.alpha0 * std::exp(-t / net.t1);
}

inline double kohonen_sigma(const KohonenNet& net, double t) {
  return net.sigma0 * std::exp(-t / net.t2);
}

// Neighborhood strength between the winner and a neuron `dist` lattice
// positions away, at iteration t.
inline double neighborhood(const KohonenNet& net, double t, double dist) {
  double sigma = kohonen_sigma(net, t);
  double den = net.denom == NeighborhoodDenom::sigma_squared ? 2.0 * sigma * sigma : 2.0 * sigma;
  return kohonen_alpha(net, t) * std::exp(-dist * dist / den);
}

// Smallest Euclidean distance wins; ties break toward the lowest index.
inline size_t find_winner(const KohonenNet& net, const double* x) {
  double best = std::numeric_limits<double>::infinity();
  size_t arg = 0;
  for (size_t j = 0; j < net.n_outputs(); ++j) {
    double d = sq_dist(x, net.w.row(j), net.n_inputs());
    if (d < best) {
      best = d;
      arg = j;
    }
  }
  return arg;
}

// Single-sample presentations in shuffled cyclic order. Every neuron moves
// toward the sample, weighted by its distance to the winner on the lattice.
inline void train_kohonen(KohonenNet& net, const Matrix& data, size_t total_iterations,
                          uint64_t seed) {
  size_t n = data.rows, d = data.cols;
  if (n == 0) return;
  Rng rng(seed);
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  rng.shuffle(order);
  size_t pos = 0;
  for (size_t t = 0; t < total_iterations; ++t) {
    if (pos == n) {
      rng.shuffle(order);
      pos = 0;
    }
    const double* x = data.row(order[pos++]);
    size_t win = find_winner(net, x);
    double td = static_cast<double>(t);
    for (size_t j = 0; j < net.n_outputs(); ++j) {
      double dist = win >= j ? static_cast<double>(win - j) : static_cast<double>(j - win);
      double h = neighborhood(net, td, dist);
      double* wrow = net.w.row(j);
      for (size_t k = 0; k < d; ++k) wrow[k] += h * (x[k] - wrow[k]);
    }
  }
}

inline std::vector<int> assign_clusters(const KohonenNet& net, const Matrix& data) {
  std::vector<int> out(data.rows);
  for (size_t i = 0; i < data.rows; ++i)
    out[i] = static_cast<int>(find_winner(net, data.row(i)));
  return out;
}

}  // namespace drbmclust
