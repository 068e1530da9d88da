#pragma once
// Bernoulli RBM: energy, conditionals, exact joint enumeration (small nets),
// CD-1 training with exponentially decaying learning rate.

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "matrix.hpp"
#include "rng.hpp"

namespace drbmclust {

struct RbmLayer {
  Matrix w;               // n_visible x n_hidden
  std::vector<double> b;  // visible bias
  std::vector<double> c;  // hidden bias
  size_t n_visible() const { return w.rows; }
  size_t n_hidden() const { return w.cols; }
};

struct CdTrainConfig {
  size_t epochs = 2000;
  double lr0 = 0.1;
  double lr_decay_time = 0.0;  // <= 0 means use `epochs`
  size_t batch_size = 10;
  uint64_t seed = 0;
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline RbmLayer init_rbm(size_t n_visible, size_t n_hidden, uint64_t seed) {
  RbmLayer layer;
  layer.w = Matrix(n_visible, n_hidden);
  Rng rng(seed);
  for (size_t i = 0; i < n_visible; ++i)
    for (size_t j = 0; j < n_hidden; ++j) layer.w(i, j) = rng.normal(0.0, 0.01);
  layer.b.assign(n_visible, 0.0);
  layer.c.assign(n_hidden, 0.0);
  return layer;
}

// E(v,h) = -sum_ij w_ij v_i h_j - sum_i b_i v_i - sum_j c_j h_j
inline double energy(const RbmLayer& layer, const std::vector<double>& v,
                     const std::vector<double>& h) {
  double e = 0.0;
  for (size_t i = 0; i < layer.n_visible(); ++i) {
    if (v[i] == 0.0) continue;
    const double* wrow = layer.w.row(i);
    double s = 0.0;
    for (size_t j = 0; j < layer.n_hidden(); ++j) s += wrow[j] * h[j];
    e -= v[i] * s;
    e -= layer.b[i] * v[i];
  }
  for (size_t j = 0; j < layer.n_hidden(); ++j) e -= layer.c[j] * h[j];
  return e;
}

// P(h_j = 1 | v) for every hidden unit, one row per input row.
inline Matrix prob_h_given_v(const RbmLayer& layer, const Matrix& v) {
  Matrix p = matmul(v, layer.w);
  for (size_t i = 0; i < p.rows; ++i)
    for (size_t j = 0; j < p.cols; ++j) p(i, j) = sigmoid(p(i, j) + layer.c[j]);
  return p;
}

// P(v_i = 1 | h) for every visible unit, one row per input row.
inline Matrix prob_v_given_h(const RbmLayer& layer, const Matrix& h) {
  Matrix p(h.rows, layer.n_visible(), 0.0);
  for (size_t r = 0; r < h.rows; ++r) {
    const double* hrow = h.row(r);
    double* prow = p.row(r);
    for (size_t i = 0; i < layer.n_visible(); ++i) {
      const double* wrow = layer.w.row(i);
      double s = layer.b[i];
      for (size_t j = 0; j < layer.n_hidden(); ++j) s += wrow[j] * hrow[j];
      prow[i] = sigmoid(s);
    }
  }
  return p;
}

inline Matrix sample_bernoulli(const Matrix& probs, Rng& rng) {
  Matrix s(probs.rows, probs.cols);
  for (size_t i = 0; i < probs.rows * probs.cols; ++i)
    s.a[i] = rng.uniform() < probs.a[i] ? 1.0 : 0.0;
  return s;
}

// Full joint over all binary (v, h): P[(v_idx << n_hidden) | h_idx], where
// bit i of v_idx is v_i and bit j of h_idx is h_j. Only feasible for
// n_visible + n_hidden <= 20.
inline std::vector<double> exact_joint(const RbmLayer& layer) {
  size_t d = layer.n_visible(), p = layer.n_hidden();
  if (d + p > 20) throw std::invalid_argument("exact_joint: n_visible + n_hidden must be <= 20");
  size_t nv = size_t{1} << d, nh = size_t{1} << p;
  std::vector<double> table(nv * nh);
  std::vector<double> v(d), h(p);
  double z = 0.0;
  for (size_t vi = 0; vi < nv; ++vi) {
    for (size_t i = 0; i < d; ++i) v[i] = (vi >> i) & 1 ? 1.0 : 0.0;
    for (size_t hi = 0; hi < nh; ++hi) {
      for (size_t j = 0; j < p; ++j) h[j] = (hi >> j) & 1 ? 1.0 : 0.0;
      double w = std::exp(-energy(layer, v, h));
      table[(vi << p) | hi] = w;
      z += w;
    }
  }
  for (double& t : table) t /= z;
  return table;
}

// One CD-1 update on a minibatch (rows of `batch`), scaled by epsilon.
// Positive statistics use hidden probabilities; the reconstruction is a
// mean-field pass driven by sampled hidden states. Returns the summed
// squared reconstruction error of the batch.
inline double cd1_step(RbmLayer& layer, const Matrix& batch, double epsilon, Rng& rng) {
  size_t m = batch.rows;
  Matrix h0 = prob_h_given_v(layer, batch);
  Matrix hs = sample_bernoulli(h0, rng);
  Matrix v1 = prob_v_given_h(layer, hs);
  Matrix h1 = prob_h_given_v(layer, v1);
  Matrix pos = matmul_tn(batch, h0);  // v0^T h0
  Matrix neg = matmul_tn(v1, h1);     // v1^T h1
  // Diagnostic: mean-field reconstruction through the hidden probabilities,
  // with the pre-update weights. The chain's v1 rides on sampled hiddens,
  // whose Bernoulli noise puts a floor under the error even when the model
  // is good; the mean-field pass tracks actual reconstruction quality and
  // touches no random state.
  Matrix vr = prob_v_given_h(layer, h0);
  double scale = epsilon / static_cast<double>(m);
  for (size_t i = 0; i < layer.w.a.size(); ++i) layer.w.a[i] += scale * (pos.a[i] - neg.a[i]);
  for (size_t i = 0; i < layer.n_visible(); ++i) {
    double s = 0.0;
    for (size_t r = 0; r < m; ++r) s += batch(r, i) - v1(r, i);
    layer.b[i] += scale * s;
  }
  for (size_t j = 0; j < layer.n_hidden(); ++j) {
    double s = 0.0;
    for (size_t r = 0; r < m; ++r) s += h0(r, j) - h1(r, j);
    layer.c[j] += scale * s;
  }
  double err = 0.0;
  for (size_t i = 0; i < batch.a.size(); ++i) {
    double d = batch.a[i] - vr.a[i];
    err += d * d;
  }
  return err;
}

struct RbmTrainStats {
  std::vector<double> recon_error;  // one entry per epoch
};

// Shuffled minibatch CD-1 with lr(t) = lr0 * exp(-t / lr_decay_time).
// Returns the mean per-element squared reconstruction error of each epoch.
inline RbmTrainStats train_rbm(RbmLayer& layer, const Matrix& data, const CdTrainConfig& cfg) {
  size_t n = data.rows, d = data.cols;
  double decay = cfg.lr_decay_time > 0.0 ? cfg.lr_decay_time : static_cast<double>(cfg.epochs);
  Rng rng(cfg.seed);
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  RbmTrainStats stats;
  stats.recon_error.reserve(cfg.epochs);
  size_t bs = cfg.batch_size == 0 ? n : cfg.batch_size;
  for (size_t t = 0; t < cfg.epochs; ++t) {
    double eps = cfg.lr0 * std::exp(-static_cast<double>(t) / decay);
    rng.shuffle(order);
    double err = 0.0;
    for (size_t start = 0; start < n; start += bs) {
      size_t m = start + bs <= n ? bs : n - start;
      Matrix batch(m, d);
      for (size_t r = 0; r < m; ++r)
        for (size_t j = 0; j < d; ++j) batch(r, j) = data(order[start + r], j);
      err += cd1_step(layer, batch, eps, rng);
    }
    stats.recon_error.push_back(err / static_cast<double>(n * d));
  }
  return stats;
}

}  // namespace drbmclust
