#pragma once
// Cluster-count selection: fit mixtures for c = 1..c_max and keep the
// minimum-BIC model.

#include <cmath>
#include <vector>

#include "gmm.hpp"

namespace drbmclust {

// Free parameters of a c-component full-covariance mixture in d dimensions:
// (c-1) mixing weights + c*d means + c*d(d+1)/2 covariance entries.
inline size_t count_free_params(size_t c, size_t d) {
  return (c - 1) + c * d + c * d * (d + 1) / 2;
}

inline double bic_score(double loglik, size_t n_params, size_t n_samples) {
  return std::log(static_cast<double>(n_samples)) * static_cast<double>(n_params) - 2.0 * loglik;
}

struct BicResult {
  size_t n_clusters = 0;
  std::vector<double> bic;     // index 0 -> c = 1
  std::vector<double> loglik;  // best-of-restarts log-likelihood per c
  GmmModel best_model;         // the minimum-BIC fit
};

// For each candidate c, fits `restarts` mixtures from different seeds and
// keeps the best log-likelihood; returns the c with minimal BIC. Ties within
// 1e-9 go to the smaller c.
inline BicResult select_clusters(const Matrix& x, size_t c_max, size_t restarts, uint64_t seed,
                                 double reg = -1.0) {
  BicResult res;
  size_t n = x.rows, d = x.cols;
  if (c_max > n) c_max = n;
  for (size_t c = 1; c <= c_max; ++c) {
    GmmModel best;
    bool have = false;
    for (size_t r = 0; r < restarts; ++r) {
      GmmModel m = fit_gmm(x, c, derive_seed(seed, "bic-restart", c * 1000 + r), reg);
      if (!have || m.loglik > best.loglik) {
        best = std::move(m);
        have = true;
      }
    }
    res.loglik.push_back(best.loglik);
    res.bic.push_back(bic_score(best.loglik, count_free_params(c, d), n));
    if (c == 1 || res.bic.back() < res.bic[res.n_clusters - 1] - 1e-9) {
      res.n_clusters = c;
      res.best_model = std::move(best);
    }
  }
  return res;
}

// Default candidate ceiling: min(20, ceil(sqrt(N))).
inline size_t default_c_max(size_t n_samples) {
  size_t r = static_cast<size_t>(std::ceil(std::sqrt(static_cast<double>(n_samples))));
  return r < 20 ? r : 20;
}

}  // namespace drbmclust
