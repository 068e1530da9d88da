#pragma once
// Full-covariance Gaussian mixture fit by EM, with a k-means warm start.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "kmeans.hpp"
#include "matrix.hpp"
#include "rng.hpp"

namespace drbmclust {

struct GmmModel {
  std::vector<double> weights;
  Matrix means;                  // c x d
  std::vector<Matrix> covs;      // c matrices, d x d
  double loglik = 0.0;
  bool converged = false;
  size_t iterations = 0;
  bool had_degenerate = false;   // a component collapsed and was reseeded
};

namespace detail {

// Cholesky factor L (lower) of a SPD matrix; returns false if not SPD.
inline bool cholesky(const Matrix& a, Matrix& l) {
  size_t d = a.rows;
  l = Matrix(d, d, 0.0);
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (s <= 0.0) return false;
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return true;
}

// log N(x | mu, Sigma) given the Cholesky factor of Sigma.
inline double log_gauss(const double* x, const double* mu, const Matrix& l, double log_det,
                        size_t d, std::vector<double>& work) {
  // solve L y = (x - mu), Mahalanobis = |y|^2
  for (size_t i = 0; i < d; ++i) {
    double s = x[i] - mu[i];
    for (size_t k = 0; k < i; ++k) s -= l(i, k) * work[k];
    work[i] = s / l(i, i);
  }
  double maha = 0.0;
  for (size_t i = 0; i < d; ++i) maha += work[i] * work[i];
  const double log2pi = 1.8378770664093454835606594728112;
  return -0.5 * (static_cast<double>(d) * log2pi + log_det + maha);
}

inline double mean_feature_variance(const Matrix& x) {
  size_t n = x.rows, d = x.cols;
  double total = 0.0;
  for (size_t j = 0; j < d; ++j) {
    double m = 0.0;
    for (size_t i = 0; i < n; ++i) m += x(i, j);
    m /= static_cast<double>(n);
    double v = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double c = x(i, j) - m;
      v += c * c;
    }
    total += v / static_cast<double>(n);
  }
  return total / static_cast<double>(d);
}

inline Matrix global_covariance(const Matrix& x) {
  size_t n = x.rows, d = x.cols;
  std::vector<double> mu(d, 0.0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < d; ++j) mu[j] += x(i, j);
  for (size_t j = 0; j < d; ++j) mu[j] /= static_cast<double>(n);
  Matrix cov(d, d, 0.0);
  for (size_t i = 0; i < n; ++i)
    for (size_t a = 0; a < d; ++a) {
      double da = x(i, a) - mu[a];
      for (size_t b = 0; b <= a; ++b) cov(a, b) += da * (x(i, b) - mu[b]);
    }
  for (size_t a = 0; a < d; ++a)
    for (size_t b = 0; b <= a; ++b) {
      cov(a, b) /= static_cast<double>(n);
      cov(b, a) = cov(a, b);
    }
  return cov;
}

}  // namespace detail

// Total log-likelihood of the data under the model.
inline double log_likelihood(const GmmModel& model, const Matrix& x) {
  size_t n = x.rows, d = x.cols, c = model.weights.size();
  std::vector<Matrix> chols(c);
  std::vector<double> log_dets(c);
  for (size_t k = 0; k < c; ++k) {
    if (!detail::cholesky(model.covs[k], chols[k]))
      throw std::runtime_error("log_likelihood: covariance not positive definite");
    double ld = 0.0;
    for (size_t i = 0; i < d; ++i) ld += std::log(chols[k](i, i));
    log_dets[k] = 2.0 * ld;
  }
  std::vector<double> work(d), lp(c);
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < c; ++k) {
      lp[k] = std::log(model.weights[k]) +
              detail::log_gauss(x.row(i), model.means.row(k), chols[k], log_dets[k], d, work);
      if (lp[k] > mx) mx = lp[k];
    }
    double s = 0.0;
    for (size_t k = 0; k < c; ++k) s += std::exp(lp[k] - mx);
    total += mx + std::log(s);
  }
  return total;
}

// EM fit of a c-component full-covariance mixture. reg <= 0 selects the
// default ridge 1e-6 * (mean feature variance), added to every covariance
// diagonal. Initialization: 10 Lloyd iterations of k-means.
inline GmmModel fit_gmm(const Matrix& x, size_t c, uint64_t seed, double reg = -1.0,
                        size_t max_iter = 200, double tol = 1e-6) {
  size_t n = x.rows, d = x.cols;
  if (c == 0 || c > n) throw std::invalid_argument("fit_gmm: need 1 <= c <= n_samples");
  if (reg <= 0.0) reg = 1e-6 * detail::mean_feature_variance(x);
  if (reg <= 0.0) reg = 1e-10;  // all-constant data still needs a proper covariance

  GmmModel model;
  model.weights.assign(c, 1.0 / static_cast<double>(c));
  model.means = Matrix(c, d);
  model.covs.assign(c, Matrix(d, d, 0.0));

  KMeansResult km = kmeans(x, c, derive_seed(seed, "gmm-init"), 10);
  Matrix global_cov = detail::global_covariance(x);
  std::vector<size_t> counts(c, 0);
  for (int a : km.assignments) counts[static_cast<size_t>(a)]++;
  for (size_t k = 0; k < c; ++k) {
    for (size_t j = 0; j < d; ++j) model.means(k, j) = km.centroids(k, j);
    model.weights[k] = static_cast<double>(counts[k]) / static_cast<double>(n);
    if (counts[k] >= 2) {
      Matrix& cov = model.covs[k];
      for (size_t i = 0; i < n; ++i) {
        if (km.assignments[i] != static_cast<int>(k)) continue;
        for (size_t a = 0; a < d; ++a) {
          double da = x(i, a) - model.means(k, a);
          for (size_t b = 0; b <= a; ++b) cov(a, b) += da * (x(i, b) - model.means(k, b));
        }
      }
      for (size_t a = 0; a < d; ++a)
        for (size_t b = 0; b <= a; ++b) {
          cov(a, b) /= static_cast<double>(counts[k]);
          cov(b, a) = cov(a, b);
        }
    } else {
      model.covs[k] = global_cov;
    }
    for (size_t a = 0; a < d; ++a) model.covs[k](a, a) += reg;
  }

  Rng reseed_rng(derive_seed(seed, "gmm-reseed"));
  Matrix resp(n, c);
  std::vector<Matrix> chols(c);
  std::vector<double> log_dets(c), work(d), lp(c);
  double prev = -std::numeric_limits<double>::infinity();

  for (size_t it = 0; it < max_iter; ++it) {
    // E-step (and log-likelihood of the current parameters)
    for (size_t k = 0; k < c; ++k) {
      Matrix cov = model.covs[k];
      double jitter = reg;
      while (!detail::cholesky(cov, chols[k])) {
        jitter *= 10.0;
        if (jitter > 1e6) throw std::runtime_error("fit_gmm: covariance irreparably singular");
        for (size_t a = 0; a < d; ++a) cov(a, a) += jitter;
        model.had_degenerate = true;
      }
      double ld = 0.0;
      for (size_t i = 0; i < d; ++i) ld += std::log(chols[k](i, i));
      log_dets[k] = 2.0 * ld;
    }
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double mx = -std::numeric_limits<double>::infinity();
      for (size_t k = 0; k < c; ++k) {
        lp[k] = std::log(model.weights[k]) +
                detail::log_gauss(x.row(i), model.means.row(k), chols[k], log_dets[k], d, work);
        if (lp[k] > mx) mx = lp[k];
      }
      double s = 0.0;
      for (size_t k = 0; k < c; ++k) {
        lp[k] = std::exp(lp[k] - mx);
        s += lp[k];
      }
      for (size_t k = 0; k < c; ++k) resp(i, k) = lp[k] / s;
      total += mx + std::log(s);
    }
    model.loglik = total;
    model.iterations = it + 1;
    if (std::abs(total - prev) < tol) {
      model.converged = true;
      break;
    }
    prev = total;

    // M-step
    for (size_t k = 0; k < c; ++k) {
      double nk = 0.0;
      for (size_t i = 0; i < n; ++i) nk += resp(i, k);
      if (nk < 1e-10 * static_cast<double>(n)) {
        // collapsed component: reseed on a random point with the global shape
        model.had_degenerate = true;
        size_t pick = reseed_rng.below(n);
        for (size_t j = 0; j < d; ++j) model.means(k, j) = x(pick, j);
        model.covs[k] = global_cov;
        for (size_t a = 0; a < d; ++a) model.covs[k](a, a) += reg;
        model.weights[k] = 1.0 / static_cast<double>(n);
        continue;
      }
      model.weights[k] = nk / static_cast<double>(n);
      for (size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += resp(i, k) * x(i, j);
        model.means(k, j) = s / nk;
      }
      Matrix& cov = model.covs[k];
      for (size_t a = 0; a < d * d; ++a) cov.a[a] = 0.0;
      for (size_t i = 0; i < n; ++i) {
        double r = resp(i, k);
        if (r == 0.0) continue;
        for (size_t a = 0; a < d; ++a) {
          double da = x(i, a) - model.means(k, a);
          for (size_t b = 0; b <= a; ++b) cov(a, b) += r * da * (x(i, b) - model.means(k, b));
        }
      }
      for (size_t a = 0; a < d; ++a)
        for (size_t b = 0; b <= a; ++b) {
          cov(a, b) /= nk;
          cov(b, a) = cov(a, b);
        }
      for (size_t a = 0; a < d; ++a) cov(a, a) += reg;
    }
    // renormalize in case a reseed perturbed the weights
    double wsum = 0.0;
    for (double w : model.weights) wsum += w;
    for (double& w : model.weights) w /= wsum;
  }
  return model;
}

// Soft assignments argmax -> hard labels.
inline std::vector<int> gmm_predict(const GmmModel& model, const Matrix& x) {
  size_t n = x.rows, d = x.cols, c = model.weights.size();
  std::vector<Matrix> chols(c);
  std::vector<double> log_dets(c), work(d);
  for (size_t k = 0; k < c; ++k) {
    Matrix cov = model.covs[k];
    double jitter = 1e-10;
    while (!detail::cholesky(cov, chols[k])) {
      for (size_t a = 0; a < d; ++a) cov(a, a) += jitter;
      jitter *= 10.0;
      if (jitter > 1e6) throw std::runtime_error("gmm_predict: covariance irreparably singular");
    }
    double ld = 0.0;
    for (size_t i = 0; i < d; ++i) ld += std::log(chols[k](i, i));
    log_dets[k] = 2.0 * ld;
  }
  std::vector<int> out(n);
  for (size_t i = 0; i < n; ++i) {
    double best = -std::numeric_limits<double>::infinity();
    int arg = 0;
    for (size_t k = 0; k < c; ++k) {
      double lp = std::log(model.weights[k]) +
                  detail::log_gauss(x.row(i), model.means.row(k), chols[k], log_dets[k], d, work);
      if (lp > best) {
        best = lp;
        arg = static_cast<int>(k);
      }
    }
    out[i] = arg;
  }
  return out;
}

}  // namespace drbmclust
