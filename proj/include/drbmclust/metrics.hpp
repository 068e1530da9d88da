#pragma once
// External cluster-quality metrics: best-map accuracy (Hungarian or
// majority-vote mapping), normalized mutual information, rank tables.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "matrix.hpp"

namespace drbmclust {

namespace detail {

// compact labels to 0..K-1 in sorted-value order
inline std::vector<int> compact_labels(const std::vector<int>& labels, size_t& k_out) {
  std::map<int, int> remap;
  for (int l : labels) remap.emplace(l, 0);
  int next = 0;
  for (auto& kv : remap) kv.second = next++;
  std::vector<int> out(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) out[i] = remap[labels[i]];
  k_out = static_cast<size_t>(next);
  return out;
}

// Minimum-cost assignment on a square matrix; returns row -> column.
// Standard O(n^3) potentials method.
inline std::vector<int> hungarian(const Matrix& cost) {
  size_t n = cost.rows;
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (size_t i = 1; i <= n; ++i) {
    p[0] = static_cast<int>(i);
    size_t j0 = 0;
    std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      int i0 = p[j0];
      double delta = std::numeric_limits<double>::infinity();
      size_t j1 = 0;
      for (size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost(static_cast<size_t>(i0) - 1, j - 1) - u[static_cast<size_t>(i0)] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = static_cast<int>(j0);
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[static_cast<size_t>(p[j])] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      size_t j1 = static_cast<size_t>(way[j0]);
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (size_t j = 1; j <= n; ++j)
    if (p[j] != 0) row_to_col[static_cast<size_t>(p[j]) - 1] = static_cast<int>(j) - 1;
  return row_to_col;
}

}  // namespace detail

// counts[i][j] = # samples in cluster i with true class j
inline Matrix contingency_table(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size() || pred.empty())
    throw std::invalid_argument("contingency_table: label vectors must be same nonzero length");
  size_t nc = 0, nk = 0;
  std::vector<int> p = detail::compact_labels(pred, nc);
  std::vector<int> t = detail::compact_labels(truth, nk);
  Matrix counts(nc, nk, 0.0);
  for (size_t i = 0; i < p.size(); ++i)
    counts(static_cast<size_t>(p[i]), static_cast<size_t>(t[i])) += 1.0;
  return counts;
}

enum class MappingMethod { hungarian, majority };

struct AccuracyResult {
  double eta = 0.0;
  std::vector<int> mapping;  // compacted cluster id -> compacted class id, -1 = unmatched
};

// Fraction of samples whose cluster maps onto their true class. Hungarian
// finds the one-to-one mapping maximizing that fraction (extra clusters map
// to nothing); majority maps every cluster to its most common class.
inline AccuracyResult clustering_accuracy(const std::vector<int>& pred, const std::vector<int>& truth,
                                          MappingMethod method = MappingMethod::hungarian) {
  Matrix counts = contingency_table(pred, truth);
  size_t nc = counts.rows, nk = counts.cols;
  size_t n = pred.size();
  AccuracyResult res;
  res.mapping.assign(nc, -1);
  double correct = 0.0;
  if (method == MappingMethod::hungarian) {
    size_t s = nc > nk ? nc : nk;
    Matrix cost(s, s, 0.0);
    for (size_t i = 0; i < nc; ++i)
      for (size_t j = 0; j < nk; ++j) cost(i, j) = -counts(i, j);
    std::vector<int> row_to_col = detail::hungarian(cost);
    for (size_t i = 0; i < nc; ++i) {
      int j = row_to_col[i];
      if (j >= 0 && static_cast<size_t>(j) < nk) {
        res.mapping[i] = j;
        correct += counts(i, static_cast<size_t>(j));
      }
    }
  } else {
    for (size_t i = 0; i < nc; ++i) {
      double best = -1.0;
      int arg = -1;
      for (size_t j = 0; j < nk; ++j)
        if (counts(i, j) > best) {
          best = counts(i, j);
          arg = static_cast<int>(j);
        }
      res.mapping[i] = arg;
      correct += best;
    }
  }
  res.eta = correct / static_cast<double>(n);
  return res;
}

// NMI with sqrt normalization, natural logs. Two degenerate partitions
// (everything in one cluster on both sides) agree perfectly -> 1; a single
// degenerate side carries no information -> 0.
inline double nmi(const std::vector<int>& a, const std::vector<int>& b) {
  Matrix counts = contingency_table(a, b);
  size_t nc = counts.rows, nk = counts.cols;
  double n = static_cast<double>(a.size());
  std::vector<double> ra(nc, 0.0), rb(nk, 0.0);
  for (size_t i = 0; i < nc; ++i)
    for (size_t j = 0; j < nk; ++j) {
      ra[i] += counts(i, j);
      rb[j] += counts(i, j);
    }
  double ha = 0.0, hb = 0.0;
  for (double x : ra)
    if (x > 0.0) ha -= x / n * std::log(x / n);
  for (double x : rb)
    if (x > 0.0) hb -= x / n * std::log(x / n);
  if (ha == 0.0 && hb == 0.0) return 1.0;
  if (ha == 0.0 || hb == 0.0) return 0.0;
  double mi = 0.0;
  for (size_t i = 0; i < nc; ++i)
    for (size_t j = 0; j < nk; ++j) {
      double nij = counts(i, j);
      if (nij == 0.0) continue;
      mi += nij / n * std::log(n * nij / (ra[i] * rb[j]));
    }
  return mi / std::sqrt(ha * hb);
}

// 1-based ranks, best value first; ties share the minimum rank
// ([0.9, 0.8, 0.8, 0.7] -> [1, 2, 2, 4]).
inline std::vector<int> rank_methods(const std::vector<double>& values, bool higher_is_better = true) {
  std::vector<int> ranks(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    int r = 1;
    for (size_t j = 0; j < values.size(); ++j) {
      if (higher_is_better ? values[j] > values[i] : values[j] < values[i]) ++r;
    }
    ranks[i] = r;
  }
  return ranks;
}

}  // namespace drbmclust
