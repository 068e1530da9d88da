#pragma once
// Flat-clustering baselines on raw features: k-means and EM/GMM.

#include <vector>

#include "gmm.hpp"
#include "kmeans.hpp"

namespace drbmclust {

struct EmClusterResult {
  std::vector<int> assignments;
  GmmModel model;
};

// Fits a k-component mixture and assigns each sample to the component with
// maximal responsibility.
inline EmClusterResult em_cluster(const Matrix& data, size_t k, uint64_t seed, double reg = -1.0) {
  EmClusterResult res;
  res.model = fit_gmm(data, k, seed, reg);
  res.assignments = gmm_predict(res.model, data);
  return res;
}

}  // namespace drbmclust
