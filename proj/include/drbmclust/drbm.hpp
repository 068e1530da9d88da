#pragma once
// Deep RBM: greedy layer-wise CD-1 training, deterministic feature
// extraction, and the bias-free stack energy.

#include <stdexcept>
#include <string>
#include <vector>

#include "rbm.hpp"

namespace drbmclust {

enum class StackTransport {
  probabilities,  // next layer trains on hidden probabilities
  sampled,        // next layer trains on one frozen binary sample per row
};

struct DrbmTrainConfig {
  CdTrainConfig cd;
  StackTransport transport = StackTransport::probabilities;
};

struct DrbmModel {
  std::vector<RbmLayer> layers;
};

// Greedy layer-wise training: each layer is a fresh RBM fit on the previous
// layer's activations. With `sampled` transport the activations handed to
// the next layer are one seeded binary draw per row, taken after the layer
// has finished training (the draw is fixed, not re-sampled per epoch).
inline DrbmModel train_drbm(const Matrix& data, const std::vector<size_t>& hidden_sizes,
                            const DrbmTrainConfig& cfg) {
  if (hidden_sizes.empty()) throw std::invalid_argument("train_drbm: no hidden layers");
  DrbmModel model;
  Matrix cur = data;
  for (size_t li = 0; li < hidden_sizes.size(); ++li) {
    RbmLayer layer = init_rbm(cur.cols, hidden_sizes[li], derive_seed(cfg.cd.seed, "rbm-init", li));
    CdTrainConfig layer_cfg = cfg.cd;
    layer_cfg.seed = derive_seed(cfg.cd.seed, "rbm-train", li);
    train_rbm(layer, cur, layer_cfg);
    Matrix probs = prob_h_given_v(layer, cur);
    if (cfg.transport == StackTransport::sampled && li + 1 < hidden_sizes.size()) {
      Rng rng(derive_seed(cfg.cd.seed, "transport", li));
      cur = sample_bernoulli(probs, rng);
    } else {
      cur = std::move(probs);
    }
    model.layers.push_back(std::move(layer));
  }
  return model;
}

// Deterministic feedforward pass: hidden probabilities through every layer.
inline Matrix extract_features(const DrbmModel& model, const Matrix& data) {
  Matrix cur = data;
  for (const RbmLayer& layer : model.layers) cur = prob_h_given_v(layer, cur);
  return cur;
}

// Bias-free energy of one joint configuration (v, h1, ..., hL):
//   -v W1 h1 - h1 W2 h2 - ... - h(L-1) WL hL
// states[0] is the visible vector, states[k] the k-th hidden layer.
inline double drbm_energy(const DrbmModel& model, const std::vector<std::vector<double>>& states) {
  if (states.size() != model.layers.size() + 1)
    throw std::invalid_argument("drbm_energy: need one state vector per layer plus the visible layer");
  double e = 0.0;
  for (size_t k = 0; k < model.layers.size(); ++k) {
    const RbmLayer& layer = model.layers[k];
    const std::vector<double>& lo = states[k];
    const std::vector<double>& hi = states[k + 1];
    if (lo.size() != layer.n_visible() || hi.size() != layer.n_hidden())
      throw std::invalid_argument("drbm_energy: state size mismatch at layer " + std::to_string(k));
    for (size_t i = 0; i < layer.n_visible(); ++i) {
      if (lo[i] == 0.0) continue;
      const double* wrow = layer.w.row(i);
      double s = 0.0;
      for (size_t j = 0; j < layer.n_hidden(); ++j) s += wrow[j] * hi[j];
      e -= lo[i] * s;
    }
  }
  return e;
}

}  // namespace drbmclust
