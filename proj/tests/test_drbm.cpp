#include <catch2/catch_amalgamated.hpp>

#include <drbmclust/drbm.hpp>
#include <drbmclust/serialize.hpp>

#include <cstdio>
#include <vector>

using namespace drbmclust;

namespace {
Matrix uniform_matrix(size_t n, size_t d, uint64_t seed) {
  Matrix x(n, d);
  Rng rng(seed);
  for (double& v : x.a) v = rng.uniform(0.1, 0.9);
  return x;
}
}  // namespace

TEST_CASE("stack dimensions follow the layer plan") {
  Matrix x = uniform_matrix(15, 4, 1);
  DrbmTrainConfig cfg;
  cfg.cd.epochs = 5;
  cfg.cd.seed = 2;
  DrbmModel m = train_drbm(x, {6, 5, 3}, cfg);
  REQUIRE(m.layers.size() == 3);
  REQUIRE(m.layers[0].n_visible() == 4);
  REQUIRE(m.layers[0].n_hidden() == 6);
  REQUIRE(m.layers[1].n_visible() == 6);
  REQUIRE(m.layers[2].n_hidden() == 3);
  Matrix f = extract_features(m, x);
  REQUIRE(f.rows == 15);
  REQUIRE(f.cols == 3);
  for (double v : f.a) {
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
  }
}

TEST_CASE("empty layer plan is rejected") {
  Matrix x = uniform_matrix(5, 2, 3);
  DrbmTrainConfig cfg;
  REQUIRE_THROWS(train_drbm(x, {}, cfg));
}

TEST_CASE("feature extraction is deterministic") {
  Matrix x = uniform_matrix(10, 3, 4);
  DrbmTrainConfig cfg;
  cfg.cd.epochs = 8;
  cfg.cd.seed = 5;
  DrbmModel m = train_drbm(x, {4, 3}, cfg);
  Matrix f1 = extract_features(m, x);
  Matrix f2 = extract_features(m, x);
  REQUIRE(f1.a == f2.a);
  DrbmModel m2 = train_drbm(x, {4, 3}, cfg);
  REQUIRE(extract_features(m2, x).a == f1.a);
}

TEST_CASE("transport choice changes what deeper layers learn") {
  Matrix x = uniform_matrix(20, 5, 6);
  DrbmTrainConfig probs;
  probs.cd.epochs = 20;
  probs.cd.seed = 7;
  probs.transport = StackTransport::probabilities;
  DrbmTrainConfig samp = probs;
  samp.transport = StackTransport::sampled;
  DrbmModel mp = train_drbm(x, {6, 4}, probs);
  DrbmModel ms = train_drbm(x, {6, 4}, samp);
  // first layer trains on the same input either way
  REQUIRE(mp.layers[0].w.a == ms.layers[0].w.a);
  // second layer sees different inputs
  REQUIRE(mp.layers[1].w.a != ms.layers[1].w.a);
}

TEST_CASE("stack energy matches the hand-computed value") {
  DrbmModel m;
  RbmLayer l1;
  l1.w = Matrix(2, 3);
  double w1[6] = {0.2, -0.1, 0.4, 0.3, 0.05, -0.2};
  for (int i = 0; i < 6; ++i) l1.w.a[static_cast<size_t>(i)] = w1[i];
  l1.b = {9.0, 9.0};  // biases must not enter the stack energy
  l1.c = {9.0, 9.0, 9.0};
  RbmLayer l2;
  l2.w = Matrix(3, 2);
  double w2[6] = {0.1, -0.3, 0.25, 0.15, -0.05, 0.2};
  for (int i = 0; i < 6; ++i) l2.w.a[static_cast<size_t>(i)] = w2[i];
  l2.b = {9.0, 9.0, 9.0};
  l2.c = {9.0, 9.0};
  m.layers = {l1, l2};
  std::vector<std::vector<double>> states = {{1.0, 0.8}, {0.5, 1.0, 0.25}, {1.0, 0.6}};
  REQUIRE(drbm_energy(m, states) == Catch::Approx(-0.5375).margin(1e-15));
}

TEST_CASE("stack energy validates state shapes") {
  Matrix x = uniform_matrix(6, 2, 8);
  DrbmTrainConfig cfg;
  cfg.cd.epochs = 2;
  DrbmModel m = train_drbm(x, {3}, cfg);
  REQUIRE_THROWS(drbm_energy(m, {{1.0, 0.0}}));                         // missing hidden state
  REQUIRE_THROWS(drbm_energy(m, {{1.0, 0.0}, {1.0}}));                  // wrong hidden size
  REQUIRE_NOTHROW(drbm_energy(m, {{1.0, 0.0}, {1.0, 0.0, 1.0}}));
}

TEST_CASE("model json round-trip is bit-exact") {
  Matrix x = uniform_matrix(10, 3, 9);
  DrbmTrainConfig cfg;
  cfg.cd.epochs = 15;
  cfg.cd.seed = 10;
  DrbmModel m = train_drbm(x, {5, 2}, cfg);
  std::string path = "/tmp/model_roundtrip.json";
  save_model(path, m);
  DrbmModel back = load_model(path);
  REQUIRE(back.layers.size() == m.layers.size());
  for (size_t i = 0; i < m.layers.size(); ++i) {
    REQUIRE(back.layers[i].w.a == m.layers[i].w.a);
    REQUIRE(back.layers[i].b == m.layers[i].b);
    REQUIRE(back.layers[i].c == m.layers[i].c);
  }
  // saving the reloaded model reproduces the file byte for byte
  std::string path2 = "/tmp/model_roundtrip2.json";
  save_model(path2, back);
  std::ifstream f1(path), f2(path2);
  std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  REQUIRE(s1 == s2);
}
