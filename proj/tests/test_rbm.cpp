#include <catch2/catch_amalgamated.hpp>

#include <drbmclust/dataset.hpp>
#include <drbmclust/rbm.hpp>

#include <cmath>
#include <vector>

using namespace drbmclust;

namespace {
RbmLayer tiny_layer() {
  RbmLayer l;
  l.w = Matrix(2, 2);
  l.w(0, 0) = 0.5;
  l.w(0, 1) = -0.25;
  l.w(1, 0) = 0.1;
  l.w(1, 1) = 0.3;
  l.b = {0.2, -0.1};
  l.c = {0.05, 0.15};
  return l;
}
}  // namespace

TEST_CASE("energy matches the hand-computed value") {
  RbmLayer l = tiny_layer();
  std::vector<double> v = {1.0, 0.0}, h = {1.0, 1.0};
  REQUIRE(energy(l, v, h) == Catch::Approx(-0.65).margin(1e-15));
}

TEST_CASE("hidden conditional matches the closed form") {
  RbmLayer l = tiny_layer();
  Matrix v(1, 2);
  v(0, 0) = 1.0;
  v(0, 1) = 0.0;
  Matrix p = prob_h_given_v(l, v);
  REQUIRE(p(0, 0) == Catch::Approx(0.6341355910108007).margin(1e-15));
  REQUIRE(p(0, 1) == Catch::Approx(sigmoid(-0.25 + 0.15)).margin(1e-15));
}

TEST_CASE("init draws small weights and zero biases") {
  RbmLayer l = init_rbm(30, 40, 9);
  REQUIRE(l.n_visible() == 30);
  REQUIRE(l.n_hidden() == 40);
  double s = 0.0, s2 = 0.0;
  for (double w : l.w.a) {
    s += w;
    s2 += w * w;
  }
  double n = static_cast<double>(l.w.a.size());
  REQUIRE(std::abs(s / n) < 0.002);
  REQUIRE(std::sqrt(s2 / n) == Catch::Approx(0.01).margin(0.002));
  for (double b : l.b) REQUIRE(b == 0.0);
  for (double c : l.c) REQUIRE(c == 0.0);
}

TEST_CASE("exact joint is a distribution") {
  RbmLayer l = init_rbm(4, 3, 17);
  // make it non-trivial
  Rng rng(5);
  for (double& w : l.w.a) w = rng.uniform(-1.0, 1.0);
  for (double& b : l.b) b = rng.uniform(-0.5, 0.5);
  for (double& c : l.c) c = rng.uniform(-0.5, 0.5);
  std::vector<double> joint = exact_joint(l);
  REQUIRE(joint.size() == 128);
  double sum = 0.0;
  for (double p : joint) {
    REQUIRE(p >= 0.0);
    sum += p;
  }
  REQUIRE(sum == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("conditionals agree with exact enumeration") {
  // P(h_j=1 | v) from the sigmoid must equal the ratio of exact joint sums.
  RbmLayer l = init_rbm(3, 2, 23);
  Rng rng(31);
  for (double& w : l.w.a) w = rng.uniform(-2.0, 2.0);
  for (double& b : l.b) b = rng.uniform(-1.0, 1.0);
  for (double& c : l.c) c = rng.uniform(-1.0, 1.0);
  std::vector<double> joint = exact_joint(l);
  size_t d = 3, p = 2;
  for (size_t vi = 0; vi < (size_t{1} << d); ++vi) {
    Matrix v(1, d);
    for (size_t i = 0; i < d; ++i) v(0, i) = (vi >> i) & 1 ? 1.0 : 0.0;
    Matrix ph = prob_h_given_v(l, v);
    for (size_t j = 0; j < p; ++j) {
      double num = 0.0, den = 0.0;
      for (size_t hi = 0; hi < (size_t{1} << p); ++hi) {
        double pr = joint[(vi << p) | hi];
        den += pr;
        if ((hi >> j) & 1) num += pr;
      }
      REQUIRE(ph(0, j) == Catch::Approx(num / den).margin(1e-10));
    }
  }
}

TEST_CASE("visible conditional agrees with exact enumeration") {
  RbmLayer l = init_rbm(2, 3, 29);
  Rng rng(37);
  for (double& w : l.w.a) w = rng.uniform(-2.0, 2.0);
  for (double& b : l.b) b = rng.uniform(-1.0, 1.0);
  for (double& c : l.c) c = rng.uniform(-1.0, 1.0);
  std::vector<double> joint = exact_joint(l);
  size_t d = 2, p = 3;
  for (size_t hi = 0; hi < (size_t{1} << p); ++hi) {
    Matrix h(1, p);
    for (size_t j = 0; j < p; ++j) h(0, j) = (hi >> j) & 1 ? 1.0 : 0.0;
    Matrix pv = prob_v_given_h(l, h);
    for (size_t i = 0; i < d; ++i) {
      double num = 0.0, den = 0.0;
      for (size_t vi = 0; vi < (size_t{1} << d); ++vi) {
        double pr = joint[(vi << p) | hi];
        den += pr;
        if ((vi >> i) & 1) num += pr;
      }
      REQUIRE(pv(0, i) == Catch::Approx(num / den).margin(1e-10));
    }
  }
}

TEST_CASE("bernoulli sampling respects degenerate probabilities") {
  Matrix p(1, 4);
  p(0, 0) = 0.0;
  p(0, 1) = 1.0;
  p(0, 2) = 0.0;
  p(0, 3) = 1.0;
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    Matrix s = sample_bernoulli(p, rng);
    REQUIRE(s(0, 0) == 0.0);
    REQUIRE(s(0, 1) == 1.0);
    REQUIRE(s(0, 2) == 0.0);
    REQUIRE(s(0, 3) == 1.0);
  }
}

TEST_CASE("CD-1 reduces reconstruction error on a repeated pattern") {
  // 6-bit pattern (scaled into the unit interval) repeated 20 times.
  Matrix data(20, 6);
  double pattern[6] = {0.9, 0.1, 0.9, 0.1, 0.9, 0.9};
  for (size_t i = 0; i < 20; ++i)
    for (size_t j = 0; j < 6; ++j) data(i, j) = pattern[j];
  RbmLayer l = init_rbm(6, 10, 3);
  CdTrainConfig cfg;
  cfg.epochs = 300;
  cfg.batch_size = 20;
  cfg.seed = 3;
  RbmTrainStats stats = train_rbm(l, data, cfg);
  double early = 0.0, late = 0.0;
  for (size_t t = 0; t < 30; ++t) early += stats.recon_error[t];
  for (size_t t = stats.recon_error.size() - 30; t < stats.recon_error.size(); ++t)
    late += stats.recon_error[t];
  REQUIRE(late < early);
}

TEST_CASE("learning rate decay follows the exponential schedule") {
  // With lr_decay_time = epochs, epoch t uses lr0 * exp(-t/epochs). Train a
  // 1-step model twice with configs that should be identical by construction.
  Matrix data(4, 2);
  Rng rng(8);
  for (double& v : data.a) v = rng.uniform(0.1, 0.9);
  RbmLayer a = init_rbm(2, 3, 5);
  RbmLayer b = a;
  CdTrainConfig ca;
  ca.epochs = 10;
  ca.lr_decay_time = 0.0;  // defaulted to epochs
  ca.batch_size = 4;
  ca.seed = 21;
  CdTrainConfig cb = ca;
  cb.lr_decay_time = 10.0;  // explicit
  train_rbm(a, data, ca);
  train_rbm(b, data, cb);
  REQUIRE(a.w.a == b.w.a);
  REQUIRE(a.b == b.b);
  REQUIRE(a.c == b.c);
}

TEST_CASE("rbm training is deterministic per seed") {
  Matrix data(12, 4);
  Rng rng(77);
  for (double& v : data.a) v = rng.uniform(0.1, 0.9);
  RbmLayer a = init_rbm(4, 5, 2);
  RbmLayer b = a;
  CdTrainConfig cfg;
  cfg.epochs = 50;
  cfg.batch_size = 5;
  cfg.seed = 13;
  train_rbm(a, data, cfg);
  train_rbm(b, data, cfg);
  REQUIRE(a.w.a == b.w.a);
}

TEST_CASE("reconstruction error falls over a long run on generated data") {
  Dataset moons = gen_moons(150, 0.05, 41);
  Matrix x = normalize_minmax(moons).first.x;
  RbmLayer l = init_rbm(x.cols, 50, 5);
  CdTrainConfig cfg;
  cfg.epochs = 2000;
  cfg.seed = 6;
  RbmTrainStats stats = train_rbm(l, x, cfg);
  REQUIRE(stats.recon_error.back() < stats.recon_error.front());
}
