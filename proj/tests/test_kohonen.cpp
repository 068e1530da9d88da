#include <catch2/catch_amalgamated.hpp>

#include <drbmclust/dataset.hpp>
#include <drbmclust/kohonen.hpp>

#include <cmath>

using namespace drbmclust;

TEST_CASE("init pins the schedule constants") {
  KohonenNet net = init_kohonen(4, 6, 1200, 3);
  REQUIRE(net.alpha0 == 0.5);
  REQUIRE(net.sigma0 == 3.0);
  REQUIRE(net.t1 == 1200.0);
  REQUIRE(net.t2 == Catch::Approx(1200.0 / std::log(3.0)).margin(1e-12));
  for (double w : net.w.a) {
    REQUIRE(w >= 0.1);
    REQUIRE(w <= 0.9);
  }
  // radius decays to exactly 1 at the final iteration
  REQUIRE(kohonen_sigma(net, 1200.0) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("single output neuron keeps a sane radius") {
  KohonenNet net = init_kohonen(2, 1, 100, 4);
  REQUIRE(net.sigma0 == 1.0);
  REQUIRE(std::isfinite(net.t2));
  REQUIRE(kohonen_sigma(net, 0.0) == 1.0);
}

TEST_CASE("neighborhood strength matches the closed form") {
  KohonenNet net;
  net.alpha0 = 0.5;
  net.sigma0 = 1.5;
  net.t1 = 100.0;
  net.t2 = 100.0;
  net.denom = NeighborhoodDenom::sigma_squared;
  REQUIRE(neighborhood(net, 0.0, 2.0) == Catch::Approx(0.20555614525359373).margin(1e-12));
  net.denom = NeighborhoodDenom::sigma;
  REQUIRE(neighborhood(net, 0.0, 2.0) == Catch::Approx(0.13179856905786339).margin(1e-12));
}

TEST_CASE("neighborhood decreases with lattice distance and with time") {
  KohonenNet net = init_kohonen(3, 8, 1000, 5);
  for (double t : {0.0, 250.0, 800.0}) {
    for (int d = 0; d < 7; ++d)
      REQUIRE(neighborhood(net, t, static_cast<double>(d)) >
              neighborhood(net, t, static_cast<double>(d + 1)));
  }
  for (int d = 0; d < 8; ++d) {
    double dd = static_cast<double>(d);
    REQUIRE(neighborhood(net, 0.0, dd) > neighborhood(net, 500.0, dd));
    REQUIRE(neighborhood(net, 500.0, dd) > neighborhood(net, 999.0, dd));
  }
}

TEST_CASE("winner is the nearest neuron with low-index ties") {
  KohonenNet net;
  net.w = Matrix(3, 2);
  net.w(0, 0) = 0.0;
  net.w(0, 1) = 0.0;
  net.w(1, 0) = 1.0;
  net.w(1, 1) = 0.0;
  net.w(2, 0) = 1.0;
  net.w(2, 1) = 0.0;  // duplicate of neuron 1
  double x[2] = {0.9, 0.0};
  REQUIRE(find_winner(net, x) == 1);  // 2 is equally near but higher index
  double y[2] = {0.1, 0.0};
  REQUIRE(find_winner(net, y) == 0);
}

TEST_CASE("an update pulls the winner toward the sample") {
  KohonenNet net = init_kohonen(2, 4, 100, 6);
  Matrix data(1, 2);
  data(0, 0) = 0.95;
  data(0, 1) = 0.05;
  size_t before_win = find_winner(net, data.row(0));
  double before = sq_dist(net.w.row(before_win), data.row(0), 2);
  train_kohonen(net, data, 1, 7);
  double after = sq_dist(net.w.row(before_win), data.row(0), 2);
  REQUIRE(after < before);
}

TEST_CASE("training separates two tight blobs across output neurons") {
  Dataset ds = gen_blobs({{0.2, 0.2}, {0.8, 0.8}}, 40, 0.02, 8);
  KohonenNet net = init_kohonen(2, 2, 100 * ds.x.rows, 9);
  train_kohonen(net, ds.x, 100 * ds.x.rows, 10);
  std::vector<int> assign = assign_clusters(net, ds.x);
  // each blob lands on one neuron, different neurons
  for (size_t i = 1; i < 40; ++i) REQUIRE(assign[i] == assign[0]);
  for (size_t i = 41; i < 80; ++i) REQUIRE(assign[i] == assign[40]);
  REQUIRE(assign[0] != assign[40]);
}

TEST_CASE("training is deterministic per seed") {
  Dataset ds = gen_blobs({{0.3, 0.3}, {0.7, 0.7}}, 25, 0.05, 11);
  KohonenNet a = init_kohonen(2, 3, 2000, 12);
  KohonenNet b = init_kohonen(2, 3, 2000, 12);
  train_kohonen(a, ds.x, 2000, 13);
  train_kohonen(b, ds.x, 2000, 13);
  REQUIRE(a.w.a == b.w.a);
}

TEST_CASE("assignments never exceed the configured output count") {
  Dataset ds = gen_blobs({{0.5, 0.5}}, 30, 0.2, 14);
  KohonenNet net = init_kohonen(2, 5, 500, 15);
  train_kohonen(net, ds.x, 500, 16);
  for (int a : assign_clusters(net, ds.x)) {
    REQUIRE(a >= 0);
    REQUIRE(a < 5);
  }
}
