#include <catch2/catch_amalgamated.hpp>

#include <drbmclust/dataset.hpp>
#include <drbmclust/kmeans.hpp>
#include <drbmclust/metrics.hpp>

#include <cmath>

using namespace drbmclust;

TEST_CASE("two separated blobs are split perfectly") {
  Dataset ds = gen_blobs({{0.0, 0.0}, {10.0, 10.0}}, 50, 1.0, 1);
  KMeansResult r = kmeans(ds.x, 2, 2);
  REQUIRE(clustering_accuracy(r.assignments, ds.labels).eta == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(r.iterations_used >= 1);
}

TEST_CASE("inertia equals the summed squared distances of the final state") {
  Dataset ds = gen_blobs({{0.0, 0.0}, {5.0, 5.0}}, 30, 1.0, 3);
  KMeansResult r = kmeans(ds.x, 2, 4);
  double check = 0.0;
  for (size_t i = 0; i < ds.x.rows; ++i)
    check += sq_dist(ds.x.row(i), r.centroids.row(static_cast<size_t>(r.assignments[i])), 2);
  REQUIRE(r.inertia == Catch::Approx(check).margin(1e-9));
}

TEST_CASE("more iterations never increase inertia") {
  Dataset ds = gen_blobs({{0.0, 0.0}, {3.0, 0.0}, {0.0, 3.0}}, 40, 1.2, 5);
  double prev = -1.0;
  for (size_t cap = 1; cap <= 8; ++cap) {
    KMeansResult r = kmeans(ds.x, 3, 6, cap);
    if (prev >= 0.0) REQUIRE(r.inertia <= prev + 1e-9);
    prev = r.inertia;
  }
}

TEST_CASE("assignments are invariant under global translation") {
  Dataset ds = gen_blobs({{0.0, 0.0}, {6.0, 1.0}}, 35, 1.0, 7);
  KMeansResult a = kmeans(ds.x, 2, 8);
  Matrix shifted = ds.x;
  for (size_t i = 0; i < shifted.rows; ++i) {
    shifted(i, 0) += 100.0;
    shifted(i, 1) -= 42.0;
  }
  KMeansResult b = kmeans(shifted, 2, 8);
  REQUIRE(a.assignments == b.assignments);
}

TEST_CASE("k equal to n gives zero inertia") {
  Dataset ds = gen_blobs({{0.0, 0.0}}, 6, 1.0, 9);
  KMeansResult r = kmeans(ds.x, 6, 10);
  REQUIRE(r.inertia == Catch::Approx(0.0).margin(1e-18));
  std::vector<bool> used(6, false);
  for (int a : r.assignments) used[static_cast<size_t>(a)] = true;
  for (bool u : used) REQUIRE(u);
}

TEST_CASE("emptied clusters are reseeded so every cluster survives") {
  // one far outlier plus a tight mass: greedy assignment tends to empty a
  // cluster mid-run; the reseed must keep all k populated
  Matrix x(21, 2);
  Rng rng(11);
  for (size_t i = 0; i < 20; ++i) {
    x(i, 0) = rng.uniform(0.0, 0.1);
    x(i, 1) = rng.uniform(0.0, 0.1);
  }
  x(20, 0) = 50.0;
  x(20, 1) = 50.0;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    KMeansResult r = kmeans(x, 3, seed);
    std::vector<int> counts(3, 0);
    for (int a : r.assignments) counts[static_cast<size_t>(a)]++;
    for (int c : counts) REQUIRE(c > 0);
  }
}

TEST_CASE("k out of range is rejected") {
  Matrix x(4, 2, 0.5);
  REQUIRE_THROWS(kmeans(x, 0, 1));
  REQUIRE_THROWS(kmeans(x, 5, 1));
}

TEST_CASE("result is deterministic per seed") {
  Dataset ds = gen_blobs({{0.0, 0.0}, {4.0, 4.0}}, 25, 1.0, 13);
  KMeansResult a = kmeans(ds.x, 2, 14);
  KMeansResult b = kmeans(ds.x, 2, 14);
  REQUIRE(a.assignments == b.assignments);
  REQUIRE(a.centroids.a == b.centroids.a);
  REQUIRE(a.inertia == b.inertia);
}

TEST_CASE("k-means on scaled iris lands in the recorded accuracy band") {
  Dataset iris = load_csv(std::string(TEST_DATA_DIR) + "/iris.csv", true, 4);
  Matrix x = normalize_minmax(iris).first.x;
  KMeansResult best;
  bool have = false;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    KMeansResult r = kmeans(x, 3, derive_seed(seed, "t-km-iris"));
    if (!have || r.inertia < best.inertia) {
      best = r;
      have = true;
    }
  }
  double eta = clustering_accuracy(best.assignments, iris.labels, MappingMethod::majority).eta;
  REQUIRE(eta == Catch::Approx(0.886).margin(0.03));
}
