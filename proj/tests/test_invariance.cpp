#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "shiftcut/invariance.hpp"

using namespace shiftcut;

namespace {

bool same_merges(const Dendrogram& a, const Dendrogram& b) {
  if (a.merges.size() != b.merges.size()) return false;
  for (std::size_t t = 0; t < a.merges.size(); ++t)
    if (a.merges[t].a != b.merges[t].a || a.merges[t].b != b.merges[t].b)
      return false;
  return true;
}

}  // namespace

TEST_SUITE("invariance") {

TEST_CASE("linkage on three collinear points") {
  // squared gaps between {0, 1, 10}: 1, 81, 100
  DistanceMatrix d = DistanceMatrix::from_rows(
      {{0, 1, 100}, {1, 0, 81}, {100, 81, 0}});

  Dendrogram single = linkage_cluster(d, LinkageCriterion::Single);
  REQUIRE(single.merges.size() == 2);
  CHECK(single.merges[0].a == 0);
  CHECK(single.merges[0].b == 1);
  CHECK(single.merges[0].height == 1.0);
  CHECK(single.merges[1].a == 3);  // the {0,1} cluster created first
  CHECK(single.merges[1].b == 2);
  CHECK(single.merges[1].height == 81.0);

  Dendrogram complete = linkage_cluster(d, LinkageCriterion::Complete);
  CHECK(complete.merges[1].height == 100.0);

  Dendrogram average = linkage_cluster(d, LinkageCriterion::Average);
  CHECK(average.merges[1].height == doctest::Approx(90.5));
}

TEST_CASE("exact ties merge the smallest representative pair first") {
  SquareMatrix m(4, 5.0);
  for (int i = 0; i < 4; ++i) m(i, i) = 0.0;
  m(0, 1) = m(1, 0) = 1.0;
  m(2, 3) = m(3, 2) = 1.0;
  Dendrogram dend = linkage_cluster(m, LinkageCriterion::Single);
  CHECK(dend.merges[0].a == 0);
  CHECK(dend.merges[0].b == 1);
  CHECK(dend.merges[1].a == 2);
  CHECK(dend.merges[1].b == 3);
  CHECK(dend.merges[2].a == 4);
  CHECK(dend.merges[2].b == 5);
  CHECK(dend.merges[2].height == 5.0);
}

TEST_CASE("near ties keep their strict order under shifts") {
  SquareMatrix m(4, 7.0);
  for (int i = 0; i < 4; ++i) m(i, i) = 0.0;
  m(2, 3) = m(3, 2) = 1.0;
  m(0, 1) = m(1, 0) = 1.0 + 1e-6;
  for (double alpha : {-0.5, 0.25, 10.0}) {
    SquareMatrix shifted(4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) shifted(i, j) = m(i, j) + alpha;
    Dendrogram a = linkage_cluster(m, LinkageCriterion::Single);
    Dendrogram b = linkage_cluster(shifted, LinkageCriterion::Single);
    CHECK(a.merges[0].a == 2);  // the strictly smaller pair goes first
    CHECK(same_merges(a, b));
  }
}

TEST_CASE("linkage heights never decrease") {
  Rng rng(19);
  for (auto crit : {LinkageCriterion::Single, LinkageCriterion::Complete,
                    LinkageCriterion::Average}) {
    FeatureMatrix f = oracle::random_features(12, 2, rng);
    Dendrogram dend = linkage_cluster(squared_euclidean_distances(f), crit);
    for (std::size_t t = 1; t < dend.merges.size(); ++t)
      CHECK(dend.merges[t].height >= dend.merges[t - 1].height);
  }
}

TEST_CASE("additive shifts never change the merge sequence") {
  Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    FeatureMatrix f = oracle::random_features(10, 3, rng);
    DistanceMatrix d = squared_euclidean_distances(f);
    for (auto crit : {LinkageCriterion::Single, LinkageCriterion::Complete,
                      LinkageCriterion::Average}) {
      for (double alpha : {-2.0, 0.5, 10.0}) {
        LinkageShiftVerdict v = check_linkage_shift_invariance(d, alpha, crit);
        CHECK(v.sequence_identical);
        CHECK(v.max_height_residual <= 1e-10);
      }
    }
  }
}

TEST_CASE("linkage input validation") {
  CHECK_THROWS_AS(linkage_cluster(SquareMatrix(1, 0.0), LinkageCriterion::Single),
                  ValidationError);
  SquareMatrix bad(3, 1.0);
  bad(0, 1) = 2.0;  // asymmetric beyond tolerance
  CHECK_THROWS_AS(linkage_cluster(bad, LinkageCriterion::Single), ValidationError);
}

TEST_CASE("k-means with one cluster returns the mean") {
  FeatureMatrix f = FeatureMatrix::from_rows({{0, 0}, {2, 0}, {4, 6}});
  KMeansResult r = kmeans(f, 1, 42);
  CHECK(r.converged);
  CHECK(r.centroids(0, 0) == doctest::Approx(2.0));
  CHECK(r.centroids(0, 1) == doctest::Approx(2.0));
  CHECK(r.inertia == doctest::Approx(8.0 + 4.0 + 20.0));
}

TEST_CASE("k-means survives coincident seed points by re-seeding empties") {
  FeatureMatrix f = FeatureMatrix::from_rows({{0.0}, {0.0}, {0.0}, {10.0}});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    KMeansResult r = kmeans(f, 2, seed);
    CHECK(r.converged);
    std::vector<int> sizes(2, 0);
    for (int l : r.labels) ++sizes[l];
    CHECK(sizes[0] >= 1);
    CHECK(sizes[1] >= 1);
    CHECK(r.inertia == doctest::Approx(0.0));  // the only optimum splits off {10}
  }
}

TEST_CASE("k-means separates clear blobs") {
  Rng rng(31);
  FeatureMatrix f(20, 2);
  for (int i = 0; i < 10; ++i) {
    f(i, 0) = rng.normal() * 0.2;
    f(i, 1) = rng.normal() * 0.2;
    f(10 + i, 0) = 8.0 + rng.normal() * 0.2;
    f(10 + i, 1) = rng.normal() * 0.2;
  }
  KMeansResult r = kmeans(f, 2, 123);
  for (int i = 1; i < 10; ++i) CHECK(r.labels[i] == r.labels[0]);
  for (int i = 11; i < 20; ++i) CHECK(r.labels[i] == r.labels[10]);
  CHECK(r.labels[0] != r.labels[10]);
}

TEST_CASE("feature translation leaves k-means, centroid and Ward unchanged") {
  Rng rng(37);
  for (int trial = 0; trial < 8; ++trial) {
    FeatureMatrix f = oracle::random_features(14, 3, rng, -5.0, 5.0);
    std::vector<double> shift = {rng.uniform(-20, 20), rng.uniform(-20, 20),
                                 rng.uniform(-20, 20)};
    for (auto method :
         {FeatureMethod::KMeans, FeatureMethod::Centroid, FeatureMethod::Ward}) {
      FeatureShiftVerdict v =
          check_feature_shift_invariance(f, shift, method, 3, 77 + trial);
      CHECK(v.identical);
      CHECK(v.max_height_residual <= 1e-8);
    }
  }
}

TEST_CASE("Ward weights the centroid gap by the harmonic cluster mass") {
  // two pairs: {0,1} tight, {2,3} tight, pairs far apart
  FeatureMatrix f = FeatureMatrix::from_rows({{0.0}, {1.0}, {10.0}, {11.0}});
  Dendrogram w = feature_linkage(f, FeatureMethod::Ward);
  REQUIRE(w.merges.size() == 3);
  CHECK(w.merges[0].height == doctest::Approx(0.5));  // 1*1/2 * 1^2
  CHECK(w.merges[1].height == doctest::Approx(0.5));
  // final merge: sizes 2 and 2, centroids 0.5 and 10.5: 4/4 * 100
  CHECK(w.merges[2].height == doctest::Approx(100.0));

  Dendrogram c = feature_linkage(f, FeatureMethod::Centroid);
  CHECK(c.merges[2].height == doctest::Approx(100.0));
  CHECK(c.merges[0].height == doctest::Approx(1.0));

  CHECK_THROWS_AS(feature_linkage(f, FeatureMethod::KMeans), ValidationError);
}

TEST_CASE("characteristic vectors validate the simplex") {
  CHECK_THROWS_AS(CharacteristicVector({0.5, 0.6}), ValidationError);
  CHECK_THROWS_AS(CharacteristicVector({1.5, -0.5}), ValidationError);
  CHECK_THROWS_AS(CharacteristicVector(std::vector<double>{}), ValidationError);
  CharacteristicVector u = CharacteristicVector::uniform(4);
  CHECK(u[0] == 0.25);
}

TEST_CASE("quadratic objective gains exactly alpha on the simplex") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 3 + static_cast<int>(rng.below(10));
    SimilarityMatrix x = oracle::random_similarity(n, rng, -1.0, 3.0);
    std::vector<double> w(n);
    double total = 0.0;
    for (double& wi : w) total += (wi = rng.uniform(0.05, 1.0));
    for (double& wi : w) wi /= total;
    CharacteristicVector v(std::move(w));
    for (double alpha : {-2.5, 0.1, 40.0}) {
      QuadraticPair q = quadratic_objective(x, v, alpha);
      double scale = std::max(1.0, std::fabs(q.unshifted) + std::fabs(alpha));
      CHECK(std::fabs(q.shifted - (q.unshifted + alpha)) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("replicator step: fixed point, block preference, monotone objective") {
  // complete graph: the uniform vector reproduces itself
  SimilarityMatrix ones = SimilarityMatrix::from_rows(
      {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  CharacteristicVector u3 = CharacteristicVector::uniform(3);
  CharacteristicVector fixed = replicator_step(ones, u3);
  for (int i = 0; i < 3; ++i) CHECK(fixed[i] == doctest::Approx(1.0 / 3).epsilon(1e-14));

  // two blocks of different strength: mass flows to the denser one
  SimilarityMatrix blocks = SimilarityMatrix::from_rows(
      {{0, 3, 0, 0}, {3, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}});
  CharacteristicVector stepped = replicator_step(blocks, CharacteristicVector::uniform(4));
  CHECK(stepped[0] == doctest::Approx(0.375));
  CHECK(stepped[1] == doctest::Approx(0.375));
  CHECK(stepped[2] == doctest::Approx(0.125));
  CHECK(stepped[3] == doctest::Approx(0.125));

  Rng rng(47);
  SimilarityMatrix x = oracle::random_similarity(8, rng, 0.0, 2.0);
  CharacteristicVector v = CharacteristicVector::uniform(8);
  double prev = quadratic_objective(x, v, 0.0).unshifted;
  for (int step = 0; step < 25; ++step) {
    v = replicator_step(x, v);
    double now = quadratic_objective(x, v, 0.0).unshifted;
    CHECK(now >= prev - 1e-12 * std::max(1.0, std::fabs(prev)));
    prev = now;
  }
}

TEST_CASE("replicator step rejects bad states") {
  SimilarityMatrix zero(SquareMatrix(3, 0.0));
  CHECK_THROWS_AS(replicator_step(zero, CharacteristicVector::uniform(3)),
                  ValidationError);
  SimilarityMatrix neg = SimilarityMatrix::from_rows({{0, -1}, {-1, 0}});
  CHECK_THROWS_AS(replicator_step(neg, CharacteristicVector::uniform(2)),
                  ValidationError);
  SimilarityMatrix ok = SimilarityMatrix::from_rows({{0, 1}, {1, 0}});
  CHECK_THROWS_AS(replicator_step(ok, CharacteristicVector::uniform(3)),
                  ValidationError);
}

TEST_CASE("measured ratio cost changes land on the analytic constants") {
  Rng rng(53);
  for (int trial = 0; trial < 15; ++trial) {
    int n = 5 + static_cast<int>(rng.below(8));
    int k = 2 + static_cast<int>(rng.below(3));
    if (k > n) k = n;
    SimilarityMatrix x = oracle::random_similarity(n, rng, 0.0, 5.0);
    ClusteringSolution c(oracle::random_labels(n, k, rng), k);
    double alpha = rng.uniform(-3.0, 3.0);
    ShiftResiduals r = analytic_shift_constants(x, c, alpha);
    double scale = n * std::max(1.0, x.max_abs());
    CHECK(std::fabs(r.ratio_assoc) <= 1e-9 * scale);
    CHECK(std::fabs(r.ratio_cut) <= 1e-9 * scale);
  }
}

TEST_CASE("normalized cut can flip its preference under a shift") {
  // Frozen witness: splitting off node 0 beats splitting off node 1, but after
  // adding 1 to every entry the order reverses, so no shift constant exists.
  SimilarityMatrix x = SimilarityMatrix::from_rows({{1.17, 0.36, 0.08, 0.09},
                                                    {0.36, 2.97, 0.23, 0.50},
                                                    {0.08, 0.23, 0.67, 0.37},
                                                    {0.09, 0.50, 0.37, 2.67}});
  ClusteringSolution first({1, 0, 0, 0}, 2);
  ClusteringSolution second({0, 1, 0, 0}, 2);
  double alpha = -1.0;  // moves every similarity up by 1

  double base_gap = normalized_cut_cost(x, first) - normalized_cut_cost(x, second);
  SimilarityMatrix s = constant_shift(x, alpha);
  double shifted_gap =
      normalized_cut_cost(s, first) - normalized_cut_cost(s, second);
  CHECK(base_gap < -0.05);
  CHECK(shifted_gap > 0.05);
}

}  // TEST_SUITE
