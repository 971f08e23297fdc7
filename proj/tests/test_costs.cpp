#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "shiftcut/costs.hpp"
#include "shiftcut/optimizer.hpp"

using namespace shiftcut;

namespace {

ClusteringSolution sol(std::vector<int> labels, int k) {
  return ClusteringSolution(std::move(labels), k);
}

}  // namespace

TEST_SUITE("costs") {

TEST_CASE("solution validation") {
  CHECK_THROWS_AS(sol({0, 2}, 2), ValidationError);
  CHECK_THROWS_AS(sol({0, -1}, 2), ValidationError);
  CHECK_THROWS_AS(sol({0}, 0), ValidationError);
  ClusteringSolution c = sol({0, 1, 0}, 3);
  CHECK(c.cluster_sizes() == std::vector<int>{2, 1, 0});
  CHECK(c.same_cluster(0, 2));
  CHECK_FALSE(c.same_cluster(0, 1));
}

TEST_CASE("costs reject mismatched sizes") {
  SimilarityMatrix x = SimilarityMatrix::from_rows({{1, 0}, {0, 1}});
  ClusteringSolution c = sol({0, 1, 0}, 2);
  CHECK_THROWS_AS(min_cut_cost(x, c), ValidationError);
  CHECK_THROWS_AS(shifted_min_cut_cost(x, c), ValidationError);
}

TEST_CASE("two-object worked example") {
  SimilarityMatrix s = SimilarityMatrix::from_rows({{0, -2}, {-2, 0}});
  ClusteringSolution together = sol({0, 0}, 1);
  ClusteringSolution apart = sol({0, 1}, 2);

  CHECK(shifted_min_cut_cost(s, together) == 4.0);  // -(0 - 2 - 2 + 0)
  CHECK(shifted_min_cut_cost(s, apart) == 0.0);
  CHECK(min_cut_cost(s, together) == 0.0);
  CHECK(min_cut_cost(s, apart) == -4.0);
  CHECK(correlation_clustering_cost(s, together) == 4.0);
  CHECK(correlation_clustering_cost(s, apart) == 0.0);
}

TEST_CASE("every cost matches its literal nested-sum form") {
  Rng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 3 + static_cast<int>(rng.below(8));
    int k = 2 + static_cast<int>(rng.below(3));
    if (k > n) k = n;
    SimilarityMatrix x = oracle::random_similarity(n, rng, -1.0, 2.0);
    std::vector<int> labels = oracle::random_labels(n, k, rng);
    ClusteringSolution c = sol(labels, k);

    CHECK(min_cut_cost(x, c) ==
          doctest::Approx(oracle::min_cut(x, labels, k)).epsilon(1e-12));
    CHECK(shifted_min_cut_cost(x, c) ==
          doctest::Approx(oracle::shifted_min_cut(x, labels, k)).epsilon(1e-12));
    CHECK(correlation_clustering_cost(x, c) ==
          doctest::Approx(oracle::correlation_clustering(x, labels, k)).epsilon(1e-12));
    CHECK(ratio_assoc_cost(x, c) ==
          doctest::Approx(oracle::ratio_assoc(x, labels, k)).epsilon(1e-12));
    CHECK(ratio_cut_cost(x, c) ==
          doctest::Approx(oracle::ratio_cut(x, labels, k)).epsilon(1e-12));
    CHECK(adaptive_ratio_cut_cost(x, c, 3.0) ==
          doctest::Approx(oracle::adaptive_ratio_cut(x, labels, k, 3.0)).epsilon(1e-12));
  }
}

TEST_CASE("within-cluster mass plus cut mass is the matrix total") {
  Rng rng(55);
  SimilarityMatrix x = oracle::random_similarity(10, rng, -1.0, 3.0);
  std::vector<int> labels = oracle::random_labels(10, 3, rng);
  ClusteringSolution c = sol(labels, 3);
  double within = -shifted_min_cut_cost(x, c);
  CHECK(within + min_cut_cost(x, c) ==
        doctest::Approx(total_similarity(x)).epsilon(1e-12));
}

TEST_CASE("correlation clustering is nonnegative and tracks min cut differences") {
  Rng rng(77);
  SimilarityMatrix s = oracle::random_similarity(7, rng, -2.0, 2.0);
  std::vector<std::vector<int>> partitions;
  enumerate_partitions(7, 3, false,
                       [&](const std::vector<int>& p) { partitions.push_back(p); });

  std::vector<double> cc, mc;
  for (const auto& p : partitions) {
    ClusteringSolution c = sol(p, 3);
    cc.push_back(correlation_clustering_cost(s, c));
    mc.push_back(min_cut_cost(s, c));
    CHECK(cc.back() >= 0.0);
  }
  double scale = 49.0 * s.max_abs();
  for (std::size_t a = 0; a < partitions.size(); a += 37)
    for (std::size_t b = 0; b < partitions.size(); b += 41)
      CHECK(std::fabs((cc[a] - cc[b]) - (mc[a] - mc[b])) <= 1e-9 * scale);
}

TEST_CASE("ratio association on the identity matrix") {
  SimilarityMatrix x = SimilarityMatrix::from_rows(
      {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  CHECK(ratio_assoc_cost(x, sol({0, 0, 1, 1}, 2)) == -2.0);
}

TEST_CASE("ratio objectives shift by their analytic constants") {
  Rng rng(31);
  int n = 9, k = 3;
  SimilarityMatrix x = oracle::random_similarity(n, rng, 0.0, 4.0);
  std::vector<int> labels = oracle::random_labels(n, k, rng);
  ClusteringSolution c = sol(labels, k);
  for (double alpha : {-1.5, 0.25, 7.0}) {
    SimilarityMatrix s = constant_shift(x, alpha);
    double scale = n * x.max_abs() * std::max(1.0, std::fabs(alpha));
    CHECK(std::fabs(ratio_assoc_cost(s, c) - (ratio_assoc_cost(x, c) + alpha * n)) <=
          1e-9 * scale);
    CHECK(std::fabs(ratio_cut_cost(s, c) -
                    (ratio_cut_cost(x, c) - alpha * n * (k - 1))) <= 1e-9 * scale);
  }
}

TEST_CASE("normalized cut is not shift invariant but behaves on blocks") {
  // two clean blocks: cutting between them costs nothing
  SimilarityMatrix x = SimilarityMatrix::from_rows(
      {{1, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 1}, {0, 0, 1, 1}});
  CHECK(normalized_cut_cost(x, sol({0, 0, 1, 1}, 2)) == 0.0);
  CHECK(normalized_cut_cost(x, sol({0, 1, 0, 1}, 2)) == doctest::Approx(1.0));

  SimilarityMatrix zero = SimilarityMatrix::from_rows({{0, 0}, {0, 0}});
  CHECK_THROWS_AS(normalized_cut_cost(zero, sol({0, 1}, 2)), ValidationError);
}

TEST_CASE("empty clusters are rejected by ratio-style costs only") {
  SimilarityMatrix x = SimilarityMatrix::from_rows({{1, 0}, {0, 1}});
  ClusteringSolution with_empty = sol({0, 0}, 2);
  CHECK_THROWS_AS(ratio_assoc_cost(x, with_empty), ValidationError);
  CHECK_THROWS_AS(ratio_cut_cost(x, with_empty), ValidationError);
  CHECK_THROWS_AS(normalized_cut_cost(x, with_empty), ValidationError);
  CHECK_THROWS_AS(adaptive_ratio_cut_cost(x, with_empty, 2.0), ValidationError);
  CHECK_NOTHROW(min_cut_cost(x, with_empty));
  CHECK_NOTHROW(shifted_min_cut_cost(x, with_empty));
  CHECK_NOTHROW(correlation_clustering_cost(x, with_empty));
}

TEST_CASE("generalized ratio cut: p validation, p=2 equality, p=3 value") {
  SimilarityMatrix ones_offdiag = SimilarityMatrix::from_rows(
      {{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}});
  ClusteringSolution c = sol({0, 0, 1, 1}, 2);
  CHECK_THROWS_AS(adaptive_ratio_cut_cost(ones_offdiag, c, 1.0), ValidationError);
  CHECK_THROWS_AS(adaptive_ratio_cut_cost(ones_offdiag, c, 0.5), ValidationError);

  // between-mass 4, both sizes 2: (2^{-1/2} + 2^{-1/2})^2 = 2, so cost 8
  CHECK(adaptive_ratio_cut_cost(ones_offdiag, c, 3.0) == doctest::Approx(8.0));

  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 4 + static_cast<int>(rng.below(6));
    int k = 2 + static_cast<int>(rng.below(3));
    if (k > n) k = n;
    SimilarityMatrix x = oracle::random_similarity(n, rng, -1.0, 2.0);
    std::vector<int> labels = oracle::random_labels(n, k, rng);
    ClusteringSolution cc = sol(labels, k);
    CHECK(adaptive_ratio_cut_cost(x, cc, 2.0) ==
          doctest::Approx(ratio_cut_cost(x, cc)).epsilon(1e-12));
  }
}

TEST_CASE("regularizer decomposition ties the three objectives together") {
  Rng rng(63);
  int n = 8;
  SimilarityMatrix x = oracle::random_similarity(n, rng, 0.0, 3.0);
  std::vector<int> labels = oracle::random_labels(n, 3, rng);
  ClusteringSolution c = sol(labels, 3);

  for (double alpha : {-0.5, 0.0, 1.25}) {
    RegularizerDecomposition dec = regularizer_decomposition(x, c, alpha);
    CHECK(dec.total == doctest::Approx(dec.min_cut + dec.balance).epsilon(1e-13));

    double sum_sq = 0.0;
    for (int size : c.cluster_sizes()) sum_sq += double(size) * size;
    CHECK(dec.balance == doctest::Approx(alpha * sum_sq));

    // minimizing the regularized cut is the same problem as the shifted
    // objective: they differ by the constant total mass of the matrix
    double shifted = shifted_min_cut_cost(constant_shift(x, alpha), c);
    CHECK(dec.total == doctest::Approx(shifted + total_similarity(x)).epsilon(1e-12));
  }
}

TEST_CASE("adaptive regularizer: entrywise and closed form agree") {
  Rng rng(87);
  for (int n : {3, 6, 11}) {
    SimilarityMatrix x = oracle::random_similarity(n, rng, -1.0, 5.0);
    std::vector<int> labels = oracle::random_labels(n, 2, rng);
    AdaptiveRegularizerValue v = adaptive_regularizer_value(x, sol(labels, 2));
    CHECK(v.from_entries == doctest::Approx(v.closed_form).epsilon(1e-9));
  }
}

TEST_CASE("adaptive regularizer on a constant matrix") {
  // every centering coefficient is c, so the value is c * sum of squared sizes
  SimilarityMatrix x = SimilarityMatrix::from_rows(
      {{2, 2, 2, 2}, {2, 2, 2, 2}, {2, 2, 2, 2}, {2, 2, 2, 2}});
  AdaptiveRegularizerValue v = adaptive_regularizer_value(x, sol({0, 0, 1, 1}, 2));
  CHECK(v.from_entries == doctest::Approx(16.0));
  CHECK(v.closed_form == doctest::Approx(16.0));
}

TEST_CASE("cost evaluation is bitwise repeatable") {
  Rng rng(5);
  SimilarityMatrix x = oracle::random_similarity(12, rng);
  std::vector<int> labels = oracle::random_labels(12, 3, rng);
  ClusteringSolution c = sol(labels, 3);
  CHECK(min_cut_cost(x, c) == min_cut_cost(x, c));
  CHECK(shifted_min_cut_cost(x, c) == shifted_min_cut_cost(x, c));
  CHECK(correlation_clustering_cost(x, c) == correlation_clustering_cost(x, c));
}

}  // TEST_SUITE
