// Independent reference implementations used only by the tests. Everything
// here is written as literally as possible (nested sums over clusters, pair
// counting, permutation enumeration) so it cannot share a bug with the
// library's optimized kernels.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "shiftcut/costs.hpp"
#include "shiftcut/matrix.hpp"

namespace oracle {

using shiftcut::Rng;
using shiftcut::SimilarityMatrix;
using shiftcut::SquareMatrix;

inline std::vector<std::vector<int>> members_by_cluster(
    const std::vector<int>& labels, int k) {
  std::vector<std::vector<int>> out(k);
  for (int i = 0; i < static_cast<int>(labels.size()); ++i)
    out[labels[i]].push_back(i);
  return out;
}

// sum over ordered pairs in different clusters
inline double min_cut(const SimilarityMatrix& x, const std::vector<int>& labels,
                      int k) {
  auto members = members_by_cluster(labels, k);
  double total = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      if (a == b) continue;
      for (int i : members[a])
        for (int j : members[b]) total += x(i, j);
    }
  return total;
}

// negated sum over ordered within-cluster pairs, diagonal included
inline double shifted_min_cut(const SimilarityMatrix& s,
                              const std::vector<int>& labels, int k) {
  auto members = members_by_cluster(labels, k);
  double total = 0.0;
  for (int a = 0; a < k; ++a)
    for (int i : members[a])
      for (int j : members[a]) total += s(i, j);
  return -total;
}

inline double correlation_clustering(const SimilarityMatrix& s,
                                     const std::vector<int>& labels, int k) {
  auto members = members_by_cluster(labels, k);
  double within = 0.0, across = 0.0;
  for (int a = 0; a < k; ++a) {
    for (int i : members[a])
      for (int j : members[a]) within += std::fabs(s(i, j)) - s(i, j);
    for (int b = 0; b < k; ++b) {
      if (a == b) continue;
      for (int i : members[a])
        for (int j : members[b]) across += std::fabs(s(i, j)) + s(i, j);
    }
  }
  return 0.5 * within + 0.5 * across;
}

inline double ratio_assoc(const SimilarityMatrix& x, const std::vector<int>& labels,
                          int k) {
  auto members = members_by_cluster(labels, k);
  double total = 0.0;
  for (int a = 0; a < k; ++a) {
    double within = 0.0;
    for (int i : members[a])
      for (int j : members[a]) within += x(i, j);
    total += within / static_cast<double>(members[a].size());
  }
  return -total;
}

inline double ratio_cut(const SimilarityMatrix& x, const std::vector<int>& labels,
                        int k) {
  auto members = members_by_cluster(labels, k);
  double total = 0.0;
  for (int a = 0; a < k; ++a) {
    double cut = 0.0;
    for (int i : members[a])
      for (int j = 0; j < x.size(); ++j)
        if (labels[j] != a) cut += x(i, j);
    total += cut / static_cast<double>(members[a].size());
  }
  return total;
}

inline double normalized_cut(const SimilarityMatrix& x,
                             const std::vector<int>& labels, int k) {
  auto members = members_by_cluster(labels, k);
  double total = 0.0;
  for (int a = 0; a < k; ++a) {
    double cut = 0.0, degree = 0.0;
    for (int i : members[a])
      for (int j = 0; j < x.size(); ++j) {
        degree += x(i, j);
        if (labels[j] != a) cut += x(i, j);
      }
    total += cut / degree;
  }
  return total;
}

inline double adaptive_ratio_cut(const SimilarityMatrix& x,
                                 const std::vector<int>& labels, int k, double p) {
  auto members = members_by_cluster(labels, k);
  double total = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      double w = 0.0;
      for (int i : members[a])
        for (int j : members[b]) w += x(i, j);
      double sa = static_cast<double>(members[a].size());
      double sb = static_cast<double>(members[b].size());
      double weight = std::pow(1.0 / std::pow(sa, 1.0 / (p - 1.0)) +
                                   1.0 / std::pow(sb, 1.0 / (p - 1.0)),
                               p - 1.0);
      total += w * weight;
    }
  return total;
}

// cost change from reassigning one object, by evaluating both full costs
inline double move_delta_full(const SimilarityMatrix& s,
                              const std::vector<int>& labels, int k, int object,
                              int target) {
  std::vector<int> after = labels;
  after[object] = target;
  return shifted_min_cut(s, after, k) - shifted_min_cut(s, labels, k);
}

// --- pair counting view of the adjusted Rand index ---------------------

inline double pair_counting_ari(const std::vector<int>& truth,
                                const std::vector<int>& pred) {
  long long n11 = 0, n00 = 0, n10 = 0, n01 = 0;
  int n = static_cast<int>(truth.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      bool same_t = truth[i] == truth[j];
      bool same_p = pred[i] == pred[j];
      if (same_t && same_p) ++n11;
      else if (!same_t && !same_p) ++n00;
      else if (same_t) ++n10;
      else ++n01;
    }
  double a = static_cast<double>(n11), d = static_cast<double>(n00);
  double b = static_cast<double>(n10), c = static_cast<double>(n01);
  double denom = (a + b) * (b + d) + (a + c) * (c + d);
  if (denom == 0.0) {
    // no pair disagrees in any direction: both partitions are all-singletons
    // or all-together in the same way
    return 1.0;
  }
  return 2.0 * (a * d - b * c) / denom;
}

// --- entropy / mutual information from scratch --------------------------

inline double entropy_of(const std::vector<int>& labels) {
  std::map<int, int> counts;
  for (int l : labels) ++counts[l];
  double n = static_cast<double>(labels.size());
  double h = 0.0;
  for (auto& [label, cnt] : counts) {
    double p = cnt / n;
    h -= p * std::log(p);
  }
  return h;
}

inline double mutual_information_of(const std::vector<int>& a,
                                    const std::vector<int>& b) {
  std::map<std::pair<int, int>, int> joint;
  std::map<int, int> ca, cb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++joint[{a[i], b[i]}];
    ++ca[a[i]];
    ++cb[b[i]];
  }
  double n = static_cast<double>(a.size());
  double mi = 0.0;
  for (auto& [cell, cnt] : joint) {
    double pij = cnt / n;
    double pi = ca[cell.first] / n;
    double pj = cb[cell.second] / n;
    mi += pij * std::log(pij / (pi * pj));
  }
  return mi;
}

// Exact expected mutual information under the permutation null, by averaging
// over every permutation of the second labeling. Factorial cost, so n <= 8.
inline double permutation_expected_mi(const std::vector<int>& a,
                                      std::vector<int> b) {
  std::sort(b.begin(), b.end());
  double total = 0.0;
  long count = 0;
  std::vector<int> perm = b;
  do {
    total += mutual_information_of(a, perm);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  // next_permutation over the multiset visits each distinct arrangement once,
  // which matches the uniform distribution over distinguishable pairings
  return total / count;
}

// --- seeded instances ----------------------------------------------------

inline SimilarityMatrix random_similarity(int n, Rng& rng, double lo = -1.0,
                                          double hi = 1.0) {
  SquareMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = rng.uniform(lo, hi);
      m(i, j) = v;
      m(j, i) = v;
    }
  return SimilarityMatrix(std::move(m));
}

inline shiftcut::FeatureMatrix random_features(int n, int dims, Rng& rng,
                                               double lo = 0.0, double hi = 10.0) {
  shiftcut::FeatureMatrix f(n, dims);
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < dims; ++d) f(i, d) = rng.uniform(lo, hi);
  return f;
}

// labels with every cluster guaranteed nonempty
inline std::vector<int> random_labels(int n, int k, Rng& rng) {
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = static_cast<int>(rng.below(k));
  for (int c = 0; c < k; ++c) labels[c] = c;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) out[i] = labels[order[i]];
  return out;
}

}  // namespace oracle
