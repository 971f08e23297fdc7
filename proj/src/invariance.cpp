#include "shiftcut/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace shiftcut {

namespace {

struct ActiveCluster {
  int id;    // dendrogram id (leaf index or n + merge step)
  int rep;   // smallest leaf index inside, drives tie-breaking
  int size;
};

// Shared agglomeration loop. `update` computes the dissimilarity between the
// merged cluster and a bystander from the two old values and the sizes.
template <typename Update>
Dendrogram agglomerate(int n, std::vector<std::vector<double>> dist, Update update) {
  std::vector<ActiveCluster> clusters(n);
  for (int i = 0; i < n; ++i) clusters[i] = {i, i, 1};

  Dendrogram out;
  out.leaves = n;
  for (int step = 0; step < n - 1; ++step) {
    int m = static_cast<int>(clusters.size());
    int best_i = 0, best_j = 1;
    double best = dist[0][1];
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (dist[i][j] < best) {  // scan order makes ties fall to the
          best = dist[i][j];      // smallest representative pair
          best_i = i;
          best_j = j;
        }

    out.merges.push_back({clusters[best_i].id, clusters[best_j].id, best});
    for (int t = 0; t < m; ++t) {
      if (t == best_i || t == best_j) continue;
      double merged = update(dist[best_i][t], dist[best_j][t],
                             clusters[best_i].size, clusters[best_j].size);
      dist[best_i][t] = merged;
      dist[t][best_i] = merged;
    }
    clusters[best_i].id = n + step;
    clusters[best_i].size += clusters[best_j].size;
    // representative stays clusters[best_i].rep, the smaller of the two
    clusters.erase(clusters.begin() + best_j);
    for (auto& row : dist) row.erase(row.begin() + best_j);
    dist.erase(dist.begin() + best_j);
  }
  return out;
}

std::vector<std::vector<double>> to_nested(const SquareMatrix& m) {
  int n = m.size();
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i][j] = m(i, j);
  return out;
}

Dendrogram linkage_on(const SquareMatrix& d, LinkageCriterion criterion) {
  int n = d.size();
  if (n < 2) throw ValidationError("linkage needs at least 2 objects");
  auto dist = to_nested(d);
  switch (criterion) {
    case LinkageCriterion::Single:
      return agglomerate(n, std::move(dist),
                         [](double a, double b, int, int) { return std::min(a, b); });
    case LinkageCriterion::Complete:
      return agglomerate(n, std::move(dist),
                         [](double a, double b, int, int) { return std::max(a, b); });
    case LinkageCriterion::Average:
      return agglomerate(n, std::move(dist), [](double a, double b, int sa, int sb) {
        return (sa * a + sb * b) / (sa + sb);
      });
  }
  throw ValidationError("unknown linkage criterion");
}

}  // namespace

Dendrogram linkage_cluster(const DistanceMatrix& d, LinkageCriterion criterion) {
  return linkage_on(d.values(), criterion);
}

Dendrogram linkage_cluster(const SquareMatrix& d, LinkageCriterion criterion) {
  int n = d.size();
  double tol = kSymmetryTol * d.max_abs();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!std::isfinite(d(i, j)))
        throw ValidationError("linkage: non-finite dissimilarity");
      if (std::fabs(d(i, j) - d(j, i)) > tol)
        throw ValidationError("linkage: asymmetric dissimilarities");
    }
  return linkage_on(d, criterion);
}

LinkageShiftVerdict check_linkage_shift_invariance(const DistanceMatrix& d,
                                                   double alpha,
                                                   LinkageCriterion criterion) {
  int n = d.size();
  SquareMatrix shifted(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) shifted(i, j) = d(i, j) + alpha;

  Dendrogram base = linkage_cluster(d, criterion);
  Dendrogram moved = linkage_cluster(shifted, criterion);

  LinkageShiftVerdict v;
  v.sequence_identical = base.merges.size() == moved.merges.size();
  for (std::size_t t = 0; v.sequence_identical && t < base.merges.size(); ++t)
    v.sequence_identical = base.merges[t].a == moved.merges[t].a &&
                           base.merges[t].b == moved.merges[t].b;
  for (std::size_t t = 0; t < base.merges.size() && t < moved.merges.size(); ++t)
    v.max_height_residual =
        std::max(v.max_height_residual,
                 std::fabs(moved.merges[t].height - (base.merges[t].height + alpha)));
  return v;
}

KMeansResult kmeans(const FeatureMatrix& features, int k, std::uint64_t seed,
                    int max_iterations) {
  int n = features.rows;
  int m = features.cols;
  if (n < 1 || m < 1) throw ValidationError("empty feature matrix");
  if (k < 1 || k > n)
    throw ValidationError("cluster count must be in [1, " + std::to_string(n) + "]");
  for (double v : features.values)
    if (!std::isfinite(v)) throw ValidationError("features: non-finite value");

  // Seed centroids at k distinct points (partial Fisher-Yates).
  Rng rng(seed);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(rng.below(static_cast<std::uint32_t>(n - i)));
    std::swap(idx[i], idx[j]);
  }
  FeatureMatrix centroids(k, m);
  for (int c = 0; c < k; ++c)
    for (int f = 0; f < m; ++f) centroids(c, f) = features(idx[c], f);

  auto sqdist = [&](int i, int c) {
    double s = 0.0;
    for (int f = 0; f < m; ++f) {
      double diff = features(i, f) - centroids(c, f);
      s += diff * diff;
    }
    return s;
  };

  KMeansResult res;
  res.labels.assign(n, -1);
  std::vector<int> prev(n, -1);

  for (int iter = 1; iter <= max_iterations; ++iter) {
    res.iterations = iter;
    for (int i = 0; i < n; ++i) {
      int best_c = 0;
      double best_d = sqdist(i, 0);
      for (int c = 1; c < k; ++c) {
        double d = sqdist(i, c);
        if (d < best_d) {
          best_d = d;
          best_c = c;
        }
      }
      res.labels[i] = best_c;
    }

    // Re-seed empty clusters at the point farthest from its own centroid.
    std::vector<int> sizes(k, 0);
    for (int l : res.labels) ++sizes[l];
    std::vector<char> taken(n, 0);
    for (int c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      int far = -1;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        if (taken[i] || sizes[res.labels[i]] <= 1) continue;
        double d = sqdist(i, res.labels[i]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far < 0) throw ValidationError("k-means: cannot repopulate empty cluster");
      taken[far] = 1;
      --sizes[res.labels[far]];
      res.labels[far] = c;
      ++sizes[c];
      for (int f = 0; f < m; ++f) centroids(c, f) = features(far, f);
    }

    if (res.labels == prev) {
      res.converged = true;
      break;
    }
    prev = res.labels;

    for (int c = 0; c < k; ++c)
      for (int f = 0; f < m; ++f) centroids(c, f) = 0.0;
    for (int i = 0; i < n; ++i)
      for (int f = 0; f < m; ++f) centroids(res.labels[i], f) += features(i, f);
    for (int c = 0; c < k; ++c)
      for (int f = 0; f < m; ++f) centroids(c, f) /= sizes[c];
  }

  res.inertia = 0.0;
  for (int i = 0; i < n; ++i) res.inertia += sqdist(i, res.labels[i]);
  res.centroids = std::move(centroids);
  return res;
}

Dendrogram feature_linkage(const FeatureMatrix& features, FeatureMethod method) {
  if (method == FeatureMethod::KMeans)
    throw ValidationError("feature linkage is for Centroid or Ward");
  int n = features.rows;
  int m = features.cols;
  if (n < 2) throw ValidationError("linkage needs at least 2 objects");

  std::vector<std::vector<double>> mean(n, std::vector<double>(m));
  for (int i = 0; i < n; ++i)
    for (int f = 0; f < m; ++f) mean[i][f] = features(i, f);
  std::vector<int> size(n, 1);
  std::vector<int> id(n);
  std::iota(id.begin(), id.end(), 0);

  auto pair_cost = [&](int i, int j) {
    double gap = 0.0;
    for (int f = 0; f < m; ++f) {
      double diff = mean[i][f] - mean[j][f];
      gap += diff * diff;
    }
    if (method == FeatureMethod::Ward)
      gap *= static_cast<double>(size[i]) * size[j] / (size[i] + size[j]);
    return gap;
  };

  Dendrogram out;
  out.leaves = n;
  int active = n;
  for (int step = 0; step < n - 1; ++step) {
    int best_i = 0, best_j = 1;
    double best = pair_cost(0, 1);
    for (int i = 0; i < active; ++i)
      for (int j = i + 1; j < active; ++j) {
        double c = pair_cost(i, j);
        if (c < best) {
          best = c;
          best_i = i;
          best_j = j;
        }
      }
    out.merges.push_back({id[best_i], id[best_j], best});

    double total = size[best_i] + size[best_j];
    for (int f = 0; f < m; ++f)
      mean[best_i][f] =
          (size[best_i] * mean[best_i][f] + size[best_j] * mean[best_j][f]) / total;
    size[best_i] += size[best_j];
    id[best_i] = n + step;
    mean.erase(mean.begin() + best_j);
    size.erase(size.begin() + best_j);
    id.erase(id.begin() + best_j);
    --active;
  }
  return out;
}

FeatureShiftVerdict check_feature_shift_invariance(const FeatureMatrix& features,
                                                   const std::vector<double>& shift,
                                                   FeatureMethod method, int k,
                                                   std::uint64_t seed) {
  if (static_cast<int>(shift.size()) != features.cols)
    throw ValidationError("shift vector length must match feature count");
  FeatureMatrix moved = features;
  for (int i = 0; i < moved.rows; ++i)
    for (int f = 0; f < moved.cols; ++f) moved(i, f) += shift[f];

  FeatureShiftVerdict v;
  if (method == FeatureMethod::KMeans) {
    KMeansResult a = kmeans(features, k, seed);
    KMeansResult b = kmeans(moved, k, seed);
    v.identical = a.labels == b.labels;
    return v;
  }

  Dendrogram a = feature_linkage(features, method);
  Dendrogram b = feature_linkage(moved, method);
  v.identical = a.merges.size() == b.merges.size();
  for (std::size_t t = 0; v.identical && t < a.merges.size(); ++t)
    v.identical = a.merges[t].a == b.merges[t].a && a.merges[t].b == b.merges[t].b;
  for (std::size_t t = 0; t < a.merges.size() && t < b.merges.size(); ++t)
    v.max_height_residual = std::max(
        v.max_height_residual, std::fabs(b.merges[t].height - a.merges[t].height));
  return v;
}

CharacteristicVector::CharacteristicVector(std::vector<double> v) : v_(std::move(v)) {
  if (v_.empty()) throw ValidationError("characteristic vector must be nonempty");
  double total = 0.0;
  for (double x : v_) {
    if (!std::isfinite(x) || x < 0.0)
      throw ValidationError("characteristic vector entries must be >= 0");
    total += x;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw ValidationError("characteristic vector must sum to 1, got " +
                          std::to_string(total));
}

CharacteristicVector CharacteristicVector::uniform(int n) {
  if (n < 1) throw ValidationError("characteristic vector must be nonempty");
  return CharacteristicVector(std::vector<double>(n, 1.0 / n));
}

QuadraticPair quadratic_objective(const SimilarityMatrix& x,
                                  const CharacteristicVector& v, double alpha) {
  int n = x.size();
  if (v.size() != n) throw ValidationError("vector length must match matrix size");
  QuadraticPair out;
  for (int i = 0; i < n; ++i) {
    double base = 0.0, moved = 0.0;
    for (int j = 0; j < n; ++j) {
      base += x(i, j) * v[j];
      moved += (x(i, j) + alpha) * v[j];
    }
    out.unshifted += v[i] * base;
    out.shifted += v[i] * moved;
  }
  return out;
}

CharacteristicVector replicator_step(const SimilarityMatrix& x,
                                     const CharacteristicVector& v) {
  int n = x.size();
  if (v.size() != n) throw ValidationError("vector length must match matrix size");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (x(i, j) < 0.0)
        throw ValidationError("replicator dynamics need nonnegative similarities");

  std::vector<double> next(n);
  double denom = 0.0;
  for (int i = 0; i < n; ++i) {
    double xv = 0.0;
    for (int j = 0; j < n; ++j) xv += x(i, j) * v[j];
    next[i] = v[i] * xv;
    denom += next[i];
  }
  if (!(denom > 0.0))
    throw ValidationError("replicator dynamics hit a degenerate state (v'Xv = 0)");
  for (double& w : next) w /= denom;
  return CharacteristicVector(std::move(next));
}

ShiftResiduals analytic_shift_constants(const SimilarityMatrix& x,
                                        const ClusteringSolution& c, double alpha) {
  SimilarityMatrix moved = constant_shift(x, alpha);
  double n = x.size();
  ShiftResiduals r;
  r.ratio_assoc =
      (ratio_assoc_cost(moved, c) - ratio_assoc_cost(x, c)) - alpha * n;
  r.ratio_cut = (ratio_cut_cost(moved, c) - ratio_cut_cost(x, c)) +
                alpha * n * (c.k() - 1);
  return r;
}

}  // namespace shiftcut
