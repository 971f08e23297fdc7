#pragma once

#include <cstdint>
#include <vector>

#include "shiftcut/costs.hpp"
#include "shiftcut/matrix.hpp"

namespace shiftcut {

// Checks that clustering decisions survive additive shifts of the input, plus
// the pieces those checks are built from. Shifted dissimilarities may be
// negative, so this module also accepts raw symmetric matrices where the
// strict DistanceMatrix invariants would get in the way.

enum class LinkageCriterion { Single, Complete, Average };

struct Merge {
  int a = 0;  // cluster ids: leaves are 0..n-1, the merge at step t creates n+t
  int b = 0;
  double height = 0.0;
};

struct Dendrogram {
  int leaves = 0;
  std::vector<Merge> merges;  // n-1 entries
};

/// Agglomerates by repeatedly joining the closest pair under the criterion.
/// Ties go to the pair whose smallest member indices come first. Heights are
/// the merge distances and are non-decreasing for these three criteria.
Dendrogram linkage_cluster(const DistanceMatrix& d, LinkageCriterion criterion);

/// Same algorithm on an arbitrary symmetric matrix (entries may be negative,
/// diagonal is ignored).
Dendrogram linkage_cluster(const SquareMatrix& d, LinkageCriterion criterion);

struct LinkageShiftVerdict {
  bool sequence_identical = false;  // same merge pairs in the same order
  double max_height_residual = 0.0;  // max |shifted height - (height + alpha)|
};

/// Reclusters after adding alpha to every dissimilarity and compares.
LinkageShiftVerdict check_linkage_shift_invariance(const DistanceMatrix& d,
                                                   double alpha,
                                                   LinkageCriterion criterion);

struct KMeansResult {
  std::vector<int> labels;
  FeatureMatrix centroids;
  double inertia = 0.0;  // total squared distance to assigned centroids
  int iterations = 0;
  bool converged = false;
};

/// Lloyd iterations. Initial centroids are k distinct data points chosen by
/// the seed; assignment ties go to the lowest cluster; a cluster that empties
/// is re-seeded at the point farthest from its current centroid.
KMeansResult kmeans(const FeatureMatrix& features, int k, std::uint64_t seed,
                    int max_iterations = 100);

enum class FeatureMethod { KMeans, Centroid, Ward };

/// Agglomeration on feature rows: Centroid joins by squared distance between
/// cluster means, Ward by the variance increase |u||v|/(|u|+|v|) * ||mean
/// difference||^2. Tie and id conventions match linkage_cluster.
Dendrogram feature_linkage(const FeatureMatrix& features, FeatureMethod method);

struct FeatureShiftVerdict {
  bool identical = false;           // same labels / same merge sequence
  double max_height_residual = 0.0;  // 0 placeholder for KMeans
};

/// Translates every row by `shift` and checks the method's output is
/// unchanged: identical labels for KMeans (same seed), identical merge
/// sequence and heights for Centroid/Ward.
FeatureShiftVerdict check_feature_shift_invariance(const FeatureMatrix& features,
                                                   const std::vector<double>& shift,
                                                   FeatureMethod method, int k,
                                                   std::uint64_t seed);

/// Nonnegative weights summing to 1 (tolerance 1e-12): a soft cluster.
class CharacteristicVector {
 public:
  explicit CharacteristicVector(std::vector<double> v);
  static CharacteristicVector uniform(int n);

  int size() const { return static_cast<int>(v_.size()); }
  double operator[](int i) const { return v_[i]; }
  const std::vector<double>& values() const { return v_; }

 private:
  std::vector<double> v_;
};

struct QuadraticPair {
  double unshifted = 0.0;  // v' X v
  double shifted = 0.0;    // v' (X + alpha) v, computed entrywise
};

/// On the simplex the off-diagonal-free shift adds exactly alpha:
/// shifted == unshifted + alpha up to rounding. Both sides are computed
/// independently so the identity stays checkable.
QuadraticPair quadratic_objective(const SimilarityMatrix& x,
                                  const CharacteristicVector& v, double alpha);

/// One multiplicative update v_i <- v_i (Xv)_i / (v' X v). Requires
/// entrywise nonnegative x and a non-degenerate state (v' X v > 0).
CharacteristicVector replicator_step(const SimilarityMatrix& x,
                                     const CharacteristicVector& v);

struct ShiftResiduals {
  double ratio_assoc = 0.0;  // measured change minus alpha * n
  double ratio_cut = 0.0;    // measured change plus alpha * n * (k - 1)
};

/// Subtracting alpha from every similarity moves ratio association by exactly
/// +alpha*n and ratio cut by exactly -alpha*n*(k-1); this returns how far the
/// recomputed costs land from those analytic targets.
ShiftResiduals analytic_shift_constants(const SimilarityMatrix& x,
                                        const ClusteringSolution& c, double alpha);

}  // namespace shiftcut
