#pragma once

#include <vector>

#include "shiftcut/matrix.hpp"

namespace shiftcut {

/// A hard assignment of n objects to clusters 0..k-1. Clusters may be empty;
/// objectives that cannot tolerate empty clusters reject them at call time.
class ClusteringSolution {
 public:
  ClusteringSolution(std::vector<int> labels, int k);

  int size() const { return static_cast<int>(labels_.size()); }
  int k() const { return k_; }
  int label(int i) const { return labels_[i]; }
  const std::vector<int>& labels() const { return labels_; }
  std::vector<int> cluster_sizes() const;
  bool same_cluster(int i, int j) const { return labels_[i] == labels_[j]; }

 private:
  std::vector<int> labels_;
  int k_;
};

// All objectives below use the ordered-pair convention: double sums run over
// ordered (i, j), so each undirected edge is counted twice, and within-cluster
// sums include the diagonal i = j.

/// Sum of similarities across cluster boundaries.
double min_cut_cost(const SimilarityMatrix& x, const ClusteringSolution& c);

/// Negated within-cluster similarity mass. On a shifted matrix this is the
/// shifted-association objective; on a raw matrix it differs from the min cut
/// by the constant total sum of the matrix.
double shifted_min_cut_cost(const SimilarityMatrix& s, const ClusteringSolution& c);

/// Correlation clustering disagreement cost: penalizes negative similarity
/// kept within clusters and positive similarity separated. Always >= 0 and
/// shares minimizers with min_cut_cost on the same matrix.
double correlation_clustering_cost(const SimilarityMatrix& s,
                                   const ClusteringSolution& c);

/// -sum_k (within-cluster mass of cluster k) / |cluster k|.
double ratio_assoc_cost(const SimilarityMatrix& x, const ClusteringSolution& c);

/// sum_k (cut mass of cluster k) / |cluster k|.
double ratio_cut_cost(const SimilarityMatrix& x, const ClusteringSolution& c);

/// sum_k (cut mass of cluster k) / (total degree of cluster k).
double normalized_cut_cost(const SimilarityMatrix& x, const ClusteringSolution& c);

/// Generalized ratio cut: sum over unordered cluster pairs of the connecting
/// mass weighted by (|O_k|^q + |O_k'|^q)^(1/q) with q = -1/(p-1), p > 1.
/// At p = 2 this equals ratio_cut_cost exactly (the two size terms reproduce
/// the 1/|O_k| + 1/|O_k'| split of the per-cluster form, with no extra 1/2,
/// because W(k,k') counts each ordered pair once).
double adaptive_ratio_cut_cost(const SimilarityMatrix& x,
                               const ClusteringSolution& c, double p);

/// Min cut plus the balance term alpha * sum_k |O_k|^2, reported separately.
/// total - sum(x) equals shifted_min_cut_cost(constant_shift(x, alpha), c).
struct RegularizerDecomposition {
  double min_cut = 0.0;
  double balance = 0.0;
  double total = 0.0;
};

RegularizerDecomposition regularizer_decomposition(const SimilarityMatrix& x,
                                                   const ClusteringSolution& c,
                                                   double alpha);

/// The within-cluster mass removed by adaptive centering, computed two ways:
/// from the entries of x - adaptive_shift(x), and from the closed form
/// (2/n) sum_k |O_k| deg(O_k) - (beta/n^2) sum_k |O_k|^2 with beta = sum(x).
/// Throws ConsistencyError if the two disagree beyond 1e-8 relative.
struct AdaptiveRegularizerValue {
  double from_entries = 0.0;
  double closed_form = 0.0;
};

AdaptiveRegularizerValue adaptive_regularizer_value(const SimilarityMatrix& x,
                                                    const ClusteringSolution& c);

/// Total of all entries (ordered pairs, diagonal included).
double total_similarity(const SimilarityMatrix& x);

}  // namespace shiftcut
