#pragma once

#include <vector>

#include "shiftcut/common.hpp"

namespace shiftcut {

/// Cross-tabulation of two labelings of the same objects. Arbitrary integer
/// ids are accepted and densified in order of first appearance.
class ContingencyTable {
 public:
  ContingencyTable(const std::vector<int>& truth, const std::vector<int>& pred);

  int rows() const { return rows_; }  // distinct truth labels
  int cols() const { return cols_; }  // distinct predicted labels
  long long n() const { return n_; }
  long long count(int i, int j) const {
    return counts_[static_cast<std::size_t>(i) * cols_ + j];
  }
  long long row_total(int i) const { return row_totals_[i]; }
  long long col_total(int j) const { return col_totals_[j]; }

  /// True when the two labelings induce the same partition of the objects.
  bool same_partition() const;

 private:
  int rows_ = 0, cols_ = 0;
  long long n_ = 0;
  std::vector<long long> counts_;
  std::vector<long long> row_totals_, col_totals_;
};

ContingencyTable contingency(const std::vector<int>& truth,
                             const std::vector<int>& pred);

/// Permutation-model chance-corrected Rand index. 1 for identical partitions;
/// can be negative. Degenerate chance denominator: 1 if the partitions match,
/// else 0.
double adjusted_rand(const ContingencyTable& t);

enum class AmiNormalization { Min, Geometric, Arithmetic, Max };

/// Exact expectation of the mutual information over random pairings of the
/// two labelings with fixed marginals (hypergeometric cell counts).
double expected_mutual_information(const ContingencyTable& t);

/// Mutual information corrected by its exact expectation under random
/// permutations of one labeling, normalized by the chosen mean of the two
/// entropies (arithmetic by default). Degenerate denominator handled as above.
double adjusted_mutual_info(const ContingencyTable& t,
                            AmiNormalization norm = AmiNormalization::Arithmetic);

/// Harmonic mean of homogeneity and completeness (natural-log entropies).
/// Zero-entropy conventions: a constant reference labeling yields
/// homogeneity 1, a constant prediction yields completeness 1.
double v_measure(const ContingencyTable& t);

struct ScoreTriple {
  double ari = 0.0;
  double ami = 0.0;
  double v = 0.0;
};

ScoreTriple score_against(const std::vector<int>& truth,
                          const std::vector<int>& pred);

}  // namespace shiftcut
