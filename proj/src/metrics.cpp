#include "shiftcut/metrics.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

namespace shiftcut {

namespace {

std::vector<int> densify(const std::vector<int>& labels, int& distinct) {
  std::unordered_map<int, int> id;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = id.emplace(labels[i], static_cast<int>(id.size()));
    out[i] = it->second;
  }
  distinct = static_cast<int>(id.size());
  return out;
}

double pairs2(long long m) { return 0.5 * static_cast<double>(m) * (m - 1); }

}  // namespace

ContingencyTable::ContingencyTable(const std::vector<int>& truth,
                                   const std::vector<int>& pred) {
  if (truth.empty()) throw ValidationError("labelings must be nonempty");
  if (truth.size() != pred.size())
    throw ValidationError("labelings differ in length: " +
                          std::to_string(truth.size()) + " vs " +
                          std::to_string(pred.size()));
  std::vector<int> t = densify(truth, rows_);
  std::vector<int> p = densify(pred, cols_);
  n_ = static_cast<long long>(truth.size());
  counts_.assign(static_cast<std::size_t>(rows_) * cols_, 0);
  row_totals_.assign(rows_, 0);
  col_totals_.assign(cols_, 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    ++counts_[static_cast<std::size_t>(t[i]) * cols_ + p[i]];
    ++row_totals_[t[i]];
    ++col_totals_[p[i]];
  }
}

bool ContingencyTable::same_partition() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i) {
    int nonzero = 0;
    for (int j = 0; j < cols_; ++j)
      if (count(i, j) > 0) ++nonzero;
    if (nonzero != 1) return false;
  }
  for (int j = 0; j < cols_; ++j) {
    int nonzero = 0;
    for (int i = 0; i < rows_; ++i)
      if (count(i, j) > 0) ++nonzero;
    if (nonzero != 1) return false;
  }
  return true;
}

ContingencyTable contingency(const std::vector<int>& truth,
                             const std::vector<int>& pred) {
  return ContingencyTable(truth, pred);
}

double adjusted_rand(const ContingencyTable& t) {
  double index = 0.0;
  for (int i = 0; i < t.rows(); ++i)
    for (int j = 0; j < t.cols(); ++j) index += pairs2(t.count(i, j));
  double sum_a = 0.0, sum_b = 0.0;
  for (int i = 0; i < t.rows(); ++i) sum_a += pairs2(t.row_total(i));
  for (int j = 0; j < t.cols(); ++j) sum_b += pairs2(t.col_total(j));

  double all_pairs = pairs2(t.n());
  if (all_pairs == 0.0) return 1.0;  // single object: partitions trivially agree
  double expected = sum_a * sum_b / all_pairs;
  double max_index = 0.5 * (sum_a + sum_b);
  double denom = max_index - expected;
  if (denom == 0.0) return t.same_partition() ? 1.0 : 0.0;
  return (index - expected) / denom;
}

namespace {

double entropy(const std::vector<long long>& totals, int count, long long n) {
  double h = 0.0;
  for (int i = 0; i < count; ++i) {
    if (totals[i] == 0) continue;
    double p = static_cast<double>(totals[i]) / n;
    h -= p * std::log(p);
  }
  return h;
}

double table_entropy_rows(const ContingencyTable& t) {
  std::vector<long long> totals(t.rows());
  for (int i = 0; i < t.rows(); ++i) totals[i] = t.row_total(i);
  return entropy(totals, t.rows(), t.n());
}

double table_entropy_cols(const ContingencyTable& t) {
  std::vector<long long> totals(t.cols());
  for (int j = 0; j < t.cols(); ++j) totals[j] = t.col_total(j);
  return entropy(totals, t.cols(), t.n());
}

double mutual_information(const ContingencyTable& t) {
  double n = static_cast<double>(t.n());
  double mi = 0.0;
  for (int i = 0; i < t.rows(); ++i) {
    for (int j = 0; j < t.cols(); ++j) {
      long long nij = t.count(i, j);
      if (nij == 0) continue;
      double pij = nij / n;
      mi += pij * std::log(n * nij /
                           (static_cast<double>(t.row_total(i)) * t.col_total(j)));
    }
  }
  return mi;
}

}  // namespace

// Expectation of the mutual information over uniformly random pairings of the
// two label vectors with these fixed marginals: the cell count n_ij follows a
// hypergeometric law, summed here in closed form with log-factorials.
double expected_mutual_information(const ContingencyTable& t) {
  long long n = t.n();
  std::vector<double> lf(static_cast<std::size_t>(n) + 1, 0.0);
  for (long long i = 1; i <= n; ++i)
    lf[static_cast<std::size_t>(i)] = lf[static_cast<std::size_t>(i - 1)] + std::log(static_cast<double>(i));
  auto logfact = [&](long long m) { return lf[static_cast<std::size_t>(m)]; };

  double emi = 0.0;
  for (int i = 0; i < t.rows(); ++i) {
    long long a = t.row_total(i);
    for (int j = 0; j < t.cols(); ++j) {
      long long b = t.col_total(j);
      long long lo = std::max(1LL, a + b - n);
      long long hi = std::min(a, b);
      for (long long nij = lo; nij <= hi; ++nij) {
        double log_term = std::log(static_cast<double>(n) * nij /
                                   (static_cast<double>(a) * b));
        double log_prob = logfact(a) + logfact(b) + logfact(n - a) + logfact(n - b) -
                          logfact(n) - logfact(nij) - logfact(a - nij) -
                          logfact(b - nij) - logfact(n - a - b + nij);
        emi += (static_cast<double>(nij) / n) * log_term * std::exp(log_prob);
      }
    }
  }
  return emi;
}

double adjusted_mutual_info(const ContingencyTable& t, AmiNormalization norm) {
  double h_true = table_entropy_rows(t);
  double h_pred = table_entropy_cols(t);
  double mi = mutual_information(t);
  double emi = expected_mutual_information(t);

  double bound = 0.0;
  switch (norm) {
    case AmiNormalization::Min: bound = std::min(h_true, h_pred); break;
    case AmiNormalization::Geometric: bound = std::sqrt(h_true * h_pred); break;
    case AmiNormalization::Arithmetic: bound = 0.5 * (h_true + h_pred); break;
    case AmiNormalization::Max: bound = std::max(h_true, h_pred); break;
  }
  double denom = bound - emi;
  // The denominator vanishes exactly in the degenerate cases (both labelings
  // constant, or chance level equals the bound); tiny magnitudes here are
  // noise around those cases, not signal.
  if (std::fabs(denom) < 1e-12 * std::max(1.0, bound))
    return t.same_partition() ? 1.0 : 0.0;
  return (mi - emi) / denom;
}

double v_measure(const ContingencyTable& t) {
  double h_true = table_entropy_rows(t);
  double h_pred = table_entropy_cols(t);
  double n = static_cast<double>(t.n());

  double h_true_given_pred = 0.0;  // H(truth | prediction)
  double h_pred_given_true = 0.0;
  for (int i = 0; i < t.rows(); ++i) {
    for (int j = 0; j < t.cols(); ++j) {
      long long nij = t.count(i, j);
      if (nij == 0) continue;
      double pij = nij / n;
      h_true_given_pred -= pij * std::log(static_cast<double>(nij) / t.col_total(j));
      h_pred_given_true -= pij * std::log(static_cast<double>(nij) / t.row_total(i));
    }
  }

  double homogeneity = h_true == 0.0 ? 1.0 : 1.0 - h_true_given_pred / h_true;
  double completeness = h_pred == 0.0 ? 1.0 : 1.0 - h_pred_given_true / h_pred;
  if (homogeneity + completeness == 0.0) return 0.0;
  return 2.0 * homogeneity * completeness / (homogeneity + completeness);
}

ScoreTriple score_against(const std::vector<int>& truth,
                          const std::vector<int>& pred) {
  ContingencyTable t(truth, pred);
  ScoreTriple s;
  s.ari = adjusted_rand(t);
  s.ami = adjusted_mutual_info(t);
  s.v = v_measure(t);
  return s;
}

}  // namespace shiftcut
