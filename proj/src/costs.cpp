#include "shiftcut/costs.hpp"

#include <cmath>
#include <string>

namespace shiftcut {

namespace {

void check_compatible(const SimilarityMatrix& x, const ClusteringSolution& c) {
  if (x.size() != c.size())
    throw ValidationError("matrix has " + std::to_string(x.size()) +
                          " objects but solution has " + std::to_string(c.size()));
}

std::vector<int> sizes_no_empty(const ClusteringSolution& c, const char* what) {
  std::vector<int> sizes = c.cluster_sizes();
  for (int k = 0; k < c.k(); ++k)
    if (sizes[k] == 0)
      throw ValidationError(std::string(what) + ": cluster " + std::to_string(k) +
                            " is empty");
  return sizes;
}

}  // namespace

ClusteringSolution::ClusteringSolution(std::vector<int> labels, int k)
    : labels_(std::move(labels)), k_(k) {
  if (k_ < 1) throw ValidationError("cluster count must be at least 1");
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] < 0 || labels_[i] >= k_)
      throw ValidationError("label " + std::to_string(labels_[i]) + " at object " +
                            std::to_string(i) + " is outside [0, " +
                            std::to_string(k_) + ")");
}

std::vector<int> ClusteringSolution::cluster_sizes() const {
  std::vector<int> sizes(k_, 0);
  for (int l : labels_) ++sizes[l];
  return sizes;
}

double min_cut_cost(const SimilarityMatrix& x, const ClusteringSolution& c) {
  check_compatible(x, c);
  int n = x.size();
  std::vector<double> per_row(n);
  for (int i = 0; i < n; ++i) {
    const double* row = x.row(i);
    int li = c.label(i);
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      if (c.label(j) != li) s += row[j];
    per_row[i] = s;
  }
  return pairwise_sum(per_row);
}

double shifted_min_cut_cost(const SimilarityMatrix& s, const ClusteringSolution& c) {
  check_compatible(s, c);
  int n = s.size();
  std::vector<double> per_row(n);
  for (int i = 0; i < n; ++i) {
    const double* row = s.row(i);
    int li = c.label(i);
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      if (c.label(j) == li) acc += row[j];
    per_row[i] = acc;
  }
  return -pairwise_sum(per_row);
}

double correlation_clustering_cost(const SimilarityMatrix& s,
                                   const ClusteringSolution& c) {
  check_compatible(s, c);
  int n = s.size();
  std::vector<double> per_row(n);
  for (int i = 0; i < n; ++i) {
    const double* row = s.row(i);
    int li = c.label(i);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      double v = row[j];
      if (c.label(j) == li)
        acc += std::fabs(v) - v;  // negative mass kept together
      else
        acc += std::fabs(v) + v;  // positive mass split apart
    }
    per_row[i] = acc;
  }
  return 0.5 * pairwise_sum(per_row);
}

double ratio_assoc_cost(const SimilarityMatrix& x, const ClusteringSolution& c) {
  check_compatible(x, c);
  std::vector<int> sizes = sizes_no_empty(c, "ratio association");
  int n = x.size();
  std::vector<double> within(c.k(), 0.0);
  for (int i = 0; i < n; ++i) {
    const double* row = x.row(i);
    int li = c.label(i);
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      if (c.label(j) == li) acc += row[j];
    within[li] += acc;
  }
  double total = 0.0;
  for (int k = 0; k < c.k(); ++k) total += within[k] / sizes[k];
  return -total;
}

double ratio_cut_cost(const SimilarityMatrix& x, const ClusteringSolution& c) {
  check_compatible(x, c);
  std::vector<int> sizes = sizes_no_empty(c, "ratio cut");
  int n = x.size();
  std::vector<double> cut(c.k(), 0.0);
  for (int i = 0; i < n; ++i) {
    const double* row = x.row(i);
    int li = c.label(i);
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      if (c.label(j) != li) acc += row[j];
    cut[li] += acc;
  }
  double total = 0.0;
  for (int k = 0; k < c.k(); ++k) total += cut[k] / sizes[k];
  return total;
}

double normalized_cut_cost(const SimilarityMatrix& x, const ClusteringSolution& c) {
  check_compatible(x, c);
  sizes_no_empty(c, "normalized cut");
  int n = x.size();
  std::vector<double> cut(c.k(), 0.0), degree(c.k(), 0.0);
  for (int i = 0; i < n; ++i) {
    const double* row = x.row(i);
    int li = c.label(i);
    double acc_cut = 0.0, acc_all = 0.0;
    for (int j = 0; j < n; ++j) {
      acc_all += row[j];
      if (c.label(j) != li) acc_cut += row[j];
    }
    cut[li] += acc_cut;
    degree[li] += acc_all;
  }
  double total = 0.0;
  for (int k = 0; k < c.k(); ++k) {
    if (degree[k] == 0.0)
      throw ValidationError("normalized cut: cluster " + std::to_string(k) +
                            " has zero degree");
    total += cut[k] / degree[k];
  }
  return total;
}

double adaptive_ratio_cut_cost(const SimilarityMatrix& x,
                               const ClusteringSolution& c, double p) {
  check_compatible(x, c);
  if (!(p > 1.0)) throw ValidationError("adaptive ratio cut requires p > 1");
  std::vector<int> sizes = sizes_no_empty(c, "adaptive ratio cut");
  int n = x.size();
  int kk = c.k();

  // W(k, k') = mass between the two clusters, each ordered pair once.
  std::vector<double> between(static_cast<std::size_t>(kk) * kk, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* row = x.row(i);
    int li = c.label(i);
    for (int j = 0; j < n; ++j)
      if (c.label(j) != li) between[static_cast<std::size_t>(li) * kk + c.label(j)] += row[j];
  }

  double q = 1.0 / (p - 1.0);
  double total = 0.0;
  for (int a = 0; a < kk; ++a) {
    for (int b = a + 1; b < kk; ++b) {
      double w = between[static_cast<std::size_t>(a) * kk + b];
      double weight = std::pow(std::pow(sizes[a], -q) + std::pow(sizes[b], -q), p - 1.0);
      total += w * weight;
    }
  }
  return total;
}

RegularizerDecomposition regularizer_decomposition(const SimilarityMatrix& x,
                                                   const ClusteringSolution& c,
                                                   double alpha) {
  check_compatible(x, c);
  if (!std::isfinite(alpha)) throw ValidationError("shift must be finite");
  RegularizerDecomposition out;
  out.min_cut = min_cut_cost(x, c);
  double sq = 0.0;
  for (int size : c.cluster_sizes()) sq += static_cast<double>(size) * size;
  out.balance = alpha * sq;
  out.total = out.min_cut + out.balance;
  return out;
}

AdaptiveRegularizerValue adaptive_regularizer_value(const SimilarityMatrix& x,
                                                    const ClusteringSolution& c) {
  check_compatible(x, c);
  int n = x.size();
  SimilarityMatrix s = adaptive_shift(x);

  AdaptiveRegularizerValue out;
  {
    std::vector<double> per_row(n);
    for (int i = 0; i < n; ++i) {
      int li = c.label(i);
      double acc = 0.0;
      for (int j = 0; j < n; ++j)
        if (c.label(j) == li) acc += x(i, j) - s(i, j);
      per_row[i] = acc;
    }
    out.from_entries = pairwise_sum(per_row);
  }
  {
    std::vector<double> row_sum(n);
    for (int i = 0; i < n; ++i) row_sum[i] = accumulate_row(x.row(i), n);
    double beta = pairwise_sum(row_sum);

    std::vector<int> sizes = c.cluster_sizes();
    std::vector<double> degree(c.k(), 0.0);
    for (int i = 0; i < n; ++i) degree[c.label(i)] += row_sum[i];

    double deg_term = 0.0, sq_term = 0.0;
    for (int k = 0; k < c.k(); ++k) {
      deg_term += sizes[k] * degree[k];
      sq_term += static_cast<double>(sizes[k]) * sizes[k];
    }
    out.closed_form = 2.0 / n * deg_term - beta / (static_cast<double>(n) * n) * sq_term;
  }

  double scale = std::max({1.0, std::fabs(out.from_entries), std::fabs(out.closed_form)});
  if (std::fabs(out.from_entries - out.closed_form) > 1e-8 * scale)
    throw ConsistencyError("adaptive regularizer: entrywise value " +
                           std::to_string(out.from_entries) +
                           " disagrees with closed form " +
                           std::to_string(out.closed_form));
  return out;
}

double total_similarity(const SimilarityMatrix& x) {
  int n = x.size();
  std::vector<double> per_row(n);
  for (int i = 0; i < n; ++i) per_row[i] = accumulate_row(x.row(i), n);
  return pairwise_sum(per_row);
}

}  // namespace shiftcut
