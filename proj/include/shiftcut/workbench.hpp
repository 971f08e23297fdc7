#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shiftcut/matrix.hpp"
#include "shiftcut/metrics.hpp"

namespace shiftcut {

/// A loaded or generated problem instance. Exactly one payload is populated;
/// reference labels are optional and only used for scoring.
struct Dataset {
  enum class Payload { Features, Distances, Similarities };

  std::string name = "dataset";
  Payload payload = Payload::Features;
  std::optional<FeatureMatrix> features;
  std::optional<DistanceMatrix> distances;
  std::optional<SimilarityMatrix> similarities;
  std::optional<std::vector<int>> labels;

  int size() const;
};

Dataset::Payload parse_payload(const std::string& text);

/// Plain comma-separated numeric table, UTF-8, optional header row
/// (auto-detected: a first row whose payload cells do not all parse as
/// numbers is treated as a header). With `labeled` the last column holds
/// reference labels (any tokens; mapped to dense ids unless all integers).
/// Feature cells may be missing (empty, "?", "na", "nan"); each is replaced
/// by the median of its column. Matrix payloads must be complete, square and
/// symmetric within tolerance. Unreadable file: IoError; malformed content:
/// ValidationError.
Dataset load_csv(const std::string& path, Dataset::Payload kind, bool labeled);

/// Writes features (and labels when present) back out as CSV with a header.
void write_features_csv(const Dataset& d, const std::string& path);

/// Two collinear groups: a tight run of n_dense points spaced dense_gap and a
/// spread run of n_sparse points spaced sparse_gap, `separation` apart, with
/// small seeded jitter. Labels mark the two groups.
Dataset generate_line_dataset(int n_dense = 30, int n_sparse = 30,
                              double dense_gap = 0.1, double sparse_gap = 1.0,
                              double separation = 5.0, std::uint64_t seed = 0);

/// k isotropic Gaussian blobs of per_cluster points in `dims` dimensions,
/// noise scale `spread`. Centers sit on a regular simplex with edge
/// `separation` when dims >= k-1, else on axes at growing offsets.
Dataset generate_blobs(int k = 3, int per_cluster = 20, int dims = 2,
                       double spread = 0.5, double separation = 5.0,
                       std::uint64_t seed = 0);

enum class Method { ShiftedMinCut, MinCut, KMeans };

std::string to_string(Method m);
Method parse_method(const std::string& text);

struct ExperimentSpec {
  ShiftSpec shift = ShiftSpec::adaptive();
  int k = 2;
  int restarts = 100;
  std::uint64_t seed = 0;
  int max_sweeps = 200;
  std::vector<Method> methods = {Method::ShiftedMinCut};
  bool with_scores = true;
};

struct MethodResult {
  Method method = Method::ShiftedMinCut;
  double best_cost = 0.0;
  int best_restart = 0;
  std::vector<int> best_labels;
  std::vector<int> cluster_sizes;
  std::vector<double> restart_costs;
  int non_converged_restarts = 0;
  double seconds = 0.0;
  // Present when the dataset carries reference labels: scores of the
  // cost-selected solution, and mean / population-std over all restarts.
  std::optional<ScoreTriple> best_of_cost;
  std::optional<ScoreTriple> mean;
  std::optional<ScoreTriple> stddev;
};

struct ExperimentReport {
  int schema_version = 1;
  std::string toolkit_version = kToolkitVersion;
  std::string dataset;
  int n = 0;
  int k = 0;
  int restarts = 0;
  std::uint64_t seed = 0;
  std::string shift;
  bool scored = false;
  std::vector<MethodResult> methods;
};

/// Runs every requested method on the dataset through the standard pipeline
/// (features -> squared distances -> similarities -> shift). All methods see
/// the same per-restart seeds. The reported solution is always the best by
/// objective cost; scores are computed only after that choice.
ExperimentReport run_experiment(const Dataset& data, const ExperimentSpec& spec);

enum class ReportFormat { Json, Csv };

/// Stable field order, floats at 6 significant digits.
std::string report_to_json(const ExperimentReport& r);
std::string report_to_csv(const ExperimentReport& r);
void emit_report(const ExperimentReport& r, const std::string& path,
                 ReportFormat format);
ExperimentReport load_report_json(const std::string& path);

}  // namespace shiftcut
