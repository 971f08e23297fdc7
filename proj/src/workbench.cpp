#include "shiftcut/workbench.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "shiftcut/invariance.hpp"
#include "shiftcut/optimizer.hpp"

namespace shiftcut {

namespace {

using ordered_json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool is_missing_token(std::string t) {
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return t.empty() || t == "?" || t == "na" || t == "nan";
}

bool parse_double(const std::string& t, double& out) {
  if (t.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stod(t, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == t.size();
}

bool parse_int(const std::string& t, long& out) {
  if (t.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stol(t, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == t.size();
}

std::string basename_no_ext(const std::string& path) {
  std::size_t slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  std::size_t dot = base.find_last_of('.');
  if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
  return base.empty() ? "dataset" : base;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t m = v.size() / 2;
  if (v.size() % 2 == 1) return v[m];
  return 0.5 * (v[m - 1] + v[m]);
}

// Rounds to 6 significant digits so emitted reports are stable to reorderings
// of internally equivalent computations.
double round6(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return std::strtod(buf, nullptr);
}

std::string format6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

int Dataset::size() const {
  switch (payload) {
    case Payload::Features: return features ? features->rows : 0;
    case Payload::Distances: return distances ? distances->size() : 0;
    case Payload::Similarities: return similarities ? similarities->size() : 0;
  }
  return 0;
}

Dataset::Payload parse_payload(const std::string& text) {
  if (text == "features") return Dataset::Payload::Features;
  if (text == "distances") return Dataset::Payload::Distances;
  if (text == "similarities") return Dataset::Payload::Similarities;
  throw ValidationError("unknown input kind '" + text +
                        "' (expected features, distances or similarities)");
}

Dataset load_csv(const std::string& path, Dataset::Payload kind, bool labeled) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    rows.push_back(split_commas(t));
  }
  if (in.bad()) throw IoError("read failure on '" + path + "'");
  if (rows.empty()) throw ValidationError("'" + path + "' contains no data");

  std::size_t width = rows[0].size();
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (rows[r].size() != width)
      throw ValidationError("'" + path + "': row " + std::to_string(r + 1) +
                            " has " + std::to_string(rows[r].size()) +
                            " cells, expected " + std::to_string(width));
  if (labeled && width < 2)
    throw ValidationError("'" + path + "': need at least one data column besides labels");

  std::size_t payload_cols = labeled ? width - 1 : width;
  if (payload_cols == 0) throw ValidationError("'" + path + "': no data columns");

  // Header heuristic: if any payload cell of the first row is neither a
  // number nor a missing marker, the row is a header.
  bool has_header = false;
  for (std::size_t c = 0; c < payload_cols; ++c) {
    double ignored;
    const std::string& cell = rows[0][c];
    if (!parse_double(cell, ignored) &&
        !(kind == Dataset::Payload::Features && is_missing_token(cell))) {
      has_header = true;
      break;
    }
  }
  std::size_t first = has_header ? 1 : 0;
  std::size_t n_rows = rows.size() - first;
  if (n_rows == 0) throw ValidationError("'" + path + "' has a header but no data");

  Dataset d;
  d.name = basename_no_ext(path);
  d.payload = kind;

  if (labeled) {
    std::vector<std::string> tokens(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r) tokens[r] = rows[first + r][width - 1];
    bool all_int = true;
    std::vector<long> as_int(n_rows);
    for (std::size_t r = 0; r < n_rows && all_int; ++r)
      all_int = parse_int(tokens[r], as_int[r]);
    std::vector<int> labels(n_rows);
    if (all_int) {
      for (std::size_t r = 0; r < n_rows; ++r) labels[r] = static_cast<int>(as_int[r]);
    } else {
      std::vector<std::string> seen;
      for (std::size_t r = 0; r < n_rows; ++r) {
        auto it = std::find(seen.begin(), seen.end(), tokens[r]);
        if (it == seen.end()) {
          seen.push_back(tokens[r]);
          labels[r] = static_cast<int>(seen.size()) - 1;
        } else {
          labels[r] = static_cast<int>(it - seen.begin());
        }
      }
    }
    d.labels = std::move(labels);
  }

  if (kind == Dataset::Payload::Features) {
    int n = static_cast<int>(n_rows);
    int m = static_cast<int>(payload_cols);
    FeatureMatrix f(n, m);
    std::vector<std::vector<std::pair<int, int>>> missing_by_col(m);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < m; ++c) {
        const std::string& cell = rows[first + i][c];
        double v;
        if (is_missing_token(cell)) {
          missing_by_col[c].push_back({i, c});
          f(i, c) = std::numeric_limits<double>::quiet_NaN();
        } else if (parse_double(cell, v)) {
          if (!std::isfinite(v))
            throw ValidationError("'" + path + "': non-finite value at row " +
                                  std::to_string(first + i + 1));
          f(i, c) = v;
        } else {
          throw ValidationError("'" + path + "': cannot parse '" + cell +
                                "' at row " + std::to_string(first + i + 1) +
                                ", column " + std::to_string(c + 1));
        }
      }
    }
    for (int c = 0; c < m; ++c) {
      if (missing_by_col[c].empty()) continue;
      std::vector<double> present;
      for (int i = 0; i < n; ++i)
        if (!std::isnan(f(i, c))) present.push_back(f(i, c));
      if (present.empty())
        throw ValidationError("'" + path + "': column " + std::to_string(c + 1) +
                              " has no usable values");
      double fill = median(std::move(present));
      for (auto [i, col] : missing_by_col[c]) f(i, col) = fill;
    }
    d.features = std::move(f);
    return d;
  }

  // Matrix payloads: complete numeric square tables only.
  int n = static_cast<int>(n_rows);
  if (static_cast<int>(payload_cols) != n)
    throw ValidationError("'" + path + "': matrix payload must be square, got " +
                          std::to_string(n) + " rows x " +
                          std::to_string(payload_cols) + " columns");
  SquareMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v;
      const std::string& cell = rows[first + i][j];
      if (!parse_double(cell, v))
        throw ValidationError("'" + path + "': cannot parse '" + cell +
                              "' at row " + std::to_string(first + i + 1) +
                              ", column " + std::to_string(j + 1));
      m(i, j) = v;
    }
  if (kind == Dataset::Payload::Distances)
    d.distances = DistanceMatrix(std::move(m));
  else
    d.similarities = SimilarityMatrix(std::move(m));
  return d;
}

void write_features_csv(const Dataset& d, const std::string& path) {
  if (d.payload != Dataset::Payload::Features || !d.features)
    throw ValidationError("dataset has no features to write");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");

  const FeatureMatrix& f = *d.features;
  for (int c = 0; c < f.cols; ++c) out << (c ? "," : "") << "f" << c;
  if (d.labels) out << ",label";
  out << "\n";
  char buf[64];
  for (int i = 0; i < f.rows; ++i) {
    for (int c = 0; c < f.cols; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", f(i, c));
      out << (c ? "," : "") << buf;
    }
    if (d.labels) out << "," << (*d.labels)[i];
    out << "\n";
  }
  if (!out) throw IoError("write failure on '" + path + "'");
}

Dataset generate_line_dataset(int n_dense, int n_sparse, double dense_gap,
                              double sparse_gap, double separation,
                              std::uint64_t seed) {
  if (n_dense < 1 || n_sparse < 1)
    throw ValidationError("both groups need at least one point");
  if (dense_gap <= 0 || sparse_gap <= 0 || separation <= 0)
    throw ValidationError("gaps and separation must be positive");

  Rng rng(seed);
  int n = n_dense + n_sparse;
  FeatureMatrix f(n, 1);
  std::vector<int> labels(n);
  for (int i = 0; i < n_dense; ++i) {
    f(i, 0) = i * dense_gap + dense_gap * 0.05 * (rng.uniform01() - 0.5);
    labels[i] = 0;
  }
  double offset = (n_dense - 1) * dense_gap + separation;
  for (int j = 0; j < n_sparse; ++j) {
    int i = n_dense + j;
    f(i, 0) = offset + j * sparse_gap + sparse_gap * 0.05 * (rng.uniform01() - 0.5);
    labels[i] = 1;
  }

  Dataset d;
  d.name = "line";
  d.payload = Dataset::Payload::Features;
  d.features = std::move(f);
  d.labels = std::move(labels);
  return d;
}

Dataset generate_blobs(int k, int per_cluster, int dims, double spread,
                       double separation, std::uint64_t seed) {
  if (k < 1 || per_cluster < 1 || dims < 1)
    throw ValidationError("blob counts and dimensions must be positive");
  if (spread < 0 || separation <= 0)
    throw ValidationError("spread must be >= 0 and separation > 0");

  Rng rng(seed);
  int n = k * per_cluster;
  FeatureMatrix f(n, dims);
  std::vector<int> labels(n);
  // Centers form a regular simplex with edge `separation` whenever the space
  // allows it (Helmert coordinates). Pairwise-equidistant centers keep every
  // across-blob cohesion negative after double centering; lopsided or
  // collinear layouts can flip a pair positive and make recovery ambiguous.
  std::vector<std::vector<double>> centers(k, std::vector<double>(dims, 0.0));
  if (dims >= k - 1) {
    double edge = separation / std::sqrt(2.0);
    for (int c = 0; c < k; ++c)
      for (int j = 1; j < k; ++j) {
        double denom = std::sqrt(static_cast<double>(j) * (j + 1));
        if (c < j) centers[c][j - 1] = edge / denom;
        else if (c == j) centers[c][j - 1] = -edge * j / denom;
      }
  } else {
    // too few dimensions for a simplex; spread along axes at growing offsets
    for (int c = 0; c < k; ++c)
      centers[c][c % dims] = separation * (0.5 * (c + 1) * (c + 2));
  }
  for (int c = 0; c < k; ++c) {
    for (int p = 0; p < per_cluster; ++p) {
      int i = c * per_cluster + p;
      labels[i] = c;
      for (int d = 0; d < dims; ++d)
        f(i, d) = centers[c][d] + spread * rng.normal();
    }
  }

  Dataset d;
  d.name = "blobs";
  d.payload = Dataset::Payload::Features;
  d.features = std::move(f);
  d.labels = std::move(labels);
  return d;
}

std::string to_string(Method m) {
  switch (m) {
    case Method::ShiftedMinCut: return "shifted_min_cut";
    case Method::MinCut: return "min_cut";
    case Method::KMeans: return "kmeans";
  }
  return "unknown";
}

Method parse_method(const std::string& text) {
  if (text == "shifted_min_cut" || text == "smc") return Method::ShiftedMinCut;
  if (text == "min_cut" || text == "mincut" || text == "mc") return Method::MinCut;
  if (text == "kmeans" || text == "km") return Method::KMeans;
  throw ValidationError("unknown method '" + text +
                        "' (expected shifted_min_cut, min_cut or kmeans)");
}

namespace {

SimilarityMatrix dataset_similarities(const Dataset& data) {
  switch (data.payload) {
    case Dataset::Payload::Features:
      return distances_to_similarities(squared_euclidean_distances(*data.features));
    case Dataset::Payload::Distances:
      return distances_to_similarities(*data.distances);
    case Dataset::Payload::Similarities:
      return *data.similarities;
  }
  throw ValidationError("dataset has no payload");
}

struct RestartOutcome {
  std::vector<int> labels;
  double cost = 0.0;
  bool converged = false;
};

void finish_method(MethodResult& mr, const std::vector<RestartOutcome>& runs,
                   const Dataset& data, bool with_scores) {
  int best = 0;
  for (int r = 1; r < static_cast<int>(runs.size()); ++r)
    if (runs[r].cost < runs[best].cost) best = r;

  mr.best_restart = best;
  mr.best_cost = runs[best].cost;
  mr.best_labels = runs[best].labels;
  mr.restart_costs.reserve(runs.size());
  for (const auto& run : runs) {
    mr.restart_costs.push_back(run.cost);
    if (!run.converged) ++mr.non_converged_restarts;
  }
  int top = 1 + *std::max_element(mr.best_labels.begin(), mr.best_labels.end());
  mr.cluster_sizes.assign(top, 0);
  for (int l : mr.best_labels) ++mr.cluster_sizes[l];

  if (!with_scores) return;
  const std::vector<int>& truth = *data.labels;
  mr.best_of_cost = score_against(truth, mr.best_labels);

  ScoreTriple sum, sumsq;
  for (const auto& run : runs) {
    ScoreTriple s = score_against(truth, run.labels);
    sum.ari += s.ari;
    sum.ami += s.ami;
    sum.v += s.v;
    sumsq.ari += s.ari * s.ari;
    sumsq.ami += s.ami * s.ami;
    sumsq.v += s.v * s.v;
  }
  double nr = static_cast<double>(runs.size());
  ScoreTriple mean{sum.ari / nr, sum.ami / nr, sum.v / nr};
  auto pop_std = [&](double sq, double mu) {
    return std::sqrt(std::max(0.0, sq / nr - mu * mu));
  };
  mr.mean = mean;
  mr.stddev = ScoreTriple{pop_std(sumsq.ari, mean.ari), pop_std(sumsq.ami, mean.ami),
                          pop_std(sumsq.v, mean.v)};
}

}  // namespace

ExperimentReport run_experiment(const Dataset& data, const ExperimentSpec& spec) {
  int n = data.size();
  if (n < 2) throw ValidationError("dataset needs at least 2 objects");
  if (spec.k < 1 || spec.k > n)
    throw ValidationError("cluster count must be in [1, " + std::to_string(n) + "]");
  if (spec.restarts < 1) throw ValidationError("restarts must be at least 1");
  if (spec.methods.empty()) throw ValidationError("no methods requested");
  if (spec.with_scores && !data.labels)
    throw ValidationError("scoring requested but the dataset has no labels");

  ExperimentReport report;
  report.dataset = data.name;
  report.n = n;
  report.k = spec.k;
  report.restarts = spec.restarts;
  report.seed = spec.seed;
  report.shift = spec.shift.to_string();
  report.scored = spec.with_scores;

  std::optional<SimilarityMatrix> raw;
  for (Method method : spec.methods) {
    MethodResult mr;
    mr.method = method;
    auto t0 = Clock::now();
    std::vector<RestartOutcome> runs(spec.restarts);

    if (method == Method::KMeans) {
      if (data.payload != Dataset::Payload::Features || !data.features)
        throw ValidationError("kmeans needs a feature payload");
      for (int r = 0; r < spec.restarts; ++r) {
        KMeansResult km = kmeans(*data.features, spec.k,
                                 Rng::mix(spec.seed, static_cast<std::uint64_t>(r)));
        runs[r] = {std::move(km.labels), km.inertia, km.converged};
      }
    } else {
      if (!raw) raw = dataset_similarities(data);
      ShiftSpec shift =
          method == Method::MinCut ? ShiftSpec::none() : spec.shift;
      SimilarityMatrix s = apply_shift(*raw, shift);
      // Plain min cut differs from the search objective by the constant total
      // mass, so report it on its own scale.
      double offset = method == Method::MinCut ? total_similarity(*raw) : 0.0;

      SearchConfig cfg;
      cfg.k = spec.k;
      cfg.restarts = 1;
      cfg.max_sweeps = spec.max_sweeps;
      cfg.sweep_order = SweepOrder::ShuffledPerSweep;
      cfg.forbid_empty = true;
      for (int r = 0; r < spec.restarts; ++r) {
        Rng rng(Rng::mix(spec.seed, static_cast<std::uint64_t>(r)));
        ClusteringSolution init = initial_random_solution(n, spec.k, rng, true);
        SingleSearchResult run = local_search_from(s, init, cfg, rng);
        runs[r] = {std::move(run.labels), run.cost + offset, run.converged};
      }
    }

    finish_method(mr, runs, data, spec.with_scores);
    mr.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    report.methods.push_back(std::move(mr));
  }
  return report;
}

namespace {

ordered_json score_to_json(const ScoreTriple& s) {
  return ordered_json{{"ari", round6(s.ari)}, {"ami", round6(s.ami)},
                      {"v_measure", round6(s.v)}};
}

ScoreTriple score_from_json(const ordered_json& j) {
  ScoreTriple s;
  s.ari = j.at("ari").get<double>();
  s.ami = j.at("ami").get<double>();
  s.v = j.at("v_measure").get<double>();
  return s;
}

}  // namespace

std::string report_to_json(const ExperimentReport& r) {
  ordered_json j;
  j["schema_version"] = r.schema_version;
  j["toolkit_version"] = r.toolkit_version;
  j["dataset"] = r.dataset;
  j["n"] = r.n;
  j["k"] = r.k;
  j["restarts"] = r.restarts;
  j["seed"] = r.seed;
  j["shift"] = r.shift;
  j["scored"] = r.scored;
  j["methods"] = ordered_json::array();
  for (const MethodResult& m : r.methods) {
    ordered_json jm;
    jm["method"] = to_string(m.method);
    jm["best_cost"] = round6(m.best_cost);
    jm["best_restart"] = m.best_restart;
    jm["cluster_sizes"] = m.cluster_sizes;
    jm["non_converged_restarts"] = m.non_converged_restarts;
    jm["seconds"] = round6(m.seconds);
    if (m.best_of_cost) jm["best_of_cost"] = score_to_json(*m.best_of_cost);
    if (m.mean) jm["mean"] = score_to_json(*m.mean);
    if (m.stddev) jm["std"] = score_to_json(*m.stddev);
    jm["labels"] = m.best_labels;
    ordered_json costs = ordered_json::array();
    for (double c : m.restart_costs) costs.push_back(round6(c));
    jm["restart_costs"] = costs;
    j["methods"].push_back(std::move(jm));
  }
  return j.dump(2) + "\n";
}

std::string report_to_csv(const ExperimentReport& r) {
  std::ostringstream out;
  out << "schema_version,dataset,n,k,shift,restarts,seed,method,view,best_cost,"
         "seconds,non_converged_restarts";
  if (r.scored) out << ",ari,ami,v_measure";
  out << "\n";

  auto prefix = [&](const MethodResult& m, const char* view) {
    out << r.schema_version << ',' << r.dataset << ',' << r.n << ',' << r.k << ','
        << r.shift << ',' << r.restarts << ',' << r.seed << ','
        << to_string(m.method) << ',' << view << ',' << format6(m.best_cost) << ','
        << format6(m.seconds) << ',' << m.non_converged_restarts;
  };
  auto scores = [&](const ScoreTriple& s) {
    out << ',' << format6(s.ari) << ',' << format6(s.ami) << ',' << format6(s.v);
  };

  for (const MethodResult& m : r.methods) {
    if (!r.scored) {
      prefix(m, "cost");
      out << "\n";
      continue;
    }
    prefix(m, "best_of_cost");
    scores(*m.best_of_cost);
    out << "\n";
    prefix(m, "mean");
    scores(*m.mean);
    out << "\n";
    prefix(m, "std");
    scores(*m.stddev);
    out << "\n";
  }
  return out.str();
}

void emit_report(const ExperimentReport& r, const std::string& path,
                 ReportFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << (format == ReportFormat::Json ? report_to_json(r) : report_to_csv(r));
  if (!out) throw IoError("write failure on '" + path + "'");
}

ExperimentReport load_report_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }

  ExperimentReport r;
  try {
    r.schema_version = j.at("schema_version").get<int>();
    r.toolkit_version = j.at("toolkit_version").get<std::string>();
    r.dataset = j.at("dataset").get<std::string>();
    r.n = j.at("n").get<int>();
    r.k = j.at("k").get<int>();
    r.restarts = j.at("restarts").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.shift = j.at("shift").get<std::string>();
    r.scored = j.at("scored").get<bool>();
    for (const auto& jm : j.at("methods")) {
      MethodResult m;
      m.method = parse_method(jm.at("method").get<std::string>());
      m.best_cost = jm.at("best_cost").get<double>();
      m.best_restart = jm.at("best_restart").get<int>();
      m.cluster_sizes = jm.at("cluster_sizes").get<std::vector<int>>();
      m.non_converged_restarts = jm.at("non_converged_restarts").get<int>();
      m.seconds = jm.at("seconds").get<double>();
      if (jm.contains("best_of_cost")) m.best_of_cost = score_from_json(jm.at("best_of_cost"));
      if (jm.contains("mean")) m.mean = score_from_json(jm.at("mean"));
      if (jm.contains("std")) m.stddev = score_from_json(jm.at("std"));
      m.best_labels = jm.at("labels").get<std::vector<int>>();
      m.restart_costs = jm.at("restart_costs").get<std::vector<double>>();
      r.methods.push_back(std::move(m));
    }
  } catch (const ordered_json::exception& e) {
    throw ValidationError("'" + path + "' does not match the report schema: " +
                          e.what());
  }
  if (r.schema_version != 1)
    throw ValidationError("unsupported report schema version " +
                          std::to_string(r.schema_version));
  return r;
}

}  // namespace shiftcut
