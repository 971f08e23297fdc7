// Command line front end for the clustering toolkit: run experiments, query
// the exhaustive oracle, exercise the shift-invariance battery, time sweeps
// and generate synthetic datasets.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "shiftcut/invariance.hpp"
#include "shiftcut/optimizer.hpp"
#include "shiftcut/workbench.hpp"

namespace {

using namespace shiftcut;

struct InputArgs {
  std::string path;
  std::string kind = "features";
  bool labeled = false;
};

void add_input_flags(CLI::App* cmd, InputArgs& in) {
  cmd->add_option("--input", in.path, "CSV file to load")->required();
  cmd->add_option("--kind", in.kind,
                  "payload type: features, distances or similarities")
      ->check(CLI::IsMember({"features", "distances", "similarities"}));
  cmd->add_flag("--labels", in.labeled, "last CSV column holds reference labels");
}

Dataset load_input(const InputArgs& in) {
  return load_csv(in.path, parse_payload(in.kind), in.labeled);
}

std::vector<Method> parse_method_list(const std::string& csv) {
  std::vector<Method> out;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) out.push_back(parse_method(token));
  if (out.empty()) throw ValidationError("no methods given");
  return out;
}

int run_cluster(const InputArgs& in, const std::string& shift_text,
                const std::string& methods_text, int k, int restarts,
                std::uint64_t seed, int max_sweeps, const std::string& report_path,
                const std::string& format_text) {
  Dataset data = load_input(in);

  ExperimentSpec spec;
  spec.shift = ShiftSpec::parse(shift_text);
  spec.k = k;
  spec.restarts = restarts;
  spec.seed = seed;
  spec.max_sweeps = max_sweeps;
  spec.methods = parse_method_list(methods_text);
  spec.with_scores = data.labels.has_value();

  ExperimentReport report = run_experiment(data, spec);

  for (const MethodResult& m : report.methods) {
    std::printf("%-16s best cost %.6g (restart %d), sizes [", to_string(m.method).c_str(),
                m.best_cost, m.best_restart);
    for (std::size_t i = 0; i < m.cluster_sizes.size(); ++i)
      std::printf("%s%d", i ? ", " : "", m.cluster_sizes[i]);
    std::printf("]");
    if (m.best_of_cost)
      std::printf(", ari %.4f ami %.4f v %.4f", m.best_of_cost->ari,
                  m.best_of_cost->ami, m.best_of_cost->v);
    if (m.non_converged_restarts > 0)
      std::printf(", %d restart(s) hit the sweep limit", m.non_converged_restarts);
    std::printf("\n");
  }

  if (!report_path.empty()) {
    ReportFormat fmt = format_text == "csv" ? ReportFormat::Csv : ReportFormat::Json;
    emit_report(report, report_path, fmt);
    std::printf("report written to %s\n", report_path.c_str());
  }
  return 0;
}

int run_oracle(const InputArgs& in, const std::string& shift_text, int k,
               bool exact_k) {
  Dataset data = load_input(in);
  SimilarityMatrix x = [&] {
    switch (data.payload) {
      case Dataset::Payload::Features:
        return distances_to_similarities(squared_euclidean_distances(*data.features));
      case Dataset::Payload::Distances:
        return distances_to_similarities(*data.distances);
      default:
        return *data.similarities;
    }
  }();
  SimilarityMatrix s = apply_shift(x, ShiftSpec::parse(shift_text));

  BruteForceResult best = brute_force_optimum(s, k, exact_k);
  std::printf("optimum cost %.12g over %ld partitions\nlabels:", best.cost,
              best.partitions_checked);
  for (int l : best.labels) std::printf(" %d", l);
  std::printf("\n");
  return 0;
}

int run_invariance(std::uint64_t seed, int n, double alpha) {
  if (n < 4 || n > 64) throw ValidationError("size must be in [4, 64]");
  Rng rng(seed);

  // A seeded feature cloud drives every check so failures are reproducible.
  FeatureMatrix f(n, 3);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c) f(i, c) = rng.uniform(0.0, 10.0);
  DistanceMatrix d = squared_euclidean_distances(f);
  SimilarityMatrix x = distances_to_similarities(d);

  bool all_ok = true;
  auto verdict = [&](const char* name, bool ok, double residual) {
    std::printf("%-34s %s (max residual %.3g)\n", name, ok ? "PASS" : "FAIL", residual);
    all_ok = all_ok && ok;
  };

  const std::pair<const char*, LinkageCriterion> linkage_checks[] = {
      {"linkage/single", LinkageCriterion::Single},
      {"linkage/complete", LinkageCriterion::Complete},
      {"linkage/average", LinkageCriterion::Average}};
  for (auto [name, crit] : linkage_checks) {
    LinkageShiftVerdict v = check_linkage_shift_invariance(d, alpha, crit);
    verdict(name, v.sequence_identical && v.max_height_residual <= 1e-10,
            v.max_height_residual);
  }

  std::vector<double> shift = {alpha, -2.0 * alpha, 0.5 * alpha};
  const std::pair<const char*, FeatureMethod> feature_checks[] = {
      {"features/kmeans", FeatureMethod::KMeans},
      {"features/centroid", FeatureMethod::Centroid},
      {"features/ward", FeatureMethod::Ward}};
  for (auto [name, method] : feature_checks) {
    FeatureShiftVerdict v = check_feature_shift_invariance(f, shift, method, 3, seed);
    verdict(name, v.identical && v.max_height_residual <= 1e-8, v.max_height_residual);
  }

  {
    std::vector<double> w(n);
    double total = 0.0;
    for (double& wi : w) total += (wi = rng.uniform(0.1, 1.0));
    for (double& wi : w) wi /= total;
    QuadraticPair q = quadratic_objective(x, CharacteristicVector(std::move(w)), alpha);
    double residual = std::fabs(q.shifted - (q.unshifted + alpha));
    verdict("quadratic/simplex-shift", residual <= 1e-10 * std::max(1.0, std::fabs(q.unshifted)),
            residual);
  }

  {
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = static_cast<int>(rng.below(3));
    for (int c = 0; c < 3; ++c) labels[c] = c;  // keep every cluster populated
    ClusteringSolution c(labels, 3);
    ShiftResiduals r = analytic_shift_constants(x, c, alpha);
    double scale = std::max(1.0, x.max_abs() * n);
    verdict("costs/ratio-assoc-constant", std::fabs(r.ratio_assoc) <= 1e-9 * scale,
            std::fabs(r.ratio_assoc));
    verdict("costs/ratio-cut-constant", std::fabs(r.ratio_cut) <= 1e-9 * scale,
            std::fabs(r.ratio_cut));
  }

  return all_ok ? 0 : 1;
}

int run_bench(const std::string& sizes_text, int k, std::uint64_t seed) {
  std::vector<int> sizes;
  std::stringstream ss(sizes_text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      sizes.push_back(std::stoi(token));
    } catch (const std::exception&) {
      throw ValidationError("bad size '" + token + "'");
    }
  }
  if (sizes.empty()) throw ValidationError("no sizes given");

  std::vector<TimingRow> rows = sweep_timing_probe(sizes, k, seed);
  std::printf("%8s %16s %8s\n", "n", "sec/sweep", "ratio");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 0)
      std::printf("%8d %16.6g %8s\n", rows[i].n, rows[i].seconds_per_sweep, "-");
    else
      std::printf("%8d %16.6g %8.2f\n", rows[i].n, rows[i].seconds_per_sweep,
                  rows[i].seconds_per_sweep / rows[i - 1].seconds_per_sweep);
  }
  return 0;
}

int run_gen(const std::string& generator, const std::string& out_path,
            std::uint64_t seed, int n_dense, int n_sparse, double dense_gap,
            double sparse_gap, double separation, int k, int per_cluster, int dims,
            double spread) {
  Dataset d;
  if (generator == "line")
    d = generate_line_dataset(n_dense, n_sparse, dense_gap, sparse_gap, separation,
                              seed);
  else if (generator == "blobs")
    d = generate_blobs(k, per_cluster, dims, spread, separation, seed);
  else
    throw ValidationError("unknown generator '" + generator + "'");
  write_features_csv(d, out_path);
  std::printf("wrote %d points to %s\n", d.size(), out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shift-regularized min cut clustering workbench"};
  app.require_subcommand(1);

  InputArgs in;
  std::string shift_text = "adaptive";
  std::string methods_text = "shifted_min_cut";
  std::string report_path, format_text = "json";
  int k = 2, restarts = 100, max_sweeps = 200;
  std::uint64_t seed = 0;
  bool exact_k = false;

  CLI::App* cluster = app.add_subcommand("cluster", "run clustering methods on a dataset");
  add_input_flags(cluster, in);
  cluster->add_option("--k", k, "number of clusters")->required();
  cluster->add_option("--shift", shift_text, "none, const:<alpha> or adaptive");
  cluster->add_option("--methods", methods_text,
                      "comma list of shifted_min_cut, min_cut, kmeans");
  cluster->add_option("--restarts", restarts, "independent restarts (default 100)");
  cluster->add_option("--seed", seed, "RNG seed");
  cluster->add_option("--max-sweeps", max_sweeps, "sweep limit per restart");
  cluster->add_option("--report", report_path, "write a report to this path");
  cluster->add_option("--format", format_text, "report format")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI::App* oracle = app.add_subcommand("oracle", "exhaustive optimum for tiny inputs");
  add_input_flags(oracle, in);
  oracle->add_option("--k", k, "number of clusters")->required();
  oracle->add_option("--shift", shift_text, "none, const:<alpha> or adaptive");
  oracle->add_flag("--exact-k", exact_k, "require exactly k nonempty clusters");

  int inv_n = 16;
  double inv_alpha = 2.5;
  CLI::App* invariance = app.add_subcommand(
      "invariance", "run the shift-invariance battery on a seeded instance");
  invariance->add_option("--seed", seed, "RNG seed");
  invariance->add_option("--n", inv_n, "instance size");
  invariance->add_option("--alpha", inv_alpha, "shift magnitude");

  std::string sizes_text = "256,512,1024";
  CLI::App* bench = app.add_subcommand("bench", "time one sweep at several sizes");
  bench->add_option("--sizes", sizes_text, "comma list of instance sizes");
  bench->add_option("--k", k, "number of clusters");
  bench->add_option("--seed", seed, "RNG seed");

  std::string generator = "blobs", out_path;
  int n_dense = 30, n_sparse = 30, per_cluster = 20, dims = 2;
  double dense_gap = 0.1, sparse_gap = 1.0, separation = 5.0, spread = 0.5;
  CLI::App* gen = app.add_subcommand("gen", "write a synthetic dataset as CSV");
  gen->add_option("--generator", generator, "line or blobs");
  gen->add_option("--out", out_path, "output CSV path")->required();
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--n-dense", n_dense, "line: points in the tight group");
  gen->add_option("--n-sparse", n_sparse, "line: points in the spread group");
  gen->add_option("--dense-gap", dense_gap, "line: spacing in the tight group");
  gen->add_option("--sparse-gap", sparse_gap, "line: spacing in the spread group");
  gen->add_option("--separation", separation, "gap between groups / blob centers");
  gen->add_option("--k", k, "blobs: number of blobs");
  gen->add_option("--per-cluster", per_cluster, "blobs: points per blob");
  gen->add_option("--dims", dims, "blobs: feature dimensions");
  gen->add_option("--spread", spread, "blobs: noise scale");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (cluster->parsed())
      return run_cluster(in, shift_text, methods_text, k, restarts, seed, max_sweeps,
                         report_path, format_text);
    if (oracle->parsed()) return run_oracle(in, shift_text, k, exact_k);
    if (invariance->parsed()) return run_invariance(seed, inv_n, inv_alpha);
    if (bench->parsed()) return run_bench(sizes_text, k, seed);
    if (gen->parsed())
      return run_gen(generator, out_path, seed, n_dense, n_sparse, dense_gap,
                     sparse_gap, separation, k, per_cluster, dims, spread);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return 0;
}
