#include "shiftcut/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

namespace shiftcut {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// One pass over the objects in `order`. For each object the similarity row is
// folded into per-cluster sums once, so every candidate move costs O(1) after
// an O(n) scan. Returns the number of accepted moves; cost and trajectory are
// updated in place.
long sweep_once(const SimilarityMatrix& s, std::vector<int>& labels,
                std::vector<int>& sizes, int k, bool forbid_empty,
                double accept_threshold, const std::vector<int>& order,
                double& cost, std::vector<double>& trajectory,
                std::vector<double>& cluster_sum) {
  int n = s.size();
  long accepted = 0;
  for (int o : order) {
    int cur = labels[o];
    if (forbid_empty && sizes[cur] == 1) continue;

    std::fill(cluster_sum.begin(), cluster_sum.end(), 0.0);
    const double* row = s.row(o);
    for (int i = 0; i < n; ++i)
      if (i != o) cluster_sum[labels[i]] += row[i];

    // delta for moving o from cur to t: 2 * (sum_cur - sum_t). Exact ties
    // resolve to the lowest cluster id because later equal deltas never
    // replace the incumbent.
    int best_t = -1;
    double best_delta = -accept_threshold;
    for (int t = 0; t < k; ++t) {
      if (t == cur) continue;
      double delta = 2.0 * (cluster_sum[cur] - cluster_sum[t]);
      if (delta < best_delta) {
        best_delta = delta;
        best_t = t;
      }
    }
    if (best_t < 0) continue;

#ifndef NDEBUG
    {
      ClusteringSolution before(labels, k);
      double ref = move_delta(s, before, o, best_t);
      double scale = std::max(1.0, std::fabs(cost));
      if (std::fabs(ref - best_delta) > 1e-9 * scale)
        throw ConsistencyError("sweep delta " + std::to_string(best_delta) +
                               " disagrees with move_delta " + std::to_string(ref));
    }
#endif

    labels[o] = best_t;
    --sizes[cur];
    ++sizes[best_t];
    cost += best_delta;
    trajectory.push_back(cost);
    ++accepted;
  }
  return accepted;
}

}  // namespace

ClusteringSolution initial_random_solution(int n, int k, Rng& rng,
                                           bool forbid_empty) {
  if (n < 1) throw ValidationError("need at least one object");
  if (k < 1) throw ValidationError("cluster count must be at least 1");
  if (k > n)
    throw ValidationError("cannot place " + std::to_string(k) +
                          " clusters on " + std::to_string(n) + " objects");

  std::vector<int> labels(n);
  std::vector<int> sizes(k, 0);
  for (int i = 0; i < n; ++i) {
    labels[i] = static_cast<int>(rng.below(static_cast<std::uint32_t>(k)));
    ++sizes[labels[i]];
  }
  if (forbid_empty) {
    for (int c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      // Donate a uniformly chosen object from the clusters that can spare one.
      std::vector<int> eligible;
      for (int i = 0; i < n; ++i)
        if (sizes[labels[i]] > 1) eligible.push_back(i);
      int pick = eligible[rng.below(static_cast<std::uint32_t>(eligible.size()))];
      --sizes[labels[pick]];
      labels[pick] = c;
      ++sizes[c];
    }
  }
  return ClusteringSolution(std::move(labels), k);
}

double move_delta(const SimilarityMatrix& s, const ClusteringSolution& c,
                  int object, int to_cluster) {
  int n = s.size();
  if (n != c.size()) throw ValidationError("matrix and solution sizes differ");
  if (object < 0 || object >= n)
    throw ValidationError("object index " + std::to_string(object) + " out of range");
  if (to_cluster < 0 || to_cluster >= c.k())
    throw ValidationError("target cluster " + std::to_string(to_cluster) +
                          " out of range");
  int cur = c.label(object);
  if (to_cluster == cur) return 0.0;

  double sum_cur = 0.0, sum_to = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == object) continue;
    double w = s(i, object) + s(object, i);
    if (c.label(i) == cur)
      sum_cur += w;
    else if (c.label(i) == to_cluster)
      sum_to += w;
  }
  return sum_cur - sum_to;
}

SingleSearchResult local_search_from(const SimilarityMatrix& s,
                                     const ClusteringSolution& initial,
                                     const SearchConfig& config, Rng& rng) {
  int n = s.size();
  if (initial.size() != n) throw ValidationError("matrix and solution sizes differ");
  if (initial.k() != config.k) throw ValidationError("initial solution has wrong k");
  if (config.max_sweeps < 1) throw ValidationError("max_sweeps must be at least 1");
  if (!config.fixed_order.empty()) {
    if (static_cast<int>(config.fixed_order.size()) != n)
      throw ValidationError("fixed_order must list every object exactly once");
    std::vector<char> seen(n, 0);
    for (int o : config.fixed_order) {
      if (o < 0 || o >= n || seen[o])
        throw ValidationError("fixed_order must be a permutation of 0.." +
                              std::to_string(n - 1));
      seen[o] = 1;
    }
  }

  SingleSearchResult res;
  res.labels = initial.labels();
  std::vector<int> sizes = initial.cluster_sizes();
  res.cost = shifted_min_cut_cost(s, initial);
  res.trajectory.push_back(res.cost);

  double threshold = kAcceptTolerance * n * s.max_abs();
  std::vector<int> order;
  if (config.sweep_order == SweepOrder::Fixed && !config.fixed_order.empty()) {
    order = config.fixed_order;
  } else {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
  }
  std::vector<double> cluster_sum(config.k, 0.0);

  for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
    if (config.sweep_order == SweepOrder::ShuffledPerSweep) rng.shuffle(order);
    auto t0 = Clock::now();
    long accepted = sweep_once(s, res.labels, sizes, config.k, config.forbid_empty,
                               threshold, order, res.cost, res.trajectory,
                               cluster_sum);
    res.sweep_seconds.push_back(seconds_since(t0));
    ++res.sweeps;
    res.moves += accepted;
    if (accepted == 0) {
      res.converged = true;
      break;
    }
  }
  return res;
}

SearchReport local_search(const SimilarityMatrix& s, const SearchConfig& config) {
  if (config.restarts < 1) throw ValidationError("restarts must be at least 1");
  if (config.k < 1) throw ValidationError("cluster count must be at least 1");
  if (config.k > s.size())
    throw ValidationError("more clusters than objects");

  SearchReport report;
  report.per_restart_final_costs.reserve(config.restarts);
  report.all_converged = true;

  for (int r = 0; r < config.restarts; ++r) {
    Rng rng(Rng::mix(config.seed, static_cast<std::uint64_t>(r)));
    ClusteringSolution init =
        initial_random_solution(s.size(), config.k, rng, config.forbid_empty);
    SingleSearchResult run = local_search_from(s, init, config, rng);

    report.per_restart_final_costs.push_back(run.cost);
    report.sweeps_used += run.sweeps;
    report.moves_accepted += run.moves;
    report.sweep_wall_times.insert(report.sweep_wall_times.end(),
                                   run.sweep_seconds.begin(),
                                   run.sweep_seconds.end());
    report.restart_converged.push_back(run.converged ? 1 : 0);
    if (!run.converged) report.all_converged = false;

    if (r == 0 || run.cost < report.best_cost) {
      report.best_cost = run.cost;
      report.best_labels = std::move(run.labels);
      report.best_restart = r;
      report.cost_trajectory = std::move(run.trajectory);
    }
  }
  return report;
}

bool is_local_optimum(const SimilarityMatrix& s, const std::vector<int>& labels,
                      int k, bool forbid_empty) {
  ClusteringSolution c(labels, k);
  std::vector<int> sizes = c.cluster_sizes();
  double threshold = kAcceptTolerance * s.size() * s.max_abs();
  for (int o = 0; o < s.size(); ++o) {
    if (forbid_empty && sizes[c.label(o)] == 1) continue;
    for (int t = 0; t < k; ++t) {
      if (t == c.label(o)) continue;
      if (move_delta(s, c, o, t) < -threshold) return false;
    }
  }
  return true;
}

void enumerate_partitions(int n, int max_k, bool exact_k,
                          const std::function<void(const std::vector<int>&)>& visit) {
  if (n < 1) throw ValidationError("need at least one object");
  if (max_k < 1) throw ValidationError("cluster count must be at least 1");

  // Restricted growth strings: labels[0] = 0 and each later label is at most
  // one past the running maximum, capped at max_k - 1. This walks every
  // partition exactly once with canonical block numbering.
  std::vector<int> labels(n, 0);
  std::vector<int> prefix_max(n, 0);
  while (true) {
    int used = prefix_max[n - 1] + 1;
    if (!exact_k || used == max_k) visit(labels);

    int i = n - 1;
    while (i > 0) {
      int cap = std::min(prefix_max[i - 1] + 1, max_k - 1);
      if (labels[i] < cap) break;
      --i;
    }
    if (i == 0) return;
    ++labels[i];
    prefix_max[i] = std::max(prefix_max[i - 1], labels[i]);
    for (int j = i + 1; j < n; ++j) {
      labels[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
}

BruteForceResult brute_force_optimum(const SimilarityMatrix& s, int k,
                                     bool require_exact_k) {
  int n = s.size();
  if (n < 1) throw ValidationError("empty matrix");
  if (n > 12)
    throw ValidationError("exhaustive search is capped at 12 objects, got " +
                          std::to_string(n));
  if (k < 1) throw ValidationError("cluster count must be at least 1");
  if (require_exact_k && k > n) throw ValidationError("more clusters than objects");

  BruteForceResult best;
  bool have = false;
  enumerate_partitions(n, std::min(k, n), require_exact_k,
                       [&](const std::vector<int>& labels) {
                         ++best.partitions_checked;
                         ClusteringSolution c(labels, k);
                         double cost = shifted_min_cut_cost(s, c);
                         if (!have || cost < best.cost) {
                           best.cost = cost;
                           best.labels = labels;
                           have = true;
                         }
                       });
  return best;
}

std::vector<TimingRow> sweep_timing_probe(const std::vector<int>& n_list, int k,
                                          std::uint64_t seed) {
  std::vector<TimingRow> rows;
  for (int n : n_list) {
    if (n < 2 || n > 4096)
      throw ValidationError("timing probe size must be in [2, 4096]");
    if (k > n) throw ValidationError("more clusters than objects");

    Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(n)));
    SquareMatrix m(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double v = rng.uniform(-0.5, 0.5);
        m(i, j) = v;
        m(j, i) = v;
      }
    SimilarityMatrix s(std::move(m));
    ClusteringSolution init = initial_random_solution(n, k, rng, true);
    double threshold = kAcceptTolerance * n * s.max_abs();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    // Median of several samples; each sample replays the same sweep from the
    // same start enough times to outlast timer noise.
    auto one_sweep = [&]() {
      std::vector<int> labels = init.labels();
      std::vector<int> sizes = init.cluster_sizes();
      std::vector<double> cluster_sum(k, 0.0);
      std::vector<double> trajectory;
      double cost = 0.0;
      sweep_once(s, labels, sizes, k, true, threshold, order, cost, trajectory,
                 cluster_sum);
    };

    one_sweep();  // warm caches
    auto t0 = Clock::now();
    one_sweep();
    double estimate = std::max(seconds_since(t0), 1e-9);
    int reps = std::max(1, static_cast<int>(std::ceil(0.05 / estimate)));

    std::vector<double> samples;
    for (int sample = 0; sample < 5; ++sample) {
      auto t1 = Clock::now();
      for (int r = 0; r < reps; ++r) one_sweep();
      samples.push_back(seconds_since(t1) / reps);
    }
    std::sort(samples.begin(), samples.end());
    rows.push_back({n, samples[samples.size() / 2]});
  }
  return rows;
}

}  // namespace shiftcut
