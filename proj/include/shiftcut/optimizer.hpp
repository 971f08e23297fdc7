#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "shiftcut/costs.hpp"

namespace shiftcut {

enum class SweepOrder { Fixed, ShuffledPerSweep };

struct SearchConfig {
  int k = 2;
  int restarts = 1;
  int max_sweeps = 100;
  std::uint64_t seed = 0;
  SweepOrder sweep_order = SweepOrder::ShuffledPerSweep;
  bool forbid_empty = true;
  // Used only with SweepOrder::Fixed; empty means 0..n-1. Lets callers drive
  // the sweep in a custom order, e.g. to check permutation equivariance.
  std::vector<int> fixed_order;
};

/// One run of the move loop from a given start.
struct SingleSearchResult {
  std::vector<int> labels;
  double cost = 0.0;
  std::vector<double> trajectory;  // initial cost, then cost after each accepted move
  int sweeps = 0;
  long moves = 0;
  bool converged = false;  // a full sweep accepted no move
  std::vector<double> sweep_seconds;
};

struct SearchReport {
  std::vector<int> best_labels;
  double best_cost = 0.0;
  int best_restart = 0;
  std::vector<double> cost_trajectory;  // trajectory of the winning restart
  int sweeps_used = 0;                  // total across restarts
  long moves_accepted = 0;              // total across restarts
  std::vector<double> per_restart_final_costs;
  std::vector<double> sweep_wall_times;  // all restarts, concatenated
  std::vector<char> restart_converged;
  bool all_converged = false;
};

/// Uniform labels; with forbid_empty each of the k clusters is then topped up
/// with one uniformly chosen object so none starts empty. Requires k <= n.
ClusteringSolution initial_random_solution(int n, int k, Rng& rng,
                                           bool forbid_empty = true);

/// Cost change from reassigning one object, computed from the two affected
/// cluster rows in O(n): sum_(i in current, i != o)(s_io + s_oi) minus the
/// same sum over the target cluster. Zero when target == current.
double move_delta(const SimilarityMatrix& s, const ClusteringSolution& c,
                  int object, int to_cluster);

/// Moves accepted only when delta < -kAcceptTolerance * n * max|s|, so
/// rounding noise cannot masquerade as an improvement.
inline constexpr double kAcceptTolerance = 1e-12;

SingleSearchResult local_search_from(const SimilarityMatrix& s,
                                     const ClusteringSolution& initial,
                                     const SearchConfig& config, Rng& rng);

/// Restarted greedy move search on the shifted-min-cut objective. Each sweep
/// visits every object and applies the best strictly improving reassignment;
/// the run stops when a sweep accepts nothing or max_sweeps is hit.
SearchReport local_search(const SimilarityMatrix& s, const SearchConfig& config);

/// True when no single-object move (respecting forbid_empty) improves cost.
bool is_local_optimum(const SimilarityMatrix& s, const std::vector<int>& labels,
                      int k, bool forbid_empty = true);

/// Visits every partition of n objects into at most max_k blocks (exactly
/// max_k when exact_k), in canonical restricted-growth order.
void enumerate_partitions(int n, int max_k, bool exact_k,
                          const std::function<void(const std::vector<int>&)>& visit);

struct BruteForceResult {
  std::vector<int> labels;
  double cost = 0.0;
  long partitions_checked = 0;
};

/// Exhaustive minimizer of shifted_min_cut_cost over all partitions into at
/// most k clusters (exactly k when require_exact_k). Guarded to n <= 12.
BruteForceResult brute_force_optimum(const SimilarityMatrix& s, int k,
                                     bool require_exact_k = false);

struct TimingRow {
  int n = 0;
  double seconds_per_sweep = 0.0;
};

/// Measures the wall time of one full sweep on seeded random instances of the
/// given sizes (same k, same move kernel as local_search). Each n <= 4096.
std::vector<TimingRow> sweep_timing_probe(const std::vector<int>& n_list, int k,
                                          std::uint64_t seed);

}  // namespace shiftcut
