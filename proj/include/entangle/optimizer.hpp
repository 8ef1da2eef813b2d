#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "entangle/collective.hpp"

namespace entangle {

enum class SearchMethod {
  GradientAscent,  // central-difference gradient, backtracking line search
  PatternSearch,   // derivative-free coordinate search, for use near eigenvalue crossings
};

struct OptimizerConfig {
  std::size_t restarts = 64;
  std::size_t max_iters = 2000;
  double step_tolerance = 1e-9;
  double objective_tolerance = 1e-10;
  std::uint64_t base_seed = 0;
  bool include_known_strategies = true;
  SearchMethod method = SearchMethod::GradientAscent;
  /// n = 5 evaluates the XOR rows only unless this is set.
  bool optimize_five_pairs = false;
  /// Worker threads for restarts; 0 picks the hardware concurrency.
  std::size_t threads = 1;

  void validate() const;
};

struct OptimumReport {
  std::size_t n = 0;
  double x = 0.0;
  FilterRows best_rows;
  double best_chsh = 0.0;
  double best_m = 0.0;
  double success_probability = 0.0;
  std::size_t restarts_converged = 0;
  /// (M, multiplicity), descending in M, clustered at 1e-6.
  std::vector<std::pair<double, std::size_t>> distinct_local_maxima;

  bool operator==(const OptimumReport&) const = default;
};

/// Result of one objective evaluation. A postselection that never succeeds
/// scores M = 0 and sets zero_probability.
struct ObjectiveValue {
  double m = 0.0;
  double success_probability = 0.0;
  bool zero_probability = false;
};

/// M of the postselected state for filter rows u, with Bob's rows tied by v_from_u.
ObjectiveValue evaluate_filter(const PairEnsemble& ensemble, const FilterRows& u);

/// Convenience form on Werner pairs with singlet fraction x.
double objective(std::size_t n, double x, const FilterRows& u);

OptimumReport optimize(std::size_t n, double x, const OptimizerConfig& cfg);

enum class Strategy { Xor, ControlledHadamard, Optimize };

std::string to_string(Strategy s);

struct ScanRecord {
  std::size_t n = 0;
  double x = 0.0;
  /// "xor", "controlled_hadamard" or "optimized": the rows attaining chsh_max.
  std::string strategy;
  double chsh_max = 0.0;
  double success_probability = 0.0;
};

/// One record per (n, x), sorted by (n, x). With Strategy::Optimize the
/// label names the known strategy the optimum coincides with, if any.
std::vector<ScanRecord> scan(std::vector<std::size_t> n_list, std::vector<double> x_grid,
                             const OptimizerConfig& cfg, Strategy strategy = Strategy::Optimize);

/// Standard normal deviates from a stateless counter-based generator:
/// draw k of stream `key` depends only on (key, k).
class CounterNormal {
 public:
  explicit CounterNormal(std::uint64_t key) : key_(key) {}
  double operator()();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace entangle
