#include "entangle/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "entangle/bell.hpp"
#include "entangle/errors.hpp"

namespace entangle {

namespace {

constexpr double kFiniteDifferenceStep = 1e-5;
constexpr std::size_t kMaxHalvings = 40;
constexpr double kArmijo = 1e-4;
constexpr double kClusterTolerance = 1e-6;
// A scan point is labelled with a known strategy when its M is this close to the optimum.
constexpr double kStrategyMatchTolerance = 1e-9;

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit_open(std::uint64_t bits) {
  // (0, 1]
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

// Parameters are the two rows laid end to end.
RealVector flatten(const FilterRows& u) {
  RealVector p(u.u0);
  p.insert(p.end(), u.u1.begin(), u.u1.end());
  return p;
}

FilterRows retract(std::size_t n, const RealVector& p) {
  const std::size_t len = p.size() / 2;
  auto rows = gram_schmidt({RealVector(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(len)),
                            RealVector(p.begin() + static_cast<std::ptrdiff_t>(len), p.end())});
  return {n, std::move(rows[0]), std::move(rows[1])};
}

struct LocalResult {
  FilterRows rows;
  ObjectiveValue value;
  bool converged = false;
};

class LocalSearch {
 public:
  LocalSearch(const PairEnsemble& ensemble, const OptimizerConfig& cfg)
      : ensemble_(ensemble), cfg_(cfg) {}

  LocalResult run(const FilterRows& start) const {
    return cfg_.method == SearchMethod::GradientAscent ? gradient_ascent(start)
                                                      : pattern_search(start);
  }

 private:
  // Objective on raw parameters; rank-deficient points score nothing.
  double score(const RealVector& p) const {
    try {
      return evaluate_filter(ensemble_, retract(ensemble_.n(), p)).m;
    } catch (const RankDeficient&) {
      return 0.0;
    }
  }

  LocalResult gradient_ascent(const FilterRows& start) const {
    FilterRows rows = start;
    ObjectiveValue value = evaluate_filter(ensemble_, rows);
    RealVector p = flatten(rows);
    const std::size_t dim = p.size();
    RealVector grad(dim);
    double alpha = 1.0;

    for (std::size_t iter = 0; iter < cfg_.max_iters; ++iter) {
      double grad2 = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        RealVector probe = p;
        probe[i] = p[i] + kFiniteDifferenceStep;
        const double up = score(probe);
        probe[i] = p[i] - kFiniteDifferenceStep;
        const double down = score(probe);
        grad[i] = (up - down) / (2.0 * kFiniteDifferenceStep);
        grad2 += grad[i] * grad[i];
      }
      if (grad2 == 0.0) return {rows, value, true};

      bool accepted = false;
      double trial = std::min(2.0 * alpha, 1e3);
      for (std::size_t halving = 0; halving <= kMaxHalvings; ++halving, trial *= 0.5) {
        RealVector cand = p;
        for (std::size_t i = 0; i < dim; ++i) cand[i] += trial * grad[i];
        FilterRows cand_rows;
        try {
          cand_rows = retract(ensemble_.n(), cand);
        } catch (const RankDeficient&) {
          continue;
        }
        const ObjectiveValue cand_value = evaluate_filter(ensemble_, cand_rows);
        if (cand_value.zero_probability || cand_value.m <= value.m ||
            cand_value.m < value.m + kArmijo * trial * grad2) {
          continue;
        }
        const RealVector next = flatten(cand_rows);
        double step2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) step2 += (next[i] - p[i]) * (next[i] - p[i]);
        const double gain = cand_value.m - value.m;
        p = next;
        rows = std::move(cand_rows);
        value = cand_value;
        alpha = trial;
        accepted = true;
        if (std::sqrt(step2) < cfg_.step_tolerance || gain < cfg_.objective_tolerance) {
          return {rows, value, true};
        }
        break;
      }
      if (!accepted) return {rows, value, true};
    }
    return {rows, value, false};
  }

  LocalResult pattern_search(const FilterRows& start) const {
    FilterRows rows = start;
    ObjectiveValue value = evaluate_filter(ensemble_, rows);
    RealVector p = flatten(rows);
    double delta = 0.25;

    for (std::size_t iter = 0; iter < cfg_.max_iters; ++iter) {
      bool improved = false;
      for (std::size_t i = 0; i < p.size(); ++i) {
        for (const double sign : {1.0, -1.0}) {
          RealVector cand = p;
          cand[i] += sign * delta;
          FilterRows cand_rows;
          try {
            cand_rows = retract(ensemble_.n(), cand);
          } catch (const RankDeficient&) {
            continue;
          }
          const ObjectiveValue cand_value = evaluate_filter(ensemble_, cand_rows);
          if (!cand_value.zero_probability && cand_value.m > value.m) {
            p = flatten(cand_rows);
            rows = std::move(cand_rows);
            value = cand_value;
            improved = true;
            break;
          }
        }
      }
      if (!improved) {
        delta *= 0.5;
        if (delta < cfg_.step_tolerance) return {rows, value, true};
      }
    }
    return {rows, value, false};
  }

  const PairEnsemble& ensemble_;
  const OptimizerConfig& cfg_;
};

FilterRows random_start(std::size_t n, std::uint64_t seed) {
  CounterNormal normal(seed);
  const std::size_t len = std::size_t{1} << n;
  for (;;) {
    RealVector p(2 * len);
    for (auto& v : p) v = normal();
    try {
      return retract(n, p);
    } catch (const RankDeficient&) {
      // Measure-zero event; draw again from the same stream.
    }
  }
}

std::vector<std::pair<double, std::size_t>> cluster(std::vector<double> values) {
  std::sort(values.begin(), values.end(), std::greater<>());
  std::vector<std::pair<double, std::size_t>> out;
  for (double v : values) {
    if (!out.empty() && out.back().first - v <= kClusterTolerance) {
      ++out.back().second;
    } else {
      out.emplace_back(v, 1);
    }
  }
  return out;
}

}  // namespace

double CounterNormal::operator()() {
  // Box-Muller on two uniforms drawn from a hash of (key, counter).
  const std::uint64_t base = mix64(key_) ^ mix64(counter_++ * 0x632be59bd9b4e019ULL + 1);
  const double u1 = unit_open(mix64(base));
  const double u2 = unit_open(mix64(base ^ 0xd1b54a32d192ed03ULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void OptimizerConfig::validate() const {
  if (restarts < 1) throw InvalidArgument("OptimizerConfig: restarts must be >= 1");
  if (!(step_tolerance > 0.0) || !(objective_tolerance > 0.0)) {
    throw InvalidArgument("OptimizerConfig: tolerances must be positive");
  }
}

ObjectiveValue evaluate_filter(const PairEnsemble& ensemble, const FilterRows& u) {
  try {
    const auto result = ensemble.postselect(u, v_from_u(u));
    return {t_matrix(result.rho_new).m_value, result.success_probability, false};
  } catch (const ZeroProbability&) {
    return {0.0, 0.0, true};
  }
}

double objective(std::size_t n, double x, const FilterRows& u) {
  return evaluate_filter(PairEnsemble(werner_state({x}), n), u).m;
}

OptimumReport optimize(std::size_t n, double x, const OptimizerConfig& cfg) {
  cfg.validate();
  if (n < 1 || n > 5) throw InvalidArgument("optimize: n must be in [1, 5]");
  const PairEnsemble ensemble(werner_state({x}), n);

  std::vector<FilterRows> starts;
  const bool xor_only = n == 5 && !cfg.optimize_five_pairs;
  if (cfg.include_known_strategies || xor_only) starts.push_back(xor_rows(n));
  if (cfg.include_known_strategies && n == 3) starts.push_back(controlled_hadamard_rows());
  const std::size_t known = starts.size();

  std::vector<LocalResult> results;
  if (xor_only) {
    results.push_back({starts.front(), evaluate_filter(ensemble, starts.front()), true});
  } else {
    for (std::size_t r = 0; r < cfg.restarts; ++r) starts.push_back(random_start(n, cfg.base_seed + r));
    results.resize(starts.size());

    const LocalSearch search(ensemble, cfg);
    std::size_t workers = cfg.threads == 0 ? std::thread::hardware_concurrency() : cfg.threads;
    workers = std::clamp<std::size_t>(workers, 1, starts.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i = next++; i < starts.size(); i = next++) results[i] = search.run(starts[i]);
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
  }

  OptimumReport report;
  report.n = n;
  report.x = x;
  std::size_t best = 0;
  std::vector<double> finals;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].value.m > results[best].value.m) best = i;
    if (i >= known && results[i].converged) ++report.restarts_converged;
    finals.push_back(results[i].value.m);
  }
  report.best_rows = results[best].rows;
  report.best_m = results[best].value.m;
  report.best_chsh = 2.0 * std::sqrt(report.best_m);
  report.success_probability = results[best].value.success_probability;
  report.distinct_local_maxima = cluster(std::move(finals));
  return report;
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Xor: return "xor";
    case Strategy::ControlledHadamard: return "controlled_hadamard";
    case Strategy::Optimize: return "optimized";
  }
  return "unknown";
}

std::vector<ScanRecord> scan(std::vector<std::size_t> n_list, std::vector<double> x_grid,
                             const OptimizerConfig& cfg, Strategy strategy) {
  for (double x : x_grid) {
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("scan: grid values must lie in [0, 1]");
  }
  std::sort(n_list.begin(), n_list.end());
  std::sort(x_grid.begin(), x_grid.end());
  for (std::size_t n : n_list) {
    if (n < 1 || n > 5) throw InvalidArgument("scan: n must be in [1, 5]");
    if (strategy == Strategy::ControlledHadamard && n != 3) {
      throw InvalidArgument("scan: the controlled-Hadamard strategy is defined for n = 3 only");
    }
  }

  std::vector<ScanRecord> records;
  for (std::size_t n : n_list) {
    for (double x : x_grid) {
      ScanRecord rec{n, x, to_string(strategy), 0.0, 0.0};
      if (strategy == Strategy::Optimize) {
        const OptimumReport opt = optimize(n, x, cfg);
        const PairEnsemble ensemble(werner_state({x}), n);
        const double xor_m = evaluate_filter(ensemble, xor_rows(n)).m;
        if (opt.best_m <= xor_m + kStrategyMatchTolerance) {
          rec.strategy = to_string(Strategy::Xor);
        } else if (n == 3 && opt.best_m <= evaluate_filter(ensemble, controlled_hadamard_rows()).m +
                                               kStrategyMatchTolerance) {
          rec.strategy = to_string(Strategy::ControlledHadamard);
        }
        rec.chsh_max = opt.best_chsh;
        rec.success_probability = opt.success_probability;
      } else {
        const FilterRows rows = strategy == Strategy::Xor ? xor_rows(n) : controlled_hadamard_rows();
        const auto value = evaluate_filter(PairEnsemble(werner_state({x}), n), rows);
        rec.chsh_max = 2.0 * std::sqrt(value.m);
        rec.success_probability = value.success_probability;
      }
      records.push_back(std::move(rec));
    }
  }
  return records;
}

}  // namespace entangle
