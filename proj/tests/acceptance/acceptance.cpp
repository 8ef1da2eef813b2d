// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset. Exit status is non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "entangle/bell.hpp"
#include "entangle/collective.hpp"
#include "entangle/optimizer.hpp"
#include "entangle/separability.hpp"
#include "entangle/states.hpp"
#include "entangle/thresholds.hpp"
#include "test_support.hpp"

using namespace entangle;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double v, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Outcome werner_spectrum() {
  double worst = 0.0;
  for (int k = 0; k <= 10; ++k) {
    const double x = 0.1 * k;
    const auto ev = ppt_check(werner_state({x})).eigenvalues;
    std::vector<double> expected{(1 + x) / 4, (1 + x) / 4, (1 + x) / 4, (1 - 3 * x) / 4};
    std::sort(expected.begin(), expected.end());
    for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(ev[i] - expected[i]));
  }
  return {worst <= 1e-10, "max deviation " + fmt(worst, 3)};
}

Outcome werner_thresholds() {
  const StateFamily family = [](double x) { return werner_state({x}); };
  auto bisect = [](const std::function<bool(double)>& f) { return bisect_flip(f, 0.0, 1.0, 1e-7); };
  const double ppt = bisect([&](double x) { return !ppt_check(family(x)).is_ppt; });
  const double a2 = bisect([&](double x) { return alpha2_check(family(x)).flags_inseparable; });
  const double bell = bisect([&](double x) { return t_matrix(family(x)).chsh_max > 2.0; });
  const bool ok = std::abs(ppt - 1.0 / 3) <= 1e-6 && std::abs(a2 - 1 / std::sqrt(3.0)) <= 1e-6 &&
                  std::abs(bell - 1 / std::sqrt(2.0)) <= 1e-6;
  return {ok, "ppt " + fmt(ppt, 8) + ", alpha2 " + fmt(a2, 8) + ", chsh " + fmt(bell, 8)};
}

Outcome gisin_thresholds() {
  Outcome out;
  std::ostringstream detail;
  for (int k = 1; k <= 5; ++k) {
    const double g = 0.1 * k;
    const StateFamily family = [g](double x) { return gisin_state(gisin_with_product(x, g)); };
    const double ppt = bisect_flip([&](double x) { return !ppt_check(family(x)).is_ppt; }, 0.0, 1.0, 1e-7);
    const double expected = 1 / (1 + 2 * g);
    const bool ordered_closed_forms = expected <= 1 / (1 + 2 * g * (std::sqrt(2.0) - 1));
    const auto bell = chsh_threshold(family);
    const bool below = !bell || ppt < *bell;
    const bool ok = std::abs(ppt - expected) <= 1e-6 && ordered_closed_forms && below;
    out.pass = out.pass && ok;
    detail << "|ab|=" << g << ": ppt " << fmt(ppt, 8) << " chsh " << (bell ? fmt(*bell, 8) : "none")
           << (k < 5 ? "; " : "");
  }
  out.detail = detail.str();
  return out;
}

Outcome polarized_negativity() {
  double worst = -1.0;
  for (double x : {0.001, 0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}) {
    worst = std::max(worst, ppt_check(singlet_plus_polarized(x)).min_eigenvalue);
  }
  return {worst < -1e-12, "largest min eigenvalue " + fmt(worst, 4)};
}

Outcome headline_five_pairs() {
  const auto rows = xor_rows(5);
  const auto r = postselect(werner_state({0.5}), 5, rows, v_from_u(rows));
  const double chsh = t_matrix(r.rho_new).chsh_max;
  return {std::abs(chsh - 2.0087) <= 1e-3,
          "chsh_max " + fmt(chsh) + " (target 2.0087 +/- 1e-3), p = " + fmt(r.success_probability)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const auto s = werner_state({ux(rng)});
    const auto u = testing::random_rows(n, rng);
    const auto v = testing::random_rows(n, rng);
    const auto dense = project_dense(s, n, u, v);
    const auto brute = testing::brute_force_projection(s.rho(), n, u, v);
    const double p_dense = trace(dense).real();
    const double p_brute = trace(brute).real();
    worst = std::max(worst, std::abs(p_dense - p_brute));
    worst = std::max(worst, max_abs_diff(dense * (1 / p_dense), brute * (1 / p_brute)));
    // The library's postselect must agree with both.
    const auto lib = postselect(s, n, u, v);
    worst = std::max(worst, std::abs(lib.success_probability - p_brute));
    worst = std::max(worst, max_abs_diff(lib.rho_new.rho(), brute * (1 / p_brute)));
  }
  return {worst <= 1e-10, "max deviation " + fmt(worst, 3)};
}

OptimizerConfig config(std::size_t restarts) {
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.base_seed = 20240601;
  cfg.threads = 0;
  return cfg;
}

Outcome known_optima() {
  Outcome out;
  std::ostringstream detail;
  for (double x : {0.3, 0.5, 0.7, 0.9}) {
    const auto r = optimize(2, x, config(64));
    const double xor_chsh = 2 * std::sqrt(objective(2, x, xor_rows(2)));
    out.pass = out.pass && std::abs(r.best_chsh - xor_chsh) <= 1e-6;
    detail << "n=2 x=" << x << ": " << fmt(r.best_chsh) << " vs xor " << fmt(xor_chsh) << "; ";
  }
  const auto r3 = optimize(3, 0.7, config(64));
  const double ch = 2 * std::sqrt(objective(3, 0.7, controlled_hadamard_rows()));
  out.pass = out.pass && std::abs(r3.best_chsh - ch) <= 1e-5;
  detail << "n=3 x=0.7: " << fmt(r3.best_chsh) << " vs controlled-Hadamard " << fmt(ch);
  out.detail = detail.str();
  return out;
}

// First grid point at which the optimized value strictly beats XOR.
std::optional<double> crossover(std::size_t n, std::size_t restarts) {
  for (int k = 0; k <= 40; ++k) {
    const double x = 0.45 + 0.005 * k;
    const double xor_m = objective(n, x, xor_rows(n));
    const auto r = optimize(n, x, config(restarts));
    if (r.best_m > xor_m + 1e-9) return x;
  }
  return std::nullopt;
}

Outcome strategy_crossovers() {
  const auto c3 = crossover(3, 32);
  const auto c4 = crossover(4, 32);
  const bool ok = c3 && std::abs(*c3 - 0.57) <= 0.02 && c4 && std::abs(*c4 - 0.52) <= 0.02;
  return {ok, "n=3 switch at " + (c3 ? fmt(*c3, 4) : "none") + ", n=4 switch at " +
                  (c4 ? fmt(*c4, 4) : "none")};
}

Outcome tensor_closure() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  const std::vector<std::size_t> perm{0, 2, 1, 3};
  double min_ev = 1.0, worst = 0.0;
  int made = 0;
  while (made < 50) {
    // Random state pulled toward the maximally mixed one until it is PPT.
    ComplexMatrix rho = testing::random_density(4, rng);
    const double w = ux(rng);
    rho = rho * w + ComplexMatrix::identity(4) * ((1 - w) / 4);
    const BipartiteState s(2, 2, rho);
    if (!ppt_check(s).is_ppt) continue;
    ++made;
    const BipartiteState joint(4, 4, permute_qubits(kron(rho, rho), perm));
    const auto report = ppt_check(joint);
    min_ev = std::min(min_ev, report.min_eigenvalue);
    const auto sigma = partial_transpose(s);
    worst = std::max(worst, max_abs_diff(report.sigma, permute_qubits(kron(sigma, sigma), perm)));
  }
  return {min_ev >= -1e-9 && worst <= 1e-12,
          "min eigenvalue " + fmt(min_ev, 4) + ", max entry deviation " + fmt(worst, 3)};
}

Outcome local_unitary_invariance() {
  std::mt19937_64 rng(78);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = testing::random_state(2, 2, rng);
    const auto u = kron(testing::random_unitary(2, rng), testing::random_unitary(2, rng));
    ComplexMatrix r = u * s.rho() * dagger(u);
    r = (r + dagger(r)) * 0.5;
    const auto before = ppt_check(s).eigenvalues;
    const auto after = ppt_check(BipartiteState(2, 2, r)).eigenvalues;
    for (std::size_t k = 0; k < 4; ++k) worst = std::max(worst, std::abs(before[k] - after[k]));
  }
  return {worst <= 1e-9, "max deviation " + fmt(worst, 3)};
}

Outcome monotone_in_n() {
  std::vector<double> best;
  for (std::size_t n = 1; n <= 4; ++n) best.push_back(optimize(n, 0.5, config(32)).best_chsh);
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < best.size(); ++i) {
    if (i > 0 && best[i] < best[i - 1]) ok = false;
    detail += "n=" + std::to_string(i + 1) + ": " + fmt(best[i]) + (i + 1 < best.size() ? ", " : "");
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "Werner partial-transpose spectrum", 1, werner_spectrum},
      {2, "Werner criterion thresholds", 1, werner_thresholds},
      {3, "Gisin-type PPT thresholds", 5, gisin_thresholds},
      {4, "singlet plus polarized pair is NPT for x > 0", 1, polarized_negativity},
      {5, "five-pair XOR headline value", 10, headline_five_pairs},
      {6, "postselection oracle equivalence", 30, oracle_equivalence},
      {7, "optimizer recovers known optima", 300, known_optima},
      {8, "strategy crossovers", 900, strategy_crossovers},
      {9, "tensor closure of PPT", 10, tensor_closure},
      {10, "local-unitary invariance", 5, local_unitary_invariance},
      {11, "best value nondecreasing in n at x = 0.5", 120, monotone_in_n},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s %2d %s [%.2f s of %.0f s]: %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                c.budget_seconds, o.detail.c_str(), in_time ? "" : " (over time budget)");
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
