#pragma once

#include <cstdint>
#include <vector>

#include "entangle/linalg.hpp"
#include "entangle/states.hpp"

namespace entangle {

/// The two retained rows of one observer's local unitary on n particles.
/// Component k of a row is indexed by the particle bits, particle 1 (the one
/// left untested) being the most significant bit.
struct FilterRows {
  std::size_t n = 1;
  RealVector u0;
  RealVector u1;

  /// Throws InvalidArgument unless both rows have length 2^n, unit norm and
  /// are orthogonal, all within 1e-10.
  void validate() const;

  bool operator==(const FilterRows&) const = default;
};

struct PostselectionResult {
  BipartiteState rho_new;
  double success_probability;  // probability that every spin-up test passes
};

inline constexpr std::size_t kMaxPairs = 6;
inline constexpr double kZeroProbabilityThreshold = 1e-14;

/// rho^(x n) regrouped from pair order (A1 B1 A2 B2 ...) to block order
/// (A1 ... An B1 ... Bn). Throws InvalidArgument unless 1 <= n <= kMaxPairs.
ComplexMatrix n_pair_state(const BipartiteState& rho_pair, std::size_t n);

/// Rows with single unit entries at 00...0 and 11...1.
FilterRows xor_rows(std::size_t n);

/// n = 3 rows u0 = (e000 + e111)/sqrt2, u1 = (e001 + e110)/sqrt2.
FilterRows controlled_hadamard_rows();

/// Bob's rows under the symmetric ansatz: V_nu,k = (-1)^(nu + popcount k) U_nu,k.
FilterRows v_from_u(const FilterRows& u);

/// The 4 x 4^n filter W = (u rows) x (v rows) acting on block order.
ComplexMatrix filter_matrix(const FilterRows& u, const FilterRows& v);

/// n copies of one pair state held in block order, prepared once so that
/// many filters can be evaluated against it.
class PairEnsemble {
 public:
  PairEnsemble(const BipartiteState& rho_pair, std::size_t n);

  std::size_t n() const { return n_; }
  const ComplexMatrix& state() const { return state_; }

  /// rho_raw = W rho W^T, renormalized. Skips the zero entries of rho but
  /// otherwise performs the same floating-point operations, in the same
  /// order, as multiply(multiply(W, rho), dagger(W)).
  /// Throws ZeroProbability if Tr rho_raw < kZeroProbabilityThreshold.
  PostselectionResult postselect(const FilterRows& u, const FilterRows& v) const;

  /// The unnormalized 4 x 4 rho_raw.
  ComplexMatrix project(const FilterRows& u, const FilterRows& v) const;

 private:
  std::size_t n_;
  ComplexMatrix state_;
  // Nonzero pattern of state_, column by column with ascending rows.
  std::vector<std::uint32_t> col_start_;
  std::vector<std::uint32_t> row_index_;
};

PostselectionResult postselect(const BipartiteState& rho_pair, std::size_t n,
                               const FilterRows& u, const FilterRows& v);

/// Reference path: literal dense product W rho W^dagger on n_pair_state.
ComplexMatrix project_dense(const BipartiteState& rho_pair, std::size_t n, const FilterRows& u,
                            const FilterRows& v);

}  // namespace entangle
