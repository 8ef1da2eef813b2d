#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "entangle/linalg.hpp"

namespace entangle {

inline constexpr double kStateTolerance = 1e-10;

/// A validated density matrix on C^dim_a (x) C^dim_b.
///
/// Basis index of |m, mu> is m * dim_b + mu, with m on the first subsystem.
/// Construction checks Hermiticity, unit trace and positivity, each to
/// kStateTolerance, and throws InvalidState naming the failed check.
class BipartiteState {
 public:
  BipartiteState(std::size_t dim_a, std::size_t dim_b, ComplexMatrix rho);

  std::size_t dim_a() const { return dim_a_; }
  std::size_t dim_b() const { return dim_b_; }
  std::size_t dim() const { return dim_a_ * dim_b_; }
  const ComplexMatrix& rho() const { return rho_; }

 private:
  std::size_t dim_a_;
  std::size_t dim_b_;
  ComplexMatrix rho_;
};

struct WernerParams {
  double x = 0.0;  // singlet fraction
};

struct GisinParams {
  double x = 0.0;
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};
};

/// Two-qubit singlet projector |psi-><psi-|.
BipartiteState singlet_projector();

/// x S + (1 - x) I/4.
BipartiteState werner_state(WernerParams p);

/// Fraction x of a|01> + b|10>, fractions (1 - x)/2 of |00> and |11>.
BipartiteState gisin_state(const GisinParams& p);

/// x S + (1 - x) |00><00|.
BipartiteState singlet_plus_polarized(double x);

// Interchange format: {"dims": [dA, dB], "re": [[...]], "im": [[...]]},
// row-major nested arrays of size (dA dB)^2. Unknown keys are ignored.
nlohmann::json state_to_json(const BipartiteState& s);
BipartiteState state_from_json(const nlohmann::json& j);
BipartiteState state_from_file(const std::filesystem::path& path);
void state_to_file(const BipartiteState& s, const std::filesystem::path& path);

}  // namespace entangle
