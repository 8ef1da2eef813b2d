#pragma once

#include "entangle/linalg.hpp"
#include "entangle/states.hpp"

namespace entangle {

inline constexpr double kNegativityTolerance = 1e-10;

/// Spectrum of the partial transpose. A negative eigenvalue certifies
/// entanglement. A non-negative spectrum proves separability only for 2x2
/// and 2x3 systems; above that it is inconclusive.
struct PptReport {
  ComplexMatrix sigma;
  RealVector eigenvalues;  // ascending
  double min_eigenvalue = 0.0;
  bool is_ppt = true;  // min_eigenvalue >= -kNegativityTolerance
};

/// Purity comparison (Renyi alpha = 2 entropies). Separable states satisfy
/// Tr rho^2 <= max(Tr rho_A^2, Tr rho_B^2); exceeding it flags entanglement.
struct Alpha2Report {
  double purity = 0.0;
  double purity_a = 0.0;
  double purity_b = 0.0;
  bool flags_inseparable = false;
};

enum class Subsystem { First, Second };

/// sigma_{m mu, n nu} = rho_{n mu, m nu}: transposes the first subsystem.
ComplexMatrix partial_transpose(const ComplexMatrix& rho, std::size_t dim_a, std::size_t dim_b);
ComplexMatrix partial_transpose(const BipartiteState& s);

PptReport ppt_check(const BipartiteState& s);

/// Reduced density matrix of the kept subsystem.
ComplexMatrix partial_trace(const BipartiteState& s, Subsystem keep);

double purity(const ComplexMatrix& rho);

Alpha2Report alpha2_check(const BipartiteState& s);

/// True when PPT is also sufficient for separability (2x2, 2x3, 3x2).
bool ppt_is_conclusive(std::size_t dim_a, std::size_t dim_b);

}  // namespace entangle
