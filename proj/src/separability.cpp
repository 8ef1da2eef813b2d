#include "entangle/separability.hpp"

#include <algorithm>

#include "entangle/errors.hpp"

namespace entangle {

ComplexMatrix partial_transpose(const ComplexMatrix& rho, std::size_t dim_a, std::size_t dim_b) {
  const std::size_t d = dim_a * dim_b;
  if (rho.rows() != d || rho.cols() != d) {
    throw DimensionMismatch("partial_transpose: matrix does not match dims");
  }
  ComplexMatrix sigma(d, d);
  for (std::size_t m = 0; m < dim_a; ++m)
    for (std::size_t n = 0; n < dim_a; ++n)
      for (std::size_t mu = 0; mu < dim_b; ++mu)
        for (std::size_t nu = 0; nu < dim_b; ++nu)
          sigma(m * dim_b + mu, n * dim_b + nu) = rho(n * dim_b + mu, m * dim_b + nu);
  return sigma;
}

ComplexMatrix partial_transpose(const BipartiteState& s) {
  return partial_transpose(s.rho(), s.dim_a(), s.dim_b());
}

PptReport ppt_check(const BipartiteState& s) {
  PptReport report{partial_transpose(s), {}, 0.0, true};
  report.eigenvalues = hermitian_eigenvalues(report.sigma);
  report.min_eigenvalue = report.eigenvalues.front();
  report.is_ppt = report.min_eigenvalue >= -kNegativityTolerance;
  return report;
}

ComplexMatrix partial_trace(const BipartiteState& s, Subsystem keep) {
  const std::size_t da = s.dim_a();
  const std::size_t db = s.dim_b();
  const auto& rho = s.rho();
  if (keep == Subsystem::First) {
    ComplexMatrix out(da, da);
    for (std::size_t m = 0; m < da; ++m)
      for (std::size_t n = 0; n < da; ++n)
        for (std::size_t mu = 0; mu < db; ++mu) out(m, n) += rho(m * db + mu, n * db + mu);
    return out;
  }
  ComplexMatrix out(db, db);
  for (std::size_t mu = 0; mu < db; ++mu)
    for (std::size_t nu = 0; nu < db; ++nu)
      for (std::size_t m = 0; m < da; ++m) out(mu, nu) += rho(m * db + mu, m * db + nu);
  return out;
}

double purity(const ComplexMatrix& rho) {
  if (!rho.is_square()) throw DimensionMismatch("purity: matrix is not square");
  // Tr(rho^2) = sum_ij rho_ij rho_ji = sum_ij |rho_ij|^2 for Hermitian rho.
  double sum = 0.0;
  for (const auto& z : rho.data()) sum += std::norm(z);
  return sum;
}

Alpha2Report alpha2_check(const BipartiteState& s) {
  Alpha2Report r;
  r.purity = purity(s.rho());
  r.purity_a = purity(partial_trace(s, Subsystem::First));
  r.purity_b = purity(partial_trace(s, Subsystem::Second));
  r.flags_inseparable = r.purity > std::max(r.purity_a, r.purity_b) + kNegativityTolerance;
  return r;
}

bool ppt_is_conclusive(std::size_t dim_a, std::size_t dim_b) {
  return dim_a * dim_b <= 6 && std::min(dim_a, dim_b) <= 2;
}

}  // namespace entangle
