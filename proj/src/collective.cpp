#include "entangle/collective.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "entangle/errors.hpp"

namespace entangle {

namespace {

void require_pair_count(std::size_t n) {
  if (n < 1 || n > kMaxPairs) {
    throw InvalidArgument("pair count " + std::to_string(n) + " is outside [1, " +
                          std::to_string(kMaxPairs) + "]");
  }
}

void require_match(const FilterRows& u, const FilterRows& v, std::size_t n) {
  u.validate();
  v.validate();
  if (u.n != n || v.n != n) {
    throw InvalidArgument("filter rows are for " + std::to_string(u.n) + "/" +
                          std::to_string(v.n) + " pairs, ensemble has " + std::to_string(n));
  }
}

PostselectionResult normalize(ComplexMatrix raw) {
  const double p = trace(raw).real();
  if (!(p >= kZeroProbabilityThreshold)) {
    throw ZeroProbability("postselection succeeds with probability " + std::to_string(p));
  }
  raw *= 1.0 / p;
  // Rounding leaves O(eps) anti-Hermitian residue; symmetrize before validation.
  for (std::size_t i = 0; i < 4; ++i) {
    raw(i, i) = raw(i, i).real();
    for (std::size_t j = i + 1; j < 4; ++j) {
      const Complex avg = 0.5 * (raw(i, j) + std::conj(raw(j, i)));
      raw(i, j) = avg;
      raw(j, i) = std::conj(avg);
    }
  }
  return {BipartiteState(2, 2, std::move(raw)), p};
}

}  // namespace

void FilterRows::validate() const {
  if (n < 1 || n > 30) throw InvalidArgument("FilterRows: bad pair count");
  const std::size_t len = std::size_t{1} << n;
  if (u0.size() != len || u1.size() != len) {
    throw InvalidArgument("FilterRows: rows must have length 2^n = " + std::to_string(len));
  }
  constexpr double tol = 1e-10;
  if (std::abs(norm(u0) - 1.0) > tol || std::abs(norm(u1) - 1.0) > tol ||
      std::abs(dot(u0, u1)) > tol) {
    throw InvalidArgument("FilterRows: rows are not orthonormal");
  }
}

ComplexMatrix n_pair_state(const BipartiteState& rho_pair, std::size_t n) {
  require_pair_count(n);
  if (rho_pair.dim_a() != 2 || rho_pair.dim_b() != 2) {
    throw DimensionMismatch("n_pair_state: requires a two-qubit pair state");
  }
  ComplexMatrix full = rho_pair.rho();
  for (std::size_t k = 1; k < n; ++k) full = kron(full, rho_pair.rho());

  // Pair order puts A_k at slot 2k and B_k at slot 2k + 1.
  std::vector<std::size_t> perm(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    perm[k] = 2 * k;
    perm[n + k] = 2 * k + 1;
  }
  return permute_qubits(full, perm);
}

FilterRows xor_rows(std::size_t n) {
  require_pair_count(n);
  const std::size_t len = std::size_t{1} << n;
  FilterRows r{n, RealVector(len, 0.0), RealVector(len, 0.0)};
  r.u0.front() = 1.0;
  r.u1.back() = 1.0;
  return r;
}

FilterRows controlled_hadamard_rows() {
  const double h = 1.0 / std::sqrt(2.0);
  FilterRows r{3, RealVector(8, 0.0), RealVector(8, 0.0)};
  r.u0[0b000] = h;
  r.u0[0b111] = h;
  r.u1[0b001] = h;
  r.u1[0b110] = h;
  return r;
}

FilterRows v_from_u(const FilterRows& u) {
  u.validate();
  FilterRows v = u;
  for (std::size_t k = 0; k < v.u0.size(); ++k) {
    const bool odd = std::popcount(k) % 2 == 1;
    if (odd) v.u0[k] = -v.u0[k];   // nu = 0
    if (!odd) v.u1[k] = -v.u1[k];  // nu = 1
  }
  return v;
}

ComplexMatrix filter_matrix(const FilterRows& u, const FilterRows& v) {
  const std::size_t len = u.u0.size();
  ComplexMatrix w(4, len * v.u0.size());
  const RealVector* urows[2] = {&u.u0, &u.u1};
  const RealVector* vrows[2] = {&v.u0, &v.u1};
  for (std::size_t mu = 0; mu < 2; ++mu)
    for (std::size_t nu = 0; nu < 2; ++nu)
      for (std::size_t m = 0; m < len; ++m)
        for (std::size_t k = 0; k < vrows[nu]->size(); ++k)
          w(2 * mu + nu, m * vrows[nu]->size() + k) = (*urows[mu])[m] * (*vrows[nu])[k];
  return w;
}

PairEnsemble::PairEnsemble(const BipartiteState& rho_pair, std::size_t n)
    : n_(n), state_(n_pair_state(rho_pair, n)) {
  const std::size_t d = state_.rows();
  col_start_.reserve(d + 1);
  col_start_.push_back(0);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t r = 0; r < d; ++r) {
      if (state_(r, c) != Complex{}) row_index_.push_back(static_cast<std::uint32_t>(r));
    }
    col_start_.push_back(static_cast<std::uint32_t>(row_index_.size()));
  }
}

ComplexMatrix PairEnsemble::project(const FilterRows& u, const FilterRows& v) const {
  require_match(u, v, n_);
  const std::size_t len = u.u0.size();
  const std::size_t d = state_.rows();
  const RealVector* urows[2] = {&u.u0, &u.u1};
  const RealVector* vrows[2] = {&v.u0, &v.u1};
  // Real entries of filter_matrix(u, v).
  std::vector<double> wv(4 * d);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t m = 0; m < len; ++m)
      for (std::size_t k = 0; k < len; ++k)
        wv[i * d + m * len + k] = (*urows[i / 2])[m] * (*vrows[i % 2])[k];

  // Stage 1: wr = W rho, accumulated over rows of rho in ascending order.
  // W is real, so each product is formed componentwise; this equals the
  // complex product with a zero imaginary part up to the sign of zeros.
  std::vector<Complex> wr(4 * d);
  for (std::size_t c = 0; c < d; ++c) {
    Complex acc[4] = {};
    for (std::uint32_t k = col_start_[c]; k < col_start_[c + 1]; ++k) {
      const std::size_t r = row_index_[k];
      const Complex rho_rc = state_(r, c);
      for (std::size_t i = 0; i < 4; ++i) {
        const double wir = wv[i * d + r];
        acc[i] = Complex(acc[i].real() + wir * rho_rc.real(), acc[i].imag() + wir * rho_rc.imag());
      }
    }
    for (std::size_t i = 0; i < 4; ++i) wr[i * d + c] = acc[i];
  }
  // Stage 2: wr W^dagger = wr W^T.
  ComplexMatrix out(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t c = 0; c < d; ++c) {
      const Complex a = wr[i * d + c];
      for (std::size_t j = 0; j < 4; ++j) {
        const double wjc = wv[j * d + c];
        out(i, j) = Complex(out(i, j).real() + a.real() * wjc, out(i, j).imag() + a.imag() * wjc);
      }
    }
  }
  return out;
}

PostselectionResult PairEnsemble::postselect(const FilterRows& u, const FilterRows& v) const {
  return normalize(project(u, v));
}

PostselectionResult postselect(const BipartiteState& rho_pair, std::size_t n,
                               const FilterRows& u, const FilterRows& v) {
  return PairEnsemble(rho_pair, n).postselect(u, v);
}

ComplexMatrix project_dense(const BipartiteState& rho_pair, std::size_t n, const FilterRows& u,
                            const FilterRows& v) {
  require_match(u, v, n);
  const ComplexMatrix w = filter_matrix(u, v);
  return multiply(multiply(w, n_pair_state(rho_pair, n)), dagger(w));
}

}  // namespace entangle
