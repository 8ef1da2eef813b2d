#include "entangle/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "entangle/errors.hpp"

namespace entangle {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(what) + ": shapes " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  }
}

std::size_t qubit_count(std::size_t dim) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < dim) ++k;
  if ((std::size_t{1} << k) != dim) {
    throw DimensionMismatch("permute_qubits: dimension " + std::to_string(dim) +
                            " is not a power of two");
  }
  return k;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  if (rows == 0 || cols == 0) {
    throw DimensionMismatch("ComplexMatrix: dimensions must be positive");
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : ComplexMatrix(rows.size(), rows.size() == 0 ? 0 : rows.begin()->size()) {
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionMismatch("ComplexMatrix: ragged initializer");
    std::copy(row.begin(), row.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
    ++i;
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "add");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "subtract");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& v : data_) v *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(ComplexMatrix a, Complex scale) { return a *= scale; }
ComplexMatrix operator*(Complex scale, ComplexMatrix a) { return a *= scale; }
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return multiply(a, b); }

namespace pauli {

const ComplexMatrix& identity() {
  static const ComplexMatrix m{{1.0, 0.0}, {0.0, 1.0}};
  return m;
}

const ComplexMatrix& x() {
  static const ComplexMatrix m{{0.0, 1.0}, {1.0, 0.0}};
  return m;
}

const ComplexMatrix& y() {
  static const ComplexMatrix m{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}};
  return m;
}

const ComplexMatrix& z() {
  static const ComplexMatrix m{{1.0, 0.0}, {0.0, -1.0}};
  return m;
}

const ComplexMatrix& sigma(std::size_t p) {
  switch (p) {
    case 0: return x();
    case 1: return y();
    case 2: return z();
    default: throw InvalidArgument("pauli::sigma: index must be 0, 1 or 2");
  }
}

}  // namespace pauli

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k) {
        for (std::size_t l = 0; l < b.cols(); ++l) {
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
      }
    }
  }
  return out;
}

ComplexMatrix dagger(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

ComplexMatrix transpose(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("multiply: inner dimensions " + std::to_string(a.cols()) + " and " +
                            std::to_string(b.rows()));
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

Complex trace(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionMismatch("trace: matrix is not square");
  Complex sum{};
  for (std::size_t i = 0; i < a.rows(); ++i) sum += a(i, i);
  return sum;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double worst = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t k = 0; k < da.size(); ++k) worst = std::max(worst, std::abs(da[k] - db[k]));
  return worst;
}

double hermiticity_defect(const ComplexMatrix& h) {
  if (!h.is_square()) throw DimensionMismatch("hermiticity_defect: matrix is not square");
  double worst = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = i; j < h.cols(); ++j)
      worst = std::max(worst, std::abs(h(i, j) - std::conj(h(j, i))));
  return worst;
}

HermitianEigen hermitian_eigen(const ComplexMatrix& h) {
  if (!h.is_square()) throw DimensionMismatch("hermitian_eigen: matrix is not square");
  const double defect = hermiticity_defect(h);
  if (defect > kHermitianTolerance) {
    throw NotHermitian("hermitian_eigen: hermiticity defect " + std::to_string(defect));
  }

  const std::size_t d = h.rows();
  // Work on the exactly Hermitian part so rounding in the input cannot bias the rotations.
  ComplexMatrix a(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    a(i, i) = h(i, i).real();
    for (std::size_t j = i + 1; j < d; ++j) {
      a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
      a(j, i) = std::conj(a(i, j));
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(d);

  double frob2 = 0.0;
  for (const auto& z : a.data()) frob2 += std::norm(z);
  const double target = 1e-12 * std::max(1.0, std::sqrt(frob2));

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) s += 2.0 * std::norm(a(i, j));
    return std::sqrt(s);
  };

  const std::size_t max_sweeps = 10 * d * d;
  std::size_t sweep = 0;
  while (off_norm() >= target) {
    if (sweep++ >= max_sweeps) {
      throw NoConvergence("hermitian_eigen: no convergence after " + std::to_string(max_sweeps) +
                          " sweeps");
    }
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const Complex phase = apq / mag;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // A <- G^H A G with G = [[c, s e], [-s conj(e), c]] on the (p, q) plane.
        for (std::size_t k = 0; k < d; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - s * std::conj(phase) * akq;
          a(k, q) = s * phase * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * std::conj(phase) * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < d; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - s * std::conj(phase) * vkq;
          v(k, q) = s * phase * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  HermitianEigen out{RealVector(d), ComplexMatrix(d, d)};
  for (std::size_t k = 0; k < d; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < d; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

RealVector hermitian_eigenvalues(const ComplexMatrix& h) { return hermitian_eigen(h).values; }

ComplexMatrix permute_qubits(const ComplexMatrix& m, std::span<const std::size_t> perm) {
  if (!m.is_square()) throw DimensionMismatch("permute_qubits: matrix is not square");
  const std::size_t k = qubit_count(m.rows());
  if (perm.size() != k) {
    throw InvalidArgument("permute_qubits: permutation has " + std::to_string(perm.size()) +
                          " slots, matrix has " + std::to_string(k) + " qubits");
  }
  std::vector<bool> seen(k, false);
  for (std::size_t p : perm) {
    if (p >= k || seen[p]) throw InvalidArgument("permute_qubits: not a permutation");
    seen[p] = true;
  }

  // map[new_index] = old_index
  const std::size_t dim = m.rows();
  std::vector<std::size_t> map(dim);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    std::size_t old = 0;
    for (std::size_t slot = 0; slot < k; ++slot) {
      const std::size_t bit = (idx >> (k - 1 - slot)) & 1U;
      old |= bit << (k - 1 - perm[slot]);
    }
    map[idx] = old;
  }

  ComplexMatrix out(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) out(i, j) = m(map[i], map[j]);
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

std::vector<RealVector> gram_schmidt(const std::vector<RealVector>& rows) {
  std::vector<RealVector> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    if (!out.empty() && row.size() != out.front().size()) {
      throw DimensionMismatch("gram_schmidt: rows differ in length");
    }
    const double original = norm(row);
    RealVector w = row;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : out) {
        const double proj = dot(w, q);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= proj * q[i];
      }
    }
    const double len = norm(w);
    if (original == 0.0 || !(len > kOrthonormalTolerance * original)) {
      throw RankDeficient("gram_schmidt: rows are linearly dependent");
    }
    for (auto& wi : w) wi /= len;
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace entangle
