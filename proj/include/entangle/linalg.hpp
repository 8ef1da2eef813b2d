#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace entangle {

using Complex = std::complex<double>;
using RealVector = std::vector<double>;

/// Dense complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  bool operator==(const ComplexMatrix& other) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, Complex scale);
ComplexMatrix operator*(Complex scale, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

namespace pauli {
const ComplexMatrix& identity();
const ComplexMatrix& x();
const ComplexMatrix& y();
const ComplexMatrix& z();
/// sigma(0..2) = x, y, z.
const ComplexMatrix& sigma(std::size_t p);
}  // namespace pauli

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix dagger(const ComplexMatrix& a);
ComplexMatrix transpose(const ComplexMatrix& a);
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
Complex trace(const ComplexMatrix& a);

/// Largest |a_ij - b_ij|. Throws DimensionMismatch on shape mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest |h_ij - conj(h_ji)|.
double hermiticity_defect(const ComplexMatrix& h);

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kOrthonormalTolerance = 1e-12;

struct HermitianEigen {
  RealVector values;        // ascending
  ComplexMatrix vectors;    // column k pairs with values[k]
};

/// Cyclic complex Jacobi diagonalization.
///
/// Throws NotHermitian if the input is not Hermitian within
/// kHermitianTolerance (max-norm), NoConvergence if the off-diagonal norm
/// does not fall below 1e-12 (relative to the Frobenius norm) within
/// 10 d^2 sweeps.
HermitianEigen hermitian_eigen(const ComplexMatrix& h);

/// Eigenvalues only, ascending.
RealVector hermitian_eigenvalues(const ComplexMatrix& h);

/// Reorders the qubit slots of a 2^k x 2^k matrix. Slot 0 is the most
/// significant bit of the basis index. Slot i of the result is slot perm[i]
/// of the input; rows and columns are shuffled identically.
ComplexMatrix permute_qubits(const ComplexMatrix& m, std::span<const std::size_t> perm);

/// Modified Gram-Schmidt with one reorthogonalization pass. The first row
/// keeps its direction. Throws RankDeficient if a row has no component
/// (relative 1e-12) outside the span of its predecessors.
std::vector<RealVector> gram_schmidt(const std::vector<RealVector>& rows);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

}  // namespace entangle
