#include "entangle/bell.hpp"

#include <cmath>

#include "entangle/errors.hpp"
#include "entangle/linalg.hpp"

namespace entangle {

namespace {

void require_two_qubits(const BipartiteState& s, const char* who) {
  if (s.dim_a() != 2 || s.dim_b() != 2) {
    throw DimensionMismatch(std::string(who) + ": requires a two-qubit state");
  }
}

struct SymmetricEigen3 {
  std::array<double, 3> values;  // ascending
  std::array<Vec3, 3> vectors;   // vectors[k] pairs with values[k]
};

SymmetricEigen3 eigen_sym3(const Mat3& m) {
  ComplexMatrix h(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) h(i, j) = m[i][j];
  const auto e = hermitian_eigen(h);
  SymmetricEigen3 out{};
  for (std::size_t k = 0; k < 3; ++k) {
    out.values[k] = e.values[k];
    // Real symmetric input: Jacobi rotations stay real, so the imaginary parts are zero.
    for (std::size_t i = 0; i < 3; ++i) out.vectors[k][i] = e.vectors(i, k).real();
  }
  return out;
}

Mat3 gram(const Mat3& t) {
  Mat3 g{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) g[i][j] += t[k][i] * t[k][j];
  return g;
}

Vec3 apply(const Mat3& t, const Vec3& v) {
  Vec3 out{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) out[i] += t[i][j] * v[j];
  return out;
}

double length(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

double bilinear(const Vec3& a, const Mat3& t, const Vec3& b) {
  const Vec3 tb = apply(t, b);
  return a[0] * tb[0] + a[1] * tb[1] + a[2] * tb[2];
}

}  // namespace

void MeasurementSettings::validate() const {
  for (const Vec3* v : {&a, &a_prime, &b, &b_prime}) {
    if (std::abs(length(*v) - 1.0) > 1e-12) {
      throw InvalidArgument("MeasurementSettings: Bloch vectors must have unit length");
    }
  }
}

double horodecki_m(const Mat3& t) {
  const auto e = eigen_sym3(gram(t));
  return e.values[2] + e.values[1];
}

CorrelationMatrix t_matrix(const BipartiteState& s) {
  require_two_qubits(s, "t_matrix");
  static const std::array<ComplexMatrix, 9> products = [] {
    std::array<ComplexMatrix, 9> out{ComplexMatrix(4, 4), ComplexMatrix(4, 4), ComplexMatrix(4, 4),
                                     ComplexMatrix(4, 4), ComplexMatrix(4, 4), ComplexMatrix(4, 4),
                                     ComplexMatrix(4, 4), ComplexMatrix(4, 4), ComplexMatrix(4, 4)};
    for (std::size_t p = 0; p < 3; ++p)
      for (std::size_t q = 0; q < 3; ++q) out[3 * p + q] = kron(pauli::sigma(p), pauli::sigma(q));
    return out;
  }();

  const auto& rho = s.rho();
  CorrelationMatrix out;
  for (std::size_t p = 0; p < 3; ++p) {
    for (std::size_t q = 0; q < 3; ++q) {
      // Tr(P rho) = sum_ij P_ij rho_ji
      const auto& op = products[3 * p + q];
      Complex v{};
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) v += op(i, j) * rho(j, i);
      if (std::abs(v.imag()) > kStateTolerance) {
        throw NotHermitian("t_matrix: correlation has imaginary part " +
                           std::to_string(v.imag()));
      }
      out.t[p][q] = v.real();
    }
  }
  out.m_value = std::max(0.0, horodecki_m(out.t));
  out.chsh_max = 2.0 * std::sqrt(out.m_value);
  return out;
}

double chsh_value(const BipartiteState& s, const MeasurementSettings& settings) {
  require_two_qubits(s, "chsh_value");
  settings.validate();
  const Mat3 t = t_matrix(s).t;
  // <(a.sigma) x (b.sigma)> = a^T t b
  return bilinear(settings.a, t, settings.b) + bilinear(settings.a, t, settings.b_prime) +
         bilinear(settings.a_prime, t, settings.b) - bilinear(settings.a_prime, t, settings.b_prime);
}

MeasurementSettings optimal_settings(const BipartiteState& s) {
  require_two_qubits(s, "optimal_settings");
  const Mat3 t = t_matrix(s).t;
  const auto e = eigen_sym3(gram(t));
  const double l1 = std::max(0.0, e.values[2]);
  const double l2 = std::max(0.0, e.values[1]);
  const Vec3& c1 = e.vectors[2];
  const Vec3& c2 = e.vectors[1];

  MeasurementSettings out;
  if (l1 + l2 == 0.0) return out;

  // b +/- b' = 2 (cos th c1 +/- sin th c2) with tan th = sqrt(l2 / l1); a, a' follow t c1, t c2.
  const double cos_th = std::sqrt(l1 / (l1 + l2));
  const double sin_th = std::sqrt(l2 / (l1 + l2));
  for (std::size_t i = 0; i < 3; ++i) {
    out.b[i] = cos_th * c1[i] + sin_th * c2[i];
    out.b_prime[i] = cos_th * c1[i] - sin_th * c2[i];
  }
  auto direction = [&](const Vec3& c, const Vec3& fallback) {
    Vec3 v = apply(t, c);
    const double len = length(v);
    if (len == 0.0) return fallback;
    for (auto& vi : v) vi /= len;
    return v;
  };
  out.a = direction(c1, Vec3{0.0, 0.0, 1.0});
  out.a_prime = direction(c2, Vec3{1.0, 0.0, 0.0});
  // Renormalize against rounding so validate() accepts the result.
  for (Vec3* v : {&out.a, &out.a_prime, &out.b, &out.b_prime}) {
    const double len = length(*v);
    for (auto& vi : *v) vi /= len;
  }
  return out;
}

}  // namespace entangle
