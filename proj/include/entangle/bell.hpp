#pragma once

#include <array>

#include "entangle/states.hpp"

namespace entangle {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

/// Bloch directions of the four dichotomic observables A = a.sigma, etc.
struct MeasurementSettings {
  Vec3 a{0.0, 0.0, 1.0};
  Vec3 a_prime{0.0, 0.0, 1.0};
  Vec3 b{0.0, 0.0, 1.0};
  Vec3 b_prime{0.0, 0.0, 1.0};

  /// Throws InvalidArgument unless every vector has unit length within 1e-12.
  void validate() const;
};

/// Correlation tensor t_pq = Tr[(sigma_p x sigma_q) rho] with the CHSH
/// maximum 2 sqrt(M), where M is the sum of the two largest eigenvalues
/// of t^T t.
struct CorrelationMatrix {
  Mat3 t{};
  double m_value = 0.0;
  double chsh_max = 0.0;
};

CorrelationMatrix t_matrix(const BipartiteState& s);

/// M for a given correlation tensor.
double horodecki_m(const Mat3& t);

/// Tr(C rho) for C = AB + AB' + A'B - A'B'.
double chsh_value(const BipartiteState& s, const MeasurementSettings& settings);

/// Settings attaining chsh_max, built from the top two eigenvectors of t^T t.
MeasurementSettings optimal_settings(const BipartiteState& s);

}  // namespace entangle
