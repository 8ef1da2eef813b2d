#include <doctest.h>

#include <cmath>
#include <random>

#include "entangle/bell.hpp"
#include "entangle/errors.hpp"
#include "entangle/states.hpp"
#include "entangle/thresholds.hpp"
#include "test_support.hpp"

using namespace entangle;

namespace {

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 v{g(rng), g(rng), g(rng)};
  const double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  for (auto& vi : v) vi /= len;
  return v;
}

// Tr(C rho) built from the 4x4 observables directly.
double chsh_by_operators(const BipartiteState& s, const MeasurementSettings& m) {
  auto obs = [](const Vec3& v) {
    return pauli::x() * v[0] + pauli::y() * v[1] + pauli::z() * v[2];
  };
  const auto a = obs(m.a), ap = obs(m.a_prime), b = obs(m.b), bp = obs(m.b_prime);
  const auto c = kron(a, b) + kron(a, bp) + kron(ap, b) - kron(ap, bp);
  return trace(c * s.rho()).real();
}

}  // namespace

TEST_CASE("correlation tensor of the singlet and of Werner states") {
  const auto t = t_matrix(singlet_projector());
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = 0; q < 3; ++q) CHECK(t.t[p][q] == doctest::Approx(p == q ? -1.0 : 0.0));
  CHECK(t.m_value == doctest::Approx(2.0));
  CHECK(t.chsh_max == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));

  for (double x : {0.0, 0.3, 0.7071, 0.9}) {
    const auto w = t_matrix(werner_state({x}));
    CHECK(w.m_value == doctest::Approx(2 * x * x).epsilon(1e-12));
    CHECK(w.chsh_max == doctest::Approx(2 * std::sqrt(2.0) * x).epsilon(1e-12));
  }
  CHECK(t_matrix(werner_state({0.0})).chsh_max == 0.0);
}

TEST_CASE("Gisin-type tensor is diagonal with the expected entries") {
  const double x = 0.6;
  const auto p = gisin_with_product(x, 0.3);
  const auto t = t_matrix(gisin_state(p)).t;
  CHECK(t[0][0] == doctest::Approx(2 * x * 0.3));
  CHECK(t[1][1] == doctest::Approx(2 * x * 0.3));
  CHECK(t[2][2] == doctest::Approx(1 - 2 * x));
  CHECK(std::abs(t[0][1]) < 1e-15);
}

TEST_CASE("CHSH thresholds from the closed-form tensors") {
  // Gisin-type: M = max over pairs of {(2x g)^2, (2x g)^2, (1 - 2x)^2}.
  for (double g : {0.1, 0.3, 0.5}) {
    const StateFamily family = [g](double x) { return gisin_state(gisin_with_product(x, g)); };
    auto m_closed = [g](double x) {
      const double s = 4 * x * x * g * g;
      const double z = (1 - 2 * x) * (1 - 2 * x);
      return s + std::max(s, z);
    };
    const auto found = chsh_threshold(family);
    REQUIRE(found.has_value());
    CHECK(m_closed(*found) == doctest::Approx(1.0).epsilon(1e-7));
  }
  // Polarized admixture: M = 2x^2 while x^2 >= (1 - 2x)^2.
  const StateFamily pol = [](double x) { return singlet_plus_polarized(x); };
  CHECK(*chsh_threshold(pol) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("horodecki_m on explicit tensors") {
  CHECK(horodecki_m(Mat3{{{3, 0, 0}, {0, 2, 0}, {0, 0, 1}}}) == doctest::Approx(13.0));
  CHECK(horodecki_m(Mat3{}) == doctest::Approx(0.0));
  // Rank one: only one nonzero singular value.
  CHECK(horodecki_m(Mat3{{{1, 1, 0}, {1, 1, 0}, {0, 0, 0}}}) == doctest::Approx(4.0));
}

TEST_CASE("optimal settings attain the maximum") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = testing::random_state(2, 2, rng);
    const auto settings = optimal_settings(s);
    CHECK_NOTHROW(settings.validate());
    const double best = t_matrix(s).chsh_max;
    CHECK(chsh_value(s, settings) == doctest::Approx(best).epsilon(1e-9));
    CHECK(chsh_by_operators(s, settings) == doctest::Approx(best).epsilon(1e-9));
  }
  const auto w = werner_state({0.8});
  CHECK(chsh_value(w, optimal_settings(w)) == doctest::Approx(1.6 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("random settings never exceed the maximum") {
  std::mt19937_64 rng(32);
  const auto s = testing::random_state(2, 2, rng);
  const double best = t_matrix(s).chsh_max;
  for (int trial = 0; trial < 1000; ++trial) {
    const MeasurementSettings m{random_unit(rng), random_unit(rng), random_unit(rng),
                                random_unit(rng)};
    const double v = chsh_value(s, m);
    CHECK(v <= best + 1e-12);
    if (trial < 20) CHECK(v == doctest::Approx(chsh_by_operators(s, m)).epsilon(1e-12));
  }
}

TEST_CASE("Tsirelson and separable bounds") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    CHECK(t_matrix(testing::random_state(2, 2, rng)).chsh_max <= 2 * std::sqrt(2.0) + 1e-12);
    CHECK(t_matrix(testing::random_separable(2, 2, rng)).chsh_max <= 2.0 + 1e-12);
  }
}

TEST_CASE("maximum is invariant under local unitaries") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = testing::random_state(2, 2, rng);
    const auto u = kron(testing::random_unitary(2, rng), testing::random_unitary(2, rng));
    ComplexMatrix r = u * s.rho() * dagger(u);
    r = (r + dagger(r)) * 0.5;
    CHECK(t_matrix(BipartiteState(2, 2, r)).chsh_max ==
          doctest::Approx(t_matrix(s).chsh_max).epsilon(1e-9));
  }
}

TEST_CASE("bell errors") {
  std::mt19937_64 rng(35);
  const auto big = testing::random_state(2, 3, rng);
  CHECK_THROWS_AS(t_matrix(big), DimensionMismatch);
  MeasurementSettings bad;
  bad.a = {1.0, 1.0, 0.0};
  CHECK_THROWS_AS(chsh_value(werner_state({0.5}), bad), InvalidArgument);
  CHECK_NOTHROW(optimal_settings(werner_state({0.0})).validate());
}
