#include "entangle/thresholds.hpp"

#include <cmath>

#include "entangle/bell.hpp"
#include "entangle/errors.hpp"
#include "entangle/separability.hpp"

namespace entangle {

double bisect_flip(const std::function<bool(double)>& flagged, double lo, double hi, double tol) {
  if (flagged(lo) || !flagged(hi)) {
    throw InvalidArgument("bisect_flip: criterion does not switch on inside the bracket");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (flagged(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

std::optional<double> threshold(const StateFamily& family,
                                const std::function<bool(const BipartiteState&)>& flags) {
  auto flagged = [&](double x) { return flags(family(x)); };
  if (!flagged(1.0)) return std::nullopt;
  if (flagged(0.0)) return 0.0;
  return bisect_flip(flagged, 0.0, 1.0);
}

}  // namespace

std::optional<double> ppt_threshold(const StateFamily& family) {
  return threshold(family, [](const BipartiteState& s) { return !ppt_check(s).is_ppt; });
}

std::optional<double> alpha2_threshold(const StateFamily& family) {
  return threshold(family, [](const BipartiteState& s) { return alpha2_check(s).flags_inseparable; });
}

std::optional<double> chsh_threshold(const StateFamily& family) {
  return threshold(family, [](const BipartiteState& s) { return t_matrix(s).chsh_max > 2.0; });
}

GisinParams gisin_with_product(double x, double product) {
  if (!(product >= 0.0 && product <= 0.5)) {
    throw InvalidArgument("gisin_with_product: |ab| must lie in [0, 1/2]");
  }
  const double root = std::sqrt(std::max(0.0, 1.0 - 4.0 * product * product));
  const double a = std::sqrt(0.5 * (1.0 + root));
  // b = product / a keeps a b exact; renormalize so |a|^2 + |b|^2 = 1 to rounding.
  const double b = a > 0.0 ? product / a : 0.0;
  const double len = std::hypot(a, b);
  return {x, Complex(a / len), Complex(b / len)};
}

}  // namespace entangle
