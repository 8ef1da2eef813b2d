#pragma once

#include <functional>
#include <optional>

#include "entangle/states.hpp"

namespace entangle {

/// Locates the parameter where a monotone criterion switches on. Requires
/// !flagged(lo) and flagged(hi); bisects until the bracket is below tol.
double bisect_flip(const std::function<bool(double)>& flagged, double lo, double hi,
                   double tol = 1e-10);

using StateFamily = std::function<BipartiteState(double)>;

/// Smallest x in [0, 1] at which the family's partial transpose turns negative.
std::optional<double> ppt_threshold(const StateFamily& family);

/// Smallest x in [0, 1] at which the purity criterion flags the family.
std::optional<double> alpha2_threshold(const StateFamily& family);

/// Smallest x in [0, 1] at which the CHSH maximum exceeds 2.
std::optional<double> chsh_threshold(const StateFamily& family);

/// Real amplitudes a >= b >= 0 with a^2 + b^2 = 1 and a b = product (<= 1/2).
GisinParams gisin_with_product(double x, double product);

}  // namespace entangle
