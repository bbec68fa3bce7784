#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cpm/bigint.hpp"

namespace cpm::detail {

using PrimePowers = std::vector<std::pair<BigInt, unsigned long>>;

/// Primes below 2^16.
const std::vector<unsigned long>& small_primes();

/// Full factorisation of n >= 1, primes ascending. nullopt when a composite
/// cofactor resists the bounded Pollard-Brent search.
std::optional<PrimePowers> factorize(const BigInt& n);

/// Split n = a^2 * b^2 / rad(b) with gcd(a, b) = 1 back into (a, b).
/// Only odd-exponent primes need isolating, so a square cofactor ends the work early.
std::optional<std::pair<BigInt, BigInt>> split_square_kernel(BigInt n);

}  // namespace cpm::detail
