#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cpm/bigint.hpp"
#include "cpm/rational.hpp"

namespace cpm {

/// Cantor pairing ((x+y)^2 + 3x + y) / 2.
Code pair(const Code& x, const Code& y);
/// Inverse of pair.
std::pair<Code, Code> unpair(const Code& z);

/// Left-nested pairing <<x1,x2>,x3>...; a one-element tuple is its element.
Code tuple_encode(std::span<const Code> xs);
Code tuple_encode(std::initializer_list<Code> xs);
/// Inverse of tuple_encode at a fixed arity (>= 1).
std::vector<Code> tuple_decode(const Code& z, std::size_t arity);
/// i-th element (1-based) of the arity-n tuple z.
Code project(const Code& z, std::size_t i, std::size_t arity);

/// Tuple of a possibly astronomically large arity: `leading_zeros` zeros followed by `tail`.
struct PeeledTuple {
  BigInt leading_zeros;
  std::vector<Code> tail;
};
/// Decode from the right; stops once the remaining prefix is 0, so the work is
/// bounded by the number of nonzero-prefix steps rather than by `arity`.
PeeledTuple tuple_peel(const Code& z, const BigInt& arity);

Code zeta(const BigInt& i);
BigInt zeta_inv(const Code& c);

Code rho(const Rational& q);
/// Throws DecodeError when the factorisation work exceeds the built-in limits.
Rational rho_inv(const Code& c);

Code interval_code(const Rational& q, const Rational& r);
std::pair<Rational, Rational> interval_decode(const Code& c);

using BitSeq = std::vector<std::uint8_t>;

/// First y bits of x, most significant first; throws RangeError if x >= 2^y.
BitSeq beta(const Code& x, std::uint64_t y);
/// Iterated pairing <<...<b1,b2>...>,by>; the empty sequence encodes as 0.
Code encode_bits(const BitSeq& bits);
BitSeq decode_bits(const Code& c, std::size_t length);

}  // namespace cpm
