#include "cpm/encodings.hpp"

#include <algorithm>
#include <charconv>

#include "factor.hpp"

namespace cpm {

BigInt parse_bigint(std::string_view text) {
  std::string_view digits = text;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
    throw ParseError("not an integer: '" + std::string(text) + "'");
  BigInt v(std::string(digits), 10);
  return text.front() == '-' ? BigInt(-v) : v;
}

Code Code::parse(std::string_view text) {
  if (!text.empty() && text.front() == '-') throw ParseError("code must be non-negative: '" + std::string(text) + "'");
  return Code(parse_bigint(text));
}

bool Code::fits_u64() const { return mpz_sizeinbase(value_.get_mpz_t(), 2) <= 64; }

std::uint64_t Code::to_u64() const {
  if (!fits_u64()) throw RangeError("code does not fit in 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof out, 0, 0, value_.get_mpz_t());
  return out;
}

std::size_t CodeHash::operator()(const Code& c) const noexcept {
  const mpz_srcptr z = c.value().get_mpz_t();
  std::size_t h = static_cast<std::size_t>(z->_mp_size);
  for (int i = 0; i < std::abs(z->_mp_size); ++i) h = h * 1000003u ^ static_cast<std::size_t>(z->_mp_d[i]);
  return h;
}

Code pair(const Code& x, const Code& y) {
  BigInt w = x.value() + y.value();
  BigInt t = w * (w + 1);
  mpz_tdiv_q_2exp(t.get_mpz_t(), t.get_mpz_t(), 1);
  return Code(BigInt(t + x.value()));
}

std::pair<Code, Code> unpair(const Code& z) {
  BigInt d = 8 * z.value() + 1, root;
  mpz_sqrt(root.get_mpz_t(), d.get_mpz_t());
  BigInt w = (root - 1) / 2;
  BigInt t = w * (w + 1) / 2;
  BigInt x = z.value() - t;
  BigInt y = w - x;
  return {Code(std::move(x)), Code(std::move(y))};
}

Code tuple_encode(std::span<const Code> xs) {
  if (xs.empty()) throw RangeError("tuple_encode needs at least one element");
  Code acc = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) acc = pair(acc, xs[i]);
  return acc;
}

Code tuple_encode(std::initializer_list<Code> xs) {
  return tuple_encode(std::span<const Code>(xs.begin(), xs.size()));
}

std::vector<Code> tuple_decode(const Code& z, std::size_t arity) {
  if (arity == 0) throw RangeError("tuple arity must be positive");
  std::vector<Code> out(arity);
  Code cur = z;
  for (std::size_t k = arity; k > 1; --k) {
    if (cur.is_zero()) return out;
    auto [x, y] = unpair(cur);
    out[k - 1] = std::move(y);
    cur = std::move(x);
  }
  out[0] = std::move(cur);
  return out;
}

Code project(const Code& z, std::size_t i, std::size_t arity) {
  if (i == 0 || i > arity) throw RangeError("projection index out of range");
  return tuple_decode(z, arity)[i - 1];
}

PeeledTuple tuple_peel(const Code& z, const BigInt& arity) {
  if (arity < 1) throw RangeError("tuple arity must be positive");
  PeeledTuple out;
  BigInt k = arity;
  Code cur = z;
  while (k > 1) {
    if (cur.is_zero()) break;
    auto [x, y] = unpair(cur);
    out.tail.push_back(std::move(y));
    cur = std::move(x);
    k -= 1;
  }
  if (k == 1 && !cur.is_zero()) {
    out.tail.push_back(cur);
    k = 0;
  }
  out.leading_zeros = k;
  std::reverse(out.tail.begin(), out.tail.end());
  return out;
}

Code zeta(const BigInt& i) {
  if (sgn(i) < 0) return Code(BigInt(-2 * i - 1));
  return Code(BigInt(2 * i));
}

BigInt zeta_inv(const Code& c) {
  const BigInt& v = c.value();
  if (mpz_odd_p(v.get_mpz_t())) return BigInt(-(v + 1) / 2);
  return BigInt(v / 2);
}

Code rho(const Rational& q) {
  if (q.sign() == 0) return Code(0);
  BigInt a = abs(q.numerator()), b = q.denominator();
  BigInt rad = 1;
  if (b != 1) {
    auto factors = detail::factorize(b);
    if (!factors) throw RangeError("denominator too hard to factor: " + b.get_str());
    for (const auto& [p, e] : *factors) rad *= p;
  }
  BigInt inner = a * a * b * b / rad;
  if (q.sign() < 0) inner = -inner;
  return zeta(inner);
}

Rational rho_inv(const Code& c) {
  BigInt inner = zeta_inv(c);
  if (sgn(inner) == 0) return Rational(0);
  auto split = detail::split_square_kernel(abs(inner));
  if (!split) throw DecodeError("rational code too hard to factor");
  BigInt a = split->first;
  if (sgn(inner) < 0) a = -a;
  return Rational(a, split->second);
}

Code interval_code(const Rational& q, const Rational& r) { return pair(rho(q), rho(r)); }

std::pair<Rational, Rational> interval_decode(const Code& c) {
  auto [a, b] = unpair(c);
  return {rho_inv(a), rho_inv(b)};
}

BitSeq beta(const Code& x, std::uint64_t y) {
  if (mpz_sizeinbase(x.value().get_mpz_t(), 2) > y && !x.is_zero()) throw RangeError("beta: x must be below 2^y");
  BitSeq bits(y, 0);
  for (std::uint64_t i = 0; i < y; ++i) bits[y - 1 - i] = mpz_tstbit(x.value().get_mpz_t(), i) ? 1 : 0;
  return bits;
}

Code encode_bits(const BitSeq& bits) {
  if (bits.empty()) return Code(0);
  std::vector<Code> codes(bits.begin(), bits.end());
  return tuple_encode(codes);
}

BitSeq decode_bits(const Code& c, std::size_t length) {
  if (length == 0) {
    if (!c.is_zero()) throw DecodeError("empty bit sequence must encode as 0");
    return {};
  }
  BitSeq out;
  out.reserve(length);
  for (const auto& x : tuple_decode(c, length)) {
    if (x > Code(1)) throw DecodeError("bit sequence element is not 0 or 1");
    out.push_back(x.is_zero() ? 0 : 1);
  }
  return out;
}

}  // namespace cpm
