#pragma once

#include <compare>
#include <concepts>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "cpm/errors.hpp"

namespace cpm {

using BigInt = mpz_class;

/// Parse a signed decimal integer; throws ParseError.
BigInt parse_bigint(std::string_view text);

inline std::string to_string(const BigInt& v) { return v.get_str(); }

inline std::strong_ordering compare(const BigInt& a, const BigInt& b) {
  int c = cmp(a, b);
  return c < 0 ? std::strong_ordering::less
               : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

/// A non-negative integer of unbounded size.
class Code {
 public:
  Code() = default;

  template <std::unsigned_integral T>
  Code(T v) : value_(static_cast<unsigned long>(v)) {}

  template <std::signed_integral T>
  Code(T v) {
    if (v < 0) throw RangeError("negative code");
    value_ = static_cast<long>(v);
  }

  explicit Code(BigInt v) : value_(std::move(v)) {
    if (sgn(value_) < 0) throw RangeError("negative code");
  }

  /// Parse a non-negative decimal literal.
  static Code parse(std::string_view text);

  const BigInt& value() const noexcept { return value_; }
  std::string str() const { return value_.get_str(); }
  bool is_zero() const { return sgn(value_) == 0; }

  /// Value as an unsigned 64-bit integer; throws RangeError if it does not fit.
  std::uint64_t to_u64() const;
  bool fits_u64() const;

  friend bool operator==(const Code& a, const Code& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Code& a, const Code& b) {
    return compare(a.value_, b.value_);
  }

 private:
  BigInt value_;
};

struct CodeHash {
  std::size_t operator()(const Code& c) const noexcept;
};

}  // namespace cpm
