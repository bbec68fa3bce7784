#pragma once

#include <string>
#include <string_view>

#include "cpm/bigint.hpp"

namespace cpm {

/// Exact fraction in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : q_(v) {}
  Rational(const BigInt& v) : q_(v) {}
  /// Throws RangeError when den is zero.
  Rational(const BigInt& num, const BigInt& den);

  /// Accepts "a", "a/b" and decimal literals such as "-68.4"; exact.
  static Rational parse(std::string_view text);

  BigInt numerator() const { return q_.get_num(); }
  BigInt denominator() const { return q_.get_den(); }
  const mpq_class& raw() const noexcept { return q_; }
  int sign() const { return sgn(q_); }
  bool is_integer() const { return q_.get_den() == 1; }

  /// "a" or "a/b".
  std::string str() const;
  /// Terminating decimal when the denominator has only factors 2 and 5, else "a/b".
  std::string decimal_str() const;

  Rational operator-() const { return from_raw(-q_); }
  friend Rational operator+(const Rational& a, const Rational& b) { return from_raw(a.q_ + b.q_); }
  friend Rational operator-(const Rational& a, const Rational& b) { return from_raw(a.q_ - b.q_); }
  friend Rational operator*(const Rational& a, const Rational& b) { return from_raw(a.q_ * b.q_); }
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  static Rational from_raw(mpq_class q) {
    q.canonicalize();
    Rational r;
    r.q_ = std::move(q);
    return r;
  }

 private:
  mpq_class q_;
};

/// 10^n as a BigInt.
BigInt pow10(unsigned long n);

}  // namespace cpm
