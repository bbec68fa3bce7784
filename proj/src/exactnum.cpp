#include "cpm/exactnum.hpp"

#include <algorithm>
#include <array>

namespace cpm {

BigInt pow10(unsigned long n) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), 10, n);
  return out;
}

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (sgn(den) == 0) throw RangeError("zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.sign() == 0) throw RangeError("division by zero");
  return Rational::from_raw(a.q_ / b.q_);
}

Rational Rational::parse(std::string_view text) {
  auto fail = [&]() -> Rational { throw ParseError("not a rational: '" + std::string(text) + "'"); };
  if (text.empty()) return fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_bigint(text.substr(0, slash));
    std::string_view den_text = text.substr(slash + 1);
    if (!den_text.empty() && (den_text.front() == '-' || den_text.front() == '+')) return fail();
    BigInt den = parse_bigint(den_text);
    if (sgn(den) == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot), frac = text.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    std::string_view int_digits = int_part;
    if (!int_digits.empty() && (int_digits.front() == '-' || int_digits.front() == '+')) int_digits.remove_prefix(1);
    if (frac.empty() && int_digits.empty()) return fail();
    auto all_digits = [](std::string_view s) {
      return std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
    };
    if (!all_digits(int_digits) || !all_digits(frac)) return fail();
    std::string joined = std::string(int_digits) + std::string(frac);
    if (joined.empty()) return fail();
    BigInt num(joined, 10);
    if (negative) num = -num;
    return Rational(num, pow10(frac.size()));
  }
  return Rational(parse_bigint(text));
}

std::string Rational::str() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string Rational::decimal_str() const {
  BigInt den = q_.get_den();
  unsigned long twos = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), BigInt(2).get_mpz_t());
  unsigned long fives = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), BigInt(5).get_mpz_t());
  if (den != 1) return str();
  unsigned long k = std::max(twos, fives);
  if (k == 0) return str();
  BigInt scaled = abs(q_.get_num()) * (pow10(k) / q_.get_den());
  std::string digits = scaled.get_str();
  if (digits.size() <= k) digits.insert(0, k + 1 - digits.size(), '0');
  std::string out = digits.substr(0, digits.size() - k) + "." + digits.substr(digits.size() - k);
  return sign() < 0 ? "-" + out : out;
}

BigInt rat_floor(const Rational& q) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), q.raw().get_num_mpz_t(), q.raw().get_den_mpz_t());
  return out;
}

BigInt rat_ceil(const Rational& q) {
  BigInt out;
  mpz_cdiv_q(out.get_mpz_t(), q.raw().get_num_mpz_t(), q.raw().get_den_mpz_t());
  return out;
}

Rational frac_angle(const Rational& q) { return Rational(360) * (q - Rational(rat_floor(q))); }

Rational mod360(const Rational& q) {
  Rational turns = q / Rational(360);
  return q - Rational(360) * Rational(rat_floor(turns));
}

RatInterval RatInterval::make(Rational low, Rational high, Space space) {
  if (space == Space::line) {
    if (!(low < high)) throw RangeError("line interval needs low < high");
  } else {
    Rational full(360);
    if (low.sign() < 0 || high.sign() < 0 || low >= full || high >= full)
      throw RangeError("circle interval endpoints must lie in [0,360)");
    if (low == high) throw RangeError("circle interval must not be the full circle");
  }
  return RatInterval{std::move(low), std::move(high), space};
}

Rational RatInterval::width() const {
  if (wraps()) return high + Rational(360) - low;
  return high - low;
}

std::string RatInterval::str() const { return "[" + low.decimal_str() + "," + high.decimal_str() + "]"; }

namespace {

/// Connected piece of a circle interval: left end, closed flag, right end (always open).
struct Arc {
  Rational left;
  bool left_closed;
  Rational right;
};

std::vector<Arc> arcs(const RatInterval& i) {
  if (!i.wraps()) return {Arc{i.low, false, i.high}};
  std::vector<Arc> out;
  if (i.high.sign() > 0) out.push_back(Arc{Rational(0), true, i.high});
  out.push_back(Arc{i.low, false, Rational(360)});
  return out;
}

bool arc_subset(const Arc& a, const Arc& b) {
  bool left_ok = a.left > b.left || (a.left == b.left && (b.left_closed || !a.left_closed));
  return left_ok && a.right <= b.right;
}

bool circle_subset(const RatInterval& a, const RatInterval& b) {
  auto bs = arcs(b);
  for (const auto& pa : arcs(a)) {
    bool covered = std::any_of(bs.begin(), bs.end(), [&](const Arc& pb) { return arc_subset(pa, pb); });
    if (!covered) return false;
  }
  return true;
}

bool circle_meet(const RatInterval& a, const RatInterval& b) {
  for (const auto& pa : arcs(a))
    for (const auto& pb : arcs(b))
      if (std::max(pa.left, pb.left) < std::min(pa.right, pb.right)) return true;
  return false;
}

}  // namespace

std::optional<RatInterval> wrap_to_circle(const RatInterval& line) {
  if (line.space == Space::circle360) return line;
  if (line.high - line.low >= Rational(360)) return std::nullopt;
  return RatInterval{mod360(line.low), mod360(line.high), Space::circle360};
}

bool interval_contains(const RatInterval& i, const Rational& x) {
  if (i.space == Space::line) return i.low < x && x < i.high;
  Rational a = mod360(x);
  if (!i.wraps()) return i.low < a && a < i.high;
  return a < i.high || i.low < a;
}

bool interval_subset(const RatInterval& a, const RatInterval& b) {
  if (a.space == Space::line && b.space == Space::line) return b.low <= a.low && a.high <= b.high;
  if (a.space == Space::circle360 && b.space == Space::circle360) return circle_subset(a, b);
  if (a.space == Space::line) {
    auto wa = wrap_to_circle(a);
    return wa && circle_subset(*wa, b);
  }
  auto wb = wrap_to_circle(b);
  return !wb || circle_subset(a, *wb);
}

bool intervals_meet(const RatInterval& a, const RatInterval& b) {
  if (a.space == Space::line && b.space == Space::line) return std::max(a.low, b.low) < std::min(a.high, b.high);
  auto wa = wrap_to_circle(a), wb = wrap_to_circle(b);
  if (!wa || !wb) return true;
  return circle_meet(*wa, *wb);
}

Rational DecimalGridInterval::low() const { return (Rational(m) - c) / Rational(pow10(n)); }
Rational DecimalGridInterval::high() const { return (Rational(m + 1) + c) / Rational(pow10(n)); }
Rational DecimalGridInterval::width() const { return (Rational(1) + c + c) / Rational(pow10(n)); }
Rational DecimalGridInterval::midpoint() const { return (Rational(m) + Rational(1, 2)) / Rational(pow10(n)); }

DecimalGridInterval decimal_interval(const Rational& x, unsigned long n_index, const Rational& c) {
  if (c.sign() <= 0) throw RangeError("accuracy factor must be positive");
  unsigned long n = n_index + 1;
  return DecimalGridInterval{rat_floor(x * Rational(pow10(n))), n, c};
}

namespace {

std::optional<unsigned long> grid_precision(const Rational& width, const Rational& c) {
  if (width.sign() <= 0) return std::nullopt;
  Rational ratio = (Rational(1) + c + c) / width;
  if (!ratio.is_integer()) return std::nullopt;
  BigInt v = ratio.numerator();
  unsigned long n = mpz_remove(v.get_mpz_t(), v.get_mpz_t(), BigInt(10).get_mpz_t());
  if (v != 1 || n == 0) return std::nullopt;
  return n;
}

}  // namespace

std::optional<DecimalGridInterval> as_grid(const Rational& low, const Rational& high, const Rational& c) {
  auto n = grid_precision(high - low, c);
  if (!n) return std::nullopt;
  Rational m = low * Rational(pow10(*n)) + c;
  if (!m.is_integer()) return std::nullopt;
  return DecimalGridInterval{m.numerator(), *n, c};
}

std::optional<DecimalGridInterval> as_circle_grid(const RatInterval& i, const Rational& c) {
  if (i.space != Space::circle360) return std::nullopt;
  auto n = grid_precision(i.width(), c);
  if (!n) return std::nullopt;
  Rational m = i.low * Rational(pow10(*n)) + c;
  if (!m.is_integer()) return std::nullopt;
  BigInt period = 360 * pow10(*n), mm;
  mpz_fdiv_r(mm.get_mpz_t(), m.numerator().get_mpz_t(), period.get_mpz_t());
  return DecimalGridInterval{mm, *n, c};
}

RatInterval circle_grid_interval(const DecimalGridInterval& g) {
  if (g.width() >= Rational(360)) throw RangeError("grid interval wider than the circle");
  return RatInterval{mod360(g.low()), mod360(g.high()), Space::circle360};
}

}  // namespace cpm
