#pragma once

#include <optional>
#include <string>

#include "cpm/rational.hpp"

namespace cpm {

BigInt rat_floor(const Rational& q);
BigInt rat_ceil(const Rational& q);
/// 360 (q - floor q), in [0, 360).
Rational frac_angle(const Rational& q);
/// q reduced into [0, 360).
Rational mod360(const Rational& q);

enum class Space { line, circle360 };

/// Open interval. On circle360 low > high wraps through 0 and the point 0 itself is included.
struct RatInterval {
  Rational low;
  Rational high;
  Space space = Space::line;

  /// Validating constructor: line needs low < high; circle needs both ends in [0,360) and low != high.
  static RatInterval make(Rational low, Rational high, Space space = Space::line);

  bool wraps() const { return space == Space::circle360 && low > high; }
  /// Arc length on the circle, high - low on the line.
  Rational width() const;
  std::string str() const;

  friend bool operator==(const RatInterval&, const RatInterval&) = default;
};

bool interval_contains(const RatInterval& i, const Rational& x);
/// Exact inclusion. Mixed spaces compare the line interval's image on the circle.
bool interval_subset(const RatInterval& a, const RatInterval& b);
bool intervals_meet(const RatInterval& a, const RatInterval& b);

/// Image of a line interval on the circle; nullopt when it covers the whole circle.
std::optional<RatInterval> wrap_to_circle(const RatInterval& line);

/// [m/10^n - c/10^n, (m+1)/10^n + c/10^n].
struct DecimalGridInterval {
  BigInt m;
  unsigned long n = 1;
  Rational c;

  Rational low() const;
  Rational high() const;
  Rational width() const;
  /// Rational midpoint (m + 1/2) / 10^n.
  Rational midpoint() const;
  RatInterval interval() const { return RatInterval::make(low(), high()); }
};

/// Grid interval with m = floor(10^(n_index+1) x) and n = n_index + 1.
DecimalGridInterval decimal_interval(const Rational& x, unsigned long n_index, const Rational& c);

/// Recognise a line interval as a grid interval of accuracy c.
std::optional<DecimalGridInterval> as_grid(const Rational& low, const Rational& high, const Rational& c);

/// Recognise a circle interval as a grid interval reduced mod 360; m is returned in [0, 360*10^n).
std::optional<DecimalGridInterval> as_circle_grid(const RatInterval& i, const Rational& c);
/// Circle image of a grid interval (requires width < 360).
RatInterval circle_grid_interval(const DecimalGridInterval& g);

}  // namespace cpm
