#include <random>
#include <set>

#include "doctest.h"

#include "cpm/oracles.hpp"

using namespace cpm;

namespace {

Rational q(const char* text) { return Rational::parse(text); }
const Rational tenth(1, 10);

/// Oracle for 1/3 that alternates a shrinking interval with the fixed [-1, 2].
Oracle alternating_third() {
  return oracle_from_elements(
      topology_rational_intervals(),
      [](std::uint64_t n) {
        if (n % 2 == 1) return BasisElement(RatInterval::make(Rational(-1), Rational(2)));
        BigInt four_k;
        mpz_ui_pow_ui(four_k.get_mpz_t(), 4, n / 2);
        Rational third(1, 3), e(BigInt(1), 3 * four_k);
        return BasisElement(RatInterval::make(third - e, third + e + e));
      },
      {});
}

}  // namespace

TEST_SUITE("oracles") {
  TEST_CASE("standard decimal oracle") {
    auto o = standard_decimal_oracle(q("9/4"), tenth);
    CHECK(o.element(0).interval() == RatInterval::make(q("2.19"), q("2.31")));
    CHECK(o.element(1).interval() == RatInterval::make(q("2.249"), q("2.261")));
    CHECK(o.at(0) == interval_code(q("2.19"), q("2.31")));
    auto z = standard_decimal_oracle(q("0"), tenth);
    CHECK(z.element(0).interval() == RatInterval::make(q("-0.01"), q("0.11")));
    for (std::uint64_t n = 0; n < 30; ++n) {
      CHECK(o.element(n).interval().width() == q("1.2") / Rational(pow10(n + 1)));
      CHECK(interval_subset(o.element(n + 1).interval(), o.element(n).interval()));
    }
    CHECK(o.at(5) == o.at(5));
  }

  TEST_CASE("nesting holds for other accuracy factors") {
    for (const char* c : {"1/1000", "1/2", "1", "7/3", "25"}) {
      for (const char* x : {"9/4", "-22/7", "0", "123456/1001"}) {
        auto o = standard_decimal_oracle(q(x), q(c));
        for (std::uint64_t n = 0; n < 15; ++n)
          CHECK(interval_subset(o.element(n + 1).interval(), o.element(n).interval()));
      }
    }
  }

  TEST_CASE("digit streams reproduce the rational oracle") {
    // 22/7 = 3.142857142857...
    const int period[] = {1, 4, 2, 8, 5, 7};
    auto d = digit_stream_oracle(3, [&](std::uint64_t i) { return period[i % 6]; }, tenth);
    auto o = standard_decimal_oracle(q("22/7"), tenth);
    for (std::uint64_t n = 0; n < 25; ++n) CHECK(d.at(n) == o.at(n));
    // -22/7 = -4 + 0.857142...
    const int neg[] = {8, 5, 7, 1, 4, 2};
    auto dn = digit_stream_oracle(-4, [&](std::uint64_t i) { return neg[i % 6]; }, tenth);
    auto on = standard_decimal_oracle(q("-22/7"), tenth);
    for (std::uint64_t n = 0; n < 25; ++n) CHECK(dn.at(n) == on.at(n));
  }

  TEST_CASE("truncated oracle") {
    DecimalGridInterval u{225, 2, tenth};
    auto s = truncated_oracle(u);
    CHECK(s.length() == std::optional<std::uint64_t>(2));
    CHECK(s.element(0).interval() == RatInterval::make(q("2.19"), q("2.31")));
    CHECK(s.element(1).interval() == RatInterval::make(q("2.249"), q("2.261")));
    CHECK_THROWS_AS(s.at(2), TruncatedInput);
  }

  TEST_CASE("completion") {
    auto phi = standard_decimal_oracle(q("9/4"), tenth);
    auto psi = complete_oracle(phi);
    std::set<Code> range;
    for (std::uint64_t n = 0; n < 40; ++n) {
      range.insert(psi.at(n));
      CHECK(interval_contains(psi.element(n).interval(), q("9/4")));
    }
    CHECK(range.size() == 40);
    CHECK(range.count(interval_code(q("2.19"), q("2.31"))));
    // every precision-1 and precision-2 grid interval containing some φ(n) shows up
    for (unsigned long n = 1; n <= 2; ++n)
      for (long m = 0; m < 400; ++m) {
        DecimalGridInterval g{m, n, tenth};
        bool witness = false;
        for (std::uint64_t k = 0; k < 6; ++k) witness = witness || interval_subset(phi.element(k).interval(), g.interval());
        if (witness) CHECK(range.count(interval_code(g.low(), g.high())));
      }
    CHECK_FALSE(range.count(interval_code(q("2.99"), q("3.11"))));
  }

  TEST_CASE("completion of a complete oracle keeps the range") {
    auto phi = complete_oracle(standard_decimal_oracle(q("-7/3"), tenth));
    auto psi = complete_oracle(phi);
    std::set<Code> phi_range, psi_range;
    for (std::uint64_t n = 0; n < 120; ++n) phi_range.insert(phi.at(n));
    for (std::uint64_t n = 0; n < 50; ++n) psi_range.insert(psi.at(n));
    for (const auto& c : psi_range) CHECK(phi_range.count(c));
    for (std::uint64_t n = 0; n < 10; ++n) CHECK(psi_range.count(phi.at(n)));
  }

  TEST_CASE("nesting transformer") {
    auto phi = alternating_third();
    auto psi = nested_oracle(phi);
    for (std::uint64_t n = 0; n < 20; ++n) {
      CHECK(interval_contains(psi.element(n).interval(), q("1/3")));
      CHECK(interval_subset(psi.element(n + 1).interval(), psi.element(n).interval()));
    }
    auto z = nested_oracle(standard_decimal_oracle(q("0"), tenth), Fuel{200});
    for (std::uint64_t n = 0; n < 40; ++n) {
      CHECK(interval_contains(z.element(n).interval(), q("0")));
      CHECK(interval_subset(z.element(n + 1).interval(), z.element(n).interval()));
    }
  }

  TEST_CASE("nesting runs out of fuel honestly") {
    auto phi = alternating_third();
    auto psi = nested_oracle(phi, Fuel{3});
    CHECK_THROWS_AS(psi.at(8), Inconclusive);
  }

  TEST_CASE("conversion") {
    auto phi = dyadic_oracle(q("9/4"));
    auto grid = topology_decimal_intervals(tenth);
    auto psi = convert_oracle(phi, grid);
    for (std::uint64_t n = 0; n < 10; ++n) {
      CHECK(grid->domain_contains(psi.at(n)));
      CHECK(interval_contains(psi.element(n).interval(), q("9/4")));
      CHECK(interval_subset(psi.element(n).interval(), phi.element(n).interval()));
    }
    auto same = convert_oracle(phi, topology_rational_intervals());
    for (std::uint64_t n = 0; n < 10; ++n) CHECK(interval_subset(same.element(n).interval(), phi.element(n).interval()));

    auto circ = topology_circle360(DecimalGrid{tenth});
    auto around_zero = convert_oracle(dyadic_oracle(q("0")), circ);
    bool saw_wrap = false;
    for (std::uint64_t n = 0; n < 10; ++n) {
      const auto& i = around_zero.element(n).interval();
      CHECK(i.space == Space::circle360);
      CHECK(interval_contains(i, q("0")));
      saw_wrap = saw_wrap || i.wraps();
    }
    CHECK(saw_wrap);
  }
}
