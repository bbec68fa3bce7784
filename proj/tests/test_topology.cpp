#include <random>
#include <set>

#include "doctest.h"

#include "cpm/oracles.hpp"

using namespace cpm;

namespace {

Rational q(const char* text) { return Rational::parse(text); }
Code icode(const char* a, const char* b) { return interval_code(q(a), q(b)); }

bool contains_code(const std::vector<Code>& codes, const Code& c) {
  return std::find(codes.begin(), codes.end(), c) != codes.end();
}

/// Reference line subset straight from decoded endpoints.
bool endpoints_nested(const Code& a, const Code& b) {
  auto [a1, a2] = interval_decode(a);
  auto [b1, b2] = interval_decode(b);
  return b1 <= a1 && a2 <= b2;
}

}  // namespace

TEST_SUITE("topology") {
  TEST_CASE("rational intervals") {
    auto t = topology_rational_intervals();
    CHECK(t->domain_contains(icode("0", "1")));
    CHECK_FALSE(t->domain_contains(icode("1", "0")));
    CHECK(t->subset(icode("1/4", "1/2"), icode("0", "1")));
    CHECK_FALSE(t->subset(icode("0", "1"), icode("1/4", "1/2")));
    CHECK_THROWS_AS(t->decode(icode("1", "0")), DecodeError);
    auto first = take(t->domain(), 50);
    for (std::size_t i = 1; i < first.size(); ++i) CHECK(first[i - 1] < first[i]);
  }

  TEST_CASE("decimal intervals") {
    auto t = topology_decimal_intervals(q("1/10"));
    CHECK(t->domain_contains(icode("2.19", "2.31")));
    CHECK_FALSE(t->domain_contains(icode("0", "1")));
    CHECK(t->subset(icode("2.249", "2.261"), icode("2.19", "2.31")));
    CHECK_THROWS_AS(t->encode(RatInterval::make(q("0"), q("1"))), RangeError);
    auto dom = take(t->domain(), 200);
    for (const auto& c : dom) CHECK(t->domain_contains(c));
  }

  TEST_CASE("circle intervals") {
    auto t = topology_circle360(AllRational{});
    CHECK(t->domain_contains(icode("356.4", "39.6")));
    CHECK(t->subset(icode("359.64", "3.96"), icode("356.4", "39.6")));
    CHECK(t->subset(icode("10", "20"), icode("356.4", "39.6")));
    CHECK_FALSE(t->domain_contains(icode("10", "10")));
    CHECK_FALSE(t->domain_contains(icode("10", "360")));
    auto g = topology_circle360(DecimalGrid{q("1/10")});
    CHECK(g->domain_contains(icode("359.99", "0.11")));
    CHECK(g->domain_contains(icode("2.19", "2.31")));
    CHECK_FALSE(g->domain_contains(icode("356.4", "39.6")));
    for (const auto& c : take(g->domain(), 100)) CHECK(g->domain_contains(c));
  }

  TEST_CASE("effective product") {
    auto r = topology_rational_intervals();
    auto p = effective_product({r, r});
    CHECK(p->domain_contains(pair(icode("0", "1"), icode("2", "3"))));
    CHECK_FALSE(p->domain_contains(pair(icode("0", "1"), icode("3", "2"))));
    CHECK(p->subset(pair(icode("0", "1"), icode("0", "1")), pair(icode("0", "2"), icode("0", "2"))));
    CHECK_FALSE(p->subset(pair(icode("0", "1"), icode("0", "3")), pair(icode("0", "2"), icode("0", "2"))));
    CHECK(product_factors(p).size() == 2);

    std::mt19937_64 rng(21);
    auto rand_interval = [&]() {
      long a = static_cast<long>(rng() % 20) - 10, w = static_cast<long>(rng() % 6) + 1;
      return interval_code(Rational(a, 2), Rational(a + w, 2));
    };
    auto p3 = effective_product({r, r, r});
    for (int i = 0; i < 1000; ++i) {
      std::vector<Code> xs{rand_interval(), rand_interval(), rand_interval()};
      std::vector<Code> ys{rand_interval(), rand_interval(), rand_interval()};
      bool componentwise = true;
      for (int k = 0; k < 3; ++k) componentwise = componentwise && r->subset(xs[k], ys[k]);
      REQUIRE(p3->subset(tuple_encode(xs), tuple_encode(ys)) == componentwise);
    }
  }

  TEST_CASE("subset enumerators are sound") {
    std::vector<TopologyPtr> ts{topology_rational_intervals(), topology_decimal_intervals(q("1/10")),
                                topology_circle360(AllRational{}), topology_circle360(DecimalGrid{q("1/10")})};
    for (const auto& t : ts) {
      auto pairs = t->subset_pairs();
      int produced = 0;
      for (std::uint64_t i = 0; i < 10000; ++i) {
        auto c = pairs.get(i);
        if (!c) continue;
        ++produced;
        auto [a, b] = unpair(*c);
        REQUIRE(t->subset(a, b));
        if (t->name().rfind("circle", 0) != 0) REQUIRE(endpoints_nested(a, b));
      }
      CHECK(produced > 0);
    }
  }

  TEST_CASE("supersets enumerate exactly the containing grid intervals") {
    auto t = topology_decimal_intervals(q("1/10"));
    auto inner = BasisElement(RatInterval::make(q("2.249"), q("2.261")));
    auto sup = t->supersets(inner);
    REQUIRE(sup.length);
    std::set<Code> got;
    for (std::uint64_t i = 0; i < *sup.length; ++i) got.insert(*sup.get(i));
    std::set<Code> expected;
    for (unsigned long n = 1; n <= 4; ++n)
      for (long m = 0; m < 30000; ++m) {
        DecimalGridInterval g{m, n, q("1/10")};
        if (interval_subset(inner.interval(), g.interval())) expected.insert(interval_code(g.low(), g.high()));
      }
    CHECK(got == expected);
  }

  TEST_CASE("basic representations of open and closed sets") {
    auto t = topology_rational_intervals();
    RatInterval unit = RatInterval::make(q("0"), q("1"));
    auto open = basic_rep_open(t, [&](const BasisElement& e) { return interval_subset(e.interval(), unit); });
    auto first = take(open.enumerator, 400);
    CHECK(contains_code(first, icode("1/4", "1/2")));
    CHECK_FALSE(contains_code(first, icode("0", "2")));
    CHECK(open.member(icode("1/4", "1/2"), {}) == Verdict::yes);
    CHECK(open.member(icode("0", "2"), {}) == Verdict::no);

    auto half = q("1/2");
    auto closed = basic_rep_closed(t, [&](const BasisElement& e) { return interval_contains(e.interval(), half); });
    CHECK(closed.member(icode("0", "1"), {}) == Verdict::yes);
    CHECK(closed.member(icode("2", "3"), {}) == Verdict::no);

    auto dom = take(t->domain(), 100);
    for (const auto& c : dom) {
      auto [lo, hi] = interval_decode(c);
      bool inside = Rational(0) <= lo && hi <= Rational(1);
      bool meets = lo < half && half < hi;
      CHECK((open.member(c, {}) == Verdict::yes) == inside);
      CHECK((closed.member(c, {}) == Verdict::yes) == meets);
    }

    auto everything = basic_rep_open(t, [](const BasisElement&) { return true; });
    CHECK(take(everything.enumerator, 100) == dom);
    auto nothing = basic_rep_open(t, [](const BasisElement&) { return false; });
    CHECK_THROWS_AS(take(nothing.enumerator, 1, Fuel{2000}), Inconclusive);

    auto circle = topology_circle360(AllRational{});
    auto at_zero = basic_rep_closed(circle, [](const BasisElement& e) { return interval_contains(e.interval(), Rational(0)); });
    CHECK(at_zero.member(icode("356.4", "3.6"), {}) == Verdict::yes);
    CHECK(at_zero.member(icode("3.6", "356.4"), {}) == Verdict::no);
  }

  TEST_CASE("predicted states with no data is R itself") {
    auto t = topology_rational_intervals();
    auto rep = basic_rep_open(effective_product({t, t}), [](const BasisElement&) { return true; });
    auto q0 = predicted_states(rep, {});
    CHECK(take(q0.enumerator, 100) == take(rep.enumerator, 100));
  }

  TEST_CASE("shipped interval topologies separate points") {
    std::mt19937_64 rng(33);
    auto t = topology_decimal_intervals(q("1/10"));
    for (int i = 0; i < 50; ++i) {
      Rational x(static_cast<long>(rng() % 2000) - 1000, static_cast<long>(rng() % 50 + 1));
      Rational y = x + Rational(1, static_cast<long>(rng() % 1000 + 1));
      auto o = standard_decimal_oracle(x, q("1/10"));
      bool separated = false;
      for (std::uint64_t n = 0; n < 10 && !separated; ++n)
        separated = !interval_contains(o.element(n).interval(), y);
      CHECK(separated);
    }
  }
}
