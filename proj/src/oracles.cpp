#include "cpm/oracles.hpp"

#include <map>
#include <set>

namespace cpm {

Oracle::Oracle(TopologyPtr topology, std::unique_ptr<OracleSource> source, OracleFlavor flavor,
               std::optional<std::uint64_t> length)
    : topology_(std::move(topology)), state_(std::make_shared<State>()), flavor_(flavor), length_(length) {
  state_->source = std::move(source);
}

const OracleEntry& Oracle::entry(std::uint64_t n) const {
  if (length_ && n >= *length_)
    throw TruncatedInput("oracle index " + std::to_string(n) + " is past its defined prefix of " +
                         std::to_string(*length_));
  std::lock_guard lock(state_->mu);
  while (state_->cache.size() <= n) state_->cache.push_back(state_->source->next(state_->cache.size()));
  return state_->cache[n];
}

namespace {

class ElementSource final : public OracleSource {
 public:
  ElementSource(TopologyPtr t, std::function<BasisElement(std::uint64_t)> gen) : t_(std::move(t)), gen_(std::move(gen)) {}

  OracleEntry next(std::uint64_t n) override {
    BasisElement e = gen_(n);
    Code c = t_->encode(e);
    return {std::move(c), std::move(e)};
  }

 private:
  TopologyPtr t_;
  std::function<BasisElement(std::uint64_t)> gen_;
};

/// Runs a per-index search with a fresh budget, raising Inconclusive when it is spent.
class Budget {
 public:
  Budget(Fuel fuel, const char* what, std::uint64_t n) : left_(fuel.steps), what_(what), n_(n) {}
  void spend() {
    if (left_ == 0) throw Inconclusive(std::string(what_) + ": fuel exhausted at index " + std::to_string(n_));
    --left_;
  }

 private:
  std::uint64_t left_;
  const char* what_;
  std::uint64_t n_;
};

/// Superset enumerations of φ(m), memoised by m.
class SupersetCache {
 public:
  SupersetCache(Oracle phi, TopologyPtr target) : phi_(std::move(phi)), target_(std::move(target)) {}

  const Enumeration& of(std::uint64_t m) {
    auto it = cache_.find(m);
    if (it == cache_.end()) it = cache_.emplace(m, target_->supersets(phi_.element(m))).first;
    return it->second;
  }

  const Oracle& phi() const { return phi_; }
  const TopologyPtr& target() const { return target_; }

 private:
  Oracle phi_;
  TopologyPtr target_;
  std::map<std::uint64_t, Enumeration> cache_;
};

class CompleteSource final : public OracleSource {
 public:
  CompleteSource(const Oracle& phi, Fuel fuel) : sup_(phi, phi.topology()), fuel_(fuel) {}

  OracleEntry next(std::uint64_t n) override {
    Budget budget(fuel_, "complete_oracle", n);
    for (;;) {
      budget.spend();
      auto [m, idx] = unpair(Code(step_++));
      const Enumeration& e = sup_.of(m.to_u64());
      auto c = e.get(idx.to_u64());
      if (c && emitted_.insert(*c).second) return {*c, sup_.target()->decode(*c)};
    }
  }

 private:
  SupersetCache sup_;
  Fuel fuel_;
  std::uint64_t step_ = 0;
  std::set<Code> emitted_;
};

class NestedSource final : public OracleSource {
 public:
  NestedSource(const Oracle& phi, Fuel fuel) : phi_(phi), fuel_(fuel) {}

  OracleEntry next(std::uint64_t n) override {
    if (n == 0) return remember(phi_.entry(0));
    Budget budget(fuel_, "nested_oracle", n);
    const BasisElement& next_phi = phi_.element(n);
    for (std::uint64_t m = 0;; ++m) {
      budget.spend();
      const auto& cand = phi_.entry(m);
      if (element_subset(cand.element, last_->element) && element_subset(cand.element, next_phi)) return remember(cand);
    }
  }

 private:
  OracleEntry remember(const OracleEntry& e) {
    last_ = e;
    return e;
  }

  Oracle phi_;
  Fuel fuel_;
  std::optional<OracleEntry> last_;
};

class ConvertSource final : public OracleSource {
 public:
  ConvertSource(const Oracle& phi, TopologyPtr target, Fuel fuel) : sup_(phi, std::move(target)), fuel_(fuel) {}

  OracleEntry next(std::uint64_t n) override {
    Budget budget(fuel_, "convert_oracle", n);
    const BasisElement& outer = sup_.phi().element(n);
    for (std::uint64_t s = 0;; ++s) {
      budget.spend();
      auto [m, idx] = unpair(Code(s));
      auto c = sup_.of(m.to_u64()).get(idx.to_u64());
      if (!c) continue;
      BasisElement e = sup_.target()->decode(*c);
      if (element_subset(e, outer)) return {*c, std::move(e)};
    }
  }

 private:
  SupersetCache sup_;
  Fuel fuel_;
};

}  // namespace

Oracle oracle_from_elements(TopologyPtr topology, std::function<BasisElement(std::uint64_t)> gen, OracleFlavor flavor,
                            std::optional<std::uint64_t> length) {
  auto source = std::make_unique<ElementSource>(topology, std::move(gen));
  return Oracle(std::move(topology), std::move(source), flavor, length);
}

Oracle standard_decimal_oracle(const Rational& x, const Rational& c) {
  if (c.sign() <= 0) throw RangeError("accuracy factor must be positive");
  return oracle_from_elements(
      topology_decimal_intervals(c), [x, c](std::uint64_t n) { return BasisElement(decimal_interval(x, n, c).interval()); },
      {.complete = false, .nested = true});
}

Oracle digit_stream_oracle(const BigInt& integer_part, std::function<int(std::uint64_t)> digit, const Rational& c) {
  if (c.sign() <= 0) throw RangeError("accuracy factor must be positive");
  struct Digits {
    BigInt integer_part;
    std::function<int(std::uint64_t)> digit;
    std::mutex mu;
    BigInt scaled;
    std::uint64_t count = 0;
  };
  auto d = std::make_shared<Digits>();
  d->integer_part = integer_part;
  d->digit = std::move(digit);
  d->scaled = integer_part;
  return oracle_from_elements(
      topology_decimal_intervals(c),
      [d, c](std::uint64_t n) {
        std::lock_guard lock(d->mu);
        while (d->count < n + 1) {
          int v = d->digit(d->count);
          if (v < 0 || v > 9) throw RangeError("digit stream produced a non-digit");
          d->scaled = d->scaled * 10 + v;
          ++d->count;
        }
        return BasisElement(DecimalGridInterval{d->scaled, n + 1, c}.interval());
      },
      {.complete = false, .nested = true});
}

Oracle dyadic_oracle(const Rational& x) {
  return oracle_from_elements(
      topology_rational_intervals(),
      [x](std::uint64_t n) {
        BigInt two_n;
        mpz_ui_pow_ui(two_n.get_mpz_t(), 2, n);
        Rational r(BigInt(1), two_n);
        return BasisElement(RatInterval::make(x - r, x + r));
      },
      {.complete = false, .nested = true});
}

Oracle truncated_oracle(const DecimalGridInterval& u) {
  Rational p = u.midpoint(), c = u.c;
  return oracle_from_elements(
      topology_decimal_intervals(c), [p, c](std::uint64_t l) { return BasisElement(decimal_interval(p, l, c).interval()); },
      {.complete = false, .nested = true}, u.n);
}

Oracle complete_oracle(const Oracle& phi, Fuel fuel) {
  return Oracle(phi.topology(), std::make_unique<CompleteSource>(phi, fuel), {.complete = true, .nested = false});
}

Oracle nested_oracle(const Oracle& phi, Fuel fuel) {
  return Oracle(phi.topology(), std::make_unique<NestedSource>(phi, fuel),
                {.complete = false, .nested = true});
}

Oracle convert_oracle(const Oracle& phi, TopologyPtr target, Fuel fuel) {
  auto source = std::make_unique<ConvertSource>(phi, target, fuel);
  return Oracle(std::move(target), std::move(source), {});
}

}  // namespace cpm
