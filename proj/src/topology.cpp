#include "cpm/topology.hpp"

#include <algorithm>
#include <set>

namespace cpm {

std::string BasisElement::str() const {
  if (is_interval()) return interval().str();
  std::string out = "<";
  for (std::size_t i = 0; i < factors().size(); ++i) out += (i ? "," : "") + factors()[i].str();
  return out + ">";
}

bool operator==(const BasisElement& a, const BasisElement& b) {
  if (a.is_interval() != b.is_interval()) return false;
  if (a.is_interval()) return a.interval() == b.interval();
  return a.factors() == b.factors();
}

bool element_subset(const BasisElement& a, const BasisElement& b) {
  if (a.is_interval() && b.is_interval()) return interval_subset(a.interval(), b.interval());
  if (a.is_interval() || b.is_interval()) return false;
  if (a.factors().size() != b.factors().size()) return false;
  for (std::size_t i = 0; i < a.factors().size(); ++i)
    if (!element_subset(a.factors()[i], b.factors()[i])) return false;
  return true;
}

bool element_meets(const BasisElement& a, const BasisElement& b) {
  if (a.is_interval() && b.is_interval()) return intervals_meet(a.interval(), b.interval());
  if (a.is_interval() || b.is_interval() || a.factors().size() != b.factors().size()) return false;
  for (std::size_t i = 0; i < a.factors().size(); ++i)
    if (!element_meets(a.factors()[i], b.factors()[i])) return false;
  return true;
}

namespace {

bool contains_from(const BasisElement& e, std::span<const Rational> point, std::size_t& pos) {
  if (e.is_interval()) {
    if (pos >= point.size()) throw RangeError("point has too few coordinates");
    return interval_contains(e.interval(), point[pos++]);
  }
  bool all = true;
  for (const auto& f : e.factors()) all = contains_from(f, point, pos) && all;
  return all;
}

}  // namespace

bool element_contains(const BasisElement& e, std::span<const Rational> point) {
  std::size_t pos = 0;
  bool inside = contains_from(e, point, pos);
  if (pos != point.size()) throw RangeError("point has too many coordinates");
  return inside;
}

Cursor::Status Cursor::next(Fuel& fuel, Code& out) {
  while (true) {
    if (e_.length && index_ >= *e_.length) return Status::exhausted;
    if (fuel.steps == 0) return Status::out_of_fuel;
    --fuel.steps;
    if (auto c = e_.at(index_++)) {
      out = std::move(*c);
      return Status::produced;
    }
  }
}

std::vector<Code> take(const Enumeration& e, std::size_t count, Fuel fuel) {
  Cursor cursor(e);
  std::vector<Code> out;
  Code c;
  while (out.size() < count) {
    switch (cursor.next(fuel, c)) {
      case Cursor::Status::produced:
        out.push_back(c);
        break;
      case Cursor::Status::exhausted:
        return out;
      case Cursor::Status::out_of_fuel:
        throw Inconclusive("fuel exhausted after " + std::to_string(out.size()) + " of " + std::to_string(count) +
                           " codes");
    }
  }
  return out;
}

BasisElement EffectiveTopology::decode(const Code& c) const {
  auto e = try_decode(c);
  if (!e) throw DecodeError("code " + c.str() + " is not in the domain of " + name());
  return std::move(*e);
}

Enumeration EffectiveTopology::supersets(const BasisElement& inner) const {
  Enumeration dom = domain();
  return {[self = shared_from_this(), dom, inner](std::uint64_t i) -> std::optional<Code> {
            auto c = dom.get(i);
            if (c && element_subset(inner, self->decode(*c))) return c;
            return std::nullopt;
          },
          dom.length};
}

Enumeration EffectiveTopology::subset_pairs() const {
  Enumeration dom = domain();
  return {[self = shared_from_this(), dom](std::uint64_t i) -> std::optional<Code> {
    auto [x, y] = unpair(Code(i));
    auto a = dom.get(x.to_u64()), b = dom.get(y.to_u64());
    if (a && b && self->subset(*a, *b)) return pair(*a, *b);
    return std::nullopt;
  }};
}

namespace {

/// |rho_inv| of both halves of an index: a fair walk over pairs of non-negative rationals.
std::pair<Rational, Rational> offsets(std::uint64_t i) {
  auto [a, b] = unpair(Code(i));
  Rational d1 = rho_inv(a), d2 = rho_inv(b);
  if (d1.sign() < 0) d1 = -d1;
  if (d2.sign() < 0) d2 = -d2;
  return {d1, d2};
}

/// A line lift (low, high) of an interval, with high - low equal to its width.
std::optional<std::pair<Rational, Rational>> lift(const RatInterval& i) {
  if (i.space == Space::line) return std::pair{i.low, i.high};
  if (i.wraps()) return std::pair{i.low, i.high + Rational(360)};
  return std::pair{i.low, i.high};
}

class IntervalTopology final : public EffectiveTopology {
 public:
  IntervalTopology(Space space, std::optional<Rational> c) : space_(space), c_(std::move(c)) {
    if (c_ && c_->sign() <= 0) throw RangeError("accuracy factor must be positive");
  }

  std::string name() const override {
    std::string base = space_ == Space::line ? (c_ ? "decimal-intervals" : "rational-intervals")
                                             : (c_ ? "circle360-grid" : "circle360");
    return c_ ? base + "(c=" + c_->str() + ")" : base;
  }

  std::size_t dimension() const override { return 1; }

  std::optional<BasisElement> try_decode(const Code& code) const override {
    auto [q, r] = interval_decode(code);
    auto i = check(q, r);
    if (!i) return std::nullopt;
    return BasisElement(*i);
  }

  Code encode(const BasisElement& e) const override {
    if (!e.is_interval()) throw RangeError("not an interval element");
    const auto& i = e.interval();
    if (!check(i.low, i.high) || i.space != space_) throw RangeError(i.str() + " is not a basis element of " + name());
    return interval_code(i.low, i.high);
  }

  Enumeration domain() const override {
    if (!c_) {
      return {[self = shared()](std::uint64_t i) -> std::optional<Code> {
        if (self->domain_contains(Code(i))) return Code(i);
        return std::nullopt;
      }};
    }
    return {[self = shared()](std::uint64_t i) -> std::optional<Code> {
      auto [zm, k] = unpair(Code(i));
      DecimalGridInterval g{zeta_inv(zm), k.to_u64() + 1, *self->c_};
      return self->grid_code(g);
    }};
  }

  Enumeration supersets(const BasisElement& inner) const override {
    if (!inner.is_interval()) return Enumeration::empty();
    const RatInterval& in = inner.interval();
    if (space_ == Space::line && in.space != Space::line) return EffectiveTopology::supersets(inner);
    if (space_ == Space::circle360 && in.space == Space::line && in.high - in.low >= Rational(360))
      return Enumeration::empty();
    auto l = lift(in);
    if (c_) return grid_supersets(in, l->first, l->second);
    auto self = shared();
    Rational lo = l->first, hi = l->second;
    return {[self, lo, hi](std::uint64_t i) -> std::optional<Code> {
      auto [d1, d2] = offsets(i);
      RatInterval cand{lo - d1, hi + d2, Space::line};
      if (self->space_ == Space::line) return interval_code(cand.low, cand.high);
      auto img = wrap_to_circle(cand);
      if (!img) return std::nullopt;
      return interval_code(img->low, img->high);
    }};
  }

 private:
  std::shared_ptr<const IntervalTopology> shared() const {
    return std::static_pointer_cast<const IntervalTopology>(shared_from_this());
  }

  std::optional<RatInterval> check(const Rational& q, const Rational& r) const {
    if (space_ == Space::line) {
      if (!(q < r)) return std::nullopt;
      if (c_ && !as_grid(q, r, *c_)) return std::nullopt;
      return RatInterval{q, r, Space::line};
    }
    Rational full(360);
    if (q.sign() < 0 || r.sign() < 0 || q >= full || r >= full || q == r) return std::nullopt;
    RatInterval i{q, r, Space::circle360};
    if (c_ && !as_circle_grid(i, *c_)) return std::nullopt;
    return i;
  }

  std::optional<Code> grid_code(const DecimalGridInterval& g) const {
    if (space_ == Space::line) return interval_code(g.low(), g.high());
    if (sgn(g.m) < 0 || g.m >= 360 * pow10(g.n) || g.width() >= Rational(360)) return std::nullopt;
    auto img = circle_grid_interval(g);
    return interval_code(img.low, img.high);
  }

  Enumeration grid_supersets(const RatInterval& inner, const Rational& lo, const Rational& hi) const {
    std::vector<Code> codes;
    std::set<Code> seen;
    const Rational& c = *c_;
    Rational width = hi - lo;
    for (unsigned long n = 1;; ++n) {
      DecimalGridInterval probe{0, n, c};
      if (probe.width() < width) break;
      Rational scale(pow10(n));
      BigInt m_lo = rat_ceil(hi * scale - c - Rational(1)), m_hi = rat_floor(lo * scale + c);
      for (BigInt m = m_lo; m <= m_hi; ++m) {
        DecimalGridInterval g{m, n, c};
        std::optional<RatInterval> img;
        if (space_ == Space::line) {
          img = g.interval();
        } else {
          if (g.width() >= Rational(360)) continue;
          BigInt period = 360 * pow10(n);
          mpz_fdiv_r(g.m.get_mpz_t(), g.m.get_mpz_t(), period.get_mpz_t());
          img = circle_grid_interval(g);
        }
        if (!interval_subset(inner, *img)) continue;
        Code code = interval_code(img->low, img->high);
        if (seen.insert(code).second) codes.push_back(code);
      }
    }
    auto shared_codes = std::make_shared<const std::vector<Code>>(std::move(codes));
    return {[shared_codes](std::uint64_t i) -> std::optional<Code> { return (*shared_codes)[i]; },
            shared_codes->size()};
  }

  Space space_;
  std::optional<Rational> c_;
};

class ProductTopology final : public EffectiveTopology {
 public:
  explicit ProductTopology(std::vector<TopologyPtr> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw RangeError("product of no topologies");
  }

  const std::vector<TopologyPtr>& factors() const { return factors_; }

  std::string name() const override {
    std::string out = "product(";
    for (std::size_t i = 0; i < factors_.size(); ++i) out += (i ? "," : "") + factors_[i]->name();
    return out + ")";
  }

  std::size_t dimension() const override {
    std::size_t d = 0;
    for (const auto& f : factors_) d += f->dimension();
    return d;
  }

  std::optional<BasisElement> try_decode(const Code& code) const override {
    auto parts = tuple_decode(code, factors_.size());
    ProductElement p;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      auto e = factors_[i]->try_decode(parts[i]);
      if (!e) return std::nullopt;
      p.factors.push_back(std::move(*e));
    }
    return BasisElement(std::move(p));
  }

  Code encode(const BasisElement& e) const override {
    if (e.is_interval() || e.factors().size() != factors_.size()) throw RangeError("element arity mismatch");
    std::vector<Code> parts;
    for (std::size_t i = 0; i < factors_.size(); ++i) parts.push_back(factors_[i]->encode(e.factors()[i]));
    return tuple_encode(parts);
  }

  Enumeration domain() const override {
    std::vector<Enumeration> parts;
    for (const auto& f : factors_) parts.push_back(f->domain());
    return combine(std::move(parts));
  }

  Enumeration supersets(const BasisElement& inner) const override {
    if (inner.is_interval() || inner.factors().size() != factors_.size()) return Enumeration::empty();
    std::vector<Enumeration> parts;
    for (std::size_t i = 0; i < factors_.size(); ++i) parts.push_back(factors_[i]->supersets(inner.factors()[i]));
    return combine(std::move(parts));
  }

 private:
  /// Dovetail the factor enumerations; mixed radix when every factor is finite.
  static Enumeration combine(std::vector<Enumeration> parts) {
    bool finite = std::all_of(parts.begin(), parts.end(), [](const Enumeration& e) { return e.length.has_value(); });
    auto shared_parts = std::make_shared<const std::vector<Enumeration>>(std::move(parts));
    if (finite) {
      std::uint64_t total = 1;
      for (const auto& e : *shared_parts) {
        if (*e.length == 0) return Enumeration::empty();
        total = *e.length > UINT64_MAX / total ? UINT64_MAX : total * *e.length;
      }
      return {[shared_parts](std::uint64_t i) -> std::optional<Code> {
                std::vector<Code> codes(shared_parts->size());
                for (std::size_t k = shared_parts->size(); k-- > 0;) {
                  const auto& e = (*shared_parts)[k];
                  auto c = e.get(i % *e.length);
                  if (!c) return std::nullopt;
                  codes[k] = std::move(*c);
                  i /= *e.length;
                }
                return tuple_encode(codes);
              },
              total};
    }
    return {[shared_parts](std::uint64_t i) -> std::optional<Code> {
      auto idx = tuple_decode(Code(i), shared_parts->size());
      std::vector<Code> codes;
      for (std::size_t k = 0; k < idx.size(); ++k) {
        auto c = (*shared_parts)[k].get(idx[k].to_u64());
        if (!c) return std::nullopt;
        codes.push_back(std::move(*c));
      }
      return tuple_encode(codes);
    }};
  }

  std::vector<TopologyPtr> factors_;
};

}  // namespace

TopologyPtr topology_rational_intervals() { return std::make_shared<IntervalTopology>(Space::line, std::nullopt); }

TopologyPtr topology_decimal_intervals(const Rational& c) { return std::make_shared<IntervalTopology>(Space::line, c); }

TopologyPtr topology_circle360(const CircleBasis& basis) {
  if (std::holds_alternative<AllRational>(basis))
    return std::make_shared<IntervalTopology>(Space::circle360, std::nullopt);
  return std::make_shared<IntervalTopology>(Space::circle360, std::get<DecimalGrid>(basis).c);
}

TopologyPtr effective_product(std::vector<TopologyPtr> factors) {
  return std::make_shared<ProductTopology>(std::move(factors));
}

std::vector<TopologyPtr> product_factors(const TopologyPtr& t) {
  if (auto p = std::dynamic_pointer_cast<const ProductTopology>(t)) return p->factors();
  return {t};
}

namespace {

BasicRep filtered_rep(TopologyPtr t, std::function<bool(const BasisElement&)> keep) {
  Enumeration dom = t->domain();
  BasicRep rep;
  rep.topology = t;
  rep.enumerator = {[t, dom, keep](std::uint64_t i) -> std::optional<Code> {
                      auto c = dom.get(i);
                      if (c && keep(t->decode(*c))) return c;
                      return std::nullopt;
                    },
                    dom.length};
  rep.member = [t, keep](const Code& c, Fuel) {
    auto e = t->try_decode(c);
    return e && keep(*e) ? Verdict::yes : Verdict::no;
  };
  return rep;
}

}  // namespace

BasicRep basic_rep_open(TopologyPtr t, std::function<bool(const BasisElement&)> contained_in_A) {
  return filtered_rep(std::move(t), std::move(contained_in_A));
}

BasicRep basic_rep_closed(TopologyPtr t, std::function<bool(const BasisElement&)> meets_A) {
  return filtered_rep(std::move(t), std::move(meets_A));
}

}  // namespace cpm
