#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cpm/encodings.hpp"
#include "cpm/exactnum.hpp"

namespace cpm {

struct BasisElement;

struct ProductElement {
  std::vector<BasisElement> factors;
};

/// Decoded basis set: an interval or a product of basis sets.
struct BasisElement {
  std::variant<RatInterval, ProductElement> value;

  BasisElement(RatInterval i) : value(std::move(i)) {}
  BasisElement(ProductElement p) : value(std::move(p)) {}

  bool is_interval() const { return std::holds_alternative<RatInterval>(value); }
  const RatInterval& interval() const { return std::get<RatInterval>(value); }
  const std::vector<BasisElement>& factors() const { return std::get<ProductElement>(value).factors; }
  std::string str() const;

  friend bool operator==(const BasisElement& a, const BasisElement& b);
};

bool element_subset(const BasisElement& a, const BasisElement& b);
bool element_meets(const BasisElement& a, const BasisElement& b);
/// Membership of a point given by one coordinate per interval factor.
bool element_contains(const BasisElement& e, std::span<const Rational> point);

enum class Verdict { yes, no, inconclusive };

/// Step budget for semi-decidable searches.
struct Fuel {
  std::uint64_t steps = 100000;
};

/// Fair partial enumeration: every member shows up at some index, indices may be empty.
struct Enumeration {
  std::function<std::optional<Code>(std::uint64_t)> at;
  /// When known, indices at or past `length` are empty and the enumeration is finite.
  std::optional<std::uint64_t> length = std::nullopt;

  std::optional<Code> get(std::uint64_t i) const {
    if (length && i >= *length) return std::nullopt;
    return at(i);
  }
  static Enumeration empty() { return {[](std::uint64_t) { return std::optional<Code>{}; }, 0}; }
};

/// Stateful walk over an Enumeration; one thread at a time.
class Cursor {
 public:
  explicit Cursor(Enumeration e) : e_(std::move(e)) {}

  enum class Status { produced, exhausted, out_of_fuel };
  /// Advance to the next nonempty index, spending one step per index probed.
  Status next(Fuel& fuel, Code& out);
  std::uint64_t position() const { return index_; }

 private:
  Enumeration e_;
  std::uint64_t index_ = 0;
};

/// First `count` members; stops early only when a finite enumeration ends.
/// Throws Inconclusive when fuel runs out first.
std::vector<Code> take(const Enumeration& e, std::size_t count, Fuel fuel = {});

class EffectiveTopology : public std::enable_shared_from_this<EffectiveTopology> {
 public:
  virtual ~EffectiveTopology() = default;

  virtual std::string name() const = 0;
  /// Number of interval factors in a basis element.
  virtual std::size_t dimension() const = 0;
  /// nullopt outside the domain.
  virtual std::optional<BasisElement> try_decode(const Code& c) const = 0;
  /// Code of a basis element; throws RangeError when the set is not in this basis.
  virtual Code encode(const BasisElement& e) const = 0;
  /// Fair enumeration of the domain.
  virtual Enumeration domain() const = 0;
  /// Fair enumeration of domain codes b with inner ⊆ ν(b).
  virtual Enumeration supersets(const BasisElement& inner) const;

  bool domain_contains(const Code& c) const { return try_decode(c).has_value(); }
  /// Throws DecodeError outside the domain.
  BasisElement decode(const Code& c) const;
  /// Exact subset decision for domain codes.
  bool subset(const Code& a, const Code& b) const { return element_subset(decode(a), decode(b)); }
  /// Fair enumeration of <a,b> with ν(a) ⊆ ν(b), derived from the decider.
  Enumeration subset_pairs() const;
};

using TopologyPtr = std::shared_ptr<const EffectiveTopology>;

/// Open rational intervals on the line; codes are interval_code(q, r) with q < r.
TopologyPtr topology_rational_intervals();
/// Decimal grid intervals of accuracy c on the line.
TopologyPtr topology_decimal_intervals(const Rational& c);

struct AllRational {};
struct DecimalGrid {
  Rational c;
};
using CircleBasis = std::variant<AllRational, DecimalGrid>;
/// Intervals on the 360-degree circle, wrapped ones included.
TopologyPtr topology_circle360(const CircleBasis& basis);

/// Codes are tuple_encode of factor codes; subset and domain are componentwise.
TopologyPtr effective_product(std::vector<TopologyPtr> factors);
/// Factors of a product topology, or {t} for an interval topology.
std::vector<TopologyPtr> product_factors(const TopologyPtr& t);

/// A set of basis codes representing a point set.
struct BasicRep {
  TopologyPtr topology;
  Enumeration enumerator;
  /// Optional decision procedure for membership in R.
  std::function<Verdict(const Code&, Fuel)> member;
  /// Optional: members of R whose leading components equal the given codes.
  std::function<Enumeration(std::span<const Code>)> fiber;
};

/// R = {r : ν(r) ⊆ A} for an open set A.
BasicRep basic_rep_open(TopologyPtr t, std::function<bool(const BasisElement&)> contained_in_A);
/// R = {r : ν(r) meets A} for a closed set A.
BasicRep basic_rep_closed(TopologyPtr t, std::function<bool(const BasisElement&)> meets_A);

}  // namespace cpm
