#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>

#include "cpm/topology.hpp"

namespace cpm {

struct OracleFlavor {
  bool complete = false;
  bool nested = false;
};

struct OracleEntry {
  Code code;
  BasisElement element;
};

/// Produces oracle entries; called with n = 0, 1, 2, ... strictly in order.
class OracleSource {
 public:
  virtual ~OracleSource() = default;
  virtual OracleEntry next(std::uint64_t n) = 0;
};

/// Memoised map from index to basis code, meant to enumerate a local basis of one point.
/// Copies share the memo; computed prefixes are stable across calls.
class Oracle {
 public:
  Oracle(TopologyPtr topology, std::unique_ptr<OracleSource> source, OracleFlavor flavor,
         std::optional<std::uint64_t> length = std::nullopt);

  /// Throws TruncatedInput past `length`, Inconclusive when a transformer runs out of fuel.
  const OracleEntry& entry(std::uint64_t n) const;
  const Code& at(std::uint64_t n) const { return entry(n).code; }
  const BasisElement& element(std::uint64_t n) const { return entry(n).element; }

  const TopologyPtr& topology() const { return topology_; }
  OracleFlavor flavor() const { return flavor_; }
  std::optional<std::uint64_t> length() const { return length_; }

 private:
  struct State {
    std::mutex mu;
    std::unique_ptr<OracleSource> source;
    std::deque<OracleEntry> cache;
  };

  TopologyPtr topology_;
  std::shared_ptr<State> state_;
  OracleFlavor flavor_;
  std::optional<std::uint64_t> length_;
};

/// Oracle from an element generator; entries are encoded in `topology`.
Oracle oracle_from_elements(TopologyPtr topology, std::function<BasisElement(std::uint64_t)> gen, OracleFlavor flavor,
                            std::optional<std::uint64_t> length = std::nullopt);

/// o_x: at(n) is decimal_interval(x, n, c). Nested for every c > 0, since m' lies in [10m, 10m+9].
Oracle standard_decimal_oracle(const Rational& x, const Rational& c);
/// Standard decimal oracle of integer_part + 0.d1 d2 d3 ... for a user digit stream (digits 0..9).
Oracle digit_stream_oracle(const BigInt& integer_part, std::function<int(std::uint64_t)> digit, const Rational& c);
/// [x - 2^-n, x + 2^-n] in the rational-interval topology.
Oracle dyadic_oracle(const Rational& x);
/// σ_u: the standard oracle of u's midpoint, defined only below u's digit count.
Oracle truncated_oracle(const DecimalGridInterval& u);

/// Range = every domain code containing some φ(n), found by dovetailing φ indices with superset enumerations.
Oracle complete_oracle(const Oracle& phi, Fuel fuel = {});
/// ψ(0) = φ(0); ψ(n+1) is the first φ(m) inside ψ(n) ∩ φ(n+1).
Oracle nested_oracle(const Oracle& phi, Fuel fuel = {});
/// at(n) is a target code b with ν(φ(m)) ⊆ ν(b) ⊆ ν(φ(n)) for some m.
Oracle convert_oracle(const Oracle& phi, TopologyPtr target, Fuel fuel = {});

/// Q = {r ∈ R : π_i(r) is in the range of oracle i for i ≤ k}, a basic representation of the
/// states consistent with the data. With k = 0 this is R itself.
BasicRep predicted_states(const BasicRep& R, const std::vector<Oracle>& oracles, Fuel fuel = {});

}  // namespace cpm
