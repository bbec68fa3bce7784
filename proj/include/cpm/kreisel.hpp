#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cpm/oracles.hpp"

namespace cpm {

/// Interval arithmetic for one output coordinate of a function on R^k.
struct IntervalExtension {
  std::string name;
  std::size_t arity = 1;
  Space output_space = Space::line;
  /// Maps k input intervals to an interval enclosing the image of their product.
  std::function<RatInterval(std::span<const RatInterval>)> eval;
  /// The underlying point function, used to check enclosure.
  std::function<Rational(std::span<const Rational>)> exact;
};

/// t -> 360(t - floor t) on the circle; wrapped output near integers.
IntervalExtension orbit_extension();
IntervalExtension square_extension();
IntervalExtension sum_extension();
IntervalExtension identity_extension();

/// Topology of an extension's outputs: circle360 or rational intervals.
TopologyPtr output_topology(const IntervalExtension& e);

struct KreiselModel {
  std::size_t k = 1;
  std::size_t n = 2;
  std::vector<IntervalExtension> extensions;
  Rational c = Rational(1, 10);

  /// Throws RangeError unless n > k >= 1 and every extension takes k inputs.
  void validate() const;
  /// Product of k grid-interval factors followed by the output topologies.
  TopologyPtr topology() const;
};

/// k = 1, n = 2 with the orbit extension.
KreiselModel kreisel_orbit(const Rational& c = Rational(1, 10));

/// ξ_j applied to the m-th intervals of the inputs (j is 1-based). Throws TruncatedInput
/// when a truncated input is undefined at m.
Code kappa(const KreiselModel& km, std::size_t j, const std::vector<Oracle>& inputs, std::uint64_t m);

/// All <u_1..u_k, κ_1(σ_u, m), ..., κ_{n-k}(σ_u, m)> with every σ_{u_i} defined at m.
/// Membership replays m below the shortest truncation; fiber enumerates by m.
BasicRep basic_rep_of_kreisel(const KreiselModel& km);

/// Output oracles of the n - k coordinates, read off predicted states for the inputs.
/// Each at(s) comes from a state of Q verified with `fuel`; Inconclusive when it runs out.
std::vector<Oracle> predict(const KreiselModel& km, const std::vector<Oracle>& inputs, Fuel fuel = {});

}  // namespace cpm
