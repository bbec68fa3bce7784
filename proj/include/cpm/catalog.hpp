#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cpm/models.hpp"

namespace cpm {

/// Orbit models: states carry interval codes <ρ(r), ρ(s)> for time (years) and
/// angle (degrees, circle360 semantics; p > q means the interval wraps past 0).
/// Observable names are "tau" and "alpha", with "tau1"/"tau2"/"alpha1"/"alpha2"
/// for the two-precision model.

/// 40001 states <τ, α>, i in [-20000, 20000], τ = [i/10 - 1/100, (i+1)/10 + 1/100].
Model model_discrete_orbit();
/// Every precision n >= 1 and every integer i; τ = [i/10^n - 1/10^(n+1), (i+1)/10^n + 1/10^(n+1)].
Model model_continuous_orbit();
/// <τ1, τ2, α1, α2> at precisions 1 and 2 with 10i <= j <= 10i + 9; i unbounded.
Model model_two_precision_orbit();
/// Period of four years: angle index n = floor(i/4), i in [-20000, 20000].
Model model_slow_orbit();
/// <τ, α, j>: j in {0, 1} for the discrete orbit and j = 2 for the slow orbit.
Model model_orbit_ensemble();

/// Orbit state of the discrete family: time index i, angle index n.
Code orbit_state(const BigInt& i, const BigInt& n);
/// Interval [i/10 - 1/100, (i+1)/10 + 1/100] as a code.
Code orbit_time(const BigInt& i);
/// Angle interval for angle index n, wrapped into [0, 360).
Code orbit_angle(const BigInt& n);

/// Distance meters: <ζ(m), ζ(d), ζ(i)> with m = floor((d+i)/10), i = ±1 (decimeter_only),
/// otherwise <ζ(m), ζ(d), ζ(c), ζ(i), ζ(j)> with m = floor((c+10i)/100), d = floor((c+j)/10).
/// Observables "mu" (meters) and "delta" (decimeters).
Model model_meters(bool decimeter_only);

/// <τ, α, ζ(i), ζ(j), ζ(k)> with k in [-200000, 200000], i, j = ±1,
/// time index floor((k+i)/10) and angle index floor((k+j)/10).
Model model_calibrated_orbit();
/// Hidden time index k of a calibrated-orbit state; not an observable. Throws NotAState.
BigInt calibrated_orbit_k(const Code& state);

/// <t, β(2^n - 1, t), j> with 0 <= n <= t, t != 0, 2j <= 2^n - 1; observables "tau" and "eta".
/// Derived quantity "status@k" is the k-th bit of the history (undefined past t).
/// Constraints on tau, eta and status@k are solved jointly and counted without
/// building the states (whose codes double in length with every step), for t <= 62.
Model model_radioactive();

/// Measurement statistics for the quantum criteria. Measurement indices and values
/// are codes; `prob` must be 0 for unknown indices or values.
struct QuantumSpec {
  /// prob(i, n, t, h): probability that measurement i gives value n at step t after history h.
  std::function<Rational(const Code& i, const Code& n, const Code& t, const Code& h)> prob;
  /// Values are searched over codes 0..value_bound-1.
  std::uint64_t value_bound = 4096;
  /// Largest time step accepted; later steps are rejected (MalformedState in quantum_member).
  std::uint64_t max_time = 64;
  /// Finite list of measurement indices, used only for enumeration and solve.
  std::vector<Code> measurements;
};

/// Membership of <t, h, j>, h = <record_1, ..., record_t>, record = <i, n>:
/// accept iff t > 0, every recorded value has nonzero probability and j < a_1 ... a_t,
/// where φ(i_k, n_k, k, h_k) = a_k / d_k over the least common denominator d_k.
/// Throws MalformedState past max_time and NonterminatingSum when the probabilities
/// do not reach 1 below value_bound.
bool quantum_member(const QuantumSpec& spec, const Code& s);

/// Per-step a_k for a history (empty if some step has probability 0).
std::optional<std::vector<BigInt>> quantum_weights(const QuantumSpec& spec, const std::vector<std::pair<Code, Code>>& records);

/// Model of all states accepted by quantum_member; observables "tau" and "eta",
/// derived "angle@k" and "value@k" (the k-th record's measurement and value codes).
Model quantum_model(QuantumSpec spec, std::string name);

/// Spin measured along 0 or 60 degrees from z, values ±1 (in units of ħ/2), starting in z+.
/// Records are <ρ(angle), ρ(value)>. Probabilities are (1 + v v' cos Δ) / 2 with
/// cos 60° = 1/2, so repeats are deterministic.
///
/// The index ranges printed for this system list 9 states for <60,+1>,<0,-1> and
/// 3 for <60,+1>,<0,+1>, the <60,-1> pair swapped likewise. The general membership
/// rule gives 3 and 9 (a_1 a_2 = 3·1 and 3·3), in line with the stated probability
/// 1/4 for -1. This model follows the membership rule.
QuantumSpec spin_spec();
Model model_spin();

/// Record code <ρ(angle), ρ(value)>.
Code spin_record(long angle, long value);

/// Stable catalog names.
std::vector<std::string> catalog_names();
/// Throws ValidationError for an unknown name.
Model catalog_model(const std::string& name);

}  // namespace cpm
