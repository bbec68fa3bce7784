#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cpm/topology.hpp"

namespace cpm {

using Observable = std::function<Code(const Code&)>;
/// A state function that may be undefined on some states (a failed constraint there).
using Quantity = std::function<std::optional<Code>(const Code&)>;
/// States with a given observable value; nullopt when that set is infinite or not computable here.
using Solver = std::function<std::optional<std::vector<Code>>(std::string_view, const Code&)>;
/// Derived quantities addressed by name (such as "status@2"); nullopt for unknown names.
using DerivedLookup = std::function<std::optional<Quantity>(std::string_view)>;
/// Ordered name/value constraints.
using Constraints = std::vector<std::pair<std::string, Code>>;

/// Finite state list indexed lazily, so large solution sets can be counted without being built.
struct StateList {
  std::uint64_t size = 0;
  std::function<Code(std::uint64_t)> at;

  static StateList of(std::vector<Code> states);
  std::vector<Code> materialize() const;
};
/// Exactly the states meeting every constraint; nullopt when the combination is not supported.
using JointSolver = std::function<std::optional<StateList>(const Constraints&)>;

/// A decidable set of states with finitely many named total observables.
class Model {
 public:
  Model(std::string name, std::function<bool(const Code&)> member,
        std::vector<std::pair<std::string, Observable>> observables);

  Model& with_enumeration(Enumeration e);
  Model& with_solver(Solver s);
  Model& with_joint_solver(JointSolver s);
  Model& with_derived(DerivedLookup d);

  const std::string& name() const { return name_; }
  /// Total: malformed codes are simply not states.
  bool member(const Code& s) const;
  /// Throws UnknownObservable or NotAState.
  Code observe(std::string_view observable, const Code& s) const;
  const std::vector<std::string>& observable_names() const { return names_; }
  bool has_observable(std::string_view name) const;
  const std::optional<Enumeration>& enumeration() const { return enumeration_; }
  std::optional<std::vector<Code>> solve(std::string_view observable, const Code& value) const;
  /// Joint solver, or the single-observable solver for one constraint.
  std::optional<StateList> solve_all(const Constraints& constraints) const;
  /// Observable or derived quantity by name; throws UnknownObservable.
  Quantity quantity(std::string_view name) const;

  const Observable& observable(std::string_view name) const;
  const std::function<bool(const Code&)>& member_fn() const { return member_; }
  const std::optional<Solver>& solver() const { return solver_; }
  const std::optional<JointSolver>& joint_solver() const { return joint_solver_; }
  const std::optional<DerivedLookup>& derived() const { return derived_; }

 private:
  std::string name_;
  std::function<bool(const Code&)> member_;
  std::vector<std::string> names_;
  std::map<std::string, Observable, std::less<>> observables_;
  std::optional<Enumeration> enumeration_;
  std::optional<Solver> solver_;
  std::optional<JointSolver> joint_solver_;
  std::optional<DerivedLookup> derived_;
};

/// Sorted states satisfying every constraint. Uses solve when some constraint supports it,
/// otherwise scans up to `cap` enumeration indices and throws Inconclusive if that is not enough.
std::vector<Code> states_where(const Model& m, const Constraints& constraints, std::uint64_t cap = 1000000);

/// Number of states meeting the constraints; counts a joint solution without building it.
std::uint64_t count_where(const Model& m, const Constraints& constraints, std::uint64_t cap = 1000000);

/// |given ∧ event| / |given| over equally likely states; throws EmptyCondition.
Rational probability(const Model& m, const Constraints& event, const Constraints& given, std::uint64_t cap = 1000000);

/// Same states, observables restricted to `keep` (original order kept). Derived quantities are dropped.
Model coarse_grain(const Model& m, const std::vector<std::string>& keep);

/// Explicit finite model: tables aligned with the sorted state list.
struct FiniteModel {
  std::vector<Code> states;
  std::map<std::string, std::vector<Code>> observables;

  /// Throws ValidationError on unsorted states or tables of the wrong length.
  void validate() const;
  std::size_t size() const { return states.size(); }
  std::size_t index_of(const Code& s) const;
  const Code& value(const std::string& observable, const Code& s) const;
  std::vector<std::string> names() const;

  friend bool operator==(const FiniteModel&, const FiniteModel&) = default;
};

/// Tabulate a model on the given states (sorted and deduplicated); throws NotAState.
FiniteModel restrict(const Model& m, std::vector<Code> states);
Model as_model(const FiniteModel& f, std::string name = "finite");
FiniteModel coarse_grain(const FiniteModel& f, const std::vector<std::string>& keep);

struct WeightedModel {
  Model model;
  Rational weight;
};

/// Integer weights with gcd 1 proportional to the given positive rationals.
std::vector<BigInt> scale_weights(const std::vector<Rational>& weights);

/// Weighted disjoint union: states pair(s, j), component i owning the j-range
/// [w_0 + ... + w_{i-1}, w_0 + ... + w_i). The index j is not observable.
Model statistical_ensemble(const std::vector<WeightedModel>& entries, std::string name = "ensemble");

struct SearchLimits {
  std::size_t max_states = 4096;
  std::size_t max_observables = 8;
};

struct Morphism {
  std::map<Code, Code> states;
  std::map<std::string, std::string> observables;
};

bool is_reduced(const FiniteModel& m);

struct Reduction {
  FiniteModel model;
  /// Each state to the least state of its indistinguishability class.
  std::map<Code, Code> state_map;
};
Reduction reduce(const FiniteModel& m);

std::optional<Morphism> find_isomorphism(const FiniteModel& a, const FiniteModel& b, SearchLimits limits = {});
bool is_isomorphic(const FiniteModel& a, const FiniteModel& b, SearchLimits limits = {});
std::optional<Morphism> find_epimorphism(const FiniteModel& a, const FiniteModel& b, SearchLimits limits = {});
bool is_epimorphic(const FiniteModel& a, const FiniteModel& b, SearchLimits limits = {});

/// Decided as "the reduced quotients are isomorphic": a reduced epimorphic image separates
/// its states, so it is isomorphic to the quotient by indistinguishability.
bool observationally_equivalent(const FiniteModel& a, const FiniteModel& b, SearchLimits limits = {});

/// States become <α1(s), ..., αn(s), s> (names in order); α_i becomes the projection "pi<i>".
FiniteModel normal_form(const FiniteModel& m);
/// States relabelled 0..n-1 in order.
FiniteModel renumber(const FiniteModel& m);

using PartialMap = std::function<std::optional<Code>(const Code&)>;
/// States 0..n-1 where φ is defined on exactly that prefix; observable "pi<i>" is π_i^arity ∘ φ.
/// Throws Inconclusive if φ is still defined at probe_limit.
FiniteModel determined_by(const PartialMap& phi, std::size_t arity, std::uint64_t probe_limit);
/// φ(i) = <α1(s_i), ..., αn(s_i)> for the i-th state; undefined past the last state.
PartialMap determining_function(const FiniteModel& m);

}  // namespace cpm
