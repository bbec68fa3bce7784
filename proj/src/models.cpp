#include "cpm/models.hpp"

#include <algorithm>
#include <numeric>

#include "cpm/encodings.hpp"
#include "cpm/errors.hpp"

namespace cpm {

Model::Model(std::string name, std::function<bool(const Code&)> member,
             std::vector<std::pair<std::string, Observable>> observables)
    : name_(std::move(name)), member_(std::move(member)) {
  for (auto& [n, f] : observables) {
    if (observables_.count(n)) throw ValidationError("duplicate observable '" + n + "'");
    names_.push_back(n);
    observables_.emplace(n, std::move(f));
  }
}

Model& Model::with_enumeration(Enumeration e) {
  enumeration_ = std::move(e);
  return *this;
}

Model& Model::with_solver(Solver s) {
  solver_ = std::move(s);
  return *this;
}

Model& Model::with_joint_solver(JointSolver s) {
  joint_solver_ = std::move(s);
  return *this;
}

Model& Model::with_derived(DerivedLookup d) {
  derived_ = std::move(d);
  return *this;
}

bool Model::member(const Code& s) const {
  try {
    return member_(s);
  } catch (const Error&) {
    return false;
  }
}

bool Model::has_observable(std::string_view name) const { return observables_.find(name) != observables_.end(); }

const Observable& Model::observable(std::string_view name) const {
  auto it = observables_.find(name);
  if (it == observables_.end()) throw UnknownObservable("unknown observable '" + std::string(name) + "'");
  return it->second;
}

Code Model::observe(std::string_view name, const Code& s) const {
  const auto& f = observable(name);
  if (!member(s)) throw NotAState(s.str() + " is not a state of " + name_);
  return f(s);
}

std::optional<std::vector<Code>> Model::solve(std::string_view name, const Code& value) const {
  observable(name);
  if (solver_) return (*solver_)(name, value);
  if (joint_solver_) {
    if (auto list = (*joint_solver_)({{std::string(name), value}})) return list->materialize();
  }
  return std::nullopt;
}

std::optional<StateList> Model::solve_all(const Constraints& constraints) const {
  if (joint_solver_) {
    if (auto list = (*joint_solver_)(constraints)) return list;
  }
  if (solver_ && constraints.size() == 1 && has_observable(constraints.front().first)) {
    if (auto v = (*solver_)(constraints.front().first, constraints.front().second)) {
      std::erase_if(*v, [this](const Code& s) { return !member(s); });
      return StateList::of(std::move(*v));
    }
  }
  return std::nullopt;
}

StateList StateList::of(std::vector<Code> states) {
  auto shared = std::make_shared<const std::vector<Code>>(std::move(states));
  return {shared->size(), [shared](std::uint64_t i) { return (*shared)[i]; }};
}

std::vector<Code> StateList::materialize() const {
  std::vector<Code> out;
  out.reserve(size);
  for (std::uint64_t i = 0; i < size; ++i) out.push_back(at(i));
  return out;
}

Quantity Model::quantity(std::string_view name) const {
  if (auto it = observables_.find(name); it != observables_.end()) {
    Observable f = it->second;
    return [f](const Code& s) -> std::optional<Code> { return f(s); };
  }
  if (derived_) {
    if (auto q = (*derived_)(name)) return *q;
  }
  throw UnknownObservable("unknown observable '" + std::string(name) + "'");
}

namespace {

struct Filter {
  std::vector<std::pair<Quantity, Code>> checks;

  Filter(const Model& m, const Constraints& cs) {
    for (const auto& [n, v] : cs) checks.emplace_back(m.quantity(n), v);
  }
  bool operator()(const Code& s) const {
    for (const auto& [q, v] : checks) {
      auto got = q(s);
      if (!got || *got != v) return false;
    }
    return true;
  }
};

void sort_unique(std::vector<Code>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::vector<Code> states_where(const Model& m, const Constraints& constraints, std::uint64_t cap) {
  Filter keep(m, constraints);
  std::vector<Code> out;
  if (constraints.size() > 1 && m.joint_solver()) {
    if (auto list = (*m.joint_solver())(constraints)) {
      if (list->size > cap) throw SizeLimit("more than " + std::to_string(cap) + " states to list");
      out = list->materialize();
      sort_unique(out);
      return out;
    }
  }
  for (const auto& [n, v] : constraints) {
    if (!m.has_observable(n)) continue;
    auto solved = m.solve_all({{n, v}});
    if (!solved) continue;
    if (solved->size > cap) throw SizeLimit("more than " + std::to_string(cap) + " states to list");
    for (std::uint64_t i = 0; i < solved->size; ++i) {
      Code s = solved->at(i);
      if (keep(s)) out.push_back(std::move(s));
    }
    sort_unique(out);
    return out;
  }
  const auto& e = m.enumeration();
  if (!e || !e->length || *e->length > cap)
    throw Inconclusive("state set of " + m.name() + " cannot be listed within the scan cap");
  for (std::uint64_t i = 0; i < *e->length; ++i) {
    auto s = e->get(i);
    if (s && keep(*s)) out.push_back(*s);
  }
  sort_unique(out);
  return out;
}

std::uint64_t count_where(const Model& m, const Constraints& constraints, std::uint64_t cap) {
  Filter check(m, constraints);
  if (auto list = m.solve_all(constraints)) return list->size;
  return states_where(m, constraints, cap).size();
}

Rational probability(const Model& m, const Constraints& event, const Constraints& given, std::uint64_t cap) {
  Constraints both = given;
  both.insert(both.end(), event.begin(), event.end());
  Filter check(m, both);
  auto given_list = m.solve_all(given);
  auto both_list = given_list ? m.solve_all(both) : std::nullopt;
  if (given_list && both_list) {
    if (given_list->size == 0) throw EmptyCondition("no state satisfies the condition");
    return Rational(BigInt(static_cast<unsigned long>(both_list->size)),
                    BigInt(static_cast<unsigned long>(given_list->size)));
  }
  auto base = states_where(m, given, cap);
  if (base.empty()) throw EmptyCondition("no state satisfies the condition");
  Filter hit(m, event);
  long count = std::count_if(base.begin(), base.end(), [&](const Code& s) { return hit(s); });
  return Rational(BigInt(count), BigInt(static_cast<unsigned long>(base.size())));
}

Model coarse_grain(const Model& m, const std::vector<std::string>& keep) {
  std::vector<std::pair<std::string, Observable>> obs;
  for (const auto& n : keep) m.observable(n);
  for (const auto& n : m.observable_names())
    if (std::find(keep.begin(), keep.end(), n) != keep.end()) obs.emplace_back(n, m.observable(n));
  Model out(m.name(), m.member_fn(), std::move(obs));
  if (m.enumeration()) out.with_enumeration(*m.enumeration());
  if (m.solver()) out.with_solver(*m.solver());
  if (m.joint_solver()) out.with_joint_solver(*m.joint_solver());
  return out;
}

void FiniteModel::validate() const {
  for (std::size_t i = 1; i < states.size(); ++i)
    if (!(states[i - 1] < states[i])) throw ValidationError("states must be strictly increasing");
  for (const auto& [n, t] : observables)
    if (t.size() != states.size()) throw ValidationError("table '" + n + "' does not cover every state");
}

std::size_t FiniteModel::index_of(const Code& s) const {
  auto it = std::lower_bound(states.begin(), states.end(), s);
  if (it == states.end() || *it != s) throw NotAState(s.str() + " is not a state");
  return static_cast<std::size_t>(it - states.begin());
}

const Code& FiniteModel::value(const std::string& observable, const Code& s) const {
  auto it = observables.find(observable);
  if (it == observables.end()) throw UnknownObservable("unknown observable '" + observable + "'");
  return it->second[index_of(s)];
}

std::vector<std::string> FiniteModel::names() const {
  std::vector<std::string> out;
  for (const auto& [n, t] : observables) out.push_back(n);
  return out;
}

FiniteModel restrict(const Model& m, std::vector<Code> states) {
  sort_unique(states);
  FiniteModel f;
  for (const auto& s : states)
    if (!m.member(s)) throw NotAState(s.str() + " is not a state of " + m.name());
  for (const auto& n : m.observable_names()) {
    auto& t = f.observables[n];
    for (const auto& s : states) t.push_back(m.observe(n, s));
  }
  f.states = std::move(states);
  return f;
}

Model as_model(const FiniteModel& f, std::string name) {
  f.validate();
  auto shared = std::make_shared<const FiniteModel>(f);
  std::vector<std::pair<std::string, Observable>> obs;
  for (const auto& n : f.names())
    obs.emplace_back(n, [shared, n](const Code& s) { return shared->value(n, s); });
  auto member = [shared](const Code& s) {
    return std::binary_search(shared->states.begin(), shared->states.end(), s);
  };
  Model m(std::move(name), member, std::move(obs));
  m.with_enumeration({[shared](std::uint64_t i) -> std::optional<Code> { return shared->states[i]; },
                      shared->states.size()});
  m.with_joint_solver([shared](const Constraints& cs) -> std::optional<StateList> {
    std::vector<std::pair<const std::vector<Code>*, Code>> checks;
    for (const auto& [n, v] : cs) {
      auto it = shared->observables.find(n);
      if (it == shared->observables.end()) return std::nullopt;
      checks.emplace_back(&it->second, v);
    }
    std::vector<Code> out;
    for (std::size_t i = 0; i < shared->states.size(); ++i)
      if (std::all_of(checks.begin(), checks.end(), [&](const auto& c) { return (*c.first)[i] == c.second; }))
        out.push_back(shared->states[i]);
    return StateList::of(std::move(out));
  });
  return m;
}

FiniteModel coarse_grain(const FiniteModel& f, const std::vector<std::string>& keep) {
  FiniteModel out;
  out.states = f.states;
  for (const auto& n : keep) {
    auto it = f.observables.find(n);
    if (it == f.observables.end()) throw UnknownObservable("unknown observable '" + n + "'");
    out.observables.emplace(n, it->second);
  }
  return out;
}

std::vector<BigInt> scale_weights(const std::vector<Rational>& weights) {
  BigInt l = 1;
  for (const auto& w : weights) {
    if (w.sign() <= 0) throw RangeError("ensemble weights must be positive");
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), w.denominator().get_mpz_t());
  }
  std::vector<BigInt> out;
  BigInt g = 0;
  for (const auto& w : weights) {
    out.push_back(w.numerator() * (l / w.denominator()));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out.back().get_mpz_t());
  }
  for (auto& v : out) v /= g;
  return out;
}

namespace {

struct EnsembleLayout {
  std::vector<Model> models;
  std::vector<BigInt> weight;
  std::vector<BigInt> offset;
  BigInt total = 0;

  /// Component owning index j, if j is in range.
  std::optional<std::size_t> component(const BigInt& j) const {
    for (std::size_t i = 0; i < models.size(); ++i)
      if (j >= offset[i] && j < offset[i] + weight[i]) return i;
    return std::nullopt;
  }
};

}  // namespace

Model statistical_ensemble(const std::vector<WeightedModel>& entries, std::string name) {
  if (entries.empty()) throw ValidationError("an ensemble needs at least one model");
  auto layout = std::make_shared<EnsembleLayout>();
  std::vector<Rational> ws;
  for (const auto& e : entries) {
    if (e.model.observable_names() != entries.front().model.observable_names())
      throw MismatchedObservables("ensemble components must have identical observable names");
    layout->models.push_back(e.model);
    ws.push_back(e.weight);
  }
  layout->weight = scale_weights(ws);
  for (const auto& w : layout->weight) {
    layout->offset.push_back(layout->total);
    layout->total += w;
  }

  auto split = [layout](const Code& c) -> std::optional<std::pair<std::size_t, Code>> {
    auto [s, j] = unpair(c);
    auto i = layout->component(j.value());
    if (!i) return std::nullopt;
    return std::make_pair(*i, s);
  };

  std::vector<std::pair<std::string, Observable>> obs;
  for (const auto& n : entries.front().model.observable_names()) {
    obs.emplace_back(n, [layout, split, n](const Code& c) {
      auto p = split(c);
      if (!p) throw NotAState(c.str() + " is not an ensemble state");
      return layout->models[p->first].observe(n, p->second);
    });
  }
  auto member = [layout, split](const Code& c) {
    auto p = split(c);
    return p && layout->models[p->first].member(p->second);
  };
  Model out(std::move(name), member, std::move(obs));

  bool enumerable = true, finite = true;
  for (const auto& m : layout->models) {
    enumerable = enumerable && m.enumeration().has_value();
    finite = finite && enumerable && m.enumeration()->length.has_value();
  }
  if (enumerable && finite) {
    std::uint64_t length = 0;
    for (std::size_t i = 0; i < layout->models.size(); ++i)
      length += Code(layout->weight[i]).to_u64() * *layout->models[i].enumeration()->length;
    out.with_enumeration({[layout](std::uint64_t k) -> std::optional<Code> {
                            for (std::size_t i = 0; i < layout->models.size(); ++i) {
                              const auto& e = *layout->models[i].enumeration();
                              std::uint64_t w = Code(layout->weight[i]).to_u64();
                              std::uint64_t block = w * *e.length;
                              if (k < block) {
                                auto s = e.get(k % *e.length);
                                if (!s) return std::nullopt;
                                return pair(*s, Code(layout->offset[i] + BigInt(static_cast<unsigned long>(k / *e.length))));
                              }
                              k -= block;
                            }
                            return std::nullopt;
                          },
                          length});
  } else if (enumerable) {
    out.with_enumeration({[layout](std::uint64_t k) -> std::optional<Code> {
                            auto [a, j] = unpair(Code(k));
                            auto i = layout->component(j.value());
                            if (!i || !a.fits_u64()) return std::nullopt;
                            auto s = layout->models[*i].enumeration()->get(a.to_u64());
                            if (!s) return std::nullopt;
                            return pair(*s, j);
                          },
                          std::nullopt});
  }

  out.with_joint_solver([layout](const Constraints& cs) -> std::optional<StateList> {
    std::vector<StateList> parts;
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < layout->models.size(); ++i) {
      auto part = layout->models[i].solve_all(cs);
      if (!part) return std::nullopt;
      total += part->size * Code(layout->weight[i]).to_u64();
      parts.push_back(std::move(*part));
    }
    return StateList{total, [layout, parts](std::uint64_t k) {
                       for (std::size_t i = 0;; ++i) {
                         std::uint64_t w = Code(layout->weight[i]).to_u64();
                         if (k < w * parts[i].size)
                           return pair(parts[i].at(k / w), Code(layout->offset[i] + static_cast<unsigned long>(k % w)));
                         k -= w * parts[i].size;
                       }
                     }};
  });

  out.with_derived([layout, split](std::string_view n) -> std::optional<Quantity> {
    std::vector<Quantity> parts;
    for (const auto& m : layout->models) {
      if (!m.derived()) return std::nullopt;
      auto q = (*m.derived())(n);
      if (!q) return std::nullopt;
      parts.push_back(*q);
    }
    return Quantity([parts, split](const Code& c) -> std::optional<Code> {
      auto p = split(c);
      if (!p) return std::nullopt;
      return parts[p->first](p->second);
    });
  });
  return out;
}

}  // namespace cpm
