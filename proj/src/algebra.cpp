#include <algorithm>
#include <map>

#include "cpm/encodings.hpp"
#include "cpm/errors.hpp"
#include "cpm/models.hpp"

namespace cpm {

namespace {

using Signature = std::vector<Code>;

void check_limits(const FiniteModel& m, const SearchLimits& limits) {
  m.validate();
  if (m.states.size() > limits.max_states || m.observables.size() > limits.max_observables)
    throw SizeLimit("model exceeds the isomorphism search bound (" + std::to_string(limits.max_states) +
                    " states, " + std::to_string(limits.max_observables) + " observables)");
}

std::vector<const std::vector<Code>*> tables(const FiniteModel& m, const std::vector<std::string>& order) {
  std::vector<const std::vector<Code>*> out;
  for (const auto& n : order) out.push_back(&m.observables.at(n));
  return out;
}

Signature signature(const std::vector<const std::vector<Code>*>& ts, std::size_t i) {
  Signature s;
  for (auto* t : ts) s.push_back((*t)[i]);
  return s;
}

std::map<Signature, std::vector<Code>> classes(const FiniteModel& m, const std::vector<std::string>& order) {
  auto ts = tables(m, order);
  std::map<Signature, std::vector<Code>> out;
  for (std::size_t i = 0; i < m.states.size(); ++i) out[signature(ts, i)].push_back(m.states[i]);
  return out;
}

std::vector<Code> sorted_values(const std::vector<Code>& t, bool distinct) {
  auto v = t;
  std::sort(v.begin(), v.end());
  if (distinct) v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

/// Try every compatible observable bijection; `leaf` builds the state map or fails.
template <class Leaf>
std::optional<Morphism> search(const FiniteModel& a, const FiniteModel& b, bool distinct, Leaf leaf) {
  auto na = a.names(), nb = b.names();
  if (na.size() != nb.size()) return std::nullopt;
  std::vector<std::vector<bool>> ok(na.size(), std::vector<bool>(nb.size()));
  for (std::size_t i = 0; i < na.size(); ++i)
    for (std::size_t j = 0; j < nb.size(); ++j)
      ok[i][j] = sorted_values(a.observables.at(na[i]), distinct) == sorted_values(b.observables.at(nb[j]), distinct);

  std::vector<std::string> image(na.size());
  std::vector<bool> used(nb.size());
  std::optional<Morphism> found;
  auto go = [&](auto&& self, std::size_t k) -> void {
    if (found) return;
    if (k == na.size()) {
      if (auto states = leaf(classes(a, na), classes(b, image))) {
        found = Morphism{std::move(*states), {}};
        for (std::size_t i = 0; i < na.size(); ++i) found->observables[na[i]] = image[i];
      }
      return;
    }
    for (std::size_t j = 0; j < nb.size() && !found; ++j) {
      if (used[j] || !ok[k][j]) continue;
      used[j] = true;
      image[k] = nb[j];
      self(self, k + 1);
      used[j] = false;
    }
  };
  go(go, 0);
  return found;
}

}  // namespace

bool is_reduced(const FiniteModel& m) {
  m.validate();
  return classes(m, m.names()).size() == m.states.size();
}

Reduction reduce(const FiniteModel& m) {
  m.validate();
  auto names = m.names();
  Reduction r;
  std::map<Code, Signature> rep_sig;
  for (const auto& [sig, members] : classes(m, names)) {
    for (const auto& s : members) r.state_map[s] = members.front();
    rep_sig[members.front()] = sig;
  }
  for (const auto& [rep, sig] : rep_sig) {
    r.model.states.push_back(rep);
    for (std::size_t k = 0; k < names.size(); ++k) r.model.observables[names[k]].push_back(sig[k]);
  }
  for (const auto& n : names) r.model.observables[n];
  return r;
}

std::optional<Morphism> find_isomorphism(const FiniteModel& a, const FiniteModel& b, SearchLimits limits) {
  check_limits(a, limits);
  check_limits(b, limits);
  if (a.states.size() != b.states.size()) return std::nullopt;
  return search(a, b, false, [](const auto& ca, const auto& cb) -> std::optional<std::map<Code, Code>> {
    if (ca.size() != cb.size()) return std::nullopt;
    std::map<Code, Code> phi;
    for (const auto& [sig, xs] : ca) {
      auto it = cb.find(sig);
      if (it == cb.end() || it->second.size() != xs.size()) return std::nullopt;
      for (std::size_t i = 0; i < xs.size(); ++i) phi[xs[i]] = it->second[i];
    }
    return phi;
  });
}

bool is_isomorphic(const FiniteModel& a, const FiniteModel& b, SearchLimits limits) {
  return find_isomorphism(a, b, limits).has_value();
}

std::optional<Morphism> find_epimorphism(const FiniteModel& a, const FiniteModel& b, SearchLimits limits) {
  check_limits(a, limits);
  check_limits(b, limits);
  if (a.states.size() < b.states.size()) return std::nullopt;
  return search(a, b, true, [](const auto& ca, const auto& cb) -> std::optional<std::map<Code, Code>> {
    if (ca.size() != cb.size()) return std::nullopt;
    std::map<Code, Code> phi;
    for (const auto& [sig, xs] : ca) {
      auto it = cb.find(sig);
      if (it == cb.end() || it->second.size() > xs.size()) return std::nullopt;
      const auto& ys = it->second;
      for (std::size_t i = 0; i < xs.size(); ++i) phi[xs[i]] = ys[std::min(i, ys.size() - 1)];
    }
    return phi;
  });
}

bool is_epimorphic(const FiniteModel& a, const FiniteModel& b, SearchLimits limits) {
  return find_epimorphism(a, b, limits).has_value();
}

// A reduced epimorphic image separates its states, so its states biject with the
// indistinguishability classes; comparing canonical quotients decides equivalence.
bool observationally_equivalent(const FiniteModel& a, const FiniteModel& b, SearchLimits limits) {
  return is_isomorphic(reduce(a).model, reduce(b).model, limits);
}

FiniteModel normal_form(const FiniteModel& m) {
  m.validate();
  auto names = m.names();
  auto ts = tables(m, names);
  std::vector<std::pair<Code, Signature>> rows;
  for (std::size_t i = 0; i < m.states.size(); ++i) {
    auto sig = signature(ts, i);
    auto parts = sig;
    parts.push_back(m.states[i]);
    rows.emplace_back(tuple_encode(parts), std::move(sig));
  }
  std::sort(rows.begin(), rows.end());
  FiniteModel out;
  for (std::size_t k = 0; k < names.size(); ++k) out.observables["pi" + std::to_string(k + 1)];
  for (const auto& [code, sig] : rows) {
    out.states.push_back(code);
    for (std::size_t k = 0; k < names.size(); ++k) out.observables["pi" + std::to_string(k + 1)].push_back(sig[k]);
  }
  return out;
}

FiniteModel renumber(const FiniteModel& m) {
  m.validate();
  FiniteModel out = m;
  for (std::size_t i = 0; i < out.states.size(); ++i) out.states[i] = Code(static_cast<std::uint64_t>(i));
  return out;
}

FiniteModel determined_by(const PartialMap& phi, std::size_t arity, std::uint64_t probe_limit) {
  if (arity == 0) throw RangeError("arity must be positive");
  std::vector<Code> values;
  for (std::uint64_t i = 0;; ++i) {
    if (i >= probe_limit) throw Inconclusive("map still defined at the probe limit");
    auto v = phi(Code(i));
    if (!v) break;
    values.push_back(*v);
  }
  FiniteModel out;
  for (std::size_t k = 1; k <= arity; ++k) out.observables["pi" + std::to_string(k)];
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.states.push_back(Code(static_cast<std::uint64_t>(i)));
    auto parts = tuple_decode(values[i], arity);
    for (std::size_t k = 0; k < arity; ++k) out.observables["pi" + std::to_string(k + 1)].push_back(parts[k]);
  }
  return out;
}

PartialMap determining_function(const FiniteModel& m) {
  m.validate();
  auto shared = std::make_shared<const FiniteModel>(m);
  auto names = m.names();
  return [shared, names](const Code& i) -> std::optional<Code> {
    if (!i.fits_u64() || i.to_u64() >= shared->states.size()) return std::nullopt;
    if (names.empty()) return Code(0u);
    std::vector<Code> parts;
    for (const auto& n : names) parts.push_back(shared->observables.at(n)[i.to_u64()]);
    return tuple_encode(parts);
  };
}

}  // namespace cpm
