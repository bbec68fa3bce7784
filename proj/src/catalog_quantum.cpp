#include <algorithm>
#include <mutex>

#include "cpm/catalog.hpp"
#include "cpm/encodings.hpp"
#include "cpm/errors.hpp"

namespace cpm {

namespace {

/// Counts of states at time t are 2^t, kept within 64 bits.
constexpr std::uint64_t radioactive_count_limit = 62;

/// History code of t - n zeros then n ones; leading zeros vanish under left-nested pairing.
/// Codes double in length with each one, so they are memoized.
Code ones_history(std::uint64_t n) {
  static std::mutex lock;
  static std::vector<Code> memo{Code(0u), Code(1u)};
  std::lock_guard guard(lock);
  while (memo.size() <= n) memo.push_back(pair(memo.back(), Code(1u)));
  return memo[n];
}

BigInt two_pow(std::uint64_t e) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), 2, e);
  return out;
}

/// Number of j values for n ones: 2j <= 2^n - 1.
BigInt decay_copies(std::uint64_t n) { return n == 0 ? BigInt(1) : two_pow(n - 1); }

struct DecayState {
  Code t;
  std::uint64_t ones;
};

std::optional<DecayState> decode_decay(const Code& s) {
  auto p = tuple_decode(s, 3);
  if (p[0].is_zero()) return std::nullopt;
  auto peeled = tuple_peel(p[1], p[0].value());
  for (const auto& b : peeled.tail)
    if (b != Code(1u)) return std::nullopt;
  std::uint64_t n = peeled.tail.size();
  if (p[2].value() >= decay_copies(n)) return std::nullopt;
  return DecayState{p[0], n};
}

Code decay_state(std::uint64_t t, std::uint64_t n, const BigInt& j) {
  return tuple_encode({Code(t), ones_history(n), Code(j)});
}

/// Step index and index within a "<name>@<k>" quantity name.
std::optional<std::uint64_t> step_of(std::string_view name, std::string_view prefix) {
  if (name.size() <= prefix.size() + 1 || name.substr(0, prefix.size()) != prefix || name[prefix.size()] != '@')
    return std::nullopt;
  auto digits = name.substr(prefix.size() + 1);
  if (digits.find_first_not_of("0123456789") != std::string_view::npos || digits.size() > 18) return std::nullopt;
  std::uint64_t k = std::stoull(std::string(digits));
  if (k == 0) return std::nullopt;
  return k;
}

struct Outcome {
  Code value;
  Rational p;
};

/// Values with nonzero probability, found by scanning codes until the sum reaches 1.
std::vector<Outcome> outcomes(const QuantumSpec& spec, const Code& i, const Code& t, const Code& h) {
  std::vector<Outcome> out;
  Rational sum(0);
  for (std::uint64_t n = 0; n < spec.value_bound; ++n) {
    Rational p = spec.prob(i, Code(n), t, h);
    if (p.sign() < 0) throw ValidationError("negative probability");
    if (p.sign() == 0) continue;
    out.push_back({Code(n), p});
    sum += p;
    if (sum == Rational(1)) return out;
    if (sum > Rational(1)) break;
  }
  throw NonterminatingSum("probabilities for measurement " + i.str() + " do not sum to 1 below the value bound");
}

BigInt lcd(const std::vector<Outcome>& os) {
  BigInt d = 1;
  for (const auto& o : os) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), o.p.denominator().get_mpz_t());
  return d;
}

Code history_prefix(const std::vector<std::pair<Code, Code>>& records, std::size_t count) {
  if (count == 0) return Code(0u);
  std::vector<Code> parts;
  for (std::size_t k = 0; k < count; ++k) parts.push_back(pair(records[k].first, records[k].second));
  return tuple_encode(parts);
}

std::vector<std::pair<Code, Code>> decode_records(const Code& h, std::uint64_t t) {
  std::vector<std::pair<Code, Code>> out;
  for (const auto& r : tuple_decode(h, t)) out.push_back(unpair(r));
  return out;
}

/// All (records, product of a_k) of length t, by depth-first search.
void grow(const QuantumSpec& spec, std::uint64_t t, std::vector<std::pair<Code, Code>>& records, const BigInt& weight,
          std::vector<std::pair<Code, BigInt>>& out) {
  std::size_t k = records.size();
  if (k == t) {
    out.emplace_back(history_prefix(records, k), weight);
    return;
  }
  Code h = history_prefix(records, k);
  for (const auto& i : spec.measurements) {
    auto os = outcomes(spec, i, Code(k + 1), h);
    BigInt d = lcd(os);
    for (const auto& o : os) {
      records.emplace_back(i, o.value);
      grow(spec, t, records, weight * (o.p * Rational(d)).numerator(), out);
      records.pop_back();
    }
  }
}

std::vector<Code> quantum_states_at(const QuantumSpec& spec, std::uint64_t t) {
  std::vector<std::pair<Code, Code>> records;
  std::vector<std::pair<Code, BigInt>> histories;
  grow(spec, t, records, BigInt(1), histories);
  std::vector<Code> out;
  for (const auto& [h, w] : histories)
    for (BigInt j = 0; j < w; ++j) out.push_back(tuple_encode({Code(t), h, Code(j)}));
  std::sort(out.begin(), out.end());
  return out;
}

Rational spin_cos(const Rational& delta) {
  Rational d = delta.sign() < 0 ? -delta : delta;
  if (d == Rational(0)) return Rational(1);
  if (d == Rational(60)) return Rational(BigInt(1), BigInt(2));
  throw RangeError("unsupported angle difference");
}

std::optional<std::pair<Rational, Rational>> spin_reading(const Code& angle, const Code& value) {
  Rational a = rho_inv(angle), v = rho_inv(value);
  if ((a != Rational(0) && a != Rational(60)) || (v != Rational(1) && v != Rational(-1))) return std::nullopt;
  return std::make_pair(a, v);
}

}  // namespace

Model model_radioactive() {
  auto member = [](const Code& s) { return decode_decay(s).has_value(); };
  Model m("radioactive", member,
          {{"eta", [](const Code& s) { return project(s, 2, 3); }},
           {"tau", [](const Code& s) { return project(s, 1, 3); }}});
  m.with_enumeration({[](std::uint64_t k) -> std::optional<Code> {
                        // Block t holds 2^t states: n = 0 first, then 2^(n-1) copies for each n >= 1.
                        std::uint64_t t = 1;
                        while (k >= (std::uint64_t{1} << t)) {
                          k -= std::uint64_t{1} << t;
                          ++t;
                        }
                        if (k == 0) return decay_state(t, 0, 0);
                        std::uint64_t n = 64 - __builtin_clzll(k);
                        return decay_state(t, n, BigInt(static_cast<unsigned long>(k - (std::uint64_t{1} << (n - 1)))));
                      },
                      std::nullopt});
  m.with_joint_solver([](const Constraints& cs) -> std::optional<StateList> {
    std::optional<Code> t;
    std::vector<Code> histories;
    std::vector<std::pair<std::uint64_t, Code>> status;
    for (const auto& [n, v] : cs) {
      if (n == "tau") {
        if (t && *t != v) return StateList{};
        t = v;
      } else if (n == "eta") {
        histories.push_back(v);
      } else if (auto k = step_of(n, "status")) {
        status.emplace_back(*k, v);
      } else {
        return std::nullopt;
      }
    }
    if (!t) return std::nullopt;
    if (t->is_zero()) return StateList{};
    if (*t > Code(radioactive_count_limit)) return std::nullopt;
    std::uint64_t tt = t->to_u64();
    // Every constraint pins down which numbers of trailing ones are allowed.
    std::vector<std::uint64_t> pinned;
    for (const auto& h : histories) {
      auto d = decode_decay(tuple_encode({*t, h, Code(0u)}));
      if (!d) return StateList{};
      pinned.push_back(d->ones);
    }
    std::vector<std::uint64_t> ones;
    for (std::uint64_t n = 0; n <= tt; ++n) {
      bool ok = std::all_of(pinned.begin(), pinned.end(), [n](std::uint64_t p) { return p == n; });
      for (const auto& [k, v] : status) ok = ok && k <= tt && v == Code(static_cast<unsigned>(tt - k < n));
      if (ok) ones.push_back(n);
    }
    std::uint64_t total = 0;
    for (auto n : ones) total += decay_copies(n).get_ui();
    return StateList{total, [tt, ones](std::uint64_t k) {
                       for (auto n : ones) {
                         std::uint64_t c = decay_copies(n).get_ui();
                         if (k < c) return decay_state(tt, n, BigInt(static_cast<unsigned long>(k)));
                         k -= c;
                       }
                       throw RangeError("state list index out of range");
                     }};
  });
  m.with_derived([](std::string_view name) -> std::optional<Quantity> {
    auto k = step_of(name, "status");
    if (!k) return std::nullopt;
    return Quantity([k = *k](const Code& s) -> std::optional<Code> {
      auto d = decode_decay(s);
      if (!d || Code(k) > d->t) return std::nullopt;
      // Bit k is 1 exactly when it falls among the trailing n ones.
      return Code(static_cast<unsigned>(d->t.value() - k < d->ones));
    });
  });
  return m;
}

std::optional<std::vector<BigInt>> quantum_weights(const QuantumSpec& spec,
                                                   const std::vector<std::pair<Code, Code>>& records) {
  std::vector<BigInt> out;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& [i, n] = records[k];
    Code t(k + 1), h = history_prefix(records, k);
    Rational p = spec.prob(i, n, t, h);
    if (p.sign() == 0) return std::nullopt;
    BigInt d = lcd(outcomes(spec, i, t, h));
    out.push_back((p * Rational(d)).numerator());
  }
  return out;
}

bool quantum_member(const QuantumSpec& spec, const Code& s) {
  auto p = tuple_decode(s, 3);
  if (p[0].is_zero()) return false;
  if (p[0] > Code(spec.max_time)) throw MalformedState("time step " + p[0].str() + " is past the supported range");
  auto weights = quantum_weights(spec, decode_records(p[1], p[0].to_u64()));
  if (!weights) return false;
  BigInt product = 1;
  for (const auto& a : *weights) product *= a;
  return p[2].value() < product;
}

Model quantum_model(QuantumSpec spec, std::string name) {
  auto shared = std::make_shared<const QuantumSpec>(std::move(spec));
  auto member = [shared](const Code& s) { return quantum_member(*shared, s); };
  Model m(std::move(name), member,
          {{"tau", [](const Code& s) { return project(s, 1, 3); }},
           {"eta", [](const Code& s) { return project(s, 2, 3); }}});
  if (!shared->measurements.empty()) {
    m.with_solver([shared](std::string_view o, const Code& v) -> std::optional<std::vector<Code>> {
      if (o != "tau") return std::nullopt;
      if (v.is_zero() || v > Code(shared->max_time)) return std::vector<Code>{};
      return quantum_states_at(*shared, v.to_u64());
    });
    auto all = std::make_shared<std::vector<Code>>();
    auto once = std::make_shared<std::once_flag>();
    auto fill = [shared, all, once] {
      std::call_once(*once, [&] {
        for (std::uint64_t t = 1; t <= shared->max_time; ++t) {
          auto part = quantum_states_at(*shared, t);
          all->insert(all->end(), part.begin(), part.end());
          if (all->size() > 1000000) throw SizeLimit("quantum state space too large to enumerate");
        }
      });
    };
    if (shared->max_time <= 8) {
      fill();
      m.with_enumeration({[all](std::uint64_t k) -> std::optional<Code> { return (*all)[k]; }, all->size()});
    }
  }
  m.with_derived([](std::string_view name) -> std::optional<Quantity> {
    auto angle = step_of(name, "angle");
    auto value = step_of(name, "value");
    if (!angle && !value) return std::nullopt;
    std::uint64_t k = angle ? *angle : *value;
    bool want_angle = angle.has_value();
    return Quantity([k, want_angle](const Code& s) -> std::optional<Code> {
      auto p = tuple_decode(s, 3);
      if (Code(k) > p[0] || p[0] > Code(std::uint64_t{1} << 20)) return std::nullopt;
      auto rec = unpair(project(p[1], k, p[0].to_u64()));
      return want_angle ? rec.first : rec.second;
    });
  });
  return m;
}

Code spin_record(long angle, long value) { return pair(rho(Rational(angle)), rho(Rational(value))); }

QuantumSpec spin_spec() {
  QuantumSpec spec;
  spec.max_time = 2;
  spec.measurements = {rho(Rational(0)), rho(Rational(60))};
  std::sort(spec.measurements.begin(), spec.measurements.end());
  spec.prob = [](const Code& i, const Code& n, const Code& t, const Code& h) -> Rational {
    auto now = spin_reading(i, n);
    if (!now || t.is_zero()) return Rational(0);
    Rational prev_angle(0), prev_value(1);
    if (t > Code(1u)) {
      auto [a, v] = unpair(project(h, t.to_u64() - 1, t.to_u64() - 1));
      auto prev = spin_reading(a, v);
      if (!prev) return Rational(0);
      std::tie(prev_angle, prev_value) = *prev;
    }
    Rational c = spin_cos(now->first - prev_angle);
    return (Rational(1) + now->second * prev_value * c) * Rational(BigInt(1), BigInt(2));
  };
  return spec;
}

Model model_spin() { return quantum_model(spin_spec(), "spin"); }

std::vector<std::string> catalog_names() {
  return {"discrete-orbit", "continuous-orbit", "two-precision-orbit", "slow-orbit", "orbit-ensemble",
          "meters",         "meters-2level",    "calibrated-orbit",    "radioactive", "spin"};
}

Model catalog_model(const std::string& name) {
  if (name == "discrete-orbit") return model_discrete_orbit();
  if (name == "continuous-orbit") return model_continuous_orbit();
  if (name == "two-precision-orbit") return model_two_precision_orbit();
  if (name == "slow-orbit") return model_slow_orbit();
  if (name == "orbit-ensemble") return model_orbit_ensemble();
  if (name == "meters") return model_meters(true);
  if (name == "meters-2level") return model_meters(false);
  if (name == "calibrated-orbit") return model_calibrated_orbit();
  if (name == "radioactive") return model_radioactive();
  if (name == "spin") return model_spin();
  throw ValidationError("unknown model '" + name + "'");
}

}  // namespace cpm
