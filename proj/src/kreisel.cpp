#include "cpm/kreisel.hpp"

#include <algorithm>

namespace cpm {

namespace {

const RatInterval& only(std::span<const RatInterval> in) { return in[0]; }

/// Grid interval behind a decimal-topology code, if it is one.
std::optional<DecimalGridInterval> grid_of(const Code& code, const Rational& c) {
  try {
    auto [q, r] = interval_decode(code);
    return as_grid(q, r, c);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::uint64_t shortest(const std::vector<DecimalGridInterval>& us) {
  std::uint64_t d = us.front().n;
  for (const auto& u : us) d = std::min<std::uint64_t>(d, u.n);
  return d;
}

/// Output codes κ_1..κ_{n-k}(σ_{u_1}, ..., σ_{u_k}, m).
std::vector<Code> outputs(const KreiselModel& km, const std::vector<DecimalGridInterval>& us, std::uint64_t m) {
  std::vector<Oracle> sigma;
  for (const auto& u : us) sigma.push_back(truncated_oracle(u));
  std::vector<Code> out;
  for (std::size_t j = 1; j <= km.n - km.k; ++j) out.push_back(kappa(km, j, sigma, m));
  return out;
}

Code state_code(const std::vector<Code>& inputs, const std::vector<Code>& outs) {
  std::vector<Code> parts = inputs;
  parts.insert(parts.end(), outs.begin(), outs.end());
  return tuple_encode(parts);
}

class DiagonalSource final : public OracleSource {
 public:
  DiagonalSource(KreiselModel km, std::vector<Oracle> inputs, BasicRep q, TopologyPtr t, Fuel fuel)
      : km_(std::move(km)), inputs_(std::move(inputs)), q_(std::move(q)), t_(std::move(t)), fuel_(fuel) {}

  OracleEntry next(std::uint64_t s) override {
    std::vector<Code> codes;
    std::vector<DecimalGridInterval> us;
    for (const auto& o : inputs_) {
      codes.push_back(o.at(s));
      auto g = grid_of(codes.back(), km_.c);
      if (!g) throw RangeError("input oracle left the decimal grid at index " + std::to_string(s));
      us.push_back(*g);
    }
    Code r = state_code(codes, outputs(km_, us, shortest(us) - 1));
    if (q_.member(r, fuel_) != Verdict::yes)
      throw Inconclusive("predict: could not confirm a predicted state at index " + std::to_string(s));
    return {r, t_->decode(r)};
  }

 private:
  KreiselModel km_;
  std::vector<Oracle> inputs_;
  BasicRep q_;
  TopologyPtr t_;
  Fuel fuel_;
};

}  // namespace

IntervalExtension orbit_extension() {
  IntervalExtension e;
  e.name = "orbit";
  e.output_space = Space::circle360;
  e.eval = [](std::span<const RatInterval> in) {
    const auto& i = only(in);
    auto img = wrap_to_circle(RatInterval::make(Rational(360) * i.low, Rational(360) * i.high));
    if (!img) throw RangeError("orbit image of " + i.str() + " covers the whole circle");
    return *img;
  };
  e.exact = [](std::span<const Rational> x) { return frac_angle(x[0]); };
  return e;
}

IntervalExtension square_extension() {
  IntervalExtension e;
  e.name = "square";
  e.eval = [](std::span<const RatInterval> in) {
    const auto& i = only(in);
    Rational a2 = i.low * i.low, b2 = i.high * i.high;
    if (i.low.sign() >= 0) return RatInterval::make(a2, b2);
    if (i.high.sign() <= 0) return RatInterval::make(b2, a2);
    // 0 is attained, so the open enclosure needs a negative lower end.
    return RatInterval::make(-i.width() * i.width(), std::max(a2, b2));
  };
  e.exact = [](std::span<const Rational> x) { return x[0] * x[0]; };
  return e;
}

IntervalExtension sum_extension() {
  IntervalExtension e;
  e.name = "sum";
  e.arity = 2;
  e.eval = [](std::span<const RatInterval> in) {
    return RatInterval::make(in[0].low + in[1].low, in[0].high + in[1].high);
  };
  e.exact = [](std::span<const Rational> x) { return x[0] + x[1]; };
  return e;
}

IntervalExtension identity_extension() {
  IntervalExtension e;
  e.name = "identity";
  e.eval = [](std::span<const RatInterval> in) { return only(in); };
  e.exact = [](std::span<const Rational> x) { return x[0]; };
  return e;
}

TopologyPtr output_topology(const IntervalExtension& e) {
  return e.output_space == Space::circle360 ? topology_circle360(AllRational{}) : topology_rational_intervals();
}

void KreiselModel::validate() const {
  if (k < 1 || n <= k) throw RangeError("a Kreisel model needs n > k >= 1");
  if (extensions.size() != n - k) throw RangeError("a Kreisel model needs n - k interval extensions");
  if (c.sign() <= 0) throw RangeError("accuracy factor must be positive");
  for (const auto& e : extensions)
    if (e.arity != k || !e.eval) throw RangeError("extension " + e.name + " does not take " + std::to_string(k) + " inputs");
}

TopologyPtr KreiselModel::topology() const {
  std::vector<TopologyPtr> factors(k, topology_decimal_intervals(c));
  for (const auto& e : extensions) factors.push_back(output_topology(e));
  return effective_product(std::move(factors));
}

KreiselModel kreisel_orbit(const Rational& c) { return {1, 2, {orbit_extension()}, c}; }

Code kappa(const KreiselModel& km, std::size_t j, const std::vector<Oracle>& inputs, std::uint64_t m) {
  if (j < 1 || j > km.extensions.size()) throw RangeError("output index out of range");
  if (inputs.size() != km.k) throw RangeError("expected " + std::to_string(km.k) + " input oracles");
  std::vector<RatInterval> in;
  for (const auto& o : inputs) {
    const BasisElement& e = o.element(m);
    if (!e.is_interval()) throw RangeError("input oracle is not interval-valued");
    in.push_back(e.interval());
  }
  const auto& ext = km.extensions[j - 1];
  return output_topology(ext)->encode(BasisElement(ext.eval(in)));
}

BasicRep basic_rep_of_kreisel(const KreiselModel& km) {
  km.validate();
  auto model = std::make_shared<const KreiselModel>(km);
  auto grid = topology_decimal_intervals(km.c);

  BasicRep rep;
  rep.topology = km.topology();
  rep.enumerator.at = [model, grid](std::uint64_t index) -> std::optional<Code> {
    const std::size_t k = model->k;
    auto idx = tuple_decode(Code(index), k + 1);
    std::vector<Code> codes;
    std::vector<DecimalGridInterval> us;
    for (std::size_t i = 0; i < k; ++i) {
      auto c = grid->domain().get(idx[i].to_u64());
      if (!c) return std::nullopt;
      codes.push_back(*c);
      us.push_back(*grid_of(*c, model->c));
    }
    std::uint64_t m = idx[k].to_u64();
    if (m >= shortest(us)) return std::nullopt;
    try {
      return state_code(codes, outputs(*model, us, m));
    } catch (const RangeError&) {
      return std::nullopt;
    }
  };

  rep.member = [model](const Code& r, Fuel fuel) {
    auto parts = tuple_decode(r, model->n);
    std::vector<Code> codes(parts.begin(), parts.begin() + model->k);
    std::vector<DecimalGridInterval> us;
    for (const auto& c : codes) {
      auto g = grid_of(c, model->c);
      if (!g) return Verdict::no;
      us.push_back(*g);
    }
    std::vector<Code> want(parts.begin() + model->k, parts.end());
    std::uint64_t steps = fuel.steps;
    for (std::uint64_t m = 0; m < shortest(us); ++m) {
      if (steps-- == 0) return Verdict::inconclusive;
      try {
        if (outputs(*model, us, m) == want) return Verdict::yes;
      } catch (const RangeError&) {
      }
    }
    return Verdict::no;
  };

  rep.fiber = [model](std::span<const Code> prefix) {
    std::vector<Code> codes(prefix.begin(), prefix.end());
    std::vector<DecimalGridInterval> us;
    for (const auto& c : codes) {
      auto g = grid_of(c, model->c);
      if (!g) return Enumeration::empty();
      us.push_back(*g);
    }
    auto shared = std::make_shared<const std::pair<std::vector<Code>, std::vector<DecimalGridInterval>>>(codes, us);
    return Enumeration{[model, shared](std::uint64_t m) -> std::optional<Code> {
                         try {
                           return state_code(shared->first, outputs(*model, shared->second, m));
                         } catch (const RangeError&) {
                           return std::nullopt;
                         }
                       },
                       shortest(us)};
  };
  return rep;
}

std::vector<Oracle> predict(const KreiselModel& km, const std::vector<Oracle>& inputs, Fuel fuel) {
  km.validate();
  if (inputs.size() != km.k) throw RangeError("expected " + std::to_string(km.k) + " input oracles");
  std::vector<Oracle> completed;
  for (const auto& o : inputs) completed.push_back(complete_oracle(o, fuel));
  BasicRep q = predicted_states(basic_rep_of_kreisel(km), completed, fuel);

  TopologyPtr t = km.topology();
  Oracle states(t, std::make_unique<DiagonalSource>(km, inputs, q, t, fuel), {});
  Oracle nested = nested_oracle(states, fuel);

  std::vector<Oracle> out;
  for (std::size_t j = 0; j < km.extensions.size(); ++j) {
    std::size_t factor = km.k + j;
    out.push_back(oracle_from_elements(
        output_topology(km.extensions[j]),
        [nested, factor](std::uint64_t s) { return nested.element(s).factors()[factor]; },
        {.complete = false, .nested = true}));
  }
  return out;
}

}  // namespace cpm
