#include "cpm/cli.hpp"

#include <algorithm>

#include "CLI11.hpp"
#include "json.hpp"

#include "cpm/catalog.hpp"
#include "cpm/encodings.hpp"
#include "cpm/kreisel.hpp"
#include "cpm/model_io.hpp"

namespace cpm::cli {

namespace {

using Json = nlohmann::ordered_json;

/// Malformed command-line value; reported with the offending flag.
class Usage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::size_t max_arity = 4096;
constexpr std::size_t max_bits = 1 << 16;
constexpr std::size_t max_count = 1000;
constexpr std::size_t max_digits = 64;

template <class F>
auto parsed(const std::string& flag, const std::string& text, F f) {
  try {
    return f(text);
  } catch (const Error& e) {
    throw Usage(flag + ": " + e.what());
  }
}

Rational rational_arg(const std::string& flag, const std::string& text) {
  return parsed(flag, text, [](const std::string& t) { return Rational::parse(t); });
}

BigInt integer_arg(const std::string& flag, const std::string& text) {
  return parsed(flag, text, [](const std::string& t) { return parse_bigint(t); });
}

Code code_arg(const std::string& flag, const std::string& text) {
  return parsed(flag, text, [](const std::string& t) { return Code::parse(t); });
}

std::size_t size_arg(const std::string& flag, const std::string& text, std::size_t max) {
  Code c = code_arg(flag, text);
  if (!c.fits_u64() || c.to_u64() > max) throw Usage(flag + ": at most " + std::to_string(max) + " allowed");
  return static_cast<std::size_t>(c.to_u64());
}

/// "[a,b]" with rational ends.
std::pair<Rational, Rational> interval_arg(const std::string& flag, const std::string& text) {
  auto comma = text.find(',');
  if (text.size() < 5 || text.front() != '[' || text.back() != ']' || comma == std::string::npos)
    throw Usage(flag + ": expected an interval [a,b], got '" + text + "'");
  return {rational_arg(flag, text.substr(1, comma - 1)), rational_arg(flag, text.substr(comma + 1, text.size() - comma - 2))};
}

/// A value code: N, [a,b], z:I or q:R.
Code value_arg(const std::string& flag, const std::string& text) {
  if (text.starts_with("z:")) return zeta(integer_arg(flag, text.substr(2)));
  if (text.starts_with("q:")) return rho(rational_arg(flag, text.substr(2)));
  if (text.starts_with("[")) {
    auto [a, b] = interval_arg(flag, text);
    return interval_code(a, b);
  }
  return code_arg(flag, text);
}

Constraints constraints_arg(const std::string& flag, const std::vector<std::string>& items) {
  Constraints out;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw Usage(flag + ": expected name=value, got '" + item + "'");
    out.emplace_back(item.substr(0, eq), value_arg(flag, item.substr(eq + 1)));
  }
  return out;
}

std::string show(const Rational& q) { return q.decimal_str(); }
std::string show(const RatInterval& i) { return "[" + show(i.low) + "," + show(i.high) + "]"; }

std::string joined(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : " ") + p;
  return out;
}

class Printer {
 public:
  Printer(std::ostream& out, bool json) : out_(out), json_(json) {}

  void line(const std::string& text, const Json& record) { out_ << (json_ ? record.dump() : text) << '\n'; }

 private:
  std::ostream& out_;
  bool json_;
};

void need(const std::vector<std::string>& values, std::size_t lo, std::size_t hi, const std::string& what) {
  if (values.size() < lo || values.size() > hi) throw Usage(what + ": wrong number of arguments");
}

std::vector<std::string> strings(const std::vector<Code>& codes) {
  std::vector<std::string> out;
  for (const auto& c : codes) out.push_back(c.str());
  return out;
}

void encode_cmd(const std::string& kind, const std::vector<std::string>& v, Printer& p) {
  Code code;
  if (kind == "pair") {
    need(v, 2, 2, "encode pair");
    code = pair(code_arg("x", v[0]), code_arg("y", v[1]));
  } else if (kind == "tuple") {
    need(v, 1, max_arity, "encode tuple");
    std::vector<Code> xs;
    for (const auto& s : v) xs.push_back(code_arg("tuple", s));
    code = tuple_encode(xs);
  } else if (kind == "zeta") {
    need(v, 1, 1, "encode zeta");
    code = zeta(integer_arg("zeta", v[0]));
  } else if (kind == "rho") {
    need(v, 1, 1, "encode rho");
    code = rho(rational_arg("rho", v[0]));
  } else if (kind == "interval") {
    need(v, 1, 2, "encode interval");
    auto [a, b] = v.size() == 1 ? interval_arg("interval", v[0])
                                : std::pair{rational_arg("interval", v[0]), rational_arg("interval", v[1])};
    code = interval_code(a, b);
  } else if (kind == "bits") {
    need(v, 0, max_bits, "encode bits");
    BitSeq bits;
    for (const auto& s : v) {
      if (s != "0" && s != "1") throw Usage("bits: expected 0 or 1, got '" + s + "'");
      bits.push_back(s == "1");
    }
    code = encode_bits(bits);
  } else {
    throw Usage("encode: unknown kind '" + kind + "'");
  }
  p.line(code.str(), Json{{"code", code.str()}});
}

void decode_cmd(const std::string& kind, const std::vector<std::string>& v, Printer& p) {
  auto values = [&](const std::vector<std::string>& out) { p.line(joined(out), Json{{"values", out}}); };
  if (kind == "pair") {
    need(v, 1, 1, "decode pair");
    auto [x, y] = unpair(code_arg("code", v[0]));
    values({x.str(), y.str()});
  } else if (kind == "tuple") {
    need(v, 2, 2, "decode tuple");
    std::size_t k = size_arg("arity", v[1], max_arity);
    if (k == 0) throw Usage("arity: must be positive");
    values(strings(tuple_decode(code_arg("code", v[0]), k)));
  } else if (kind == "zeta") {
    need(v, 1, 1, "decode zeta");
    values({zeta_inv(code_arg("code", v[0])).get_str()});
  } else if (kind == "rho") {
    need(v, 1, 1, "decode rho");
    values({show(rho_inv(code_arg("code", v[0])))});
  } else if (kind == "interval") {
    need(v, 1, 1, "decode interval");
    auto [a, b] = interval_decode(code_arg("code", v[0]));
    values({show(a), show(b)});
  } else if (kind == "beta" || kind == "bits") {
    need(v, 2, 2, "decode " + kind);
    Code x = code_arg("code", v[0]);
    std::size_t y = size_arg("length", v[1], max_bits);
    BitSeq bits = kind == "beta" ? beta(x, y) : decode_bits(x, y);
    std::vector<std::string> out;
    for (auto b : bits) out.push_back(b ? "1" : "0");
    values(out);
  } else {
    throw Usage("decode: unknown kind '" + kind + "'");
  }
}

KreiselModel kreisel_by_name(const std::string& name, const Rational& c) {
  if (name == "continuous-orbit" || name == "orbit") return kreisel_orbit(c);
  if (name == "square") return {1, 2, {square_extension()}, c};
  if (name == "identity") return {1, 2, {identity_extension()}, c};
  if (name == "sum") return {2, 3, {sum_extension()}, c};
  throw Usage("--model: no interval extension for '" + name + "'");
}

struct Options {
  bool json = false;
  std::uint64_t fuel = 100000;

  std::string kind;
  std::vector<std::string> values;

  std::string model;
  std::vector<std::string> where, event, given;
  bool count = false;
  std::string limit;
  std::string state;

  std::string point, c = "1/10", oracle_kind = "standard", transform = "none", oracle_count = "6";
  std::vector<std::string> times;
  std::string digits = "6";

  std::string op;
  std::vector<std::string> files;
};

int dispatch(CLI::App& app, const Options& o, std::ostream& out) {
  Printer p(out, o.json);
  Fuel fuel{o.fuel};
  auto sub = [&](const char* name) { return app.get_subcommand(name)->parsed(); };

  if (sub("encode")) {
    encode_cmd(o.kind, o.values, p);
  } else if (sub("decode")) {
    decode_cmd(o.kind, o.values, p);
  } else if (sub("model")) {
    auto* model = app.get_subcommand("model");
    if (model->get_subcommand("list")->parsed()) {
      for (const auto& name : catalog_names()) p.line(name, Json{{"model", name}});
      return ok;
    }
    Model m = catalog_model(o.model);
    if (model->get_subcommand("states")->parsed()) {
      Constraints cs = constraints_arg("--where", o.where);
      if (o.count) {
        auto n = count_where(m, cs);
        p.line(std::to_string(n), Json{{"count", n}});
        return ok;
      }
      auto states = states_where(m, cs);
      std::size_t limit = o.limit.empty() ? states.size() : size_arg("--limit", o.limit, SIZE_MAX);
      for (std::size_t i = 0; i < std::min(limit, states.size()); ++i)
        p.line(states[i].str(), Json{{"state", states[i].str()}});
    } else if (model->get_subcommand("member")->parsed()) {
      bool in = m.member(code_arg("--state", o.state));
      p.line(in ? "true" : "false", Json{{"member", in}});
    } else {
      Code s = code_arg("--state", o.state);
      for (const auto& name : m.observable_names()) {
        std::string v = m.observe(name, s).str();
        p.line(name + " " + v, Json{{"observable", name}, {"value", v}});
      }
    }
  } else if (sub("prob")) {
    Model m = catalog_model(o.model);
    Rational pr = probability(m, constraints_arg("--event", o.event), constraints_arg("--given", o.given));
    p.line(pr.str(), Json{{"probability", pr.str()}});
  } else if (sub("oracle")) {
    Rational x = rational_arg("--point", o.point), c = rational_arg("--c", o.c);
    if (c.sign() <= 0) throw Usage("--c: accuracy factor must be positive");
    Oracle base = o.oracle_kind == "dyadic" ? dyadic_oracle(x) : standard_decimal_oracle(x, c);
    Oracle shown = o.transform == "nested" ? nested_oracle(base, fuel)
                   : o.transform == "complete" ? complete_oracle(base, fuel)
                                               : base;
    std::size_t n = size_arg("--count", o.oracle_count, max_count);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& e = shown.entry(i);
      std::string iv = show(e.element.interval());
      p.line(std::to_string(i) + " " + iv, Json{{"index", i}, {"interval", iv}, {"code", e.code.str()}});
    }
  } else if (sub("predict")) {
    Rational c = rational_arg("--c", o.c);
    if (c.sign() <= 0) throw Usage("--c: accuracy factor must be positive");
    KreiselModel km = kreisel_by_name(o.model, c);
    if (o.times.size() != km.k) throw Usage("--time: expected " + std::to_string(km.k) + " value(s)");
    std::vector<Oracle> inputs;
    for (const auto& t : o.times) inputs.push_back(standard_decimal_oracle(rational_arg("--time", t), c));
    std::size_t n = size_arg("--digits", o.digits, max_digits);
    auto outs = predict(km, inputs, fuel);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::string> parts;
      for (const auto& oc : outs) parts.push_back(show(oc.element(i).interval()));
      p.line(joined(parts), Json{{"index", i}, {"intervals", parts}});
    }
  } else if (sub("algebra")) {
    bool binary = o.op == "equiv" || o.op == "iso" || o.op == "epi";
    bool unary = o.op == "reduce" || o.op == "normal-form" || o.op == "reduced";
    if (!binary && !unary) throw Usage("algebra: unknown operation '" + o.op + "'");
    need(o.files, binary ? 2 : 1, binary ? 2 : 1, "algebra " + o.op);
    FiniteModel a = load_finite_model(o.files[0]);
    if (binary) {
      FiniteModel b = load_finite_model(o.files[1]);
      if (o.op == "equiv") {
        bool eq = observationally_equivalent(a, b), iso = is_isomorphic(a, b);
        p.line(std::string("equivalent=") + (eq ? "true" : "false") + " isomorphic=" + (iso ? "true" : "false"),
               Json{{"equivalent", eq}, {"isomorphic", iso}});
      } else {
        bool yes = o.op == "iso" ? is_isomorphic(a, b) : is_epimorphic(a, b);
        std::string key = o.op == "iso" ? "isomorphic" : "epimorphic";
        p.line(key + "=" + (yes ? "true" : "false"), Json{{key, yes}});
      }
    } else if (o.op == "reduced") {
      bool r = is_reduced(a);
      p.line(std::string("reduced=") + (r ? "true" : "false"), Json{{"reduced", r}});
    } else {
      FiniteModel m = o.op == "reduce" ? reduce(a).model : normal_form(a);
      std::string text = dump_finite_model(m);
      out << (o.json ? Json::parse(text).dump() : text);
      if (text.empty() || text.back() != '\n' || o.json) out << '\n';
    }
  }
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Computable physical models: encodings, catalog queries, oracles and model algebra", "cpm"};
  app.require_subcommand(1);
  app.fallthrough();
  // Unmatched arguments land here; only encode, decode and algebra take them, verbatim.
  app.allow_extras();
  app.add_flag("--json", o.json, "One JSON object per line")->disable_flag_override();
  app.add_option("--fuel", o.fuel, "Step budget for searches")->capture_default_str();

  auto* encode = app.add_subcommand("encode", "Encode values: pair, tuple, zeta, rho, interval, bits");
  encode->add_option("kind", o.kind)->required();

  auto* decode = app.add_subcommand("decode", "Decode a code: pair, tuple, zeta, rho, interval, beta, bits");
  decode->add_option("kind", o.kind)->required();

  auto* model = app.add_subcommand("model", "Catalog queries");
  model->require_subcommand(1);
  model->add_subcommand("list", "Catalog model names");
  auto* states = model->add_subcommand("states", "States satisfying every --where constraint");
  states->add_option("--model", o.model)->required();
  states->add_option("--where", o.where, "name=value with value N, [a,b], z:I or q:R");
  states->add_flag("--count", o.count);
  states->add_option("--limit", o.limit);
  for (const char* name : {"observe", "member"}) {
    auto* s = model->add_subcommand(name, name == std::string("observe") ? "Observable values of a state" : "Membership");
    s->add_option("--model", o.model)->required();
    s->add_option("--state", o.state)->required();
  }

  auto* prob = app.add_subcommand("prob", "Probability of --event given --given");
  prob->add_option("--model", o.model)->required();
  prob->add_option("--event", o.event)->required();
  prob->add_option("--given", o.given);

  auto* oracle = app.add_subcommand("oracle", "First intervals of an oracle for a point");
  oracle->add_option("--point", o.point)->required();
  oracle->add_option("--kind", o.oracle_kind)->check(CLI::IsMember({"standard", "dyadic"}));
  oracle->add_option("--transform", o.transform)->check(CLI::IsMember({"none", "nested", "complete"}));
  oracle->add_option("--c", o.c);
  oracle->add_option("--count", o.oracle_count);

  auto* predict = app.add_subcommand("predict", "Nested output intervals of an interval-extension model");
  predict->add_option("--model", o.model)->required();
  predict->add_option("--time", o.times)->required();
  predict->add_option("--digits", o.digits);
  predict->add_option("--c", o.c);

  auto* algebra = app.add_subcommand("algebra", "equiv, iso, epi, reduced, reduce, normal-form on model files");
  algebra->add_option("op", o.op)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? ok : usage_error;
  }

  auto extras = app.remaining(true);
  if (encode->parsed() || decode->parsed()) {
    o.values = extras;
  } else if (algebra->parsed()) {
    o.files = extras;
  } else if (!extras.empty()) {
    err << "usage error: unexpected argument '" << extras.front() << "'\n";
    return usage_error;
  }

  try {
    return dispatch(app, o, out);
  } catch (const Usage& e) {
    err << "usage error: " << e.what() << '\n';
    return usage_error;
  } catch (const Inconclusive& e) {
    err << "inconclusive: " << e.what() << '\n';
    return inconclusive;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return domain_error;
  }
}

}  // namespace cpm::cli
