#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cpm/catalog.hpp"
#include "cpm/cli.hpp"
#include "cpm/encodings.hpp"
#include "cpm/kreisel.hpp"
#include "cpm/model_io.hpp"

namespace py = pybind11;
using namespace cpm;

namespace {

/// Codes cross the boundary as Python ints, through their decimal text.
Code to_code(const py::int_& v) { return Code::parse(py::str(v).cast<std::string>()); }
py::int_ from_code(const Code& c) { return py::int_(py::reinterpret_steal<py::object>(PyLong_FromString(c.str().c_str(), nullptr, 10))); }
py::int_ from_bigint(const BigInt& b) { return py::int_(py::reinterpret_steal<py::object>(PyLong_FromString(b.get_str().c_str(), nullptr, 10))); }

/// Rationals accept ints, Fractions or decimal strings and come back as fractions.Fraction.
Rational to_rational(const py::object& v) {
  if (py::isinstance<py::str>(v)) return Rational::parse(v.cast<std::string>());
  py::object f = py::module_::import("fractions").attr("Fraction")(v);
  return Rational(parse_bigint(py::str(f.attr("numerator")).cast<std::string>()),
                  parse_bigint(py::str(f.attr("denominator")).cast<std::string>()));
}

py::object from_rational(const Rational& q) {
  return py::module_::import("fractions").attr("Fraction")(from_bigint(q.numerator()), from_bigint(q.denominator()));
}

py::list from_codes(const std::vector<Code>& cs) {
  py::list out;
  for (const auto& c : cs) out.append(from_code(c));
  return out;
}

Constraints to_constraints(const py::dict& d) {
  Constraints out;
  for (auto [k, v] : d) out.emplace_back(k.cast<std::string>(), to_code(v.cast<py::int_>()));
  return out;
}

/// Finite models cross as dicts in the model-file layout.
FiniteModel to_finite(const py::dict& d) {
  py::object dumps = py::module_::import("json").attr("dumps");
  return parse_finite_model(dumps(d).cast<std::string>());
}

py::object from_finite(const FiniteModel& m) {
  return py::module_::import("json").attr("loads")(dump_finite_model(m));
}

py::tuple from_interval(const RatInterval& i) { return py::make_tuple(from_rational(i.low), from_rational(i.high)); }

KreiselModel kreisel_named(const std::string& name, const Rational& c) {
  if (name == "orbit" || name == "continuous-orbit") return kreisel_orbit(c);
  if (name == "square") return {1, 2, {square_extension()}, c};
  if (name == "identity") return {1, 2, {identity_extension()}, c};
  if (name == "sum") return {2, 3, {sum_extension()}, c};
  throw RangeError("no interval extension named '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_cpm, m) {
  m.doc() = "Exact computable physical models: encodings, catalog queries, prediction and model algebra";

  auto base = py::register_exception<Error>(m, "CpmError");
  py::register_exception<DecodeError>(m, "DecodeError", base);
  py::register_exception<RangeError>(m, "RangeError", base);
  py::register_exception<Inconclusive>(m, "Inconclusive", base);
  py::register_exception<UnknownObservable>(m, "UnknownObservable", base);
  py::register_exception<NotAState>(m, "NotAState", base);
  py::register_exception<EmptyCondition>(m, "EmptyCondition", base);
  py::register_exception<SizeLimit>(m, "SizeLimit", base);
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<ValidationError>(m, "ValidationError", base);

  m.def("pair", [](py::int_ x, py::int_ y) { return from_code(pair(to_code(x), to_code(y))); });
  m.def("unpair", [](py::int_ z) {
    auto [x, y] = unpair(to_code(z));
    return py::make_tuple(from_code(x), from_code(y));
  });
  m.def("tuple_encode", [](const std::vector<py::int_>& xs) {
    std::vector<Code> cs;
    for (const auto& x : xs) cs.push_back(to_code(x));
    return from_code(tuple_encode(cs));
  });
  m.def("tuple_decode", [](py::int_ z, std::size_t arity) { return from_codes(tuple_decode(to_code(z), arity)); });
  m.def("zeta", [](py::int_ i) { return from_code(zeta(parse_bigint(py::str(i).cast<std::string>()))); });
  m.def("zeta_inv", [](py::int_ c) { return from_bigint(zeta_inv(to_code(c))); });
  m.def("rho", [](py::object q) { return from_code(rho(to_rational(q))); });
  m.def("rho_inv", [](py::int_ c) { return from_rational(rho_inv(to_code(c))); });
  m.def("interval_code", [](py::object a, py::object b) { return from_code(interval_code(to_rational(a), to_rational(b))); });
  m.def("interval_decode", [](py::int_ c) {
    auto [a, b] = interval_decode(to_code(c));
    return py::make_tuple(from_rational(a), from_rational(b));
  });
  m.def("beta", [](py::int_ x, std::uint64_t y) {
    auto bits = beta(to_code(x), y);
    return std::vector<int>(bits.begin(), bits.end());
  });

  m.def("catalog_names", &catalog_names);
  m.def(
      "states_where",
      [](const std::string& model, const py::dict& where, std::uint64_t cap) {
        return from_codes(states_where(catalog_model(model), to_constraints(where), cap));
      },
      py::arg("model"), py::arg("where"), py::arg("cap") = 1000000);
  m.def(
      "count_where",
      [](const std::string& model, const py::dict& where) { return count_where(catalog_model(model), to_constraints(where)); },
      py::arg("model"), py::arg("where"));
  m.def(
      "probability",
      [](const std::string& model, const py::dict& event, const py::dict& given) {
        return from_rational(probability(catalog_model(model), to_constraints(event), to_constraints(given)));
      },
      py::arg("model"), py::arg("event"), py::arg("given") = py::dict());
  m.def(
      "observe",
      [](const std::string& model, py::int_ state) {
        Model mm = catalog_model(model);
        py::dict out;
        for (const auto& n : mm.observable_names()) out[py::str(n)] = from_code(mm.observe(n, to_code(state)));
        return out;
      },
      py::arg("model"), py::arg("state"));

  m.def(
      "predict",
      [](const std::string& model, const std::vector<py::object>& inputs, std::size_t digits, py::object c,
         std::uint64_t fuel) {
        Rational cc = to_rational(c);
        KreiselModel km = kreisel_named(model, cc);
        std::vector<Oracle> oracles;
        for (const auto& x : inputs) oracles.push_back(standard_decimal_oracle(to_rational(x), cc));
        auto outs = predict(km, oracles, Fuel{fuel});
        py::list rows;
        for (std::size_t n = 0; n < digits; ++n) {
          py::list row;
          for (const auto& o : outs) row.append(from_interval(o.element(n).interval()));
          rows.append(row.size() == 1 ? row[0] : py::object(row));
        }
        return rows;
      },
      py::arg("model"), py::arg("inputs"), py::arg("digits") = 6, py::arg("c") = py::str("1/10"),
      py::arg("fuel") = 100000, "Nested output intervals (low, high); circle intervals wrap when low > high.");

  m.def("is_isomorphic", [](const py::dict& a, const py::dict& b) { return is_isomorphic(to_finite(a), to_finite(b)); });
  m.def("is_epimorphic", [](const py::dict& a, const py::dict& b) { return is_epimorphic(to_finite(a), to_finite(b)); });
  m.def("observationally_equivalent",
        [](const py::dict& a, const py::dict& b) { return observationally_equivalent(to_finite(a), to_finite(b)); });
  m.def("is_reduced", [](const py::dict& a) { return is_reduced(to_finite(a)); });
  m.def("reduce", [](const py::dict& a) { return from_finite(reduce(to_finite(a)).model); });
  m.def("normal_form", [](const py::dict& a) { return from_finite(normal_form(to_finite(a))); });
  m.def("renumber", [](const py::dict& a) { return from_finite(renumber(to_finite(a))); });

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int status = cli::run(args, out, err);
        return py::make_tuple(status, out.str(), err.str());
      },
      "Command-line entry point: returns (status, stdout, stderr).");
}
