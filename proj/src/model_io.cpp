#include "cpm/model_io.hpp"

#include <fstream>
#include <sstream>

#include "cpm/errors.hpp"
#include "json.hpp"

namespace cpm {

namespace {

using nlohmann::json;

Code code_of(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) return Code(v.get<std::uint64_t>());
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return Code(v.get<std::int64_t>());
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos) return Code::parse(s);
  }
  throw ValidationError(where + ": expected a non-negative integer");
}

json json_of(const Code& c) {
  if (c.fits_u64()) return c.to_u64();
  return c.str();
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

FiniteModel parse_finite_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": malformed JSON");
  }
  if (!doc.is_object()) throw ValidationError("top level must be an object");
  for (const auto& [k, v] : doc.items())
    if (k != "states" && k != "observables") throw ValidationError("unknown key '" + k + "'");
  if (!doc.contains("states") || !doc["states"].is_array()) throw ValidationError("missing array 'states'");
  if (!doc.contains("observables") || !doc["observables"].is_object())
    throw ValidationError("missing object 'observables'");

  FiniteModel m;
  for (const auto& s : doc["states"]) m.states.push_back(code_of(s, "states"));
  for (std::size_t i = 1; i < m.states.size(); ++i)
    if (!(m.states[i - 1] < m.states[i])) throw ValidationError("states must be strictly increasing");

  for (const auto& [name, table] : doc["observables"].items()) {
    if (!table.is_object()) throw ValidationError("observable '" + name + "' must map states to values");
    std::map<Code, Code> rows;
    for (const auto& [key, v] : table.items()) {
      if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos)
        throw ValidationError("observable '" + name + "': bad state key '" + key + "'");
      Code s = Code::parse(key);
      if (!std::binary_search(m.states.begin(), m.states.end(), s))
        throw ValidationError("observable '" + name + "': " + key + " is not a state");
      rows[s] = code_of(v, "observable '" + name + "'");
    }
    auto& col = m.observables[name];
    for (const auto& s : m.states) {
      auto it = rows.find(s);
      if (it == rows.end()) throw ValidationError("observable '" + name + "' does not cover state " + s.str());
      col.push_back(it->second);
    }
  }
  return m;
}

FiniteModel load_finite_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_finite_model(buf.str());
}

std::string dump_finite_model(const FiniteModel& m) {
  json doc;
  doc["states"] = json::array();
  for (const auto& s : m.states) doc["states"].push_back(json_of(s));
  doc["observables"] = json::object();
  for (const auto& [name, col] : m.observables) {
    json table = json::object();
    for (std::size_t i = 0; i < m.states.size(); ++i) table[m.states[i].str()] = json_of(col[i]);
    doc["observables"][name] = table;
  }
  return doc.dump();
}

}  // namespace cpm
