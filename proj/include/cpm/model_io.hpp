#pragma once

#include <string>
#include <string_view>

#include "cpm/models.hpp"

namespace cpm {

/// Reads {"states": [...], "observables": {name: {"<state>": value}}}.
/// Values may be JSON integers or decimal strings (for codes past 64 bits).
/// Throws ParseError with line and column, or ValidationError naming the problem.
FiniteModel parse_finite_model(std::string_view text);
FiniteModel load_finite_model(const std::string& path);

/// Canonical JSON text in the same format; codes past 64 bits are written as strings.
std::string dump_finite_model(const FiniteModel& m);

}  // namespace cpm
