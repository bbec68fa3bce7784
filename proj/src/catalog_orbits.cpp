#include <algorithm>
#include <array>
#include <mutex>

#include "cpm/catalog.hpp"
#include "cpm/encodings.hpp"
#include "cpm/errors.hpp"
#include "cpm/exactnum.hpp"

namespace cpm {

namespace {

const BigInt orbit_limit = 20000;
const BigInt calibration_limit = 200000;

BigInt floor_div(const BigInt& a, long b) {
  BigInt q;
  mpz_fdiv_q_ui(q.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(b));
  return q;
}

BigInt mod10(const BigInt& a) { return a - 10 * floor_div(a, 10); }

/// [i/10^n - 1/10^(n+1), (i+1)/10^n + 1/10^(n+1)].
std::pair<Rational, Rational> time_bounds(const BigInt& i, unsigned long n) {
  Rational unit(BigInt(1), pow10(n)), pad(BigInt(1), pow10(n + 1));
  return {Rational(i) * unit - pad, Rational(i + 1) * unit + pad};
}

Code time_code(const BigInt& i, unsigned long n) {
  auto [r, s] = time_bounds(i, n);
  return interval_code(r, s);
}

Code angle_code(const BigInt& i, unsigned long n) {
  auto [r, s] = time_bounds(i, n);
  return interval_code(frac_angle(r), frac_angle(s));
}

/// Precision and index of a time interval code; nullopt when it is not one.
std::optional<std::pair<BigInt, unsigned long>> time_index(const Code& c, std::optional<unsigned long> precision) {
  Rational r, s;
  try {
    std::tie(r, s) = interval_decode(c);
  } catch (const Error&) {
    return std::nullopt;
  }
  Rational w = s - r;
  if (w.sign() <= 0) return std::nullopt;
  Rational scale = Rational(12) / w;
  if (!scale.is_integer()) return std::nullopt;
  BigInt p = scale.numerator();
  unsigned long digits = 0;
  while (p > 1 && p % 10 == 0) {
    p /= 10;
    ++digits;
  }
  if (p != 1 || digits < 2) return std::nullopt;
  unsigned long n = digits - 1;
  if (precision && n != *precision) return std::nullopt;
  Rational scaled = (r + Rational(BigInt(1), pow10(n + 1))) * Rational(pow10(n));
  if (!scaled.is_integer()) return std::nullopt;
  BigInt i = scaled.numerator();
  if (time_code(i, n) != c) return std::nullopt;
  return std::make_pair(i, n);
}

std::optional<BigInt> coarse_index(const Code& c) {
  auto t = time_index(c, 1);
  if (!t) return std::nullopt;
  return t->first;
}

/// Residues n mod 10 whose angle interval equals c.
std::vector<int> angle_residues(const Code& c) {
  std::vector<int> out;
  for (int k = 0; k < 10; ++k)
    if (orbit_angle(BigInt(k)) == c) out.push_back(k);
  return out;
}

bool in_range(const BigInt& i, const BigInt& limit) { return i >= -limit && i <= limit; }

/// Discrete-orbit family over i in [-20000, 20000] with angle index n(i).
Model discrete_family(std::string name, BigInt (*angle_index)(const BigInt&)) {
  auto member = [angle_index](const Code& s) {
    auto [tau, alpha] = unpair(s);
    auto i = coarse_index(tau);
    return i && in_range(*i, orbit_limit) && orbit_angle(angle_index(*i)) == alpha;
  };
  Model m(std::move(name), member,
          {{"tau", [](const Code& s) { return unpair(s).first; }},
           {"alpha", [](const Code& s) { return unpair(s).second; }}});
  m.with_enumeration({[angle_index](std::uint64_t k) -> std::optional<Code> {
                        BigInt i = BigInt(static_cast<unsigned long>(k)) - orbit_limit;
                        return orbit_state(i, angle_index(i));
                      },
                      40001});
  m.with_solver([angle_index](std::string_view o, const Code& v) -> std::optional<std::vector<Code>> {
    std::vector<Code> out;
    if (o == "tau") {
      auto i = coarse_index(v);
      if (i && in_range(*i, orbit_limit)) out.push_back(orbit_state(*i, angle_index(*i)));
    } else {
      auto rs = angle_residues(v);
      if (rs.empty()) return out;
      for (BigInt i = -orbit_limit; i <= orbit_limit; ++i) {
        BigInt n = angle_index(i);
        if (std::find(rs.begin(), rs.end(), mod10(n).get_si()) != rs.end()) out.push_back(orbit_state(i, n));
      }
      std::sort(out.begin(), out.end());
    }
    return out;
  });
  return m;
}

BigInt same_index(const BigInt& i) { return i; }
BigInt quarter_index(const BigInt& i) { return floor_div(i, 4); }

Code z(long v) { return zeta(BigInt(v)); }

/// ±1 from a ζ code, else nullopt.
std::optional<long> sign_of(const Code& c) {
  if (c == z(1)) return 1;
  if (c == z(-1)) return -1;
  return std::nullopt;
}

/// Calibrated-orbit time codes for every reachable time index, built once.
const std::vector<Code>& calibrated_times() {
  static std::once_flag once;
  static std::vector<Code> codes;
  std::call_once(once, [] {
    BigInt lo = floor_div(-calibration_limit - 1, 10), hi = floor_div(calibration_limit + 1, 10);
    for (BigInt m = lo; m <= hi; ++m) codes.push_back(orbit_time(m));
  });
  return codes;
}

Code calibrated_time(const BigInt& m) {
  BigInt lo = floor_div(-calibration_limit - 1, 10);
  return calibrated_times()[BigInt(m - lo).get_ui()];
}

Code calibrated_state(const BigInt& k, long i, long j) {
  BigInt m = floor_div(k + i, 10), n = floor_div(k + j, 10);
  return tuple_encode({calibrated_time(m), orbit_angle(mod10(n)), zeta(BigInt(i)), zeta(BigInt(j)), zeta(k)});
}

}  // namespace

Code orbit_time(const BigInt& i) { return time_code(i, 1); }

Code orbit_angle(const BigInt& n) {
  static const std::array<Code, 10> table = [] {
    std::array<Code, 10> t;
    for (int k = 0; k < 10; ++k) t[k] = angle_code(BigInt(k), 1);
    return t;
  }();
  return table[mod10(n).get_ui()];
}

Code orbit_state(const BigInt& i, const BigInt& n) { return pair(orbit_time(i), orbit_angle(n)); }

Model model_discrete_orbit() { return discrete_family("discrete-orbit", same_index); }

Model model_slow_orbit() { return discrete_family("slow-orbit", quarter_index); }

Model model_continuous_orbit() {
  auto member = [](const Code& s) {
    auto [tau, alpha] = unpair(s);
    auto t = time_index(tau, std::nullopt);
    return t && angle_code(t->first, t->second) == alpha;
  };
  Model m("continuous-orbit", member,
          {{"tau", [](const Code& s) { return unpair(s).first; }},
           {"alpha", [](const Code& s) { return unpair(s).second; }}});
  m.with_enumeration({[](std::uint64_t k) -> std::optional<Code> {
                        auto [a, b] = unpair(Code(k));
                        BigInt i = zeta_inv(a);
                        unsigned long n = b.to_u64() + 1;
                        return pair(time_code(i, n), angle_code(i, n));
                      },
                      std::nullopt});
  m.with_solver([](std::string_view o, const Code& v) -> std::optional<std::vector<Code>> {
    if (o != "tau") return std::nullopt;
    std::vector<Code> out;
    if (auto t = time_index(v, std::nullopt)) out.push_back(pair(v, angle_code(t->first, t->second)));
    return out;
  });
  return m;
}

Model model_two_precision_orbit() {
  auto state = [](const BigInt& i, const BigInt& j) {
    return tuple_encode({time_code(i, 1), time_code(j, 2), angle_code(i, 1), angle_code(j, 2)});
  };
  auto member = [](const Code& s) {
    auto parts = tuple_decode(s, 4);
    auto i = time_index(parts[0], 1);
    auto j = time_index(parts[1], 2);
    if (!i || !j) return false;
    if (j->first < 10 * i->first || j->first > 10 * i->first + 9) return false;
    return parts[2] == angle_code(i->first, 1) && parts[3] == angle_code(j->first, 2);
  };
  auto part = [](std::size_t k) { return [k](const Code& s) { return project(s, k, 4); }; };
  Model m("two-precision-orbit", member,
          {{"alpha1", part(3)}, {"alpha2", part(4)}, {"tau1", part(1)}, {"tau2", part(2)}});
  m.with_enumeration({[state](std::uint64_t k) -> std::optional<Code> {
                        BigInt i = zeta_inv(Code(k / 10));
                        return state(i, 10 * i + static_cast<unsigned long>(k % 10));
                      },
                      std::nullopt});
  m.with_solver([state](std::string_view o, const Code& v) -> std::optional<std::vector<Code>> {
    std::vector<Code> out;
    if (o == "tau1") {
      if (auto i = time_index(v, 1))
        for (int d = 0; d < 10; ++d) out.push_back(state(i->first, 10 * i->first + d));
    } else if (o == "tau2") {
      if (auto j = time_index(v, 2)) out.push_back(state(floor_div(j->first, 10), j->first));
    } else {
      return std::nullopt;
    }
    std::sort(out.begin(), out.end());
    return out;
  });
  return m;
}

Model model_orbit_ensemble() {
  auto angle_index = [](const BigInt& i, const Code& j) { return j == Code(2u) ? quarter_index(i) : i; };
  auto member = [angle_index](const Code& s) {
    auto [inner, j] = unpair(s);
    if (j > Code(2u)) return false;
    auto [tau, alpha] = unpair(inner);
    auto i = coarse_index(tau);
    return i && in_range(*i, orbit_limit) && orbit_angle(angle_index(*i, j)) == alpha;
  };
  Model m("orbit-ensemble", member,
          {{"tau", [](const Code& s) { return unpair(unpair(s).first).first; }},
           {"alpha", [](const Code& s) { return unpair(unpair(s).first).second; }}});
  m.with_enumeration({[angle_index](std::uint64_t k) -> std::optional<Code> {
                        BigInt i = BigInt(static_cast<unsigned long>(k / 3)) - orbit_limit;
                        Code j(k % 3);
                        return pair(orbit_state(i, angle_index(i, j)), j);
                      },
                      3 * 40001});
  m.with_solver([angle_index](std::string_view o, const Code& v) -> std::optional<std::vector<Code>> {
    std::vector<Code> out;
    if (o == "tau") {
      if (auto i = coarse_index(v); i && in_range(*i, orbit_limit))
        for (unsigned j = 0; j < 3; ++j) out.push_back(pair(orbit_state(*i, angle_index(*i, Code(j))), Code(j)));
    } else {
      auto rs = angle_residues(v);
      if (!rs.empty())
        for (BigInt i = -orbit_limit; i <= orbit_limit; ++i)
          for (unsigned j = 0; j < 3; ++j) {
            BigInt n = angle_index(i, Code(j));
            if (std::find(rs.begin(), rs.end(), mod10(n).get_si()) != rs.end())
              out.push_back(pair(orbit_state(i, n), Code(j)));
          }
    }
    std::sort(out.begin(), out.end());
    return out;
  });
  return m;
}

Model model_meters(bool decimeter_only) {
  if (decimeter_only) {
    auto member = [](const Code& s) {
      auto p = tuple_decode(s, 3);
      auto i = sign_of(p[2]);
      return i && zeta_inv(p[0]) == floor_div(zeta_inv(p[1]) + *i, 10);
    };
    auto state = [](const BigInt& d, long i) {
      return tuple_encode({zeta(floor_div(d + i, 10)), zeta(d), zeta(BigInt(i))});
    };
    Model m("meters", member,
            {{"mu", [](const Code& s) { return project(s, 1, 3); }},
             {"delta", [](const Code& s) { return project(s, 2, 3); }}});
    m.with_enumeration({[state](std::uint64_t k) -> std::optional<Code> {
                          return state(zeta_inv(Code(k / 2)), k % 2 ? 1 : -1);
                        },
                        std::nullopt});
    m.with_solver([state](std::string_view o, const Code& v) -> std::optional<std::vector<Code>> {
      std::vector<Code> out;
      BigInt x = zeta_inv(v);
      for (long i : {-1L, 1L}) {
        if (o == "delta") {
          out.push_back(state(x, i));
        } else {
          for (long r = 0; r < 10; ++r) out.push_back(state(10 * x + r - i, i));
        }
      }
      std::sort(out.begin(), out.end());
      return out;
    });
    return m;
  }

  auto member = [](const Code& s) {
    auto p = tuple_decode(s, 5);
    auto i = sign_of(p[3]), j = sign_of(p[4]);
    if (!i || !j) return false;
    BigInt c = zeta_inv(p[2]);
    return zeta_inv(p[0]) == floor_div(c + 10 * *i, 100) && zeta_inv(p[1]) == floor_div(c + *j, 10);
  };
  auto state = [](const BigInt& c, long i, long j) {
    return tuple_encode({zeta(floor_div(c + 10 * i, 100)), zeta(floor_div(c + j, 10)), zeta(c), zeta(BigInt(i)),
                         zeta(BigInt(j))});
  };
  Model m("meters-2level", member,
          {{"mu", [](const Code& s) { return project(s, 1, 5); }},
           {"delta", [](const Code& s) { return project(s, 2, 5); }}});
  m.with_enumeration({[state](std::uint64_t k) -> std::optional<Code> {
                        return state(zeta_inv(Code(k / 4)), k % 2 ? 1 : -1, (k / 2) % 2 ? 1 : -1);
                      },
                      std::nullopt});
  m.with_solver([state](std::string_view o, const Code& v) -> std::optional<std::vector<Code>> {
    std::vector<Code> out;
    BigInt x = zeta_inv(v);
    for (long i : {-1L, 1L})
      for (long j : {-1L, 1L}) {
        if (o == "delta") {
          for (long r = 0; r < 10; ++r) out.push_back(state(10 * x + r - j, i, j));
        } else {
          for (long r = 0; r < 100; ++r) out.push_back(state(100 * x + r - 10 * i, i, j));
        }
      }
    std::sort(out.begin(), out.end());
    return out;
  });
  return m;
}

BigInt calibrated_orbit_k(const Code& state) {
  if (!model_calibrated_orbit().member(state)) throw NotAState(state.str() + " is not a calibrated-orbit state");
  return zeta_inv(project(state, 5, 5));
}

Model model_calibrated_orbit() {
  auto member = [](const Code& s) {
    auto p = tuple_decode(s, 5);
    auto i = sign_of(p[2]), j = sign_of(p[3]);
    if (!i || !j) return false;
    BigInt k = zeta_inv(p[4]);
    return in_range(k, calibration_limit) && calibrated_state(k, *i, *j) == s;
  };
  Model m("calibrated-orbit", member,
          {{"tau", [](const Code& s) { return project(s, 1, 5); }},
           {"alpha", [](const Code& s) { return project(s, 2, 5); }}});
  m.with_enumeration({[](std::uint64_t x) -> std::optional<Code> {
                        BigInt k = BigInt(static_cast<unsigned long>(x / 4)) - calibration_limit;
                        return calibrated_state(k, x % 2 ? 1 : -1, (x / 2) % 2 ? 1 : -1);
                      },
                      4 * 400001});
  m.with_solver([](std::string_view o, const Code& v) -> std::optional<std::vector<Code>> {
    std::vector<Code> out;
    if (o == "tau") {
      auto t = coarse_index(v);
      if (!t) return out;
      for (long i : {-1L, 1L})
        for (long r = 0; r < 10; ++r) {
          BigInt k = 10 * *t + r - i;
          if (!in_range(k, calibration_limit)) continue;
          for (long j : {-1L, 1L}) out.push_back(calibrated_state(k, i, j));
        }
    } else {
      auto rs = angle_residues(v);
      if (rs.empty()) return out;
      for (BigInt k = -calibration_limit; k <= calibration_limit; ++k)
        for (long j : {-1L, 1L}) {
          if (std::find(rs.begin(), rs.end(), mod10(floor_div(k + j, 10)).get_si()) == rs.end()) continue;
          for (long i : {-1L, 1L}) out.push_back(calibrated_state(k, i, j));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
  });
  return m;
}

}  // namespace cpm
