#include <algorithm>

#include "cpm/oracles.hpp"

namespace cpm {
namespace {

/// Smallest j <= limit with oracle.at(j) == code.
std::optional<std::uint64_t> first_hit(const Oracle& o, const Code& code, std::uint64_t limit) {
  for (std::uint64_t j = 0; j <= limit; ++j)
    if (o.at(j) == code) return j;
  return std::nullopt;
}

}  // namespace

BasicRep predicted_states(const BasicRep& R, const std::vector<Oracle>& oracles, Fuel fuel) {
  const std::size_t k = oracles.size();
  if (k == 0) return R;
  const std::size_t n = product_factors(R.topology).size();
  if (k > n) throw RangeError("more oracles than product factors");

  BasicRep Q;
  Q.topology = R.topology;
  auto rep = std::make_shared<const BasicRep>(R);
  auto data = std::make_shared<const std::vector<Oracle>>(oracles);

  if (R.fiber) {
    Q.enumerator.at = [rep, data, k](std::uint64_t index) -> std::optional<Code> {
      auto idx = tuple_decode(Code(index), k + 1);
      std::vector<Code> prefix;
      for (std::size_t i = 0; i < k; ++i) prefix.push_back((*data)[i].at(idx[i].to_u64()));
      return rep->fiber(prefix).get(idx[k].to_u64());
    };
  } else {
    Q.enumerator.at = [rep, data, k, n](std::uint64_t index) -> std::optional<Code> {
      auto [ri, s] = unpair(Code(index));
      auto r = rep->enumerator.get(ri.to_u64());
      if (!r) return std::nullopt;
      auto parts = tuple_decode(*r, n);
      std::uint64_t limit = s.to_u64(), latest = 0;
      for (std::size_t i = 0; i < k; ++i) {
        auto hit = first_hit((*data)[i], parts[i], limit);
        if (!hit) return std::nullopt;
        latest = std::max(latest, *hit);
      }
      if (latest != limit) return std::nullopt;
      return r;
    };
  }

  Q.member = [rep, data, k, n, fuel](const Code& r, Fuel f) {
    Verdict in_r = Verdict::inconclusive;
    if (rep->member) {
      in_r = rep->member(r, f);
    } else {
      Cursor cursor(rep->enumerator);
      Code c;
      Fuel budget = f;
      while (cursor.next(budget, c) == Cursor::Status::produced)
        if (c == r) {
          in_r = Verdict::yes;
          break;
        }
      if (in_r != Verdict::yes && rep->enumerator.length && cursor.position() >= *rep->enumerator.length)
        in_r = Verdict::no;
    }
    if (in_r != Verdict::yes) return in_r;
    auto parts = tuple_decode(r, n);
    for (std::size_t i = 0; i < k; ++i)
      if (!first_hit((*data)[i], parts[i], std::min(f.steps, fuel.steps))) return Verdict::inconclusive;
    return Verdict::yes;
  };
  return Q;
}

}  // namespace cpm
