#include "factor.hpp"

#include <algorithm>

namespace cpm::detail {
namespace {

constexpr unsigned long kSieveLimit = 1ul << 16;
constexpr unsigned long kPollardIterations = 1ul << 22;

std::optional<BigInt> pollard_brent(const BigInt& n) {
  if (mpz_even_p(n.get_mpz_t())) return BigInt(2);
  for (unsigned long c = 1; c < 20; ++c) {
    BigInt y = 2, x, ys, q = 1, g = 1, t;
    unsigned long r = 1, iterations = 0;
    const unsigned long m = 128;
    auto f = [&](BigInt& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    while (g == 1) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) f(y);
      unsigned long k = 0;
      while (k < r && g == 1) {
        ys = y;
        unsigned long lim = std::min(m, r - k);
        for (unsigned long i = 0; i < lim; ++i) {
          f(y);
          t = x - y;
          q = q * abs(t);
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += lim;
        iterations += lim;
      }
      r *= 2;
      if (iterations > kPollardIterations) return std::nullopt;
    }
    if (g == n) {
      do {
        f(ys);
        t = x - ys;
        t = abs(t);
        mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
  return std::nullopt;
}

bool is_probable_prime(const BigInt& n) { return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }

bool split_large(const BigInt& n, std::vector<BigInt>& out) {
  if (n == 1) return true;
  if (is_probable_prime(n)) {
    out.push_back(n);
    return true;
  }
  BigInt root;
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    return split_large(root, out) && split_large(root, out);
  }
  auto d = pollard_brent(n);
  if (!d) return false;
  BigInt rest = n / *d;
  return split_large(*d, out) && split_large(rest, out);
}

unsigned long strip(BigInt& n, unsigned long p) {
  unsigned long e = 0;
  while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
    mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    ++e;
  }
  return e;
}

}  // namespace

const std::vector<unsigned long>& small_primes() {
  static const std::vector<unsigned long> primes = [] {
    std::vector<bool> composite(kSieveLimit, false);
    std::vector<unsigned long> ps;
    for (unsigned long i = 2; i < kSieveLimit; ++i) {
      if (composite[i]) continue;
      ps.push_back(i);
      for (unsigned long j = i * i; j < kSieveLimit; j += i) composite[j] = true;
    }
    return ps;
  }();
  return primes;
}

std::optional<PrimePowers> factorize(const BigInt& n0) {
  PrimePowers out;
  BigInt n = n0;
  for (unsigned long p : small_primes()) {
    if (n == 1) break;
    if (unsigned long e = strip(n, p)) out.emplace_back(BigInt(p), e);
  }
  if (n == 1) return out;
  std::vector<BigInt> large;
  if (!split_large(n, large)) return std::nullopt;
  std::sort(large.begin(), large.end());
  for (const auto& p : large) {
    if (!out.empty() && out.back().first == p)
      ++out.back().second;
    else
      out.emplace_back(p, 1);
  }
  return out;
}

std::optional<std::pair<BigInt, BigInt>> split_square_kernel(BigInt n) {
  BigInt a = 1, b = 1, root;
  auto absorb = [&](const BigInt& p, unsigned long e) {
    BigInt pe;
    if (e % 2 == 0) {
      mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e / 2);
      a *= pe;
    } else {
      mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), (e + 1) / 2);
      b *= pe;
    }
  };
  auto finish_if_square = [&]() {
    if (!mpz_perfect_square_p(n.get_mpz_t())) return false;
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    a *= root;
    return true;
  };
  if (finish_if_square()) return std::pair{a, b};
  for (unsigned long p : small_primes()) {
    if (unsigned long e = strip(n, p)) {
      absorb(BigInt(p), e);
      if (finish_if_square()) return std::pair{a, b};
    }
  }
  auto rest = factorize(n);
  if (!rest) return std::nullopt;
  for (const auto& [p, e] : *rest) absorb(p, e);
  return std::pair{a, b};
}

}  // namespace cpm::detail
