#pragma once

// Arbitrary precision integers and integer factorization.

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mlsig/errors.hpp"

namespace mlsig {

using BigInt = boost::multiprecision::cpp_int;

inline std::string to_string(const BigInt& value) { return value.str(); }

inline BigInt parse_bigint(std::string_view text) {
  std::string digits;
  for (char c : text) {
    if (c == ',' || c == '_') continue;
    if (c < '0' || c > '9') throw ParseError("not a non-negative integer: '" + std::string(text) + "'");
    digits.push_back(c);
  }
  if (digits.empty()) throw ParseError("empty integer literal");
  return BigInt(digits);
}

struct PrimePower {
  BigInt prime;
  unsigned exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// value = product of prime^exponent, primes strictly increasing.
struct PrimeFactorization {
  BigInt value = 1;
  std::vector<PrimePower> factors;

  friend bool operator==(const PrimeFactorization&, const PrimeFactorization&) = default;

  /// Primes with multiplicity, ascending.
  std::vector<BigInt> prime_multiset() const {
    std::vector<BigInt> out;
    for (const auto& f : factors)
      for (unsigned i = 0; i < f.exponent; ++i) out.push_back(f.prime);
    return out;
  }
};

/// Human-readable form "2^4 * 3^2 * 5 * 11" ("1" for the empty product).
inline std::string format_factorization(const PrimeFactorization& f) {
  if (f.factors.empty()) return "1";
  std::string out;
  for (const auto& pp : f.factors) {
    if (!out.empty()) out += " * ";
    out += pp.prime.str();
    if (pp.exponent != 1) out += "^" + std::to_string(pp.exponent);
  }
  return out;
}

namespace detail {

inline BigInt powmod(BigInt base, BigInt exp, const BigInt& mod) {
  BigInt result = 1;
  base %= mod;
  while (exp > 0) {
    if ((exp & 1) != 0) result = (result * base) % mod;
    base = (base * base) % mod;
    exp >>= 1;
  }
  return result;
}

inline bool miller_rabin_round(const BigInt& n, const BigInt& d, unsigned s, const BigInt& a) {
  BigInt x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = (x * x) % n;
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace detail

/// Miller-Rabin with the first 20 prime bases. Deterministic (and exact)
/// below 3.3e24; a vanishing-error probable-prime test above that.
inline bool is_prime(const BigInt& n) {
  static constexpr std::array<unsigned, 20> bases{2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                                  31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  if (n < 2) return false;
  for (unsigned p : bases) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  BigInt d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (unsigned a : bases)
    if (!detail::miller_rabin_round(n, d, s, BigInt(a))) return false;
  return true;
}

namespace detail {

// Brent's variant of Pollard rho; returns a non-trivial divisor of the odd
// composite n. Polynomial constants are tried in order 1, 2, 3, ... so the
// result is reproducible.
inline BigInt pollard_rho(const BigInt& n) {
  for (unsigned c = 1;; ++c) {
    BigInt y = 2, x, ys, q = 1, g = 1;
    const unsigned m = 128;
    auto f = [&](const BigInt& v) { return (v * v + c) % n; };
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      for (std::uint64_t k = 0; k < r && g == 1; k += m) {
        ys = y;
        for (std::uint64_t i = 0; i < std::min<std::uint64_t>(m, r - k); ++i) {
          y = f(y);
          q = (q * (x > y ? x - y : y - x)) % n;
        }
        g = boost::multiprecision::gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = boost::multiprecision::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void split_into(const BigInt& n, std::vector<BigInt>& primes) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes.push_back(n);
    return;
  }
  BigInt d = pollard_rho(n);
  split_into(d, primes);
  split_into(n / d, primes);
}

}  // namespace detail

/// Trial division up to 10^6, then Pollard rho on the cofactor.
inline PrimeFactorization factor_integer(const BigInt& n) {
  if (n < 1) throw DomainError("factor_integer requires n >= 1");
  PrimeFactorization out;
  out.value = n;
  BigInt rest = n;
  std::vector<BigInt> primes;
  auto divide_out = [&](std::uint32_t p) {
    while (rest % p == 0) {
      rest /= p;
      primes.emplace_back(p);
    }
  };
  divide_out(2);
  for (std::uint32_t p = 3; p <= 1'000'000; p += 2) {
    if (BigInt(p) * p > rest) break;
    divide_out(p);
  }
  if (rest > 1) detail::split_into(rest, primes);
  std::sort(primes.begin(), primes.end());
  for (const auto& p : primes) {
    if (!out.factors.empty() && out.factors.back().prime == p)
      ++out.factors.back().exponent;
    else
      out.factors.push_back({p, 1});
  }
  return out;
}

}  // namespace mlsig
