#pragma once

// Exact integer primitives: Jacobi symbol, deterministic 64-bit primality,
// integer square root, factorization, p-adic valuation. Everything here is a
// pure function on machine integers and safe to call from any thread.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "sqprod/errors.hpp"

namespace sqprod {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = m > 1 ? 1 : 0;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Jacobi symbol (a/m) for odd m >= 1. Returns -1, 0 or +1; 0 exactly when
// gcd(a, m) > 1. Negative a is reduced mod m first, which agrees with the
// standard extension of the symbol.
inline int jacobi(std::int64_t a, std::uint64_t m) {
  if (m < 1 || m % 2 == 0) throw Error("jacobi: modulus must be odd and positive");
  std::uint64_t u;
  {
    std::int64_t r = a % static_cast<std::int64_t>(m);
    if (r < 0) r += static_cast<std::int64_t>(m);
    u = static_cast<std::uint64_t>(r);
  }
  int sign = 1;
  while (u != 0) {
    while (u % 2 == 0) {
      u /= 2;
      std::uint64_t r8 = m % 8;
      if (r8 == 3 || r8 == 5) sign = -sign;
    }
    std::swap(u, m);
    if (u % 4 == 3 && m % 4 == 3) sign = -sign;
    u %= m;
  }
  return m == 1 ? sign : 0;
}

namespace detail {

// One strong-probable-prime round; n odd > 2, n - 1 = d * 2^r.
inline bool sprp(std::uint64_t n, std::uint64_t a, std::uint64_t d, int r) {
  std::uint64_t x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < r; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace detail

// Deterministic Miller-Rabin for the full 64-bit range. The 12-base set
// {2,...,37} is a proven witness set for n < 3.3e24, which covers uint64.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  int r = 0;
  std::uint64_t d = n - 1;
  while (d % 2 == 0) {
    d /= 2;
    ++r;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (!detail::sprp(n, a, d, r)) return false;
  }
  return true;
}

// floor(sqrt(n)), exact for all 64-bit n.
inline std::uint64_t isqrt(std::uint64_t n) {
  if (n == 0) return 0;
  auto x = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  x = std::min<std::uint64_t>(x + 1, 0xFFFFFFFFull);
  while (static_cast<unsigned __int128>(x) * x > n) --x;
  return x;
}

struct PrimePower {
  std::uint64_t prime;
  std::uint32_t exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Ordered list of (prime, exponent); product reconstructs the input.
using Factorization = std::vector<PrimePower>;

namespace detail {

// Brent-cycle rho with batched gcds. The polynomial increment c steps
// deterministically on failure, so runs are reproducible even though the
// splitter is rho-style. Expects n odd, composite, > 1.
inline std::uint64_t pollard_brent(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    auto f = [&](std::uint64_t v) {
      unsigned __int128 t = static_cast<unsigned __int128>(mulmod(v, v, n)) + c;
      if (t >= n) t -= n;
      return static_cast<std::uint64_t>(t);
    };
    std::uint64_t x = 2, y = 2, ys = 2, d = 1, q = 1;
    const std::uint64_t batch = 128;
    for (std::uint64_t r = 1; d == 1; r *= 2) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      for (std::uint64_t k = 0; k < r && d == 1; k += batch) {
        ys = y;
        std::uint64_t lim = std::min(batch, r - k);
        for (std::uint64_t i = 0; i < lim; ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        d = std::gcd(q, n);
      }
    }
    if (d == n) {
      // The batched gcd overshot the factor: replay one step at a time.
      do {
        ys = f(ys);
        d = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (d == 1);
    }
    if (d != n) return d;
  }
}

inline void factor_recursive(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  std::uint64_t d = pollard_brent(n);
  factor_recursive(d, out);
  factor_recursive(n / d, out);
}

}  // namespace detail

// Exact factorization of n >= 2: trial division up to `trial_bound` on a
// 6k+-1 wheel, then the rho splitter for whatever survives. Every prime this
// returns is certified by the deterministic primality test.
inline Factorization factorize(std::uint64_t n, std::uint32_t trial_bound = 10000) {
  if (n < 2) throw Error("factorize: argument must be >= 2");
  Factorization result;
  auto emit = [&](std::uint64_t p) {
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) result.push_back({p, e});
  };
  emit(2);
  emit(3);
  for (std::uint64_t p = 5; p <= trial_bound && p * p <= n; p += 6) {
    emit(p);
    emit(p + 2);
  }
  if (n > 1) {
    if (is_prime(n)) {
      result.push_back({n, 1});
    } else {
      std::vector<std::uint64_t> rest;
      detail::factor_recursive(n, rest);
      std::sort(rest.begin(), rest.end());
      for (std::size_t i = 0; i < rest.size();) {
        std::size_t j = i;
        while (j < rest.size() && rest[j] == rest[i]) ++j;
        result.push_back({rest[i], static_cast<std::uint32_t>(j - i)});
        i = j;
      }
    }
  }
  return result;
}

struct PadicSplit {
  std::uint32_t s;         // valuation
  std::uint64_t cofactor;  // l / p^s, coprime to p
};

// l = p^s * cofactor with p not dividing cofactor.
inline PadicSplit padic_valuation(std::uint64_t l, std::uint64_t p) {
  PadicSplit split{0, l};
  while (split.cofactor % p == 0) {
    split.cofactor /= p;
    ++split.s;
  }
  return split;
}

}  // namespace sqprod
