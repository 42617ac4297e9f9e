#pragma once

// Segmented prime generation and numerically careful filtered prime sums.
// The sieve stores odd numbers only and walks fixed-size segments, after the
// classic layout popularized by Kim Walisch's primesieve. All sums are
// accumulated in ascending prime order with two-term compensation, so results
// are bit-identical across runs and segment sizes.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <type_traits>
#include <vector>

#include "sqprod/arith.hpp"
#include "sqprod/errors.hpp"

namespace sqprod {

struct SieveConfig {
  std::uint64_t max_bound = 100'000'000;  // memory cap for a single stream
  std::uint64_t segment_odds = 1u << 16;  // odd slots per segment
};

// Neumaier-compensated accumulator. Adding terms in a fixed order is
// deterministic; the running error stays O(eps * sum |term|).
struct CompensatedSum {
  double accumulator = 0.0;
  double compensation = 0.0;

  void add(double x) {
    double t = accumulator + x;
    if (std::abs(accumulator) >= std::abs(x)) {
      compensation += (accumulator - t) + x;
    } else {
      compensation += (x - t) + accumulator;
    }
    accumulator = t;
  }

  double value() const { return accumulator + compensation; }
};

// Unevaluated double-double value, ~31 significant digits. Used for the
// extended-precision recheck when a threshold crossing is too close to trust
// plain binary64, and by tests to cross-check the compensated sums.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  static DoubleDouble two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
  }

  // Exact-quotient division of a plain double, remainder via fma.
  static DoubleDouble div(double num, double den) {
    double q1 = num / den;
    double r = std::fma(-q1, den, num);
    double q2 = r / den;
    double s = q1 + q2;
    return {s, q2 - (s - q1)};
  }

  DoubleDouble& operator+=(const DoubleDouble& o) {
    DoubleDouble s = two_sum(hi, o.hi);
    double t = s.lo + lo + o.lo;
    double rh = s.hi + t;
    lo = t - (rh - s.hi);
    hi = rh;
    return *this;
  }

  double estimate() const { return hi + lo; }
};

// Summand of the filtered prime sums: log p / (p - 1).
inline double prime_log_weight(std::uint64_t p) {
  return std::log(static_cast<double>(p)) / static_cast<double>(p - 1);
}

inline DoubleDouble prime_log_weight_dd(std::uint64_t p) {
  return DoubleDouble::div(std::log(static_cast<double>(p)), static_cast<double>(p - 1));
}

// Enumerates the primes <= bound, each exactly once, in increasing order.
class PrimeStream {
 public:
  explicit PrimeStream(std::uint64_t bound, SieveConfig cfg = {}) : bound_(bound), cfg_(cfg) {
    if (bound_ > cfg_.max_bound)
      throw ResourceLimitError("sieve bound " + std::to_string(bound_) + " exceeds configured cap " +
                               std::to_string(cfg_.max_bound));
    if (cfg_.segment_odds == 0) throw Error("segment size must be positive");
    std::uint64_t root = isqrt(bound_);
    std::vector<char> comp(root + 1, 0);
    for (std::uint64_t i = 3; i * i <= root; i += 2)
      if (!comp[i])
        for (std::uint64_t j = i * i; j <= root; j += 2 * i) comp[j] = 1;
    for (std::uint64_t i = 3; i <= root; i += 2)
      if (!comp[i]) base_.push_back(i);
  }

  std::uint64_t bound() const { return bound_; }

  // Calls f(p) for each prime in increasing order. If f returns bool, a
  // false return stops the enumeration early.
  template <class F>
  void for_each(F&& f) const {
    auto visit = [&](std::uint64_t p) -> bool {
      if constexpr (std::is_void_v<std::invoke_result_t<F&, std::uint64_t>>) {
        f(p);
        return true;
      } else {
        return static_cast<bool>(f(p));
      }
    };
    if (bound_ < 2) return;
    if (!visit(2)) return;

    const std::uint64_t seg = cfg_.segment_odds;
    std::vector<char> mark(seg);
    // Slot i within a segment starting at odd value `low` is low + 2*i.
    for (std::uint64_t low = 3; low <= bound_; low += 2 * seg) {
      std::uint64_t high = std::min(bound_, low + 2 * (seg - 1));
      std::fill(mark.begin(), mark.end(), 0);
      for (std::uint64_t p : base_) {
        if (p * p > high) break;
        std::uint64_t start = p * p;
        if (start < low) {
          std::uint64_t m = (low + p - 1) / p;
          if (m % 2 == 0) ++m;  // odd multiples only
          start = m * p;
        }
        for (std::uint64_t v = start; v <= high; v += 2 * p) mark[(v - low) / 2] = 1;
      }
      std::uint64_t slots = (high - low) / 2 + 1;
      for (std::uint64_t i = 0; i < slots; ++i)
        if (!mark[i] && !visit(low + 2 * i)) return;
    }
  }

 private:
  std::uint64_t bound_;
  SieveConfig cfg_;
  std::vector<std::uint64_t> base_;  // odd primes <= sqrt(bound)
};

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t bound, SieveConfig cfg = {}) {
  std::vector<std::uint64_t> out;
  if (bound >= 2) out.reserve(bound > 16 ? static_cast<std::size_t>(1.2 * bound / std::log(double(bound))) : 8);
  PrimeStream(bound, cfg).for_each([&](std::uint64_t p) { out.push_back(p); });
  return out;
}

// Exact prime-counting function.
inline std::uint64_t pi(std::uint64_t n, SieveConfig cfg = {}) {
  std::uint64_t count = 0;
  if (n >= 2) PrimeStream(n, cfg).for_each([&](std::uint64_t) { ++count; });
  return count;
}

// The explicit Chebyshev-style bound 2*log4 * n/log n + sqrt(n) >= pi(n).
inline double pi_upper_bound(std::uint64_t n) {
  if (n < 2) throw Error("pi_upper_bound: argument must be >= 2");
  double nd = static_cast<double>(n);
  return 2.0 * std::log(4.0) * nd / std::log(nd) + std::sqrt(nd);
}

// Sum of log p over primes strictly between n and 2n. Bounded by n*log 4.
inline double chebyshev_interval_sum(std::uint64_t n, SieveConfig cfg = {}) {
  if (n < 1) throw Error("chebyshev_interval_sum: argument must be >= 1");
  CompensatedSum sum;
  if (n >= 2) {
    PrimeStream(2 * n - 1, cfg).for_each([&](std::uint64_t p) {
      if (p > n) sum.add(std::log(static_cast<double>(p)));
    });
  }
  return sum.value();
}

// Prefix sums of log p over the stream's primes, for sweeping interval sums
// over many n without re-sieving. theta(x) = sum of log p over p <= x.
class ThetaPrefix {
 public:
  explicit ThetaPrefix(std::uint64_t bound, SieveConfig cfg = {}) : bound_(bound) {
    CompensatedSum running;
    PrimeStream(bound, cfg).for_each([&](std::uint64_t p) {
      primes_.push_back(p);
      running.add(std::log(static_cast<double>(p)));
      prefix_.push_back(running.value());
    });
  }

  std::uint64_t bound() const { return bound_; }

  double theta(std::uint64_t x) const {
    auto it = std::upper_bound(primes_.begin(), primes_.end(), x);
    if (it == primes_.begin()) return 0.0;
    return prefix_[static_cast<std::size_t>(it - primes_.begin()) - 1];
  }

  // Same quantity as chebyshev_interval_sum(n); needs 2n - 1 <= bound.
  double interval_sum(std::uint64_t n) const {
    if (n < 1) throw Error("interval_sum: argument must be >= 1");
    if (n >= 2 && 2 * n - 1 > bound_) throw Error("interval_sum: 2n-1 exceeds the table bound");
    if (n < 2) return 0.0;
    return theta(2 * n - 1) - theta(n);
  }

 private:
  std::uint64_t bound_;
  std::vector<std::uint64_t> primes_;
  std::vector<double> prefix_;
};

// Compensated sum of log p/(p-1) over primes kept by the predicate, with
// p <= bound (strict=false) or p < bound (strict=true), in ascending order.
template <class Pred>
double filtered_log_sum(std::uint64_t bound, Pred&& keep, bool strict, SieveConfig cfg = {}) {
  CompensatedSum sum;
  std::uint64_t top = strict ? (bound > 0 ? bound - 1 : 0) : bound;
  if (top >= 2) {
    PrimeStream(top, cfg).for_each([&](std::uint64_t p) {
      if (keep(p)) sum.add(prime_log_weight(p));
    });
  }
  return sum.value();
}

}  // namespace sqprod
