#pragma once

// The analytic half of the decision: classify primes by whether -2l is a
// quadratic residue, evaluate the limit the filtered prime sum must beat,
// bound the exponent of primes dividing l, and locate the explicit threshold
// N beyond which the product can never be a square.
//
// Quantities, for P(n) = prod_{k=1..n} (2k^2 + l) with l odd:
//   S          = { odd primes p : (-2l/p) = +1 }, the primes whose exponent
//                in P(n) can grow; every other prime's exponent is forced
//                small, which is what the sum below measures.
//   limit L(l) = 10 log 2 + (1/4) sum_i B(p_i, e_i) log p_i over l's prime
//                factorization, where B is the bracket in limit_value().
//   threshold  = smallest n with  sum_{p<n, p not in S} log p/(p-1) > L(l)
//                (strict-lt convention; leq uses p <= n).
// Once the sum passes L(l), the counting inequality rhs_eq9() is violated
// for a hypothetical square, so P(n) cannot be one for any n >= N.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "sqprod/arith.hpp"
#include "sqprod/errors.hpp"
#include "sqprod/sieve.hpp"
#include "sqprod/term.hpp"

namespace sqprod {

// Whether the threshold sum ranges over p < n (strict-lt, the default) or
// p <= n (leq). Under strict-lt, N = crossing_prime + 1.
enum class Convention { strict_lt, leq };

inline const char* to_string(Convention c) { return c == Convention::strict_lt ? "strict-lt" : "leq"; }

inline Convention convention_from_string(const std::string& s) {
  if (s == "strict-lt") return Convention::strict_lt;
  if (s == "leq") return Convention::leq;
  throw Error("unknown convention '" + s + "' (expected strict-lt or leq)");
}

// The odd parameter l together with its odd-prime factorization.
struct FactoredL {
  std::uint64_t l = 1;
  Factorization factors;  // strictly increasing primes; empty iff l == 1

  static FactoredL from(std::uint64_t l) {
    require_odd_l(l);
    FactoredL out;
    out.l = l;
    if (l > 1) out.factors = factorize(l);
    return out;
  }
};

// p in S: p odd, p coprime to 2l, and -2l a quadratic residue mod p.
// p = 2 and p | l (symbol 0) are excluded, so they land in the sum.
inline bool in_S(const FactoredL& l, std::uint64_t p) {
  if (p == 2) return false;
  std::uint64_t r = static_cast<std::uint64_t>((2 * static_cast<unsigned __int128>(l.l % p)) % p);
  std::uint64_t a = (p - r) % p;  // -2l reduced into [0, p)
  return jacobi(static_cast<std::int64_t>(a), p) == 1;
}

// L(l): the n -> infinity value of rhs_eq9. For l = 1 this is exactly
// 10 log 2. Fractional powers p^(e/2) are real square roots.
inline double limit_value(const FactoredL& l) {
  double total = 10.0 * std::log(2.0);
  for (const auto& [p, e] : l.factors) {
    double pd = static_cast<double>(p);
    double pe = std::pow(pd, static_cast<double>(e));
    double ph = std::pow(pd, 0.5 * static_cast<double>(e));
    double bracket = (3.0 * pd - 2.0 - 1.0 / pe) / ((pd - 1.0) * (pd - 1.0)) -
                     (static_cast<double>(e) + 3.0) / (pe * (pd - 1.0)) + 4.0 / (ph * (pd - 1.0));
    total += 0.25 * bracket * std::log(pd);
  }
  return total;
}

// lambda = log(2n^2+l)/log n, the exponent with P(n) > (n!)^lambda.
inline double lambda(const FactoredL& l, std::uint64_t n) {
  if (n < 2) throw Error("lambda: n must be >= 2");
  return std::log(static_cast<double>(sequence_term(l.l, n))) / std::log(static_cast<double>(n));
}

// Closed-form upper bound on the exponent of p in P(n) for p | l, l >= 3.
inline double gamma_lp(const FactoredL& l, std::uint64_t p, std::uint64_t n) {
  if (l.l < 3) throw Error("gamma_lp: requires l >= 3");
  if (n < 2) throw Error("gamma_lp: n must be >= 2");
  const PrimePower* entry = nullptr;
  for (const auto& f : l.factors)
    if (f.prime == p) entry = &f;
  if (entry == nullptr) throw Error("gamma_lp: p = " + std::to_string(p) + " does not divide l");

  double pd = static_cast<double>(p);
  double sd = static_cast<double>(entry->exponent);
  double ps = std::pow(pd, sd);
  double ph = std::pow(pd, 0.5 * sd);
  double nd = static_cast<double>(n);
  double term = static_cast<double>(sequence_term(l.l, n));

  double linear = 0.5 * nd *
                  ((3.0 * pd - 2.0 - 1.0 / ps) / ((pd - 1.0) * (pd - 1.0)) - (sd + 3.0) / (ps * (pd - 1.0)) +
                   4.0 / (ph * (pd - 1.0)));
  double correction = -2.0 * nd * ph / ((pd - 1.0) * term);
  double constant = sd * (sd + 5.0) / 4.0;
  double tail = 2.0 * ph * (std::log(term) / std::log(pd) - sd);
  return linear + correction + constant + tail;
}

// Full right side of the master inequality at finite n. The middle sum is
// empty for l = 1. Requires n >= 2 and 2n^2 > l.
inline double rhs_eq9(const FactoredL& l, std::uint64_t n) {
  if (n < 2) throw Error("rhs_eq9: n must be >= 2");
  if (2 * static_cast<unsigned __int128>(n) * n <= l.l) throw Error("rhs_eq9: requires n > sqrt(l/2)");
  double nd = static_cast<double>(n);
  double log_term = std::log(static_cast<double>(sequence_term(l.l, n)));
  double log_n = std::log(nd);
  double head = log_term / (nd - 1.0) * (pi_upper_bound(n));
  double mid = 0.0;
  for (const auto& [p, e] : l.factors) mid += gamma_lp(l, p, n) * std::log(static_cast<double>(p));
  mid = (log_n / log_term) * mid / (nd - 1.0);
  double tail = nd * std::log(4.0) / (nd - 1.0);
  return head + mid + tail;
}

struct ThresholdReport {
  FactoredL l;
  double limit = 0.0;                // L(l)
  std::uint64_t threshold = 0;       // N_l, first n whose sum beats the limit
  double sum_at_threshold = 0.0;     // the convention sum evaluated at N_l
  std::uint64_t crossing_prime = 0;  // the prime whose term crosses
  Convention convention = Convention::strict_lt;
  double rigor_margin = 0.0;  // sum_at_threshold - rhs_eq9(l, N_l); sign reported, not asserted
  bool precision_flag = false;
};

namespace detail {

// Extended-precision replay of the scan up to the crossing prime. Terms are
// still double-rounded logs, so ~1e-13 is the honest resolution floor; a
// crossing closer than that is refused rather than answered.
inline void recheck_crossing_dd(const FactoredL& l, std::uint64_t crossing, double limit, const SieveConfig& cfg) {
  DoubleDouble sum;
  double before = 0.0;
  PrimeStream(crossing, cfg).for_each([&](std::uint64_t p) {
    if (!in_S(l, p)) {
      if (p == crossing) before = sum.estimate();
      sum += prime_log_weight_dd(p);
    }
  });
  double after = sum.estimate();
  constexpr double kAmbiguous = 1e-13;
  if (std::abs(after - limit) < kAmbiguous || std::abs(before - limit) < kAmbiguous)
    throw PrecisionAmbiguousError("threshold crossing within " + std::to_string(kAmbiguous) +
                                  " of the limit after extended recheck; refusing to decide");
  if (!(after > limit) || before > limit)
    throw PrecisionAmbiguousError("extended-precision recheck disagrees with the binary64 scan at p = " +
                                  std::to_string(crossing));
}

}  // namespace detail

// Locates the smallest n whose filtered sum exceeds L(l). Scans primes in
// ascending order; under strict-lt the report's threshold is one past the
// crossing prime. Crossings with margin below 1e-9 are replayed in
// double-double precision before being trusted.
inline ThresholdReport find_threshold(const FactoredL& l, Convention convention = Convention::strict_lt,
                                      std::uint64_t cap = 100'000'000, SieveConfig cfg = {}) {
  ThresholdReport report;
  report.l = l;
  report.convention = convention;
  report.limit = limit_value(l);

  CompensatedSum sum;
  PrimeStream(cap, cfg).for_each([&](std::uint64_t p) {
    if (!in_S(l, p)) {
      sum.add(prime_log_weight(p));
      if (sum.value() > report.limit) {
        report.crossing_prime = p;
        report.sum_at_threshold = sum.value();
        return false;
      }
    }
    return true;
  });
  if (report.crossing_prime == 0)
    throw SearchLimitError("threshold sum did not cross the limit below cap " + std::to_string(cap) +
                           " (l = " + std::to_string(l.l) + ")");

  report.threshold = convention == Convention::strict_lt ? report.crossing_prime + 1 : report.crossing_prime;
  // Standing assumption n > sqrt(l/2); only binds for enormous l.
  std::uint64_t n_min = std::max<std::uint64_t>(2, isqrt(l.l / 2) + 1);
  report.threshold = std::max(report.threshold, n_min);

  report.precision_flag = report.sum_at_threshold - report.limit < 1e-9;
  if (report.precision_flag) detail::recheck_crossing_dd(l, report.crossing_prime, report.limit, cfg);

  report.rigor_margin = report.sum_at_threshold - rhs_eq9(l, report.threshold);
  return report;
}

}  // namespace sqprod
