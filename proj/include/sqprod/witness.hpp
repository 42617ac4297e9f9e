#pragma once

// Witness primes and covering chains. A witness is a pair (k, q) with
// q = 2k^2 + l prime. q divides the k-th factor of the product exactly once
// (the factor *is* q), divides no earlier factor (they are smaller than q),
// and divides no later factor until j = q - k, because the solutions of
// 2x^2 = -l (mod q) are exactly x = +-k. So the exponent of q in P(n) is
// odd — equal to 1 — for every n in [k, q-k-1], and P(n) is not a square
// there. Chains of witnesses with contiguous intervals certify whole ranges.

#include <cstdint>
#include <string>
#include <vector>

#include "sqprod/arith.hpp"
#include "sqprod/errors.hpp"
#include "sqprod/term.hpp"

namespace sqprod {

struct Witness {
  std::uint64_t k = 0;
  std::uint64_t q = 0;  // 2k^2 + l, prime
  std::uint64_t cover_start() const { return k; }
  std::uint64_t cover_end() const { return q - k - 1; }
  friend bool operator==(const Witness&, const Witness&) = default;
};

// Ordered witnesses whose certified intervals tile [n_lo, n_hi] with no gap.
struct CoverageChain {
  std::uint64_t l = 0;
  std::vector<Witness> witnesses;

  bool empty() const { return witnesses.empty(); }
  std::uint64_t n_lo() const { return witnesses.front().cover_start(); }
  std::uint64_t n_hi() const { return witnesses.back().cover_end(); }
};

// Builds the witness at k, or throws NotPrimeError (carrying the composite
// value) when 2k^2 + l is not prime.
inline Witness make_witness(std::uint64_t l, std::uint64_t k) {
  require_odd_l(l);
  if (k < 1) throw Error("make_witness: k must be >= 1");
  std::uint64_t q = sequence_term(l, k);
  if (!is_prime(q))
    throw NotPrimeError(q, "2*" + std::to_string(k) + "^2+" + std::to_string(l) + " = " + std::to_string(q) +
                               " is not prime");
  return Witness{k, q};
}

// Result of verify_chain: false carries the first failure found.
struct ChainCheck {
  bool ok = false;
  std::string detail;
  explicit operator bool() const { return ok; }
};

// True iff every witness checks out (q recomputed and certified prime),
// the chain starts at or below `from`, each witness starts within the
// previous cover, and the final cover reaches `to`.
inline ChainCheck verify_chain(const CoverageChain& chain, std::uint64_t l, std::uint64_t from, std::uint64_t to) {
  if (chain.l != l)
    return {false, "chain was built for l = " + std::to_string(chain.l) + ", not l = " + std::to_string(l)};
  if (chain.empty()) return {false, "chain is empty"};
  std::uint64_t reach = 0;
  for (std::size_t i = 0; i < chain.witnesses.size(); ++i) {
    const Witness& w = chain.witnesses[i];
    if (w.k < 1) return {false, "witness " + std::to_string(i) + " has k = 0"};
    std::uint64_t q;
    try {
      q = sequence_term(l, w.k);
    } catch (const RangeError& e) {
      return {false, std::string("witness ") + std::to_string(i) + ": " + e.what()};
    }
    if (q != w.q)
      return {false, "witness " + std::to_string(i) + " stores q = " + std::to_string(w.q) + " but 2*" +
                         std::to_string(w.k) + "^2+" + std::to_string(l) + " = " + std::to_string(q)};
    if (!is_prime(q)) return {false, "witness " + std::to_string(i) + ": q = " + std::to_string(q) + " is composite"};
    if (i == 0) {
      if (w.k > from)
        return {false, "first witness starts at k = " + std::to_string(w.k) + " > from = " + std::to_string(from)};
    } else {
      if (w.k <= chain.witnesses[i - 1].k)
        return {false, "witness ks not strictly increasing at index " + std::to_string(i)};
      if (w.k > reach + 1)
        return {false, "coverage gap before witness " + std::to_string(i) + ": k = " + std::to_string(w.k) +
                           " > previous cover end " + std::to_string(reach) + " + 1"};
    }
    reach = std::max(reach, w.cover_end());
  }
  if (reach < to)
    return {false, "chain covers only up to " + std::to_string(reach) + ", target is " + std::to_string(to)};
  return {true, ""};
}

// Greedy chain construction: with coverage through c (initially from - 1),
// take the largest k <= c + 1 giving a prime 2k^2 + l, scanning downward at
// most step_cap candidates, and repeat until `to` is covered. Any valid
// chain is acceptable; largest-k keeps chains short.
inline CoverageChain build_chain(std::uint64_t l, std::uint64_t from, std::uint64_t to,
                                 std::uint64_t step_cap = 1'000'000) {
  require_odd_l(l);
  if (from < 1) throw Error("build_chain: from must be >= 1");
  if (from > to) throw Error("build_chain: from > to");
  if (step_cap < 1) throw Error("build_chain: step_cap must be >= 1");

  CoverageChain chain;
  chain.l = l;
  std::uint64_t covered = from - 1;
  while (covered < to) {
    std::uint64_t hi = covered + 1;
    std::uint64_t lo = hi > step_cap ? hi - step_cap + 1 : 1;
    std::uint64_t found = 0;
    for (std::uint64_t k = hi; k >= lo; --k) {
      if (is_prime(sequence_term(l, k))) {
        found = k;
        break;
      }
      if (k == 1) break;
    }
    if (found == 0)
      throw ChainGapError(hi, lo,
                          "no witness prime 2k^2+" + std::to_string(l) + " for k in [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]");
    Witness w = make_witness(l, found);
    if (w.cover_end() <= covered)
      throw ChainGapError(covered + 1, found,
                          "stuck at n = " + std::to_string(covered + 1) + ": best witness k = " +
                              std::to_string(found) + " covers only to " + std::to_string(w.cover_end()));
    chain.witnesses.push_back(w);
    covered = w.cover_end();
  }
  return chain;
}

}  // namespace sqprod
