#pragma once

// Exact square detection for small n. The main path never forms the product:
// it tracks the set of primes with odd exponent (the squarefree kernel) and
// toggles it with each factor's factorization. The product is a square
// exactly when the set is empty. Factors stay machine-word sized, so this
// runs in O(number of odd-parity primes) memory no matter how far n goes.
//
// bigint_square_oracle is the independent route for tests: the exact
// arbitrary-precision product, checked against its integer square root.

#include <cstdint>
#include <set>
#include <vector>

#include <gmpxx.h>

#include "sqprod/arith.hpp"
#include "sqprod/errors.hpp"
#include "sqprod/term.hpp"

namespace sqprod {

// Parity of prime exponents in prod_{k=1..n} (2k^2 + l). The set holds the
// primes with odd exponent; empty means the product is a perfect square.
// n = 0 is the empty product. 2 never appears: every factor is odd.
struct ParityState {
  std::uint64_t l = 1;
  std::uint64_t n = 0;
  std::set<std::uint64_t> odd_exponent_primes;

  bool is_square() const { return odd_exponent_primes.empty(); }
};

inline ParityState parity_start(std::uint64_t l) {
  require_odd_l(l);
  return ParityState{l, 0, {}};
}

// Advances the product by one factor, toggling the parity set.
inline ParityState parity_step(ParityState state) {
  std::uint64_t term = sequence_term(state.l, state.n + 1);
  for (const auto& [p, e] : factorize(term)) {
    if (e % 2 == 1) {
      auto [it, inserted] = state.odd_exponent_primes.insert(p);
      if (!inserted) state.odd_exponent_primes.erase(it);
    }
  }
  ++state.n;
  return state;
}

// All n in [1, up_to] where the product is a perfect square, ascending.
inline std::vector<std::uint64_t> find_squares(std::uint64_t l, std::uint64_t up_to, std::uint64_t cap = 10'000) {
  if (up_to > cap)
    throw ResourceLimitError("direct check up to " + std::to_string(up_to) + " exceeds cap " + std::to_string(cap));
  std::vector<std::uint64_t> squares;
  ParityState state = parity_start(l);
  while (state.n < up_to) {
    state = parity_step(std::move(state));
    if (state.is_square()) squares.push_back(state.n);
  }
  return squares;
}

// Independent oracle: exact product, exact integer square root. Desk scale
// only (the product has ~2 n log2 n bits).
inline bool bigint_square_oracle(std::uint64_t l, std::uint64_t n) {
  require_odd_l(l);
  mpz_class product = 1;
  for (std::uint64_t k = 1; k <= n; ++k)
    product *= mpz_class(static_cast<unsigned long>(sequence_term(l, k)));
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), product.get_mpz_t());
  return root * root == product;
}

}  // namespace sqprod
