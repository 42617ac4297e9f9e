#pragma once

#include <cstdint>
#include <string>

#include "sqprod/errors.hpp"

namespace sqprod {

// The k-th factor of the product under study: 2k^2 + l, overflow-guarded.
inline std::uint64_t sequence_term(std::uint64_t l, std::uint64_t k) {
  unsigned __int128 t = 2 * static_cast<unsigned __int128>(k) * k + l;
  if (t > UINT64_MAX) throw RangeError("2k^2+l exceeds 64 bits at k=" + std::to_string(k));
  return static_cast<std::uint64_t>(t);
}

inline void require_odd_l(std::uint64_t l) {
  if (l == 0 || l % 2 == 0) throw Error("l must be a positive odd integer, got " + std::to_string(l));
}

}  // namespace sqprod
