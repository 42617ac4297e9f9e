#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sqprod {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 2k^2 + l turned out composite where a witness prime was required.
struct NotPrimeError : Error {
  NotPrimeError(std::uint64_t value, const std::string& what) : Error(what), value(value) {}
  std::uint64_t value;
};

// A quantity left the 64-bit range the library supports.
struct RangeError : Error {
  using Error::Error;
};

// Greedy chain construction could not extend coverage past `stuck_at`.
struct ChainGapError : Error {
  ChainGapError(std::uint64_t stuck_at, std::uint64_t scanned_down_to, const std::string& what)
      : Error(what), stuck_at(stuck_at), scanned_down_to(scanned_down_to) {}
  std::uint64_t stuck_at;
  std::uint64_t scanned_down_to;
};

// A bounded search (threshold scan, smallest-witness scan) hit its cap.
struct SearchLimitError : Error {
  using Error::Error;
};

// Requested sieve bound exceeds the configured memory cap.
struct ResourceLimitError : Error {
  using Error::Error;
};

// The threshold crossing is too close to call even after the
// extended-precision recheck. Never answered silently.
struct PrecisionAmbiguousError : Error {
  using Error::Error;
};

}  // namespace sqprod
