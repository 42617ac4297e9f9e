#pragma once

// End-to-end decision for one l, and the machine-verifiable certificate.
// A complete certificate settles squareness of P(n) = prod (2k^2+l) for every
// n >= 1 by three interlocking parts:
//   threshold  — no squares at or beyond N (analytic crossing),
//   chain      — no squares on [chain_start, N-1] (witness primes),
//   direct     — exact parity answer on [1, d], d + 1 >= chain_start.
// The checker re-derives every part from l alone; stored numbers are
// compared, never trusted.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqprod/directcheck.hpp"
#include "sqprod/errors.hpp"
#include "sqprod/threshold.hpp"
#include "sqprod/witness.hpp"

namespace sqprod {

struct RunConfig {
  std::uint64_t l = 1;
  Convention convention = Convention::strict_lt;
  std::uint64_t threshold_cap = 100'000'000;
  std::uint64_t direct_cap = 10'000;
  std::uint64_t chain_step_cap = 1'000'000;
  std::uint64_t sieve_bound = 100'000'000;
  std::string output_path;  // certificate JSON destination; empty = none
  enum class Format { text, json } format = Format::text;

  SieveConfig sieve() const { return SieveConfig{sieve_bound, SieveConfig{}.segment_odds}; }

  void validate() const {
    require_odd_l(l);
    if (threshold_cap < 2 || direct_cap < 1 || chain_step_cap < 1 || sieve_bound < 2)
      throw Error("all caps must be positive");
  }
};

struct DirectBlock {
  std::uint64_t lo = 1;
  std::uint64_t hi = 0;
  std::vector<std::uint64_t> squares;
};

struct Conclusion {
  std::vector<std::uint64_t> squares;
  bool complete = false;
};

struct Certificate {
  std::uint64_t l = 1;
  ThresholdReport threshold;
  DirectBlock direct;
  CoverageChain chain;
  Conclusion conclusion;
};

// Smallest k >= 1 with 2k^2 + l prime; the chain (and hence the certificate's
// covered range) starts here, and the direct check always reaches it.
inline std::uint64_t smallest_witness_k(std::uint64_t l, std::uint64_t cap = 1'000'000) {
  require_odd_l(l);
  for (std::uint64_t k = 1; k <= cap; ++k)
    if (is_prime(sequence_term(l, k))) return k;
  throw SearchLimitError("no k <= " + std::to_string(cap) + " with 2k^2+" + std::to_string(l) + " prime");
}

namespace detail {

template <class F>
auto run_stage(const char* stage, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(std::string(stage) + " stage: " + e.what());
  }
}

}  // namespace detail

// Runs the full pipeline and assembles the certificate. complete is true
// exactly when [1, d] and the verified chain jointly cover [1, N-1]; then
// conclusion.squares is the final answer for all n >= 1.
inline Certificate run_verify(const RunConfig& cfg) {
  cfg.validate();
  const FactoredL fl = FactoredL::from(cfg.l);
  const SieveConfig scfg = cfg.sieve();

  Certificate cert;
  cert.l = cfg.l;
  cert.threshold =
      detail::run_stage("threshold", [&] { return find_threshold(fl, cfg.convention, cfg.threshold_cap, scfg); });
  const std::uint64_t chain_start =
      detail::run_stage("chain", [&] { return smallest_witness_k(cfg.l, cfg.chain_step_cap); });
  const std::uint64_t d = std::max(cfg.direct_cap, chain_start);
  cert.direct.lo = 1;
  cert.direct.hi = d;
  cert.direct.squares = detail::run_stage("direct", [&] { return find_squares(cfg.l, d, d); });

  const std::uint64_t N = cert.threshold.threshold;
  bool chain_ok;
  if (N - 1 >= chain_start && N - 1 > d) {
    // The greedy can stall on tiny k (for l = 1 no witness with k <= 2
    // covers n = 2). Stall points inside the direct range are already
    // settled, so restart just past them; only stalls beyond d are real.
    std::uint64_t start = chain_start;
    cert.chain = detail::run_stage("chain", [&] {
      for (;;) {
        try {
          return build_chain(cfg.l, start, N - 1, cfg.chain_step_cap);
        } catch (const ChainGapError& gap) {
          if (gap.stuck_at > d) throw;
          start = gap.stuck_at + 1;
        }
      }
    });
    chain_ok = static_cast<bool>(verify_chain(cert.chain, cfg.l, cert.chain.n_lo(), N - 1));
  } else {
    cert.chain = CoverageChain{cfg.l, {}};  // direct range alone reaches N - 1
    chain_ok = d >= N - 1;
  }
  cert.conclusion.squares = cert.direct.squares;
  cert.conclusion.complete = chain_ok && (cert.chain.empty() || cert.chain.n_lo() <= d + 1);
  return cert;
}

// ---------------------------------------------------------------------------
// Serialization. The writer emits fields in a fixed order with floats at 17
// significant digits, so identical runs give byte-identical files.

namespace detail {

inline std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline void append_u64_list(std::string& out, const std::vector<std::uint64_t>& xs) {
  out += '[';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(xs[i]);
  }
  out += ']';
}

}  // namespace detail

inline std::string certificate_to_json(const Certificate& cert) {
  using detail::fmt_double;
  std::string out;
  out += "{\n";
  out += "  \"l\": " + std::to_string(cert.l) + ",\n";
  out += "  \"threshold\": {\n";
  out += "    \"limit\": " + fmt_double(cert.threshold.limit) + ",\n";
  out += "    \"value\": " + std::to_string(cert.threshold.threshold) + ",\n";
  out += "    \"convention\": \"" + std::string(to_string(cert.threshold.convention)) + "\",\n";
  out += "    \"crossing_prime\": " + std::to_string(cert.threshold.crossing_prime) + ",\n";
  out += "    \"sum\": " + fmt_double(cert.threshold.sum_at_threshold) + ",\n";
  out += "    \"rigor_margin\": " + fmt_double(cert.threshold.rigor_margin) + "\n";
  out += "  },\n";
  out += "  \"direct\": {\n";
  out += "    \"range\": [" + std::to_string(cert.direct.lo) + ", " + std::to_string(cert.direct.hi) + "],\n";
  out += "    \"squares\": ";
  detail::append_u64_list(out, cert.direct.squares);
  out += "\n  },\n";
  out += "  \"chain\": [";
  for (std::size_t i = 0; i < cert.chain.witnesses.size(); ++i) {
    const Witness& w = cert.chain.witnesses[i];
    out += i ? ",\n    " : "\n    ";
    out += "{\"k\": " + std::to_string(w.k) + ", \"q\": " + std::to_string(w.q) + ", \"cover\": [" +
           std::to_string(w.cover_start()) + ", " + std::to_string(w.cover_end()) + "]}";
  }
  out += cert.chain.witnesses.empty() ? "],\n" : "\n  ],\n";
  out += "  \"conclusion\": {\n";
  out += "    \"squares\": ";
  detail::append_u64_list(out, cert.conclusion.squares);
  out += ",\n";
  out += std::string("    \"complete\": ") + (cert.conclusion.complete ? "true" : "false") + "\n";
  out += "  }\n";
  out += "}\n";
  return out;
}

namespace detail {

inline std::uint64_t get_u64(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_unsigned())
    throw Error(std::string("certificate: missing or non-integer field '") + key + "'");
  return j[key].get<std::uint64_t>();
}

inline double get_f64(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw Error(std::string("certificate: missing or non-numeric field '") + key + "'");
  return j[key].get<double>();
}

inline std::vector<std::uint64_t> get_u64_list(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array())
    throw Error(std::string("certificate: missing or non-array field '") + key + "'");
  std::vector<std::uint64_t> out;
  for (const auto& v : j[key]) {
    if (!v.is_number_unsigned()) throw Error(std::string("certificate: non-integer entry in '") + key + "'");
    out.push_back(v.get<std::uint64_t>());
  }
  return out;
}

}  // namespace detail

inline Certificate certificate_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("certificate: JSON parse failure: ") + e.what());
  }
  if (!j.is_object()) throw Error("certificate: top level is not an object");

  Certificate cert;
  cert.l = detail::get_u64(j, "l");

  if (!j.contains("threshold") || !j["threshold"].is_object()) throw Error("certificate: missing 'threshold'");
  const auto& jt = j["threshold"];
  cert.threshold.limit = detail::get_f64(jt, "limit");
  cert.threshold.threshold = detail::get_u64(jt, "value");
  if (!jt.contains("convention") || !jt["convention"].is_string())
    throw Error("certificate: missing 'threshold.convention'");
  cert.threshold.convention = convention_from_string(jt["convention"].get<std::string>());
  cert.threshold.crossing_prime = detail::get_u64(jt, "crossing_prime");
  cert.threshold.sum_at_threshold = detail::get_f64(jt, "sum");
  cert.threshold.rigor_margin = detail::get_f64(jt, "rigor_margin");

  if (!j.contains("direct") || !j["direct"].is_object()) throw Error("certificate: missing 'direct'");
  const auto& jd = j["direct"];
  auto range = detail::get_u64_list(jd, "range");
  if (range.size() != 2) throw Error("certificate: direct.range must have two entries");
  cert.direct.lo = range[0];
  cert.direct.hi = range[1];
  cert.direct.squares = detail::get_u64_list(jd, "squares");

  if (!j.contains("chain") || !j["chain"].is_array()) throw Error("certificate: missing 'chain'");
  cert.chain.l = cert.l;
  for (const auto& jw : j["chain"]) {
    if (!jw.is_object()) throw Error("certificate: chain entry is not an object");
    Witness w{detail::get_u64(jw, "k"), detail::get_u64(jw, "q")};
    auto cover = detail::get_u64_list(jw, "cover");
    if (cover.size() != 2) throw Error("certificate: witness cover must have two entries");
    if (w.k < 1 || w.q <= w.k) throw Error("certificate: witness (k, q) out of order");
    if (cover[0] != w.cover_start() || cover[1] != w.cover_end())
      throw Error("certificate: witness cover [" + std::to_string(cover[0]) + ", " + std::to_string(cover[1]) +
                  "] does not match (k, q) = (" + std::to_string(w.k) + ", " + std::to_string(w.q) + ")");
    cert.chain.witnesses.push_back(w);
  }

  if (!j.contains("conclusion") || !j["conclusion"].is_object()) throw Error("certificate: missing 'conclusion'");
  const auto& jc = j["conclusion"];
  cert.conclusion.squares = detail::get_u64_list(jc, "squares");
  if (!jc.contains("complete") || !jc["complete"].is_boolean())
    throw Error("certificate: missing 'conclusion.complete'");
  cert.conclusion.complete = jc["complete"].get<bool>();
  return cert;
}

// ---------------------------------------------------------------------------
// Independent re-verification.

struct CheckResult {
  bool ok = false;
  std::string detail;
  explicit operator bool() const { return ok; }
};

namespace detail {

inline bool close_rel(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace detail

// Recomputes every component of the certificate from l alone and compares.
// Integers must match exactly; floats within 1e-9 relative (the checker may
// run on different hardware than the producer).
inline CheckResult check_certificate(const Certificate& cert, const RunConfig& base = {}) {
  try {
    const FactoredL fl = FactoredL::from(cert.l);
    const SieveConfig scfg = base.sieve();

    ThresholdReport fresh = find_threshold(fl, cert.threshold.convention, base.threshold_cap, scfg);
    if (fresh.threshold != cert.threshold.threshold)
      return {false, "threshold mismatch: stored " + std::to_string(cert.threshold.threshold) + ", recomputed " +
                         std::to_string(fresh.threshold)};
    if (fresh.crossing_prime != cert.threshold.crossing_prime)
      return {false, "crossing prime mismatch: stored " + std::to_string(cert.threshold.crossing_prime) +
                         ", recomputed " + std::to_string(fresh.crossing_prime)};
    if (!detail::close_rel(fresh.limit, cert.threshold.limit))
      return {false, "limit mismatch: stored " + detail::fmt_double(cert.threshold.limit) + ", recomputed " +
                         detail::fmt_double(fresh.limit)};
    if (!detail::close_rel(fresh.sum_at_threshold, cert.threshold.sum_at_threshold))
      return {false, "threshold sum mismatch: stored " + detail::fmt_double(cert.threshold.sum_at_threshold) +
                         ", recomputed " + detail::fmt_double(fresh.sum_at_threshold)};
    if (!detail::close_rel(fresh.rigor_margin, cert.threshold.rigor_margin))
      return {false, "rigor margin mismatch: stored " + detail::fmt_double(cert.threshold.rigor_margin) +
                         ", recomputed " + detail::fmt_double(fresh.rigor_margin)};

    if (cert.direct.lo != 1) return {false, "direct range must start at 1"};
    const std::uint64_t d = cert.direct.hi;
    auto squares = find_squares(cert.l, d, std::max(base.direct_cap, d));
    if (squares != cert.direct.squares) return {false, "direct squares do not re-derive"};

    // Joint coverage of [1, N-1]: direct carries [1, d], the chain must be
    // internally contiguous from its own start and reach N-1.
    const std::uint64_t N = cert.threshold.threshold;
    bool chain_ok;
    if (!cert.chain.empty()) {
      ChainCheck cc = verify_chain(cert.chain, cert.l, cert.chain.witnesses.front().k, N - 1);
      if (!cc && cert.conclusion.complete) return {false, "chain: " + cc.detail};
      chain_ok = cc.ok && cert.chain.n_lo() <= d + 1;
    } else {
      chain_ok = d >= N - 1;
    }

    bool complete = chain_ok;
    if (complete != cert.conclusion.complete)
      return {false, std::string("completeness mismatch: stored ") + (cert.conclusion.complete ? "true" : "false") +
                         ", recomputed " + (complete ? "true" : "false")};
    if (cert.conclusion.squares != cert.direct.squares)
      return {false, "conclusion squares differ from direct squares"};
    return {true, ""};
  } catch (const Error& e) {
    return {false, e.what()};
  }
}

inline CheckResult check_certificate_file(const std::string& path, const RunConfig& base = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {false, "cannot open " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return check_certificate(certificate_from_json(buf.str()), base);
  } catch (const Error& e) {
    return {false, e.what()};
  }
}

// ---------------------------------------------------------------------------
// Human-readable report, bullet style, for auditing against the argument.

inline std::string describe_l(const Certificate& cert) {
  std::string s = std::to_string(cert.l);
  try {
    FactoredL fl = FactoredL::from(cert.l);
    if (!fl.factors.empty()) {
      s += " = ";
      for (std::size_t i = 0; i < fl.factors.size(); ++i) {
        if (i) s += " * ";
        s += std::to_string(fl.factors[i].prime);
        if (fl.factors[i].exponent > 1) s += "^" + std::to_string(fl.factors[i].exponent);
      }
    }
  } catch (const Error&) {
  }
  return s;
}

inline std::string certificate_report(const Certificate& cert) {
  using detail::fmt_double;
  std::ostringstream out;
  out << "P(n) = prod_{k=1..n} (2k^2 + l)  with  l = " << describe_l(cert) << "\n\n";
  out << "threshold   N = " << cert.threshold.threshold << "   [convention " << to_string(cert.threshold.convention)
      << ", crossing prime " << cert.threshold.crossing_prime << "]\n";
  out << "            limit " << fmt_double(cert.threshold.limit) << ", sum at N "
      << fmt_double(cert.threshold.sum_at_threshold) << "\n";
  out << "            rigor margin (sum - finite-n bound at N) = " << fmt_double(cert.threshold.rigor_margin)
      << "\n";
  out << "            => P(n) is not a square for any n >= " << cert.threshold.threshold << "\n\n";
  out << "direct      exact parity check for n in [" << cert.direct.lo << ", " << cert.direct.hi << "]: ";
  if (cert.direct.squares.empty()) {
    out << "no squares\n\n";
  } else {
    out << "squares at {";
    for (std::size_t i = 0; i < cert.direct.squares.size(); ++i)
      out << (i ? ", " : "") << cert.direct.squares[i];
    out << "}\n\n";
  }
  if (!cert.chain.witnesses.empty()) {
    out << "chain       covering [" << cert.chain.n_lo() << ", " << cert.chain.n_hi() << "]:\n";
    for (const Witness& w : cert.chain.witnesses)
      out << "  since 2*" << w.k << "^2+" << cert.l << " = " << w.q << " is prime, P(n) is not a square for " << w.k
          << " <= n <= " << w.cover_end() << "\n";
    out << "\n";
  }
  out << "conclusion  ";
  if (!cert.conclusion.complete) {
    out << "INCOMPLETE certificate: the checked ranges do not cover [1, N-1]\n";
  } else if (cert.conclusion.squares.empty()) {
    out << "P(n) is not a square for any n >= 1\n";
  } else {
    out << "P(n) is a square exactly for n in {";
    for (std::size_t i = 0; i < cert.conclusion.squares.size(); ++i)
      out << (i ? ", " : "") << cert.conclusion.squares[i];
    out << "}\n";
  }
  return out.str();
}

}  // namespace sqprod
