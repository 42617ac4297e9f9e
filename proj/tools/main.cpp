// Command-line front end. Subcommands mirror the pipeline stages:
//   threshold  analytic threshold N for one l
//   chain      witness chain over a range
//   direct     exact square list for small n
//   symbol     S-membership of a single prime
//   verify     full pipeline -> certificate (optionally JSON)
//   check      re-verify a certificate file from scratch
// Exit codes: 0 success/complete, 1 usage or internal error, 2 a certificate
// that is structurally valid but fails completeness or re-verification.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sqprod/sqprod.hpp"

namespace {

using namespace sqprod;

std::uint64_t env_u64(const char* name, std::uint64_t fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  try {
    return std::stoull(raw);
  } catch (const std::exception&) {
    throw Error(std::string(name) + " is not a valid integer: " + raw);
  }
}

RunConfig config_from_env() {
  RunConfig cfg;
  cfg.threshold_cap = env_u64("SQPROD_THRESHOLD_CAP", cfg.threshold_cap);
  cfg.direct_cap = env_u64("SQPROD_DIRECT_CAP", cfg.direct_cap);
  cfg.chain_step_cap = env_u64("SQPROD_CHAIN_STEP_CAP", cfg.chain_step_cap);
  cfg.sieve_bound = env_u64("SQPROD_SIEVE_BOUND", cfg.sieve_bound);
  return cfg;
}

void print_threshold_report(const ThresholdReport& r) {
  std::cout << "l               = " << r.l.l << "\n"
            << "limit L(l)      = " << detail::fmt_double(r.limit) << "\n"
            << "threshold N     = " << r.threshold << "\n"
            << "convention      = " << to_string(r.convention) << "\n"
            << "crossing prime  = " << r.crossing_prime << "\n"
            << "sum at N        = " << detail::fmt_double(r.sum_at_threshold) << "\n"
            << "rigor margin    = " << detail::fmt_double(r.rigor_margin) << "\n"
            << "precision flag  = " << (r.precision_flag ? "true" : "false") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decides which n make prod_{k=1..n} (2k^2+l) a perfect square"};
  app.require_subcommand(1);

  RunConfig cfg;
  try {
    cfg = config_from_env();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::uint64_t l = 1;
  std::uint64_t p = 3;
  std::uint64_t from = 1, to = 1, up_to = cfg.direct_cap;
  std::string convention = "strict-lt";
  std::string json_path;
  std::string format = "text";
  std::string cert_path;

  auto add_l = [&](CLI::App* cmd) {
    cmd->add_option("--l", l, "odd parameter l of the product")->required()->check(CLI::PositiveNumber);
  };

  CLI::App* cmd_threshold = app.add_subcommand("threshold", "compute the threshold N for one l");
  add_l(cmd_threshold);
  cmd_threshold->add_option("--convention", convention, "strict-lt (default) or leq");
  cmd_threshold->add_option("--cap", cfg.threshold_cap, "abort if no crossing below this bound");

  CLI::App* cmd_chain = app.add_subcommand("chain", "build a witness chain covering [from, to]");
  add_l(cmd_chain);
  cmd_chain->add_option("--from", from, "first n to cover")->required();
  cmd_chain->add_option("--to", to, "last n to cover")->required();
  cmd_chain->add_option("--step-cap", cfg.chain_step_cap, "candidates scanned per greedy step");

  CLI::App* cmd_direct = app.add_subcommand("direct", "list squares among n <= up-to by exact parity");
  add_l(cmd_direct);
  cmd_direct->add_option("--up-to", up_to, "top of the checked range")->required();
  cmd_direct->add_option("--cap", cfg.direct_cap, "refuse ranges above this cap");

  CLI::App* cmd_symbol = app.add_subcommand("symbol", "Jacobi symbol (-2l/p) and S membership");
  add_l(cmd_symbol);
  cmd_symbol->add_option("--p", p, "prime to classify")->required();

  CLI::App* cmd_verify = app.add_subcommand("verify", "run the full pipeline and emit a certificate");
  add_l(cmd_verify);
  cmd_verify->add_option("--json", json_path, "write the certificate JSON to this path");
  cmd_verify->add_option("--format", format, "stdout format: text (default) or json");
  cmd_verify->add_option("--convention", convention, "strict-lt (default) or leq");
  cmd_verify->add_option("--threshold-cap", cfg.threshold_cap, "threshold search cap");
  cmd_verify->add_option("--direct-cap", cfg.direct_cap, "direct check range");
  cmd_verify->add_option("--chain-step-cap", cfg.chain_step_cap, "candidates per greedy chain step");
  cmd_verify->add_option("--sieve-bound", cfg.sieve_bound, "maximum sieve bound");

  CLI::App* cmd_check = app.add_subcommand("check", "re-verify a certificate file");
  cmd_check->add_option("path", cert_path, "certificate JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_threshold->parsed()) {
      ThresholdReport r =
          find_threshold(FactoredL::from(l), convention_from_string(convention), cfg.threshold_cap, cfg.sieve());
      print_threshold_report(r);
      return 0;
    }

    if (cmd_chain->parsed()) {
      CoverageChain chain = build_chain(l, from, to, cfg.chain_step_cap);
      for (const Witness& w : chain.witnesses)
        std::cout << "since 2*" << w.k << "^2+" << l << " = " << w.q << " is prime, P(n) is not a square for " << w.k
                  << " <= n <= " << w.cover_end() << "\n";
      std::cout << "chain of " << chain.witnesses.size() << " witnesses covers [" << chain.n_lo() << ", "
                << chain.n_hi() << "]\n";
      return 0;
    }

    if (cmd_direct->parsed()) {
      auto squares = find_squares(l, up_to, cfg.direct_cap);
      std::cout << "squares among n in [1, " << up_to << "]: ";
      if (squares.empty()) {
        std::cout << "none\n";
      } else {
        std::cout << "{";
        for (std::size_t i = 0; i < squares.size(); ++i) std::cout << (i ? ", " : "") << squares[i];
        std::cout << "}\n";
      }
      return 0;
    }

    if (cmd_symbol->parsed()) {
      if (!is_prime(p)) throw Error("--p must be prime, got " + std::to_string(p));
      FactoredL fl = FactoredL::from(l);
      if (p == 2) {
        std::cout << "jacobi(-2*" << l << ", 2) is undefined (even modulus); 2 is never in S\n";
      } else {
        std::uint64_t r = static_cast<std::uint64_t>((2 * static_cast<unsigned __int128>(l % p)) % p);
        std::uint64_t a = (p - r) % p;
        std::cout << "jacobi(-2*" << l << ", " << p << ") = " << jacobi(static_cast<std::int64_t>(a), p) << "\n";
      }
      std::cout << "p = " << p << (in_S(fl, p) ? " is in S" : " is not in S") << "\n";
      return 0;
    }

    if (cmd_verify->parsed()) {
      cfg.l = l;
      cfg.convention = convention_from_string(convention);
      cfg.output_path = json_path;
      if (format == "json") {
        cfg.format = RunConfig::Format::json;
      } else if (format != "text") {
        throw Error("--format must be text or json");
      }
      Certificate cert = run_verify(cfg);
      std::string json = certificate_to_json(cert);
      if (!cfg.output_path.empty()) {
        std::ofstream out(cfg.output_path, std::ios::binary);
        if (!out) throw Error("cannot write " + cfg.output_path);
        out << json;
      }
      if (cfg.format == RunConfig::Format::json) {
        std::cout << json;
      } else {
        std::cout << certificate_report(cert);
      }
      return cert.conclusion.complete ? 0 : 2;
    }

    if (cmd_check->parsed()) {
      std::ifstream in(cert_path, std::ios::binary);
      if (!in) throw Error("cannot open " + cert_path);
      std::ostringstream buf;
      buf << in.rdbuf();
      Certificate cert;
      try {
        cert = certificate_from_json(buf.str());
      } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      }
      CheckResult res = check_certificate(cert, cfg);
      if (res) {
        std::cout << "certificate verifies: l = " << cert.l << ", threshold " << cert.threshold.threshold
                  << ", conclusion " << (cert.conclusion.complete ? "complete" : "incomplete") << "\n";
        return cert.conclusion.complete ? 0 : 2;
      }
      std::cout << "certificate REJECTED: " << res.detail << "\n";
      return 2;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
