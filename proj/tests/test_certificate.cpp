#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <string>

#include "sqprod/certificate.hpp"

using namespace sqprod;

namespace {

RunConfig quick_config(std::uint64_t l) {
  RunConfig cfg;
  cfg.l = l;
  cfg.direct_cap = 200;  // keeps unit runs snappy; acceptance uses defaults
  return cfg;
}

}  // namespace

TEST_CASE("run_verify: l = 7 certificate content") {
  RunConfig cfg = quick_config(7);
  Certificate cert = run_verify(cfg);
  CHECK(cert.l == 7);
  CHECK(cert.threshold.threshold == 2142500);
  CHECK(cert.direct.lo == 1);
  CHECK(cert.direct.hi == 200);
  CHECK(cert.direct.squares == std::vector<std::uint64_t>{1});
  CHECK(cert.chain.n_lo() == 6);
  CHECK(cert.chain.n_hi() >= 2142499);
  CHECK(cert.conclusion.complete);
  CHECK(cert.conclusion.squares == std::vector<std::uint64_t>{1});
}

TEST_CASE("run_verify: l = 1 bridges the k <= 2 witness gap via the direct block") {
  Certificate cert = run_verify(quick_config(1));
  CHECK(cert.threshold.threshold == 706310);
  CHECK(cert.conclusion.complete);
  CHECK(cert.conclusion.squares.empty());
  CHECK(cert.chain.n_lo() == 3);  // no witness with k <= 2 exists for l = 1
}

TEST_CASE("run_verify: rejects invalid configs") {
  RunConfig cfg;
  cfg.l = 4;
  CHECK_THROWS_AS(run_verify(cfg), Error);
  cfg.l = 3;
  cfg.direct_cap = 0;
  CHECK_THROWS_AS(run_verify(cfg), Error);
}

TEST_CASE("certificate JSON: deterministic, round-trips, re-verifies") {
  RunConfig cfg = quick_config(7);
  Certificate cert = run_verify(cfg);
  std::string once = certificate_to_json(cert);
  std::string twice = certificate_to_json(run_verify(cfg));
  CHECK(once == twice);  // byte-identical across runs

  Certificate parsed = certificate_from_json(once);
  CHECK(certificate_to_json(parsed) == once);  // parse -> serialize is the identity
  CHECK(static_cast<bool>(check_certificate(parsed, cfg)));
}

TEST_CASE("certificate JSON: stable field names") {
  Certificate cert = run_verify(quick_config(7));
  std::string json = certificate_to_json(cert);
  for (const char* field : {"\"l\"", "\"threshold\"", "\"limit\"", "\"value\"", "\"convention\"",
                            "\"crossing_prime\"", "\"sum\"", "\"rigor_margin\"", "\"direct\"", "\"range\"",
                            "\"squares\"", "\"chain\"", "\"k\"", "\"q\"", "\"cover\"", "\"conclusion\"",
                            "\"complete\""}) {
    INFO(field);
    CHECK(json.find(field) != std::string::npos);
  }
}

TEST_CASE("tampering: threshold value") {
  RunConfig cfg = quick_config(7);
  Certificate cert = run_verify(cfg);
  cert.threshold.threshold = 2142499;
  auto res = check_certificate(cert, cfg);
  CHECK_FALSE(static_cast<bool>(res));
  CHECK(res.detail.find("threshold mismatch") != std::string::npos);
}

TEST_CASE("tampering: witness replaced by a composite-producing k") {
  RunConfig cfg = quick_config(7);
  Certificate cert = run_verify(cfg);
  // 2*5^2+7 = 57 = 3*19; internally consistent (k, q) pair, but q composite
  cert.chain.witnesses[0] = Witness{5, 57};
  auto res = check_certificate(cert, cfg);
  CHECK_FALSE(static_cast<bool>(res));
  CHECK(res.detail.find("composite") != std::string::npos);
}

TEST_CASE("tampering: conclusion squares and completeness flag") {
  RunConfig cfg = quick_config(7);
  Certificate cert = run_verify(cfg);
  Certificate wrong = cert;
  wrong.conclusion.squares.clear();
  CHECK_FALSE(static_cast<bool>(check_certificate(wrong, cfg)));
  wrong = cert;
  wrong.direct.squares.push_back(7);
  wrong.conclusion.squares.push_back(7);
  CHECK_FALSE(static_cast<bool>(check_certificate(wrong, cfg)));
  wrong = cert;
  wrong.conclusion.complete = false;
  CHECK_FALSE(static_cast<bool>(check_certificate(wrong, cfg)));
}

TEST_CASE("tampering: floats moved past the checker tolerance") {
  RunConfig cfg = quick_config(7);
  Certificate cert = run_verify(cfg);
  cert.threshold.limit += 1e-3;
  auto res = check_certificate(cert, cfg);
  CHECK_FALSE(static_cast<bool>(res));
  CHECK(res.detail.find("limit mismatch") != std::string::npos);
}

TEST_CASE("parser rejects malformed documents") {
  CHECK_THROWS_AS(certificate_from_json("{"), Error);
  CHECK_THROWS_AS(certificate_from_json("[]"), Error);
  CHECK_THROWS_AS(certificate_from_json("{\"l\": 7}"), Error);
  // inconsistent stored cover is a structural failure
  Certificate cert = run_verify(quick_config(7));
  std::string json = certificate_to_json(cert);
  auto pos = json.find("\"cover\": [6, 72]");
  REQUIRE(pos != std::string::npos);
  std::string bad = json.substr(0, pos) + "\"cover\": [6, 73]" + json.substr(pos + 16);
  CHECK_THROWS_AS(certificate_from_json(bad), Error);
}

TEST_CASE("certificate file round-trip through disk") {
  RunConfig cfg = quick_config(3);
  Certificate cert = run_verify(cfg);
  std::string path = "cert_l3_roundtrip.json";
  {
    std::ofstream out(path, std::ios::binary);
    out << certificate_to_json(cert);
  }
  CHECK(static_cast<bool>(check_certificate_file(path, cfg)));
  CHECK_FALSE(static_cast<bool>(check_certificate_file("does_not_exist.json", cfg)));
  std::remove(path.c_str());
}

TEST_CASE("report text carries the bullet argument") {
  Certificate cert = run_verify(quick_config(7));
  std::string report = certificate_report(cert);
  CHECK(report.find("2*6^2+7 = 79 is prime") != std::string::npos);
  CHECK(report.find("P(n) is a square exactly for n in {1}") != std::string::npos);
  CHECK(report.find("2142500") != std::string::npos);
}
