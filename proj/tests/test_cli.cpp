#include <doctest.h>

#include <sstream>

#include "uecomp/config.hpp"
#include "uecomp/report.hpp"

using namespace uecomp;

TEST_CASE("config parses key=value text with comments") {
  RunConfig cfg = RunConfig::from_text(
      "# comment\n"
      "group = Z^2\n"
      "n=4\n"
      "p = 0.05\n"
      "\n"
      "verbose = true\n");
  CHECK(cfg.require_string("group") == "Z^2");
  CHECK(cfg.get_int("n", 0) == 4);
  CHECK(cfg.get_double("p", 0.0) == doctest::Approx(0.05));
  CHECK(cfg.get_bool("verbose", false));
  CHECK(cfg.get_string("missing", "fallback") == "fallback");
  CHECK_THROWS_AS(cfg.require_string("missing"), InvalidSpecError);
  CHECK_THROWS_AS(RunConfig::from_text("not a pair\n"), InvalidSpecError);
}

TEST_CASE("config validation enumerates every invalid field") {
  RunConfig cfg;
  cfg.set("group", "nope");
  cfg.set("n", "-3");
  cfg.set("p", "2.0");
  cfg.set("threads", "0");
  try {
    cfg.validate();
    FAIL("expected validation failure");
  } catch (const InvalidSpecError& e) {
    std::string msg = e.what();
    CHECK(msg.find("group") != std::string::npos);
    CHECK(msg.find("n (") != std::string::npos);
    CHECK(msg.find("p (") != std::string::npos);
    CHECK(msg.find("threads") != std::string::npos);
  }
}

TEST_CASE("config hash is deterministic and order independent") {
  RunConfig a, b;
  a.set("x", "1");
  a.set("y", "2");
  b.set("y", "2");
  b.set("x", "1");
  CHECK(a.hash() == b.hash());
  b.set("x", "3");
  CHECK(a.hash() != b.hash());
}

TEST_CASE("typed accessors reject malformed values") {
  RunConfig cfg;
  cfg.set("n", "12x");
  cfg.set("p", "abc");
  cfg.set("flag", "maybe");
  CHECK_THROWS_AS(cfg.get_int("n", 0), InvalidSpecError);
  CHECK_THROWS_AS(cfg.get_double("p", 0.0), InvalidSpecError);
  CHECK_THROWS_AS(cfg.get_bool("flag", false), InvalidSpecError);
}

TEST_CASE("report csv has a header and metadata trailer") {
  VerificationReport report;
  report.rows.push_back({"near", 4, 10, 0, 0.25, false, "k=39"});
  report.rows.push_back({"far", 4, 0, 0, 0.0, true, ""});
  CsvMetadata meta{tool_version(), "deadbeef", 7};
  std::ostringstream os;
  write_report_csv(os, report, meta);
  std::string text = os.str();
  CHECK(text.find("condition,n,pairs_checked,violations,worst_margin,"
                  "vacuous,note\n") == 0);
  CHECK(text.find("near,4,10,0,0.25,0,k=39\n") != std::string::npos);
  CHECK(text.find("far,4,0,0,0,1,\n") != std::string::npos);
  CHECK(text.find("# tool_version=") != std::string::npos);
  CHECK(text.find("# config_hash=deadbeef") != std::string::npos);
  CHECK(text.find("# seed=7") != std::string::npos);
  CHECK(report.all_pass());
  report.rows[0].violations = 1;
  CHECK_FALSE(report.all_pass());
}
