// Harness behaviour: config validation, suite execution, report round trips,
// determinism across worker counts, the negative-control fixture, and the
// operator-matrix cache.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "vacmod/harness.hpp"

using namespace vacmod;

namespace {

SuiteConfig light_config(const std::string& suite, int degree = 3, int range = 2) {
  SuiteConfig cfg;
  cfg.suite = suite;
  cfg.truncation_degree = degree;
  cfg.mode_range = range;
  return cfg;
}

// Every record must carry a witness exactly when it failed, and ids must be
// nonempty and unique within a report.
void check_report_invariants(const VerificationReport& r) {
  std::set<std::string> ids;
  bool all_pass = true;
  for (const CheckRecord& c : r.checks) {
    CHECK_FALSE(c.id.empty());
    CHECK(ids.insert(c.id).second);
    CHECK_FALSE(c.lhs.empty());
    CHECK_FALSE(c.rhs.empty());
    CHECK(c.witness.empty() == c.pass);
    all_pass = all_pass && c.pass;
  }
  CHECK(r.aggregate_pass == all_pass);
  CHECK(r.schema_version == kReportSchemaVersion);
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("configuration validation") {
  CHECK(suite_names().size() == 14);
  CHECK(suite_names().front() == "lie");
  CHECK(suite_names().back() == "all");
  CHECK(is_suite_name("tensor-iso"));
  CHECK_FALSE(is_suite_name("tensor_iso"));

  CHECK_NOTHROW(validate_config(light_config("all")));

  SuiteConfig bad = light_config("no-such-suite");
  CHECK_THROWS_AS(validate_config(bad), ConfigError);

  bad = light_config("lie");
  bad.rank = 1;
  CHECK_THROWS_AS(validate_config(bad), ConfigError);

  bad = light_config("lie");
  bad.truncation_degree = -1;
  CHECK_THROWS_AS(validate_config(bad), ConfigError);

  bad = light_config("lie");
  bad.mode_range = 0;
  CHECK_THROWS_AS(validate_config(bad), ConfigError);

  bad = light_config("lie");
  bad.workers = 0;
  CHECK_THROWS_AS(validate_config(bad), ConfigError);

  bad = light_config("lie");
  bad.format = "xml";
  CHECK_THROWS_AS(validate_config(bad), ConfigError);

  // The degree-2 singular vector needs the level-structure-0 module.
  bad = light_config("singular");
  bad.level_structure = 1;
  CHECK_THROWS_AS(validate_config(bad), ConfigError);

  // Degeneration suites require fully symbolic parameters.
  bad = light_config("rees");
  bad.assignments[Param::k] = Rat(5);
  CHECK_THROWS_AS(validate_config(bad), ConfigError);

  // lambda and mu can never be assigned numerically.
  bad = light_config("kac-moody");
  bad.assignments[Param::lambda] = Rat(1);
  CHECK_THROWS_AS(validate_config(bad), ConfigError);

  // The Sugawara normalization has a pole at the critical level.
  bad = light_config("sugawara");
  bad.assignments[Param::k] = Rat(-2);
  CHECK_THROWS_AS(validate_config(bad), ConfigError);
  bad.rank = 3;
  CHECK_NOTHROW(validate_config(bad));  // -2 is not critical for sl3
  bad.assignments[Param::k] = Rat(-3);
  CHECK_THROWS_AS(validate_config(bad), ConfigError);

  // A cache on any suite computes Sugawara matrices, so the pole applies.
  bad = light_config("lie");
  bad.assignments[Param::k] = Rat(-2);
  CHECK_NOTHROW(validate_config(bad));
  bad.cache_path = "unused.json";
  CHECK_THROWS_AS(validate_config(bad), ConfigError);

  // run_suite validates before doing any work.
  CHECK_THROWS_AS(run_suite(light_config("no-such-suite")), ConfigError);

  SuiteConfig assigned = light_config("kac-moody");
  assigned.assignments[Param::k] = rat_frac(7, 2);
  ParamAssignment params = params_of(assigned);
  CHECK(params.level == RF(rat_frac(7, 2)));
  CHECK(params.central == RF::variable(Param::c));

  CHECK(parse_param("lambda") == Param::lambda);
  CHECK_THROWS_AS(parse_param("q"), ConfigError);
  CHECK(parse_rational("-3") == Rat(-3));
  CHECK(parse_rational("10/4") == rat_frac(5, 2));
  CHECK_THROWS_AS(parse_rational("x"), ConfigError);
  CHECK_THROWS_AS(parse_rational("1/0"), ConfigError);
}

TEST_CASE("every suite passes on a light configuration") {
  for (const std::string& suite : suite_names()) {
    if (suite == "all") continue;
    CAPTURE(suite);
    VerificationReport r = run_suite(light_config(suite));
    CHECK(r.suite == suite);
    CHECK_FALSE(r.checks.empty());
    CHECK(r.aggregate_pass);
    check_report_invariants(r);
  }
}

TEST_CASE("the all suite concatenates and respects the singular gate") {
  VerificationReport r = run_suite(light_config("all", 2, 1));
  CHECK(r.aggregate_pass);
  check_report_invariants(r);
  auto has_id = [&r](const std::string& id) {
    return std::any_of(r.checks.begin(), r.checks.end(),
                       [&id](const CheckRecord& c) { return c.id == id; });
  };
  CHECK(has_id("lie.jacobi"));
  CHECK(has_id("singular.exists"));
  CHECK(has_id("dimensions.level-structure-independence"));

  // At n >= 1 the singular-vector checks drop out of the concatenation
  // instead of rejecting the whole run.
  SuiteConfig shifted = light_config("all", 2, 1);
  shifted.level_structure = 1;
  VerificationReport r1 = run_suite(shifted);
  CHECK(r1.aggregate_pass);
  for (const CheckRecord& c : r1.checks) CHECK(c.id.rfind("singular.", 0) != 0);
}

TEST_CASE("negative control fails with a witness") {
  SuiteConfig cfg = light_config("lie");
  cfg.negative_control = true;
  VerificationReport r = run_suite(cfg);
  CHECK_FALSE(r.aggregate_pass);
  check_report_invariants(r);
  std::size_t failures = 0;
  for (const CheckRecord& c : r.checks)
    if (!c.pass) {
      ++failures;
      CHECK_FALSE(c.witness.empty());
    }
  CHECK(failures >= 2);  // at least antisymmetry and Jacobi break

  // The corrupted structure constants also break the module-level relation
  // sweep, with a concrete basis-vector witness.
  SuiteConfig km = light_config("kac-moody");
  km.negative_control = true;
  VerificationReport rkm = run_suite(km);
  CHECK_FALSE(rkm.aggregate_pass);
  REQUIRE(rkm.checks.size() == 1);
  CHECK(rkm.checks[0].witness.find("got") != std::string::npos);
}

TEST_CASE("determinism and worker independence") {
  SuiteConfig cfg = light_config("sugawara");
  VerificationReport first = run_suite(cfg);
  VerificationReport second = run_suite(cfg);
  first.wall_seconds = 0.0;
  second.wall_seconds = 0.0;
  CHECK(emit_report(first, ReportFormat::Json) == emit_report(second, ReportFormat::Json));
  CHECK(emit_report(first, ReportFormat::Text) == emit_report(second, ReportFormat::Text));

  SuiteConfig parallel = cfg;
  parallel.workers = 3;
  VerificationReport third = run_suite(parallel);
  CHECK(third.checks == first.checks);
  CHECK(third.aggregate_pass == first.aggregate_pass);
}

TEST_CASE("report emission and parsing round trip") {
  SuiteConfig cfg = light_config("virasoro", 2, 1);
  cfg.assignments[Param::k] = Rat(5);
  VerificationReport r = run_suite(cfg);
  CHECK(r.aggregate_pass);
  r.wall_seconds = 0.25;  // pin to a value that round-trips exactly

  std::string json_text = emit_report(r, ReportFormat::Json);
  VerificationReport back = parse_report(json_text);
  CHECK(back == r);
  CHECK(emit_report(back, ReportFormat::Json) == json_text);

  // The witness key appears exactly on failing checks.
  SuiteConfig bad = light_config("lie");
  bad.negative_control = true;
  VerificationReport rb = run_suite(bad);
  nlohmann::json parsed = nlohmann::json::parse(emit_report(rb, ReportFormat::Json));
  for (const auto& c : parsed.at("checks"))
    CHECK(c.contains("witness") == !c.at("pass").get<bool>());
  CHECK(parse_report(emit_report(rb, ReportFormat::Json)) == rb);

  std::string text = emit_report(r, ReportFormat::Text);
  CHECK(text.find("PASS virasoro.relations:") != std::string::npos);
  CHECK(text.find("aggregate: PASS") != std::string::npos);
  CHECK(text.find("k=5") != std::string::npos);

  CHECK_THROWS_AS(parse_report("not json"), ConfigError);
  nlohmann::json wrong = nlohmann::json::parse(json_text);
  wrong["schema_version"] = 999;
  CHECK_THROWS_AS(parse_report(wrong.dump()), ConfigError);
}

TEST_CASE("sugawara operator matrices") {
  ModuleSpecPtr spec = make_module_spec(AlgebraKind::KacMoody, Regime::Quantum, build_sl(2), 0,
                                        ParamAssignment{}, 4);
  SugawaraConfig cfg(spec);

  // L^S_0 is weight times the identity at n = 0.
  OperatorMatrix diag = sugawara_matrix(cfg, 0, 2);
  CHECK(diag.cols == 9);
  CHECK(diag.rows == 9);
  REQUIRE(diag.entries.size() == 9);
  for (int j = 0; j < 9; ++j) {
    auto [row, col, text] = diag.entries[static_cast<std::size_t>(j)];
    CHECK(row == j);
    CHECK(col == j);
    CHECK(text == "2");
  }

  // L^S_{-1} annihilates the vacuum at n = 0.
  OperatorMatrix empty = sugawara_matrix(cfg, -1, 0);
  CHECK(empty.cols == 1);
  CHECK(empty.rows == 0);
  CHECK(empty.entries.empty());

  // L^S_{-2} maps the vacuum to the three-term quadratic expression.
  OperatorMatrix column = sugawara_matrix(cfg, -2, 0);
  CHECK(column.cols == 1);
  CHECK(column.rows == 3);
}

TEST_CASE("operator matrix cache") {
  const std::string path = "harness_cache_test.json";
  std::remove(path.c_str());

  ModuleSpecPtr spec = make_module_spec(AlgebraKind::KacMoody, Regime::Quantum, build_sl(2), 0,
                                        ParamAssignment{}, 4);
  SugawaraConfig cfg(spec);
  const std::string fp = cache_fingerprint(*spec);
  CHECK(fp.find("order=") != std::string::npos);
  OperatorMatrix mat = sugawara_matrix(cfg, -2, 1);

  {
    OperatorMatrixCache cache(path);
    CHECK(cache.size() == 0);
    CHECK_FALSE(cache.load("sugawara_mode[-2]", 1, fp).has_value());
    cache.store("sugawara_mode[-2]", 1, fp, mat);
    CHECK(cache.size() == 1);
    std::optional<OperatorMatrix> hit = cache.load("sugawara_mode[-2]", 1, fp);
    REQUIRE(hit.has_value());
    CHECK(*hit == mat);
    // Same operator at a different degree is a distinct entry.
    CHECK_FALSE(cache.load("sugawara_mode[-2]", 2, fp).has_value());
  }

  // A second handle reloads the persisted entry from disk.
  {
    OperatorMatrixCache reloaded(path);
    CHECK(reloaded.size() == 1);
    std::optional<OperatorMatrix> hit = reloaded.load("sugawara_mode[-2]", 1, fp);
    REQUIRE(hit.has_value());
    CHECK(*hit == mat);
    // A fingerprint mismatch must never silently return stale data.
    CHECK_THROWS_AS(reloaded.load("sugawara_mode[-2]", 1, fp + ";other"), CacheInvalidError);
  }

  // A clobbered cache file is rejected up front.
  {
    std::ofstream out(path, std::ios::trunc);
    out << "not json";
  }
  CHECK_THROWS_AS(OperatorMatrixCache{path}, CacheInvalidError);
  std::remove(path.c_str());
}

TEST_CASE("cache round-trip check through run_suite") {
  const std::string path = "harness_suite_cache_test.json";
  std::remove(path.c_str());
  SuiteConfig cfg = light_config("dimensions", 3, 1);
  cfg.cache_path = path;
  VerificationReport cold = run_suite(cfg);
  CHECK(cold.aggregate_pass);
  bool found = false;
  for (const CheckRecord& c : cold.checks) found = found || c.id == "cache.round-trip";
  CHECK(found);
  // Warm pass reuses the persisted matrices and still agrees.
  VerificationReport warm = run_suite(cfg);
  CHECK(warm.aggregate_pass);
  std::remove(path.c_str());
}

}  // TEST_SUITE
