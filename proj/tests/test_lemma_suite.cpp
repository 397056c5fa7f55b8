#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "virasoro/lemma_suite.hpp"

using namespace virasoro;

namespace {

const ExpectedTable& table() {
    static ExpectedTable t = ExpectedTable::load_file(std::string(VIRASORO_DATA_DIR) +
                                                      "/expected_values.json");
    return t;
}

const Report& default_report() {
    static Report r = run_all(RunConfig{}, table());
    return r;
}

}  // namespace

TEST_CASE("full battery passes at the default configuration") {
    const Report& r = default_report();
    CHECK(r.all_passed());
    CHECK(r.fail_count == 0);
    CHECK(r.pass_count == r.results.size());
    CHECK(r.results.size() == check_names().size());
    CHECK(r.results.size() == 34);
    CHECK(r.expected_digest == table().digest());
    CHECK(r.engine_fingerprint.find(table().digest()) != std::string::npos);
}

TEST_CASE("runs are deterministic apart from wall-clock times") {
    const Report& a = default_report();
    Report b = run_all(RunConfig{}, table());
    REQUIRE(a.results.size() == b.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i) {
        CHECK(a.results[i].name == b.results[i].name);
        CHECK(a.results[i].passed == b.results[i].passed);
        CHECK(a.results[i].computed == b.results[i].computed);
        CHECK(a.results[i].expected == b.results[i].expected);
    }
}

TEST_CASE("table digest is the content hash of the file bytes") {
    std::ifstream in(std::string(VIRASORO_DATA_DIR) + "/expected_values.json", std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    CHECK(table().digest() == fnv1a_hex(buf.str()));
    CHECK(table().digest().size() == 16);
}

TEST_CASE("an injected bracket fault is caught and named") {
    RunConfig cfg;
    cfg.patch = BracketPatch{1, -1, Rational(1)};
    Report r = run_checks(cfg, table(), {"algebra"});
    CHECK(!r.all_passed());
    REQUIRE(!r.results.empty());
    CHECK(r.results[0].name == "algebra.jacobi");
    CHECK(!r.results[0].passed);
}

TEST_CASE("a tampered expected table fails exactly the named check") {
    std::string doctored = R"({"entries":{
        "lemma3.roots": {"value": "{0, 1, 3}"},
        "lemma3.mu_set": {"value": "{-1, 0, 1}"}
    }})";
    ExpectedTable t = ExpectedTable::from_string(doctored);
    Report r = run_checks(RunConfig{}, t, {"lemma3.roots", "lemma3.mu_set"});
    REQUIRE(r.results.size() == 2);
    CHECK(!r.results[0].passed);
    CHECK(r.results[0].computed == "{0, 1, 2}");
    CHECK(r.results[0].expected == "{0, 1, 3}");
    CHECK(r.results[1].passed);
}

TEST_CASE("selection picks groups or single checks") {
    Report group = run_checks(RunConfig{}, table(), {"lemma3"});
    CHECK(group.results.size() == 4);
    for (const CheckResult& r : group.results)
        CHECK(r.name.rfind("lemma3.", 0) == 0);

    Report single = run_checks(RunConfig{}, table(), {"pbw.grading"});
    REQUIRE(single.results.size() == 1);
    CHECK(single.results[0].name == "pbw.grading");

    CHECK_THROWS_AS(run_checks(RunConfig{}, table(), {"zz"}), std::invalid_argument);
    CHECK_THROWS_AS(run_checks(RunConfig{}, table(), {"lemma3.zz"}), std::invalid_argument);
}

TEST_CASE("window-starved checks report themselves as not exercised") {
    RunConfig shallow;
    shallow.depth = 4;
    Report r = run_checks(shallow, table(), {"lemma2.module_replay"});
    REQUIRE(r.results.size() == 1);
    CHECK(r.results[0].passed);
    CHECK(r.results[0].computed == "not exercised: needs verma depth at least 5");

    RunConfig zero;
    zero.depth = 0;
    Report full = run_all(zero, table());
    CHECK(full.all_passed());  // everything either degenerates honestly or defers
}

TEST_CASE("configuration bounds are enforced") {
    RunConfig cfg;
    cfg.depth = 13;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg = RunConfig{};
    cfg.window_radius = 4;
    CHECK_THROWS_AS(run_checks(cfg, table(), {"algebra.antisymmetry"}), std::invalid_argument);
    cfg.window_radius = 21;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg = RunConfig{};
    cfg.range = 2;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg.range = 51;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg = RunConfig{};
    CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("text report carries one line per check plus a summary") {
    std::string text = report_text(default_report());
    CHECK(text.find("PASS algebra.jacobi") != std::string::npos);
    CHECK(text.find("FAIL") == std::string::npos);
    CHECK(text.find("all checks passed (34/34)") != std::string::npos);
    CHECK(text.find(default_report().engine_fingerprint) != std::string::npos);

    RunConfig cfg;
    cfg.patch = BracketPatch{2, 3, Rational(5)};
    Report broken = run_checks(cfg, table(), {"algebra.jacobi"});
    std::string bad_text = report_text(broken);
    CHECK(bad_text.find("FAIL algebra.jacobi") != std::string::npos);
    CHECK(bad_text.find("computed:") != std::string::npos);
    CHECK(bad_text.find("FAILURES PRESENT") != std::string::npos);
}

TEST_CASE("json report round trips through a parser") {
    nlohmann::json root = nlohmann::json::parse(report_json(default_report()));
    CHECK(root["schema"] == 1);
    CHECK(root["results"].size() == 34);
    CHECK(root["summary"]["passed"] == 34);
    CHECK(root["summary"]["failed"] == 0);
    CHECK(root["config"]["depth"] == 8);
    CHECK(root["config"]["range"] == 10);
    CHECK(root["expected_digest"] == table().digest());
    for (const auto& entry : root["results"]) {
        CHECK(entry.contains("name"));
        CHECK(entry.contains("passed"));
        CHECK(entry.contains("elapsed_ms"));
    }
}

TEST_CASE("expected table access guards") {
    CHECK_THROWS_AS(ExpectedTable::from_string("{}"), std::runtime_error);
    CHECK_THROWS_AS(ExpectedTable::from_string("not json"), std::runtime_error);
    CHECK_THROWS_AS(ExpectedTable::load_file("/nonexistent/table.json"), std::runtime_error);

    CHECK(table().has("lemma3.roots"));
    CHECK(!table().has("lemma3.nonsense"));
    CHECK_THROWS_AS(table().element("lemma3.nonsense"), std::runtime_error);
    CHECK_THROWS_AS(table().element("lemma3.roots"), std::runtime_error);   // literal entry
    CHECK_THROWS_AS(table().literal("lemma3.reduce"), std::runtime_error);  // element entry
    CHECK(table().literal("lemma3.roots") == "{0, 1, 2}");

    UEAElement reduce = table().element("lemma3.reduce");
    CHECK(reduce.order().name == "ann:-1");
    CHECK(format(reduce) == "48*e(0)^3 - 144*e(0)^2 + 96*e(0)");
}

TEST_CASE("mutations at distant brackets still surface") {
    const std::vector<BracketPatch> faults{
        {0, 2, Rational(1)}, {2, -2, Rational(-1)}, {3, 4, Rational(2)}};
    for (const BracketPatch& fault : faults) {
        RunConfig cfg;
        cfg.patch = fault;
        Report r = run_all(cfg, table());
        CHECK(!r.all_passed());
    }
}
