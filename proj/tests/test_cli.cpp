#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "virasoro/virasoro.hpp"

using namespace virasoro;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr interleaved
};

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const std::string cmd = env_prefix + std::string(VIRASORO_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("normal form subcommand") {
    CliResult r = run_cli("nf 'e(1)*e(-1)'");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "e(-1)*e(1) - 2*e(0)\n");

    UEAElement expected = normal_form(RawWord{{-2, 2}, 0, Rational(1)}, OrderSpec::desc());
    CliResult desc = run_cli("nf 'e(-2)*e(2)' --order desc");
    CHECK(desc.exit_code == 0);
    CHECK(desc.output == format(expected) + "\n");

    CliResult json = run_cli("nf 'e(2)*e(-2)' --json");
    CHECK(json.exit_code == 0);
    CHECK(from_json(json.output) == normal_form(RawWord{{2, -2}, 0, Rational(1)}, OrderSpec::asc()));
}

TEST_CASE("normal form rejects bad input with a diagnostic") {
    CliResult r = run_cli("nf 'e(1'");
    CHECK(r.exit_code == 2);
    CHECK(contains(r.output, "error:"));
    CHECK(contains(r.output, "offset 3"));

    CliResult order = run_cli("nf 'e(1)' --order zig");
    CHECK(order.exit_code == 2);
    CHECK(contains(order.output, "unknown order"));
}

TEST_CASE("reduce subcommand reproduces the pinned cubic") {
    CliResult r = run_cli(
        "reduce 'e(-1)^3*e(1)^3 - 6*e(-1)^3*e(2)*e(1) + 6*e(-1)^3*e(3)' --ann=-1");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "48*e(0)^3 - 144*e(0)^2 + 96*e(0)\n");

    CliResult zero = run_cli("reduce 'e(1)' --ann=0");
    CHECK(zero.exit_code == 2);
    CHECK(contains(zero.output, "error:"));
}

TEST_CASE("mul subcommand") {
    CliResult r = run_cli("mul 'e(1)' 'e(-1)'");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "e(-1)*e(1) - 2*e(0)\n");

    UEAElement expected = normal_form(RawWord{{0, 1}, 0, Rational(1)}, OrderSpec::ann(1));
    CliResult ann = run_cli("mul 'e(0)' 'e(1)' --order ann:1");
    CHECK(ann.exit_code == 0);
    CHECK(ann.output == format(expected) + "\n");
}

TEST_CASE("roots subcommand") {
    CliResult r = run_cli("roots '48*e(0)^3 - 144*e(0)^2 + 96*e(0)'");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "{0, 1, 2}\n");

    CliResult json = run_cli("roots '48*e(0)^3 - 144*e(0)^2 + 96*e(0)' --json");
    CHECK(json.exit_code == 0);
    nlohmann::json parsed = nlohmann::json::parse(json.output);
    CHECK(parsed["roots"] == nlohmann::json::array({"0", "1", "2"}));

    CliResult impure = run_cli("roots 'e(1)'");
    CHECK(impure.exit_code == 2);
    CHECK(contains(impure.output, "error:"));
}

TEST_CASE("verma dimensions") {
    CliResult r = run_cli("verma --h 0 --c 0 --depth 5 --dims");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "-5: 7\n-4: 5\n-3: 3\n-2: 2\n-1: 1\n0: 1\n");

    CliResult deep = run_cli("verma --h 0 --c 0 --depth 13 --dims");
    CHECK(deep.exit_code == 2);
    CHECK(contains(deep.output, "error:"));
}

TEST_CASE("verma singular-vector search drives the exit code") {
    CliResult found = run_cli("verma --h 0 --c 0 --depth 3 --singular --weight=-1");
    CHECK(found.exit_code == 0);
    CHECK(found.output == "v[1]\n");

    CliResult none = run_cli("verma --h 1 --c 0 --depth 3 --singular --weight 0");
    CHECK(none.exit_code == 1);
    CHECK(contains(none.output, "no singular vector"));

    CliResult missing = run_cli("verma --h 0 --c 0 --singular");
    CHECK(missing.exit_code == 2);
    CHECK(contains(missing.output, "--weight"));

    CliResult bad_h = run_cli("verma --h 0.5 --dims");
    CHECK(bad_h.exit_code == 2);
    CHECK(contains(bad_h.output, "exact rational"));
}

TEST_CASE("intermediate-series queries") {
    CliResult dims = run_cli("interm --a 1/2 --b 0 --min=-2 --max 2 --dims");
    CHECK(dims.exit_code == 0);
    CHECK(dims.output == "-3/2: 1\n-1/2: 1\n1/2: 1\n3/2: 1\n5/2: 1\n");

    CliResult check = run_cli("interm --a 1/2 --b 1/3 --min=-6 --max 6 --check");
    CHECK(check.exit_code == 0);
    CHECK(contains(check.output, "bracket compatibility holds"));

    CliResult rays = run_cli("interm --a 0 --b 1 --min=-5 --max 5 --eq10 --mu 0");
    CHECK(rays.exit_code == 0);
    CHECK(rays.output == "tau = -1, y = v(1), x = -v(-1)\n");

    CliResult empty = run_cli("interm --a 1/2 --b 1/3 --min=-5 --max 5 --eq10 --mu=-1/2");
    CHECK(empty.exit_code == 1);
    CHECK(contains(empty.output, "no solution rays"));

    CliResult missing_mu = run_cli("interm --a 0 --b 1 --eq10");
    CHECK(missing_mu.exit_code == 2);
    CHECK(contains(missing_mu.output, "--mu"));

    CliResult rays_json = run_cli("interm --a 0 --b 1 --min=-5 --max 5 --eq10 --mu 0 --json");
    CHECK(rays_json.exit_code == 0);
    nlohmann::json parsed = nlohmann::json::parse(rays_json.output);
    REQUIRE(parsed["rays"].size() == 1);
    CHECK(parsed["rays"][0]["tau"] == "-1");
    CHECK(parsed["rays"][0]["y"] == "v(1)");
    CHECK(parsed["rays"][0]["x"] == "-v(-1)");
}

TEST_CASE("verification battery from the command line") {
    CliResult selected = run_cli("verify --only lemma3 --only pbw.grading");
    CHECK(selected.exit_code == 0);
    CHECK(contains(selected.output, "PASS lemma3.roots"));
    CHECK(contains(selected.output, "PASS pbw.grading"));
    CHECK(contains(selected.output, "all checks passed (5/5)"));

    CliResult mutated = run_cli("verify --mutate-constant 1,-1,1 --only algebra.jacobi");
    CHECK(mutated.exit_code == 1);
    CHECK(contains(mutated.output, "FAIL algebra.jacobi"));
    CHECK(contains(mutated.output, "FAILURES PRESENT"));

    CliResult json = run_cli("verify --only lemma5 --json");
    CHECK(json.exit_code == 0);
    nlohmann::json parsed = nlohmann::json::parse(json.output);
    CHECK(parsed["schema"] == 1);
    CHECK(parsed["results"].size() == 4);
    CHECK(parsed["summary"]["failed"] == 0);
}

TEST_CASE("verification flag validation") {
    CliResult bad_patch = run_cli("verify --mutate-constant 1,2 --only algebra.jacobi");
    CHECK(bad_patch.exit_code == 2);
    CHECK(contains(bad_patch.output, "i,j,delta"));

    CliResult unknown = run_cli("verify --only zz");
    CHECK(unknown.exit_code == 2);
    CHECK(contains(unknown.output, "unknown check selection"));

    CliResult deep = run_cli("verify --depth 13 --only algebra.antisymmetry");
    CHECK(deep.exit_code == 2);
    CHECK(contains(deep.output, "depth"));
}

TEST_CASE("expected table resolution") {
    CliResult env_miss = run_cli("verify --only lemma3.roots",
                                 "VIRASORO_EXPECTED_DIR=/nonexistent ");
    CHECK(env_miss.exit_code == 2);
    CHECK(contains(env_miss.output, "cannot open expected-value table"));

    const std::string real = std::string(VIRASORO_DATA_DIR) + "/expected_values.json";
    CliResult flag_wins = run_cli("verify --only lemma3.roots --expected " + real,
                                  "VIRASORO_EXPECTED_DIR=/nonexistent ");
    CHECK(flag_wins.exit_code == 0);
    CHECK(contains(flag_wins.output, "all checks passed"));
}

TEST_CASE("usage errors and help") {
    CliResult none = run_cli("");
    CHECK(none.exit_code == 2);

    CliResult unknown = run_cli("frobnicate");
    CHECK(unknown.exit_code == 2);

    CliResult help = run_cli("--help");
    CHECK(help.exit_code == 0);
    CHECK(contains(help.output, "verify"));
    CHECK(contains(help.output, "nf"));

    CliResult missing_arg = run_cli("nf");
    CHECK(missing_arg.exit_code == 2);

    CliResult missing_ann = run_cli("reduce 'e(1)'");
    CHECK(missing_ann.exit_code == 2);
}
