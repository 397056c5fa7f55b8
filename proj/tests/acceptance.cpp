// Acceptance gate: runs every pinned criterion end to end and prints exactly
// one PASS/FAIL line per criterion. Exit 0 only when all of them pass within
// their time budgets. Criteria 9 and 10 spawn the command-line binary.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "virasoro/virasoro.hpp"

#include "support/oracles.hpp"

namespace {

using namespace virasoro;
using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

std::string mismatch(const UEAElement& got, const UEAElement& want, const std::string& what) {
    if (got == want) return "";
    return what + ": got " + format(got) + ", want " + format(want);
}

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(VIRASORO_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, "popen failed"};
    CliResult r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string expect_exit(const CliResult& r, int want, const std::string& what) {
    if (r.exit_code == want) return "";
    return what + ": exit " + std::to_string(r.exit_code) + ", want " + std::to_string(want);
}

// ----------------------------------------------------------- criteria --

std::string criterion_cubic_reduction() {
    UEAElement red = reduce_mod_left_ideal(
        parse_element("e(-1)^3*(e(1)^3 - 6*e(2)*e(1) + 6*e(3))", OrderSpec::ann(-1)), -1);
    return mismatch(red, parse_element("48*e(0)^3 - 144*e(0)^2 + 96*e(0)", OrderSpec::ann(-1)),
                    "reduced cubic");
}

std::string criterion_root_sets() {
    UEAElement red = reduce_mod_left_ideal(
        parse_element("e(-1)^3*(e(1)^3 - 6*e(2)*e(1) + 6*e(3))", OrderSpec::ann(-1)), -1);
    std::set<Rational> roots = rational_roots(cartan_polynomial(red));
    if (roots != std::set<Rational>{Rational(0), Rational(1), Rational(2)})
        return "root set differs from {0, 1, 2}";
    std::set<Rational> shifted;
    for (const Rational& r : roots) shifted.insert(r - 1);
    if (shifted != std::set<Rational>{Rational(-1), Rational(0), Rational(1)})
        return "shifted set differs from {-1, 0, 1}";
    return "";
}

std::string criterion_ann1_form() {
    UEAElement prod =
        parse_element("(e(1)^3 - 6*e(2)*e(1) + 6*e(3))*e(2)", OrderSpec::ann(1));
    std::string diff = mismatch(
        prod,
        parse_element("e(2)*e(1)^3 + 3*e(3)*e(1)^2 + 6*e(4)*e(1) - 6*e(2)^2*e(1)",
                      OrderSpec::ann(1)),
        "promoted normal form");
    if (!diff.empty()) return diff;
    UEAElement red = reduce_mod_left_ideal(prod, 1);
    if (!red.is_zero()) return "coset representative is nonzero: " + format(red);
    return "";
}

std::string criterion_lowered_operator() {
    auto part_start = Clock::now();
    UEAElement red = reduce_mod_left_ideal(
        parse_element("e(-1)*(e(1)^3 - 6*e(2)*e(1) + 6*e(3))", OrderSpec::ann(-1)), -1);
    std::string diff = mismatch(
        red,
        parse_element("6*e(1)^2*e(0) - 12*e(1)^2 - 12*e(2)*e(0) + 24*e(2)", OrderSpec::ann(-1)),
        "collected form");
    if (!diff.empty()) return diff;
    if (ms_since(part_start) > 1000) return "collected form exceeded 1000 ms";

    part_start = Clock::now();
    UEAElement at_one = eval_cartan_tail(red, Rational(1), Rational(0));
    diff = mismatch(at_one, parse_element("12*e(2) - 6*e(1)^2", OrderSpec::ann(-1)),
                    "trailing-generator substitution");
    if (!diff.empty()) return diff;
    if (ms_since(part_start) > 1000) return "substitution exceeded 1000 ms";

    part_start = Clock::now();
    UEAElement prod = parse_element("e(-2)*(2*e(2) - e(1)^2)", OrderSpec::desc());
    diff = mismatch(
        prod,
        parse_element("2*e(2)*e(-2) + 2*e(0) - c - e(1)^2*e(-2) - 6*e(1)*e(-1)",
                      OrderSpec::desc()),
        "descending product");
    if (!diff.empty()) return diff;
    if (ms_since(part_start) > 1000) return "descending product exceeded 1000 ms";
    return "";
}

std::string criterion_bracket_facts() {
    const OrderSpec asc = OrderSpec::asc();
    for (std::int64_t k = 3; k <= 10; ++k) {
        LieElement raised = bracket(LieElement::gen(1), LieElement::gen(k));
        if (raised != Rational(k - 1) * LieElement::gen(k + 1))
            return "[e(1),e(" + std::to_string(k) + ")] differs from (k-1)*e(k+1)";
        LieElement lowered = bracket(LieElement::gen(-1), LieElement::gen(k));
        if (lowered != Rational(k + 1) * LieElement::gen(k - 1))
            return "[e(-1),e(" + std::to_string(k) + ")] differs from (k+1)*e(k-1)";
        UEAElement lhs = normal_form(RawWord{{k, 2}, 0, Rational(1)}, asc);
        UEAElement rhs = normal_form(RawWord{{2, k}, 0, Rational(1)}, asc) +
                         Rational(2 - k) * UEAElement::generator(k + 2, asc);
        if (lhs != rhs)
            return "e(" + std::to_string(k) + ")*e(2) differs from e(2)*e(k) + (2-k)*e(k+2)";
    }
    std::string diff = mismatch(parse_element("e(1)*e(-1)", asc),
                                parse_element("e(-1)*e(1) - 2*e(0)", asc), "raise-lower swap");
    if (!diff.empty()) return diff;
    return mismatch(parse_element("e(1)*e(-2)", asc),
                    parse_element("e(-2)*e(1) - 3*e(-1)", asc), "raise-double-lower swap");
}

std::string criterion_property_battery() {
    for (std::int64_t i = -8; i <= 8; ++i)
        for (std::int64_t j = -8; j <= 8; ++j)
            for (std::int64_t k = -8; k <= 8; ++k)
                if (!jacobi_defect(LieElement::gen(i), LieElement::gen(j), LieElement::gen(k))
                         .is_zero())
                    return "jacobi defect at (" + std::to_string(i) + "," + std::to_string(j) +
                           "," + std::to_string(k) + ")";

    detail::Rng rng(0xacce97);
    const std::vector<OrderSpec> orders{OrderSpec::asc(), OrderSpec::desc(), OrderSpec::ann(1),
                                        OrderSpec::ann(-2), OrderSpec::hw()};
    for (int t = 0; t < 200; ++t) {
        RawWord w = detail::random_word(rng, 6);
        const OrderSpec& order = orders[std::size_t(t) % orders.size()];
        if (normal_form(w, order) != detail::randomized_normal_form(w, order, rng, {}))
            return "rewriting strategies disagree on trial " + std::to_string(t);
    }

    const OrderSpec asc = OrderSpec::asc();
    for (int t = 0; t < 100; ++t) {
        UEAElement u = detail::random_element(rng, asc, 2, 3, {});
        UEAElement v = detail::random_element(rng, asc, 2, 3, {});
        UEAElement w = detail::random_element(rng, asc, 2, 3, {});
        if (multiply(multiply(u, v), w) != multiply(u, multiply(v, w)))
            return "associativity failed on trial " + std::to_string(t);
    }

    for (std::int64_t g : {-2, -1, 1, 2})
        for (int t = 0; t < 100; ++t) {
            UEAElement u = detail::random_element(rng, OrderSpec::ann(g), 2, 4, {});
            UEAElement prod = multiply(u, UEAElement::generator(g, OrderSpec::ann(g)));
            if (!reduce_mod_left_ideal(prod, g).is_zero())
                return "ideal reduction left a residue for g=" + std::to_string(g);
        }

    for (int t = 0; t < 100; ++t) {
        const OrderSpec& a = orders[std::size_t(t) % orders.size()];
        const OrderSpec& b = orders[std::size_t(t + 2) % orders.size()];
        UEAElement u = detail::random_element(rng, a, 3, 4, {});
        if (change_order(change_order(u, b), a) != u)
            return "order change failed to round trip on trial " + std::to_string(t);
    }
    return "";
}

std::string criterion_module_battery() {
    const TruncatedWeightModule m = TruncatedWeightModule::verma(Rational(2), Rational(3), 10);
    const std::vector<Int> counts = oracles::partition_counts(10);
    for (std::uint32_t n = 0; n <= 10; ++n)
        if (Int(m.dim(Rational(2) - n)) != counts[n])
            return "depth-" + std::to_string(n) + " dimension differs from the partition count";

    for (std::int64_t i = -2; i <= 2; ++i)
        for (std::int64_t j = -2; j <= 2; ++j) {
            LieElement br = bracket(LieElement::gen(i), LieElement::gen(j));
            for (const auto& [w, d] : m.weight_dims())
                for (std::size_t pos = 0; pos < d; ++pos) {
                    WeightVector v = m.basis_vector(w, pos);
                    try {
                        WeightVector lhs = m.act(br, v);
                        WeightVector xy =
                            m.act(Generator::indexed(i), m.act(Generator::indexed(j), v));
                        WeightVector yx =
                            m.act(Generator::indexed(j), m.act(Generator::indexed(i), v));
                        bool ok = br.is_zero() ? xy == yx : lhs == xy - yx;
                        if (!ok)
                            return "action incompatibility at weight " + rational_str(w) +
                                   " for (" + std::to_string(i) + "," + std::to_string(j) + ")";
                    } catch (const BoundaryError&) {
                        continue;  // an intermediate step left the window
                    }
                }
        }

    const TruncatedWeightModule sing = TruncatedWeightModule::verma(Rational(0), Rational(0), 2);
    std::vector<WeightVector> ker =
        sing.kernel(Rational(-1), {Generator::indexed(1), Generator::indexed(2)});
    if (ker.size() != 1 || !sing.hw_detector(ker[0]))
        return "missing depth-one singular vector at top weight 0";
    for (const Rational& h : {Rational(1, 2), Rational(1), Rational(-1), Rational(2, 3), Rational(5)}) {
        const TruncatedWeightModule other = TruncatedWeightModule::verma(h, Rational(0), 2);
        if (!other.kernel(h - 1, {Generator::indexed(1), Generator::indexed(2)}).empty())
            return "phantom singular vector at top weight " + rational_str(h);
    }
    return "";
}

std::string criterion_ray_search() {
    const TruncatedWeightModule f =
        TruncatedWeightModule::intermediate_series(Rational(0), Rational(1), -5, 5);
    std::vector<Eq10Pair> rays = f.eq10_pair_search(Rational(0));
    if (rays.size() != 1) return "expected exactly one solution ray, got " +
                                 std::to_string(rays.size());
    if (rays[0].tau != Rational(-1)) return "ray scalar differs from -1";
    if (rays[0].y != WeightVector::unit(Rational(1), 0)) return "ray upper vector differs";

    const TruncatedWeightModule g =
        TruncatedWeightModule::intermediate_series(Rational(1, 2), Rational(1, 3), -5, 5);
    for (std::int64_t k = -1; k <= 2; ++k)
        if (!g.eq10_pair_search(Rational(1, 2) + k - 1).empty())
            return "phantom ray in the generic one-dimensional family";

    const TruncatedWeightModule v = TruncatedWeightModule::verma(Rational(2), Rational(3), 6);
    if (!v.eq10_pair_search(Rational(2) - 3).empty())
        return "phantom ray in the generic highest-weight module";
    const TruncatedWeightModule v2 = TruncatedWeightModule::verma(Rational(1, 2), Rational(1), 6);
    if (!v2.eq10_pair_search(Rational(1, 2) - 3).empty())
        return "phantom ray in the second highest-weight module";
    return "";
}

std::string criterion_negative_controls() {
    CliResult clean = run_cli("verify");
    std::string diff = expect_exit(clean, 0, "clean battery");
    if (!diff.empty()) return diff;
    if (clean.output.find("all checks passed") == std::string::npos)
        return "clean battery did not report a full pass";

    const std::vector<std::string> faults{"1,-1,1", "0,2,1", "2,-2,-1"};
    for (const std::string& fault : faults) {
        CliResult r = run_cli("verify --mutate-constant " + fault);
        diff = expect_exit(r, 1, "mutated constant " + fault);
        if (!diff.empty()) return diff;
        auto at = r.output.find("FAIL ");
        if (at == std::string::npos)
            return "mutation " + fault + " produced no named failing check";
        std::string name = r.output.substr(at + 5, r.output.find(' ', at + 5) - (at + 5));
        if (name.find('.') == std::string::npos)
            return "mutation " + fault + " produced an unnamed failure line";
    }

    const auto doctored =
        std::filesystem::temp_directory_path() / "doctored_expected_values.json";
    {
        std::ofstream out(doctored);
        out << R"({"entries":{"lemma3.roots":{"value":"{0, 1, 3}"}}})";
    }
    CliResult tampered =
        run_cli("verify --only lemma3.roots --expected " + doctored.string());
    std::filesystem::remove(doctored);
    diff = expect_exit(tampered, 1, "tampered expected table");
    if (!diff.empty()) return diff;
    if (tampered.output.find("FAIL lemma3.roots") == std::string::npos)
        return "tampered table did not name the failing check";
    return "";
}

std::string criterion_interface_stability() {
    detail::Rng rng(0x57ab1e);
    const std::vector<OrderSpec> orders{OrderSpec::asc(), OrderSpec::desc(), OrderSpec::ann(1),
                                        OrderSpec::ann(-1), OrderSpec::hw()};
    for (int t = 0; t < 200; ++t) {
        const OrderSpec& order = orders[std::size_t(t) % orders.size()];
        UEAElement u = detail::random_element(rng, order, 3, 4, {});
        if (parse_element(format(u), order) != u)
            return "text round trip failed on trial " + std::to_string(t);
    }
    for (int t = 0; t < 50; ++t) {
        const OrderSpec& order = orders[std::size_t(t) % orders.size()];
        UEAElement u = detail::random_element(rng, order, 3, 4, {});
        std::string once = to_json(u);
        if (to_json(u) != once) return "serialization is not byte-stable";
        if (from_json(once) != u) return "serialized round trip failed on trial " + std::to_string(t);
    }

    std::string diff = expect_exit(run_cli("nf 'e(1'"), 2, "malformed expression");
    if (!diff.empty()) return diff;
    diff = expect_exit(run_cli("reduce 'e(1)' --ann=0"), 2, "null ideal index");
    if (!diff.empty()) return diff;
    diff = expect_exit(run_cli("verify --only algebra.antisymmetry"), 0, "clean selection");
    if (!diff.empty()) return diff;
    diff = expect_exit(run_cli("verify --only algebra.jacobi --mutate-constant 1,-1,1"), 1,
                       "mutated selection");
    if (!diff.empty()) return diff;
    diff = expect_exit(run_cli("verma --h 1 --c 0 --depth 3 --singular --weight 0"), 1,
                       "empty search");
    if (!diff.empty()) return diff;
    return expect_exit(run_cli(""), 2, "missing subcommand");
}

struct Criterion {
    std::string label;
    std::int64_t budget_ms;
    std::function<std::string()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"cubic coset representative", 1000, criterion_cubic_reduction},
        {"root set and shifted set", 100, criterion_root_sets},
        {"promoted normal form with vanishing coset", 1000, criterion_ann1_form},
        {"lowered operator, substitution, descending product", 3000, criterion_lowered_operator},
        {"bracket facts on the index range [3,10]", 1000, criterion_bracket_facts},
        {"rewriting property battery", 30000, criterion_property_battery},
        {"module dimensions, action compatibility, singular vectors", 10000,
         criterion_module_battery},
        {"paired singular-ray search", 5000, criterion_ray_search},
        {"negative controls through the command line", 30000, criterion_negative_controls},
        {"interface stability and exit-code contract", 30000, criterion_interface_stability},
    };

    std::size_t passed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto start = Clock::now();
        std::string failure;
        try {
            failure = criteria[i].run();
        } catch (const std::exception& e) {
            failure = std::string("exception: ") + e.what();
        }
        std::int64_t elapsed = ms_since(start);
        if (failure.empty() && elapsed > criteria[i].budget_ms)
            failure = "exceeded the " + std::to_string(criteria[i].budget_ms) + " ms budget";
        bool ok = failure.empty();
        if (ok) ++passed;
        std::cout << (ok ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].label
                  << " (" << elapsed << " ms, limit " << criteria[i].budget_ms << " ms)";
        if (!ok) std::cout << " -- " << failure;
        std::cout << "\n";
    }
    std::cout << passed << "/" << criteria.size() << " criteria passed\n";
    return passed == criteria.size() ? 0 : 1;
}
