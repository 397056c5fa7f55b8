// Command-line frontend: verification battery, normal forms, reductions,
// products, Cartan root finding, and weight-module queries.
//
// Exit codes: 0 success / all-pass / search found something;
//             1 a verification or search reported failure or no result;
//             2 usage, parse, boundary, or domain errors.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "virasoro/virasoro.hpp"

namespace {

using namespace virasoro;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

Rational parse_rational_flag(const std::string& text, const std::string& flag) {
    try {
        return parse_rational(text);
    } catch (const std::exception& e) {
        throw CLI::ValidationError(flag, std::string("expected an exact rational: ") + e.what());
    }
}

OrderSpec parse_order_flag(const std::string& name) {
    auto order = OrderSpec::from_name(name);
    if (!order)
        throw CLI::ValidationError("--order",
                                   "unknown order '" + name + "' (asc, desc, ann:<g>, hw)");
    return *order;
}

BracketPatch parse_patch_flag(const std::string& text) {
    auto first = text.find(',');
    auto second = text.find(',', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw CLI::ValidationError("--mutate-constant", "expected i,j,delta");
    try {
        BracketPatch p;
        p.i = std::stoll(text.substr(0, first));
        p.j = std::stoll(text.substr(first + 1, second - first - 1));
        p.delta = parse_rational(text.substr(second + 1));
        return p;
    } catch (const std::exception& e) {
        throw CLI::ValidationError("--mutate-constant", e.what());
    }
}

// the expected-value table lives beside the binary; an environment variable
// or explicit flag may point elsewhere
std::string expected_table_path(const std::string& explicit_path) {
    if (!explicit_path.empty()) return explicit_path;
    if (const char* dir = std::getenv("VIRASORO_EXPECTED_DIR"))
        return (std::filesystem::path(dir) / "expected_values.json").string();
    std::error_code ec;
    auto exe = std::filesystem::read_symlink("/proc/self/exe", ec);
    if (!ec) return (exe.parent_path() / "expected_values.json").string();
    return "expected_values.json";
}

std::string format_rational_list(const std::set<Rational>& values) {
    std::string out = "{";
    bool first = true;
    for (const Rational& v : values) {
        if (!first) out += ", ";
        out += rational_str(v);
        first = false;
    }
    return out + "}";
}

int run_verify(const std::string& expected_flag, const std::vector<std::string>& only,
               RunConfig cfg, bool json) {
    ExpectedTable table = ExpectedTable::load_file(expected_table_path(expected_flag));
    Report report = run_checks(cfg, table, only);
    if (json)
        std::cout << report_json(report) << "\n";
    else
        std::cout << report_text(report);
    return report.all_passed() ? kExitPass : kExitFail;
}

int run_nf(const std::string& expr, const OrderSpec& order, bool json) {
    UEAElement u = parse_element(expr, order);
    std::cout << (json ? to_json(u) : format(u)) << "\n";
    return kExitPass;
}

int run_reduce(const std::string& expr, std::int64_t g, bool json) {
    UEAElement u = parse_element(expr, OrderSpec::ann(g));
    UEAElement red = reduce_mod_left_ideal(u, g);
    std::cout << (json ? to_json(red) : format(red)) << "\n";
    return kExitPass;
}

int run_mul(const std::string& lhs, const std::string& rhs, const OrderSpec& order, bool json) {
    UEAElement prod = multiply(parse_element(lhs, order), parse_element(rhs, order), order);
    std::cout << (json ? to_json(prod) : format(prod)) << "\n";
    return kExitPass;
}

int run_roots(const std::string& expr, bool json) {
    UEAElement u = parse_element(expr, OrderSpec::asc());
    std::set<Rational> roots = rational_roots(cartan_polynomial(u));
    if (json) {
        nlohmann::json out;
        out["schema"] = 1;
        out["roots"] = nlohmann::json::array();
        for (const Rational& r : roots) out["roots"].push_back(rational_str(r));
        std::cout << out.dump() << "\n";
    } else {
        std::cout << format_rational_list(roots) << "\n";
    }
    return kExitPass;
}

void print_dims(const TruncatedWeightModule& m, bool json) {
    if (json) {
        nlohmann::json out;
        out["schema"] = 1;
        out["dims"] = nlohmann::json::array();
        for (const auto& [w, d] : m.weight_dims())
            out["dims"].push_back({{"weight", rational_str(w)}, {"dim", d}});
        std::cout << out.dump() << "\n";
        return;
    }
    for (const auto& [w, d] : m.weight_dims())
        std::cout << rational_str(w) << ": " << d << "\n";
}

int run_verma(const Rational& h, const Rational& chi, std::uint32_t depth, bool dims,
              bool singular, const std::optional<Rational>& weight, bool json) {
    if (depth > 12) throw std::invalid_argument("depth must be at most 12");
    auto m = TruncatedWeightModule::verma(h, chi, depth);
    if (dims) {
        print_dims(m, json);
        return kExitPass;
    }
    if (singular) {
        if (!weight) throw CLI::ValidationError("--singular", "requires --weight");
        auto ker = m.kernel(*weight, {Generator::indexed(1), Generator::indexed(2)});
        if (json) {
            nlohmann::json out;
            out["schema"] = 1;
            out["found"] = !ker.empty();
            out["vectors"] = nlohmann::json::array();
            for (const auto& v : ker) out["vectors"].push_back(m.format(v));
            std::cout << out.dump() << "\n";
        } else {
            if (ker.empty())
                std::cout << "no singular vector at weight " << rational_str(*weight) << "\n";
            for (const auto& v : ker) std::cout << m.format(v) << "\n";
        }
        return ker.empty() ? kExitFail : kExitPass;
    }
    print_dims(m, json);
    return kExitPass;
}

int run_interm(const Rational& a, const Rational& b, std::int64_t k_min, std::int64_t k_max,
               bool dims, bool check, bool eq10, const std::optional<Rational>& mu, bool json) {
    auto m = TruncatedWeightModule::intermediate_series(a, b, k_min, k_max);
    if (check) {
        // bracket compatibility across the window justifies the action table
        std::size_t cases = 0;
        for (std::int64_t xi = -2; xi <= 2; ++xi)
            for (std::int64_t yi = -2; yi <= 2; ++yi) {
                LieElement br = bracket_gen(xi, yi);
                for (const auto& [w, d] : m.weight_dims()) {
                    WeightVector v = m.basis_vector(w, 0);
                    try {
                        WeightVector lhs = m.act(br, v);
                        WeightVector xy =
                            m.act(Generator::indexed(xi), m.act(Generator::indexed(yi), v));
                        WeightVector yx =
                            m.act(Generator::indexed(yi), m.act(Generator::indexed(xi), v));
                        bool ok = br.is_zero() ? xy == yx : lhs == xy - yx;
                        if (!ok) {
                            std::cout << "bracket compatibility FAILED at weight "
                                      << rational_str(w) << "\n";
                            return kExitFail;
                        }
                        ++cases;
                    } catch (const BoundaryError&) {
                        continue;
                    }
                }
            }
        std::cout << "bracket compatibility holds (" << cases << " cases)\n";
        return kExitPass;
    }
    if (eq10) {
        if (!mu) throw CLI::ValidationError("--eq10", "requires --mu");
        auto rays = m.eq10_pair_search(*mu);
        if (json) {
            nlohmann::json out;
            out["schema"] = 1;
            out["rays"] = nlohmann::json::array();
            for (const auto& r : rays)
                out["rays"].push_back({{"tau", rational_str(r.tau)},
                                       {"y", m.format(r.y)},
                                       {"x", m.format(r.x)}});
            std::cout << out.dump() << "\n";
        } else {
            if (rays.empty()) std::cout << "no solution rays at mu = " << rational_str(*mu) << "\n";
            for (const auto& r : rays)
                std::cout << "tau = " << rational_str(r.tau) << ", y = " << m.format(r.y)
                          << ", x = " << m.format(r.x) << "\n";
        }
        return rays.empty() ? kExitFail : kExitPass;
    }
    (void)dims;
    print_dims(m, json);
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact symbolic engine for an indexed-generator algebra with central term"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "run the pinned verification battery");
    std::vector<std::string> only;
    std::string expected_flag;
    std::string mutate_flag;
    RunConfig cfg;
    bool verify_json = false;
    std::int64_t range_flag = cfg.range;
    std::int64_t window_flag = cfg.window_radius;
    std::uint32_t depth_flag = cfg.depth;
    std::uint64_t seed_flag = cfg.seed;
    verify->add_option("--only", only, "run one check or check group (repeatable)");
    verify->add_option("--range", range_flag, "symbolic-identity instantiation cap");
    verify->add_option("--depth", depth_flag, "verma truncation depth");
    verify->add_option("--window", window_flag, "intermediate-series window radius");
    verify->add_option("--seed", seed_flag, "seed for the randomized batteries");
    verify->add_option("--expected", expected_flag, "path to the expected-value table");
    verify->add_option("--mutate-constant", mutate_flag,
                       "fault injection: patch bracket constant 'i,j,delta'");
    verify->add_flag("--json", verify_json, "machine-readable report");

    // nf
    auto* nf = app.add_subcommand("nf", "normal form of an expression");
    std::string nf_expr, nf_order = "asc";
    bool nf_json = false;
    nf->add_option("expr", nf_expr, "expression in the engine grammar")->required();
    nf->add_option("--order", nf_order, "asc|desc|ann:<g>|hw (default asc)");
    nf->add_flag("--json", nf_json, "serialized element");

    // reduce
    auto* reduce = app.add_subcommand("reduce", "coset representative modulo a left ideal");
    std::string red_expr;
    std::int64_t red_g = 0;
    bool red_json = false;
    reduce->add_option("expr", red_expr, "expression in the engine grammar")->required();
    reduce->add_option("--ann", red_g, "ideal index g (nonzero)")->required();
    reduce->add_flag("--json", red_json, "serialized element");

    // mul
    auto* mul = app.add_subcommand("mul", "product normal form of two expressions");
    std::string mul_lhs, mul_rhs, mul_order = "asc";
    bool mul_json = false;
    mul->add_option("lhs", mul_lhs, "left factor")->required();
    mul->add_option("rhs", mul_rhs, "right factor")->required();
    mul->add_option("--order", mul_order, "asc|desc|ann:<g>|hw (default asc)");
    mul->add_flag("--json", mul_json, "serialized element");

    // roots
    auto* roots = app.add_subcommand("roots", "rational roots of a Cartan polynomial");
    std::string roots_expr;
    bool roots_json = false;
    roots->add_option("expr", roots_expr, "Cartan expression (words in e(0) only)")->required();
    roots->add_flag("--json", roots_json, "machine-readable root list");

    // verma
    auto* verma = app.add_subcommand("verma", "truncated highest-weight module queries");
    verma->set_help_flag("--help", "print help");  // frees -h so --h can name the weight
    std::string verma_h = "0", verma_c = "0", verma_weight;
    std::uint32_t verma_depth = 8;
    bool verma_dims = false, verma_singular = false, verma_json = false;
    verma->add_option("--h", verma_h, "highest weight (exact rational)");
    verma->add_option("--c", verma_c, "central charge (exact rational)");
    verma->add_option("--depth", verma_depth, "truncation depth (default 8, at most 12)");
    verma->add_flag("--dims", verma_dims, "print weight-space dimensions");
    verma->add_flag("--singular", verma_singular, "search one weight for singular vectors");
    verma->add_option("--weight", verma_weight, "weight for --singular");
    verma->add_flag("--json", verma_json, "machine-readable output");

    // interm
    auto* interm = app.add_subcommand("interm", "two-parameter module family on an index window");
    std::string interm_a = "0", interm_b = "0", interm_mu;
    std::int64_t interm_min = -10, interm_max = 10;
    bool interm_dims = false, interm_check = false, interm_eq10 = false, interm_json = false;
    interm->add_option("--a", interm_a, "weight offset (exact rational)");
    interm->add_option("--b", interm_b, "action slope (exact rational)");
    interm->add_option("--min", interm_min, "window lower index (default -10)");
    interm->add_option("--max", interm_max, "window upper index (default 10)");
    interm->add_flag("--dims", interm_dims, "print weight-space dimensions");
    interm->add_flag("--check", interm_check, "verify bracket compatibility on the window");
    interm->add_flag("--eq10", interm_eq10, "search for paired singular rays");
    interm->add_option("--mu", interm_mu, "base weight for --eq10");
    interm->add_flag("--json", interm_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*verify) {
            cfg.range = range_flag;
            cfg.window_radius = window_flag;
            cfg.depth = depth_flag;
            cfg.seed = seed_flag;
            if (!mutate_flag.empty()) cfg.patch = parse_patch_flag(mutate_flag);
            return run_verify(expected_flag, only, cfg, verify_json);
        }
        if (*nf) return run_nf(nf_expr, parse_order_flag(nf_order), nf_json);
        if (*reduce) return run_reduce(red_expr, red_g, red_json);
        if (*mul) return run_mul(mul_lhs, mul_rhs, parse_order_flag(mul_order), mul_json);
        if (*roots) return run_roots(roots_expr, roots_json);
        if (*verma) {
            std::optional<Rational> w;
            if (!verma_weight.empty()) w = parse_rational_flag(verma_weight, "--weight");
            return run_verma(parse_rational_flag(verma_h, "--h"),
                             parse_rational_flag(verma_c, "--c"), verma_depth, verma_dims,
                             verma_singular, w, verma_json);
        }
        if (*interm) {
            std::optional<Rational> mu;
            if (!interm_mu.empty()) mu = parse_rational_flag(interm_mu, "--mu");
            return run_interm(parse_rational_flag(interm_a, "--a"),
                              parse_rational_flag(interm_b, "--b"), interm_min, interm_max,
                              interm_dims, interm_check, interm_eq10, mu, interm_json);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const JsonError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const BoundaryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
