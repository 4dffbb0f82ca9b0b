#pragma once

// Command-line experiment runner. run_cli() is the whole program minus
// main(), so tests can drive it in-process.
//
// Exit codes: 0 success, 1 finding (a property the theory guarantees was
// measured false), 2 usage or precondition error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "shiftprod/errors.hpp"
#include "shiftprod/explorer.hpp"
#include "shiftprod/ffharness.hpp"
#include "shiftprod/generators.hpp"
#include "shiftprod/harness.hpp"
#include "shiftprod/powers.hpp"
#include "shiftprod/progressions.hpp"
#include "shiftprod/report.hpp"
#include "shiftprod/setalg.hpp"

namespace shiftprod::cli {

enum ExitCode : int { exit_ok = 0, exit_finding = 1, exit_usage = 2 };

/// Reported by a command for a usage problem detected after flag parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

struct IntRange {
    std::int64_t lo;
    std::int64_t hi;
};

/// "lo..hi"
inline IntRange parse_range(std::string_view text)
{
    TextCursor cur(text);
    const std::int64_t lo = cur.int64();
    cur.expect('.');
    cur.expect('.');
    const std::int64_t hi = cur.int64();
    cur.expect_end();
    if (hi < lo) {
        throw ParseError("empty range", 0);
    }
    return {lo, hi};
}

inline std::string caret_diagnostic(std::string_view flag, std::string_view text, const ParseError& e)
{
    std::ostringstream os;
    os << "error: " << flag << ": " << e.what() << "\n  " << text << "\n  "
       << std::string(std::min(e.position, text.size()), ' ') << "^\n";
    return os.str();
}

/// Parses `text` with `fn`, decorating a ParseError with the flag name and a caret.
template <class Fn>
auto parse_flag(std::string_view flag, const std::string& text, Fn&& fn)
{
    try {
        return fn(text);
    } catch (const ParseError& e) {
        throw UsageError(caret_diagnostic(flag, text, e));
    }
}

struct Common {
    std::optional<std::uint64_t> seed;
    std::string format;
    std::string out_path;
};

inline void add_common(CLI::App* sub, Common& c, const std::string& default_format,
                       std::vector<std::string> formats)
{
    c.format = default_format;
    sub->add_option("--seed", c.seed, "RNG seed (falls back to $SHIFTPROD_SEED, then 0)");
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember(std::move(formats)));
    sub->add_option("--out", c.out_path, "Write output to this path instead of stdout");
}

inline std::uint64_t resolve_seed(const Common& c)
{
    if (c.seed) {
        return *c.seed;
    }
    if (const char* env = std::getenv("SHIFTPROD_SEED")) {
        try {
            TextCursor cur(env);
            const std::uint64_t v = cur.uint64();
            cur.expect_end();
            return v;
        } catch (const ParseError& e) {
            throw UsageError(caret_diagnostic("SHIFTPROD_SEED", env, e));
        }
    }
    return 0;
}

inline std::string render(const std::vector<Json>& rows, const std::string& format, bool single)
{
    if (format == "csv") {
        return to_csv(rows);
    }
    if (single && rows.size() == 1) {
        return rows.front().dump(2) + "\n";
    }
    Json arr = Json::array();
    for (const auto& r : rows) {
        arr.push_back(r);
    }
    return arr.dump(2) + "\n";
}

inline void emit(const Common& c, const std::string& text, std::ostream& out)
{
    if (c.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.out_path, std::ios::binary);
    if (!f) {
        throw UsageError("error: cannot open " + c.out_path + " for writing\n");
    }
    f << text;
}

inline Rational rational_flag(std::string_view flag, const std::string& text)
{
    return parse_flag(flag, text, [](const std::string& t) { return Rational::parse(t); });
}

/// JSON config -> extra command-line tokens. Keys are flag names without the
/// leading dashes; `true` becomes a bare flag, arrays repeat their values.
inline std::vector<std::string> config_tokens(const std::string& path)
{
    std::ifstream f(path);
    if (!f) {
        throw UsageError("error: cannot read config " + path + "\n");
    }
    Json cfg;
    try {
        cfg = Json::parse(f);
    } catch (const Json::parse_error& e) {
        throw UsageError("error: config " + path + ": " + e.what() + "\n");
    }
    if (!cfg.is_object()) {
        throw UsageError("error: config " + path + " must hold a JSON object\n");
    }
    std::vector<std::string> out;
    const auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    for (const auto& item : cfg.items()) {
        const std::string flag = "--" + item.key();
        const Json& v = item.value();
        if (v.is_boolean()) {
            if (v.get<bool>()) {
                out.push_back(flag);
            }
        } else if (v.is_array()) {
            out.push_back(flag);
            for (const auto& e : v) {
                out.push_back(scalar(e));
            }
        } else {
            out.push_back(flag);
            out.push_back(scalar(v));
        }
    }
    return out;
}

inline std::string instance_dump(const ScalarSet& a, const GgpSpec& g)
{
    return "A = " + format_set(a) + ", G = " + g.str();
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    using namespace detail;

    CLI::App app{"Exact experiments on shifted product sets AA+1 and generalized geometric progressions",
                 "shiftprod"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);

    // verify-main --------------------------------------------------------
    Common vm_common;
    std::string vm_a;
    std::size_t vm_random_a = 0;
    std::string vm_range = "1..50";
    std::string vm_g;
    bool vm_auto_g = false;
    std::string vm_delta;
    std::string vm_size_factor = "2";
    std::string vm_degeneracy = "1";
    std::string vm_policy = "reject";
    std::size_t vm_trials = 1;
    bool vm_literal = false;
    auto* vm = app.add_subcommand("verify-main", "Run the rational pipeline on A and a GGP G");
    vm->add_option("--A", vm_a, "Set literal, e.g. \"{1, 2, 3, 5}\"");
    vm->add_option("--random-A", vm_random_a, "Draw A as this many distinct integers");
    vm->add_option("--range", vm_range, "Integer range lo..hi for --random-A");
    vm->add_option("--G", vm_g, "GGP, e.g. \"ggp 2; gap 0; 1; 13\"");
    vm->add_flag("--auto-G", vm_auto_g, "Use G(2, R(0; 1; max(3, |AA|)))");
    vm->add_option("--delta", vm_delta, "delta in (0, 1), e.g. 1/2")->required();
    vm->add_option("--size-factor", vm_size_factor, "Allowed ratio between |G| and |AA|");
    vm->add_option("--degeneracy-threshold", vm_degeneracy, "Maximum d / log2(formal length)");
    vm->add_option("--size-policy", vm_policy, "reject or warn on violated preconditions")
        ->check(CLI::IsMember({"reject", "warn"}));
    vm->add_option("--trials", vm_trials, "Number of instances (with --random-A)")->check(CLI::PositiveNumber);
    vm->add_flag("--compare-literal", vm_literal, "Also measure E = {(g1 b, b a)}");
    add_common(vm, vm_common, "json", {"json", "csv"});

    // verify-ff ----------------------------------------------------------
    Common vf_common;
    std::optional<std::uint64_t> vf_q;
    std::vector<std::uint64_t> vf_subgroup;
    std::string vf_a;
    std::string vf_g;
    std::string vf_epsilon;
    std::string vf_delta;
    bool vf_full_plane = false;
    std::string vf_random_points;
    std::size_t vf_trials = 1;
    std::string vf_size_factor = "2";
    std::string vf_degeneracy = "1";
    bool vf_enforce = false;
    std::uint64_t vf_pair_cap = default_pair_cap;
    auto* vf = app.add_subcommand("verify-ff", "Run the F_q pipeline or the dot-product coverage check");
    vf->add_option("--q", vf_q, "Prime modulus");
    vf->add_option("--subgroup", vf_subgroup, "q t: A = G = the order-t subgroup of F_q^*")->expected(2);
    vf->add_option("--A", vf_a, "Set literal over F_q");
    vf->add_option("--G", vf_g, "GGP over F_q, e.g. \"ggp 3; gap 0; 1; 6\"");
    vf->add_option("--epsilon", vf_epsilon, "epsilon > 0");
    vf->add_option("--delta", vf_delta, "delta > 0");
    vf->add_flag("--full-plane", vf_full_plane, "Coverage check with E = F = F_q^2 minus the origin");
    vf->add_option("--random-points", vf_random_points,
                   "Coverage check with random E = F of this size ('auto' = ceil(q^(3/2)) + 1)");
    vf->add_option("--trials", vf_trials, "Number of random point sets")->check(CLI::PositiveNumber);
    vf->add_option("--size-factor", vf_size_factor, "Allowed ratio between |G| and |AA|");
    vf->add_option("--degeneracy-threshold", vf_degeneracy, "Maximum d / log2(formal length)");
    vf->add_flag("--enforce", vf_enforce, "Reject inputs violating the size conditions");
    vf->add_option("--pair-cap", vf_pair_cap, "Maximum |E||F| for the exhaustive dot-product set");
    add_common(vf, vf_common, "json", {"json", "csv"});

    // prop-gp --------------------------------------------------------------
    Common pg_common;
    std::vector<std::string> pg_specs;
    std::string pg_degeneracy = "1";
    auto* pg = app.add_subcommand("prop-gp", "Doubling bounds |R+R| and |GG| for progressions");
    pg->add_option("spec", pg_specs, "\"gap r0; r1,..; l1,..\" or \"ggp g0; gap ...\"")
        ->required()
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    pg->add_option("--degeneracy-threshold", pg_degeneracy, "Maximum d / log2(formal length)");
    add_common(pg, pg_common, "json", {"json", "csv"});

    // conjecture-scan --------------------------------------------------------
    Common cs_common;
    std::string cs_family = "random";
    std::string cs_sizes = "3..5";
    std::size_t cs_per_size = 4;
    std::string cs_range = "1..20";
    std::string cs_base = "2";
    std::string cs_start = "1";
    std::string cs_step = "1";
    std::vector<std::string> cs_sets;
    std::size_t cs_min_factor = 2;
    std::string cs_target = "1";
    std::uint64_t cs_budget = 200'000;
    std::string cs_max_product = "1";
    std::size_t cs_cutoff = 12;
    auto* cs = app.add_subcommand("conjecture-scan", "Search factorizations BC covering AA+1");
    cs->add_option("--family", cs_family, "random, geometric, arithmetic or explicit")
        ->check(CLI::IsMember({"random", "geometric", "arithmetic", "explicit"}));
    cs->add_option("--sizes", cs_sizes, "Range of |A|, lo..hi");
    cs->add_option("--per-size", cs_per_size, "Random instances per size");
    cs->add_option("--range", cs_range, "Integer range lo..hi for random sets");
    cs->add_option("--base", cs_base, "Base of the geometric family");
    cs->add_option("--start", cs_start, "First term of the arithmetic family");
    cs->add_option("--step", cs_step, "Step of the arithmetic family");
    cs->add_option("--set", cs_sets, "Explicit instance (repeatable)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    cs->add_option("--min-factor", cs_min_factor, "Minimum |B| and |C|")->check(CLI::PositiveNumber);
    cs->add_option("--target", cs_target, "Coverage target in (0, 1]");
    cs->add_option("--budget", cs_budget, "Maximum candidate evaluations per instance")->check(CLI::PositiveNumber);
    cs->add_option("--max-product-ratio", cs_max_product, "Bound |BC| <= ratio * |AA+1|, or 'none'");
    cs->add_option("--universe-cutoff", cs_cutoff, "Largest universe searched exhaustively");
    add_common(cs, cs_common, "csv", {"json", "csv"});

    // gen ----------------------------------------------------------------------
    Common gen_common;
    std::string gen_family;
    std::string gen_base = "2";
    std::size_t gen_len = 0;
    std::string gen_start = "1";
    std::string gen_step = "1";
    std::size_t gen_size = 0;
    std::string gen_range = "1..50";
    std::uint64_t gen_q = 0;
    std::uint64_t gen_t = 0;
    std::size_t gen_count = 1;
    auto* gen = app.add_subcommand("gen", "Print instance sets");
    gen->add_option("--family", gen_family, "random-integer, geometric, arithmetic or subgroup")
        ->required()
        ->check(CLI::IsMember({"random-integer", "geometric", "arithmetic", "subgroup"}));
    gen->add_option("--base", gen_base, "Geometric base");
    gen->add_option("--len", gen_len, "Length of geometric or arithmetic sets");
    gen->add_option("--start", gen_start, "First arithmetic term");
    gen->add_option("--step", gen_step, "Arithmetic step");
    gen->add_option("--size", gen_size, "Size of random sets");
    gen->add_option("--range", gen_range, "Integer range lo..hi for random sets");
    gen->add_option("--q", gen_q, "Prime modulus (subgroup)");
    gen->add_option("--t", gen_t, "Subgroup order (subgroup)");
    gen->add_option("--count", gen_count, "Number of random sets")->check(CLI::PositiveNumber);
    add_common(gen, gen_common, "text", {"text", "json"});

    // corollary2 ---------------------------------------------------------------
    Common c2_common;
    std::string c2_h;
    std::string c2_g;
    std::string c2_delta = "1/2";
    std::string c2_size_factor = "2";
    std::string c2_policy = "reject";
    auto* c2 = app.add_subcommand("corollary2", "Check (H+1) is not inside G via A = H u {1}");
    c2->add_option("--H", c2_h, "GGP H")->required();
    c2->add_option("--G", c2_g, "GGP G")->required();
    c2->add_option("--delta", c2_delta, "delta in (0, 1)");
    c2->add_option("--size-factor", c2_size_factor, "Allowed ratio between |G| and |AA|");
    c2->add_option("--size-policy", c2_policy, "reject or warn")->check(CLI::IsMember({"reject", "warn"}));
    add_common(c2, c2_common, "json", {"json", "csv"});

    try {
        // Config file values go right after the subcommand name so explicit
        // flags, which come later, win under TakeLast.
        std::vector<std::string> expanded;
        std::vector<std::string> config;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size()) {
                config = config_tokens(args[++i]);
            } else if (args[i].rfind("--config=", 0) == 0) {
                config = config_tokens(args[i].substr(9));
            } else {
                expanded.push_back(args[i]);
            }
        }
        if (!config.empty()) {
            auto it = expanded.begin();
            while (it != expanded.end() && app.get_subcommand_ptr(*it) == nullptr) {
                ++it;
            }
            if (it == expanded.end()) {
                throw UsageError("error: --config needs a subcommand\n");
            }
            expanded.insert(it + 1, config.begin(), config.end());
        }
        std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    } catch (const UsageError& e) {
        err << e.what();
        return exit_usage;
    }

    try {
        if (vm->parsed()) {
            const std::uint64_t seed = resolve_seed(vm_common);
            Rng rng(seed);
            MainOptions opt;
            opt.size_match_factor = rational_flag("--size-factor", vm_size_factor);
            opt.degeneracy_threshold = rational_flag("--degeneracy-threshold", vm_degeneracy);
            opt.size_policy = vm_policy == "warn" ? SizePolicy::warn : SizePolicy::reject;
            opt.compare_literal_construction = vm_literal;
            const Rational delta = rational_flag("--delta", vm_delta);
            if (vm_a.empty() == (vm_random_a == 0)) {
                throw UsageError("error: give exactly one of --A and --random-A\n");
            }
            if (vm_g.empty() == !vm_auto_g) {
                throw UsageError("error: give exactly one of --G and --auto-G\n");
            }
            if (!vm_a.empty() && vm_trials != 1) {
                throw UsageError("error: --trials needs --random-A\n");
            }
            const IntRange range = parse_flag("--range", vm_range, parse_range);
            std::vector<Json> rows;
            int code = exit_ok;
            for (std::size_t trial = 0; trial < vm_trials; ++trial) {
                const ScalarSet a = vm_a.empty()
                                        ? random_integer_set(rng, vm_random_a, range.lo, range.hi)
                                        : parse_flag("--A", vm_a, [](const std::string& t) { return parse_set(t); });
                const auto l = static_cast<std::int64_t>(std::max<std::size_t>(3, productset(a, a).size()));
                const GgpSpec g = vm_auto_g ? GgpSpec(Scalar(2), GapSpec(0, {1}, {l}))
                                            : parse_flag("--G", vm_g, [](const std::string& t) {
                                                  return GgpSpec::parse(t);
                                              });
                const MainReport report = run_theorem_main({a, g, delta}, opt);
                if (!report.structural_ok()) {
                    err << "finding: structural check failed (trial " << trial << "): " << instance_dump(a, g)
                        << "\n";
                    code = exit_finding;
                }
                if (!report.corollary1_ok) {
                    err << "finding: (AA+1) \\ G is empty (trial " << trial << "): " << instance_dump(a, g) << "\n";
                    code = exit_finding;
                }
                rows.push_back(to_json(report));
            }
            emit(vm_common, render(rows, vm_common.format, vm_trials == 1), out);
            return code;
        }

        if (vf->parsed()) {
            const std::uint64_t seed = resolve_seed(vf_common);
            Rng rng(seed);
            std::optional<std::uint64_t> q = vf_q;
            if (!vf_subgroup.empty()) {
                if (q && *q != vf_subgroup[0]) {
                    throw UsageError("error: --q and --subgroup disagree on q\n");
                }
                q = vf_subgroup[0];
            }
            if (!q) {
                throw UsageError("error: give --q or --subgroup\n");
            }
            const PrimeField field(*q);
            const Domain dom = Domain::field(*q);

            if (vf_full_plane || !vf_random_points.empty()) {
                std::vector<Json> rows;
                int code = exit_ok;
                const auto coverage_row = [&](const PointSet2& pts) {
                    const CoverageResult cov = ffdp_coverage_check(pts, pts, *q, vf_pair_cap);
                    Json j = Json::object();
                    j["q"] = *q;
                    j["e_size"] = pts.size();
                    j["f_size"] = pts.size();
                    j["pi_size"] = cov.pi_size;
                    j["covered_size"] = cov.covered.size();
                    j["full"] = cov.full;
                    j["hypothesis"] = cov.hypothesis;
                    if (cov.hypothesis && !cov.full) {
                        err << "finding: F_q^* not covered although |E| > q^(3/2): E = " << format_points(pts)
                            << "\n";
                        code = exit_finding;
                    }
                    rows.push_back(j);
                };
                if (vf_full_plane) {
                    coverage_row(nonzero_plane(field));
                } else {
                    std::size_t n = 0;
                    if (vf_random_points == "auto") {
                        const mpz_class c = ceil_power(mpz_class(static_cast<unsigned long>(*q)),
                                                       Rational(mpz_class(3), mpz_class(2)));
                        n = c.get_ui() + 1;
                    } else {
                        n = static_cast<std::size_t>(parse_flag("--random-points", vf_random_points,
                                                                [](const std::string& t) {
                                                                    TextCursor cur(t);
                                                                    auto v = cur.uint64();
                                                                    cur.expect_end();
                                                                    return v;
                                                                }));
                    }
                    for (std::size_t trial = 0; trial < vf_trials; ++trial) {
                        coverage_row(random_field_points(rng, field, n));
                    }
                }
                emit(vf_common, render(rows, vf_common.format, rows.size() == 1), out);
                return code;
            }

            if (vf_epsilon.empty() || vf_delta.empty()) {
                throw UsageError("error: the F_q pipeline needs --epsilon and --delta\n");
            }
            FfOptions opt;
            opt.size_match_factor = rational_flag("--size-factor", vf_size_factor);
            opt.degeneracy_threshold = rational_flag("--degeneracy-threshold", vf_degeneracy);
            opt.enforce_conditions = vf_enforce;
            opt.pair_cap = vf_pair_cap;
            const Rational epsilon = rational_flag("--epsilon", vf_epsilon);
            const Rational delta = rational_flag("--delta", vf_delta);

            std::optional<SubgroupInstance> inst;
            if (!vf_subgroup.empty()) {
                inst = subgroup_ggp(vf_subgroup[0], vf_subgroup[1]);
            } else {
                if (vf_a.empty() || vf_g.empty()) {
                    throw UsageError("error: give --subgroup q t, or --A and --G\n");
                }
                inst = SubgroupInstance{
                    parse_flag("--A", vf_a, [&](const std::string& t) { return parse_set(t, dom); }),
                    parse_flag("--G", vf_g, [&](const std::string& t) { return GgpSpec::parse(t, dom); })};
            }
            const FfReport report = run_theorem_ff({*q, inst->a, inst->g, epsilon, delta}, opt);
            int code = exit_ok;
            if (report.has_finding()) {
                err << "finding: F_q pipeline check failed: " << instance_dump(inst->a, inst->g) << "\n";
                code = exit_finding;
            }
            emit(vf_common, render({to_json(report)}, vf_common.format, true), out);
            return code;
        }

        if (pg->parsed()) {
            const Rational threshold = rational_flag("--degeneracy-threshold", pg_degeneracy);
            std::vector<Json> rows;
            int code = exit_ok;
            for (const auto& text : pg_specs) {
                const ProgressionSpec spec =
                    parse_flag("spec", text, [](const std::string& t) { return parse_progression(t); });
                const PropGpResult res = prop_gp_check(spec);
                const GapSpec& r = shiftprod::detail::gap_of(spec);
                Json j = Json::object();
                j["spec"] = format_progression(spec);
                j["dimension"] = r.dimension();
                j["formal_length"] = r.formal_length();
                j["size"] = res.size;
                j["expanded_size"] = res.expanded_size;
                j["bound"] = res.bound;
                j["tight_bound"] = res.tight_bound;
                j["pass"] = res.pass;
                j["tight_pass"] = res.tight_pass;
                j["proper"] = is_proper(spec);
                j["degeneracy_ratio"] = rational_json(degeneracy_ratio(spec));
                j["degenerate"] = is_degenerate(spec, threshold);
                if (!res.pass || !res.tight_pass) {
                    err << "finding: doubling bound exceeded for " << format_progression(spec) << "\n";
                    code = exit_finding;
                }
                rows.push_back(j);
            }
            emit(pg_common, render(rows, pg_common.format, pg_specs.size() == 1), out);
            return code;
        }

        if (cs->parsed()) {
            Rng rng(resolve_seed(cs_common));
            CoverParams params;
            params.min_factor_size = cs_min_factor;
            params.coverage_target = rational_flag("--target", cs_target);
            params.search_budget = cs_budget;
            params.universe_cutoff = cs_cutoff;
            if (cs_max_product == "none") {
                params.max_product_ratio.reset();
            } else {
                params.max_product_ratio = rational_flag("--max-product-ratio", cs_max_product);
            }
            const IntRange sizes = parse_flag("--sizes", cs_sizes, parse_range);
            std::vector<ScalarSet> family;
            if (cs_family == "explicit") {
                if (cs_sets.empty()) {
                    throw UsageError("error: --family explicit needs at least one --set\n");
                }
                for (const auto& s : cs_sets) {
                    family.push_back(parse_flag("--set", s, [](const std::string& t) { return parse_set(t); }));
                }
            } else {
                if (sizes.lo < 0) {
                    throw UsageError("error: --sizes must be non-negative\n");
                }
                const IntRange range = parse_flag("--range", cs_range, parse_range);
                const Rational base = rational_flag("--base", cs_base);
                const Rational start = rational_flag("--start", cs_start);
                const Rational step = rational_flag("--step", cs_step);
                for (std::int64_t n = sizes.lo; n <= sizes.hi; ++n) {
                    const auto size = static_cast<std::size_t>(n);
                    if (cs_family == "random") {
                        for (std::size_t k = 0; k < cs_per_size; ++k) {
                            family.push_back(random_integer_set(rng, size, range.lo, range.hi));
                        }
                    } else if (cs_family == "geometric") {
                        family.push_back(geometric_set(base, size));
                    } else {
                        family.push_back(arithmetic_set(start, step, size));
                    }
                }
            }
            std::vector<Json> rows;
            for (const auto& row : conjecture_scan(family, params)) {
                rows.push_back(to_json(row));
            }
            if (cs_common.format == "csv" && rows.empty()) {
                emit(cs_common,
                     "instance_id,a_size,aa1_size,b_size,c_size,hit_count,coverage_fraction,exhaustive,tension_flag\n",
                     out);
            } else {
                emit(cs_common, render(rows, cs_common.format, false), out);
            }
            return exit_ok;
        }

        if (gen->parsed()) {
            Rng rng(resolve_seed(gen_common));
            std::vector<ScalarSet> sets;
            if (gen_family == "random-integer") {
                if (gen_size == 0) {
                    throw UsageError("error: random-integer needs --size\n");
                }
                const IntRange range = parse_flag("--range", gen_range, parse_range);
                for (std::size_t i = 0; i < gen_count; ++i) {
                    sets.push_back(random_integer_set(rng, gen_size, range.lo, range.hi));
                }
            } else if (gen_family == "geometric") {
                if (gen_len == 0) {
                    throw UsageError("error: geometric needs --len\n");
                }
                sets.push_back(geometric_set(rational_flag("--base", gen_base), gen_len));
            } else if (gen_family == "arithmetic") {
                if (gen_len == 0) {
                    throw UsageError("error: arithmetic needs --len\n");
                }
                sets.push_back(arithmetic_set(rational_flag("--start", gen_start), rational_flag("--step", gen_step),
                                              gen_len));
            } else {
                if (gen_q == 0 || gen_t == 0) {
                    throw UsageError("error: subgroup needs --q and --t\n");
                }
                sets.push_back(subgroup_ggp(gen_q, gen_t).a);
            }
            std::string text;
            if (gen_common.format == "json") {
                Json arr = Json::array();
                for (const auto& s : sets) {
                    arr.push_back(format_set(s));
                }
                text = arr.dump(2) + "\n";
            } else {
                for (const auto& s : sets) {
                    text += format_set(s) + "\n";
                }
            }
            emit(gen_common, text, out);
            return exit_ok;
        }

        if (c2->parsed()) {
            MainOptions opt;
            opt.size_match_factor = rational_flag("--size-factor", c2_size_factor);
            opt.size_policy = c2_policy == "warn" ? SizePolicy::warn : SizePolicy::reject;
            const GgpSpec h = parse_flag("--H", c2_h, [](const std::string& t) { return GgpSpec::parse(t); });
            const GgpSpec g = parse_flag("--G", c2_g, [](const std::string& t) { return GgpSpec::parse(t); });
            const Corollary2Result res = run_corollary2(h, g, rational_flag("--delta", c2_delta), opt);
            Json j = Json::object();
            j["h_size"] = res.h.size();
            j["h_shift_outside_g_size"] = res.h_shift_outside_g.size();
            j["h_inside_hprime_sq"] = res.h_inside_hprime_sq;
            j["ok"] = res.ok;
            j["report"] = to_json(res.report);
            int code = exit_ok;
            if (!res.ok || !res.report.structural_ok()) {
                err << "finding: (H+1) inside G for H = " << h.str() << ", G = " << g.str() << "\n";
                code = exit_finding;
            }
            emit(c2_common, render({j}, c2_common.format, true), out);
            return code;
        }
    } catch (const UsageError& e) {
        err << e.what();
        return exit_usage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const DomainMismatch& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ArithmeticError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}

}  // namespace shiftprod::cli
