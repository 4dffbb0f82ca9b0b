#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "shiftprod/errors.hpp"
#include "shiftprod/harness.hpp"
#include "shiftprod/numeric.hpp"
#include "shiftprod/powers.hpp"
#include "shiftprod/progressions.hpp"
#include "shiftprod/report.hpp"
#include "shiftprod/setalg.hpp"

namespace shiftprod {

inline constexpr std::uint64_t default_pair_cap = 10'000'000;

struct CoverageResult {
    ScalarSet covered;        ///< Pi(E, F) minus 0
    std::uint64_t pi_size = 0;
    bool full = false;        ///< covered == F_q^*
    bool hypothesis = false;  ///< |E| = |F| > q^(3/2)
};

/// Exhaustive Pi(E, F) over F_q, compared against F_q^*.
inline CoverageResult ffdp_coverage_check(const PointSet2& e, const PointSet2& f, std::uint64_t q,
                                          std::uint64_t pair_cap = default_pair_cap)
{
    const PrimeField field(q);
    const Domain dom = Domain::field(q);
    require_same_domain(e.domain(), dom);
    require_same_domain(f.domain(), dom);
    if (e.size() != 0 && f.size() > pair_cap / e.size()) {
        throw PreconditionError("|E||F| = " + std::to_string(e.size()) + " * " + std::to_string(f.size())
                                + " exceeds the pair cap " + std::to_string(pair_cap));
    }
    const ScalarSet pi = dot_product_set(e, f);
    CoverageResult out{ScalarSet(dom)};
    out.pi_size = pi.size();
    for (const auto& x : pi) {
        if (!x.is_zero()) {
            out.covered.insert(x);
        }
    }
    out.full = out.covered.size() == q - 1;
    // |E| > q^(3/2)  <=>  |E|^2 > q^3
    const mpz_class q3 = mpz_class(static_cast<unsigned long>(q)) * q * q;
    const auto sq = [](std::uint64_t n) -> mpz_class {
        return mpz_class(static_cast<unsigned long>(n)) * static_cast<unsigned long>(n);
    };
    out.hypothesis = e.size() == f.size() && sq(e.size()) > q3;
    return out;
}

/// All q^2 - 1 nonzero points of F_q^2.
inline PointSet2 nonzero_plane(const PrimeField& field)
{
    PointSet2 out(Domain::field(field.modulus()));
    const auto q = static_cast<std::int64_t>(field.modulus());
    for (std::int64_t x = 0; x < q; ++x) {
        for (std::int64_t y = 0; y < q; ++y) {
            if (x != 0 || y != 0) {
                out.insert(Point2(field.element(x), field.element(y)));
            }
        }
    }
    return out;
}

struct SubgroupInstance {
    ScalarSet a;
    GgpSpec g;
};

/// The order-t subgroup of F_q^* as G(primitive root, R(0; (q-1)/t; max(t, 3))),
/// with A = G. For t < 3 the progression wraps around and is not proper.
inline SubgroupInstance subgroup_ggp(std::uint64_t q, std::uint64_t t)
{
    const PrimeField field(q);
    if (t == 0 || (q - 1) % t != 0) {
        throw PreconditionError(std::to_string(t) + " does not divide q - 1 = " + std::to_string(q - 1));
    }
    const GapSpec r(0, {static_cast<std::int64_t>((q - 1) / t)}, {static_cast<std::int64_t>(std::max<std::uint64_t>(t, 3))});
    GgpSpec g(field.primitive_root(), r);
    ScalarSet a = enumerate_ggp(g);
    return {std::move(a), std::move(g)};
}

struct FfOptions {
    Rational size_match_factor{2};
    Rational degeneracy_threshold{1};
    /// Reject inputs violating either size condition or the size match instead
    /// of running and reporting.
    bool enforce_conditions = false;
    std::uint64_t pair_cap = default_pair_cap;
    unsigned decimal_digits = 20;
};

struct FfPipelineInput {
    std::uint64_t q;
    ScalarSet a;
    GgpSpec g;
    Rational epsilon;
    Rational delta;
};

struct FfReport {
    std::uint64_t q = 0;
    std::uint64_t a_size = 0;
    std::uint64_t aa_size = 0;
    std::uint64_t g_formal_len = 0;
    std::uint64_t g_realized_size = 0;
    std::uint64_t b_size = 0;
    std::uint64_t e_size = 0;
    std::uint64_t pi_size = 0;
    std::uint64_t c_size = 0;
    Rational epsilon;
    Rational delta;
    std::uint64_t claim_bb_bound = 0;
    bool identity_ok = false;
    bool corollary1_ok = false;
    std::string bound_ratio;  ///< |C| / q^delta
    Json constants = Json::object();
    bool cond1_ok = false;
    std::string cond1_margin;  ///< |A||AA| / q^(3/2 + epsilon)
    bool cond2_ok = false;
    std::string cond2_margin;  ///< q^(1 - delta) / |AA|
    bool coverage_ok = false;
    std::uint64_t q_delta_bound = 0;  ///< ceil(q^delta)

    /// A theorem-guaranteed property measured false.
    bool has_finding() const
    {
        const bool hypothesis = constants.value("ffdp_hypothesis", false);
        return !identity_ok || !constants.value("partition_ok", false)
               || !constants.value("decomposition_ok", false) || !constants.value("claim_bb_ok", false)
               || (hypothesis && !coverage_ok) || (coverage_ok && !constants.value("chain_ok", false));
    }

    friend bool operator==(const FfReport&, const FfReport&) = default;
};

inline Json to_json(const FfReport& r)
{
    Json j = Json::object();
    j["q"] = r.q;
    j["a_size"] = r.a_size;
    j["aa_size"] = r.aa_size;
    j["g_formal_len"] = r.g_formal_len;
    j["g_realized_size"] = r.g_realized_size;
    j["b_size"] = r.b_size;
    j["e_size"] = r.e_size;
    j["pi_size"] = r.pi_size;
    j["c_size"] = r.c_size;
    j["epsilon"] = rational_json(r.epsilon);
    j["delta"] = rational_json(r.delta);
    j["claim_bb_bound"] = r.claim_bb_bound;
    j["identity_ok"] = r.identity_ok;
    j["corollary1_ok"] = r.corollary1_ok;
    j["bound_ratio"] = r.bound_ratio;
    j["constants"] = r.constants;
    j["cond1_ok"] = r.cond1_ok;
    j["cond1_margin"] = r.cond1_margin;
    j["cond2_ok"] = r.cond2_ok;
    j["cond2_margin"] = r.cond2_margin;
    j["coverage_ok"] = r.coverage_ok;
    j["q_delta_bound"] = r.q_delta_bound;
    return j;
}

inline FfReport ff_report_from_json(const Json& j)
{
    FfReport r;
    r.q = j.at("q").get<std::uint64_t>();
    r.a_size = j.at("a_size").get<std::uint64_t>();
    r.aa_size = j.at("aa_size").get<std::uint64_t>();
    r.g_formal_len = j.at("g_formal_len").get<std::uint64_t>();
    r.g_realized_size = j.at("g_realized_size").get<std::uint64_t>();
    r.b_size = j.at("b_size").get<std::uint64_t>();
    r.e_size = j.at("e_size").get<std::uint64_t>();
    r.pi_size = j.at("pi_size").get<std::uint64_t>();
    r.c_size = j.at("c_size").get<std::uint64_t>();
    r.epsilon = rational_from_json(j.at("epsilon"));
    r.delta = rational_from_json(j.at("delta"));
    r.claim_bb_bound = j.at("claim_bb_bound").get<std::uint64_t>();
    r.identity_ok = j.at("identity_ok").get<bool>();
    r.corollary1_ok = j.at("corollary1_ok").get<bool>();
    r.bound_ratio = j.at("bound_ratio").get<std::string>();
    r.constants = j.at("constants");
    r.cond1_ok = j.at("cond1_ok").get<bool>();
    r.cond1_margin = j.at("cond1_margin").get<std::string>();
    r.cond2_ok = j.at("cond2_ok").get<bool>();
    r.cond2_margin = j.at("cond2_margin").get<std::string>();
    r.coverage_ok = j.at("coverage_ok").get<bool>();
    r.q_delta_bound = j.at("q_delta_bound").get<std::uint64_t>();
    return r;
}

inline FfReport run_theorem_ff(const FfPipelineInput& in, const FfOptions& opt = {})
{
    const PrimeField field(in.q);
    const Domain dom = Domain::field(in.q);
    if (in.a.domain() != dom) {
        throw PreconditionError("A is not a subset of F_" + std::to_string(in.q));
    }
    if (in.g.domain() != dom) {
        throw PreconditionError("G is not a progression in F_" + std::to_string(in.q));
    }
    if (in.a.empty()) {
        throw PreconditionError("A must be nonempty");
    }
    if (in.epsilon.sign() <= 0 || in.delta.sign() <= 0) {
        throw PreconditionError("epsilon and delta must be positive");
    }

    const Rational q(in.q);
    const std::uint64_t a_size = in.a.size();
    const std::uint64_t aa_size = productset(in.a, in.a).size();
    const Rational cond1_exp = Rational(mpz_class(3), mpz_class(2)) + in.epsilon;
    const Rational cond2_exp = Rational(1) - in.delta;
    const LiftedPower cond1 = lift({{Rational(a_size * aa_size), 1}, {q, -cond1_exp}});
    const LiftedPower cond2 = lift({{q, cond2_exp}, {Rational(aa_size), -1}});
    const bool cond1_ok = compare_to_one(cond1) >= 0;
    const bool cond2_ok = compare_to_one(cond2) >= 0;
    const Rational degeneracy = degeneracy_ratio(in.g);
    if (opt.enforce_conditions) {
        if (!cond1_ok) {
            throw PreconditionError("|A||AA| < q^(3/2 + epsilon)");
        }
        if (!cond2_ok) {
            throw PreconditionError("|AA| > q^(1 - delta)");
        }
        if (degeneracy > opt.degeneracy_threshold) {
            throw PreconditionError("G is degenerate: d / log2|G| = " + degeneracy.str());
        }
    }
    {
        const std::uint64_t e_bound = a_size * in.g.formal_length();
        if (e_bound != 0 && e_bound > opt.pair_cap / e_bound) {
            throw PreconditionError("|E||F| may reach " + std::to_string(e_bound) + "^2, above the pair cap "
                                    + std::to_string(opt.pair_cap));
        }
    }

    detail::PipelineCore k = detail::run_core(in.a, in.g);
    const bool size_ok = sizes_match(k.g_set.size(), k.aa.size(), opt.size_match_factor);
    if (!size_ok && opt.enforce_conditions) {
        throw PreconditionError("|G| is not within the size-match factor of |AA|");
    }
    const CoverageResult cov = ffdp_coverage_check(k.e, k.f, in.q, opt.pair_cap);

    FfReport r;
    r.q = in.q;
    r.a_size = a_size;
    r.aa_size = k.aa.size();
    r.g_formal_len = in.g.formal_length();
    r.g_realized_size = k.g_set.size();
    r.b_size = k.b.size();
    r.e_size = k.e.size();
    r.pi_size = k.pi.size();
    r.c_size = k.c.size();
    r.epsilon = in.epsilon;
    r.delta = in.delta;
    r.claim_bb_bound = k.claim.lower_bound;
    r.identity_ok = k.identity_ok;
    r.corollary1_ok = !k.c.empty();
    r.bound_ratio = power_decimal({{Rational(k.c.size()), 1}, {q, -in.delta}}, opt.decimal_digits);
    r.cond1_ok = cond1_ok;
    r.cond1_margin = to_decimal(cond1, opt.decimal_digits);
    r.cond2_ok = cond2_ok;
    r.cond2_margin = to_decimal(cond2, opt.decimal_digits);
    r.coverage_ok = cov.full;
    r.q_delta_bound = ceil_power(mpz_class(static_cast<unsigned long>(in.q)), in.delta).get_ui();

    r.constants = detail::core_constants(k, a_size, in.epsilon, opt.decimal_digits);
    r.constants["degeneracy_ratio"] = rational_json(degeneracy);
    r.constants["size_match_ok"] = size_ok;
    r.constants["ffdp_hypothesis"] = cov.hypothesis;
    r.constants["covered_size"] = cov.covered.size();
    // q - 1 <= |Pi(E,F)| <= |G(AA+1)|
    r.constants["chain_ok"] = in.q - 1 <= k.pi.size() && k.pi.size() <= k.g_target.size();
    r.constants["q_delta_ok"] = k.c.size() >= r.q_delta_bound;
    r.constants["c_aa_over_q"] = rational_json(size_ratio(k.c.size() * k.aa.size(), in.q));
    return r;
}

}  // namespace shiftprod
