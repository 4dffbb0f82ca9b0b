#pragma once

// Exact run of the AA+1 versus generalized-geometric-progression argument:
// normalization by the first element, the squares-closed subset B, the planar
// sets E and F, their dot-product set, and the exceptional set C = (AA+1) \ G,
// with every counting step measured.

#include <cstdint>
#include <string>
#include <utility>

#include "shiftprod/errors.hpp"
#include "shiftprod/numeric.hpp"
#include "shiftprod/powers.hpp"
#include "shiftprod/progressions.hpp"
#include "shiftprod/report.hpp"
#include "shiftprod/setalg.hpp"

namespace shiftprod {

/// g1 = g0^r0.
inline Scalar first_element(const GgpSpec& g) { return g.base().pow(g.exponents().base()); }

/// G' = G / g1, i.e. the same progression with r0 = 0.
inline GgpSpec normalize(const GgpSpec& g) { return GgpSpec(g.base(), g.exponents().with_base(0)); }

/// B = { g in G' : g*g in G' }, by the membership predicate.
inline ScalarSet build_B(const GgpSpec& gprime)
{
    if (gprime.exponents().base() != 0) {
        throw PreconditionError("build_B expects a normalized progression (r0 = 0)");
    }
    const GgpMembership member(gprime);
    ScalarSet out(gprime.domain());
    for (const auto& g : enumerate_ggp(gprime)) {
        if (member.contains(g * g)) {
            out.insert(g);
        }
    }
    return out;
}

/// { g0^(sum x_j r_j) : every x_j even, x_j < l_j }. Only reported next to
/// build_B; it is not the set the argument needs.
inline ScalarSet build_B_even_exponents(const GgpSpec& gprime)
{
    ScalarSet out(gprime.domain());
    const GapSpec& r = gprime.exponents();
    r.for_each_vector([&](const ExponentVector& x) {
        for (auto xj : x) {
            if (xj % 2 != 0) {
                return;
            }
        }
        out.insert(gprime.base().pow(r.value_at(x) - r.base()));
    });
    return out;
}

struct ClaimBbResult {
    std::uint64_t lower_bound = 0;  ///< prod floor(l_j / 2)
    bool pass = false;
};

/// |B| >= prod floor(l_j/2) and prod floor(l_j/2) * 3^d >= formal length.
inline ClaimBbResult claim_bb_check(const GgpSpec& g, const ScalarSet& b)
{
    std::uint64_t lower = 1;
    std::uint64_t three_d = 1;
    for (auto l : g.exponents().lengths()) {
        lower = detail::checked_umul(lower, static_cast<std::uint64_t>(l / 2));
        three_d = detail::checked_umul(three_d, 3);
    }
    const bool size_ok = b.size() >= lower;
    const bool chain_ok = detail::checked_umul(lower, three_d) >= g.formal_length();
    return {lower, size_ok && chain_ok};
}

enum class EConstruction {
    scaled,   ///< E = g1 * F = {(g1 b, g1 b a)}
    literal,  ///< E = {(g1 b, b a)}; its dot products are b b' (g1 + a a')
};

struct PointSetPair {
    PointSet2 e;
    PointSet2 f;
};

/// F = {(b, b a)}, E per `construction`.
inline PointSetPair build_EF(const ScalarSet& a, const ScalarSet& b, const Scalar& g1,
                             EConstruction construction = EConstruction::scaled)
{
    if (a.empty() || b.empty()) {
        throw PreconditionError("build_EF needs nonempty A and B");
    }
    require_same_domain(a.domain(), b.domain());
    require_same_domain(a.domain(), g1.domain());
    if (g1.is_zero()) {
        throw PreconditionError("first element must be nonzero");
    }
    PointSetPair out{PointSet2(a.domain()), PointSet2(a.domain())};
    out.e.reserve(a.size() * b.size());
    out.f.reserve(a.size() * b.size());
    for (const auto& bb : b) {
        for (const auto& aa : a) {
            const Scalar ba = bb * aa;
            out.f.insert(Point2(bb, ba));
            if (construction == EConstruction::scaled) {
                out.e.insert(Point2(g1 * bb, g1 * ba));
            } else {
                out.e.insert(Point2(g1 * bb, ba));
            }
        }
    }
    return out;
}

struct PiIdentity {
    ScalarSet lhs;  ///< Pi(E, F)
    ScalarSet rhs;  ///< g1 BB (AA+1)
    bool equal = false;
};

inline PiIdentity pi_identity_check(const ScalarSet& a, const ScalarSet& b, const Scalar& g1)
{
    const auto [e, f] = build_EF(a, b, g1);
    ScalarSet lhs = dot_product_set(e, f);
    ScalarSet rhs = scale(productset(productset(b, b), shift(productset(a, a), g1.one())), g1);
    const bool equal = lhs == rhs;
    return {std::move(lhs), std::move(rhs), equal};
}

/// (AA+1) minus the members of G.
inline ScalarSet exceptional_set(const ScalarSet& a, const GgpMembership& member)
{
    require_same_domain(a.domain(), member.spec().domain());
    ScalarSet out(a.domain());
    if (a.empty()) {
        return out;
    }
    const ScalarSet target = shift(productset(a, a), a.begin()->one());
    for (const auto& x : target) {
        if (!member.contains(x)) {
            out.insert(x);
        }
    }
    return out;
}

inline ScalarSet exceptional_set(const ScalarSet& a, const GgpSpec& g) { return exceptional_set(a, GgpMembership(g)); }

/// |G| and |AA| within a factor of each other.
inline bool sizes_match(std::uint64_t g_size, std::uint64_t aa_size, const Rational& factor)
{
    const Rational g(g_size);
    const Rational aa(aa_size);
    return g <= factor * aa && aa <= factor * g;
}

namespace detail {

/// Everything both pipelines (rational and F_q) compute, as exact sets.
struct PipelineCore {
    ScalarSet aa, g_set, target, b, b_even, bb, c, gcap, g_target, g_gcap, g_c, gg, pi, rhs;
    PointSet2 e, f;
    Scalar g1;
    bool g_proper = false;
    ClaimBbResult claim;
    bool identity_ok = false;
    bool partition_ok = false;
    bool decomposition_ok = false;
    bool gg_bound_ok = false;
    bool inclusion_ok = false;
    bool e_noncollinear = false;
    bool f_noncollinear = false;
};

inline PipelineCore run_core(const ScalarSet& a, const GgpSpec& g)
{
    PipelineCore k;
    const Scalar one = a.begin()->one();
    k.aa = productset(a, a);
    k.g_set = enumerate_ggp(g);
    k.g_proper = k.g_set.size() == g.formal_length();
    k.target = shift(k.aa, one);

    k.g1 = first_element(g);
    const GgpSpec gprime = normalize(g);
    k.b = build_B(gprime);
    k.b_even = build_B_even_exponents(gprime);
    k.claim = claim_bb_check(g, k.b);
    k.bb = productset(k.b, k.b);

    auto ef = build_EF(a, k.b, k.g1);
    k.e = std::move(ef.e);
    k.f = std::move(ef.f);
    k.pi = dot_product_set(k.e, k.f);
    k.rhs = scale(productset(k.bb, k.target), k.g1);
    k.identity_ok = k.pi == k.rhs;

    const GgpMembership member(g);
    k.c = exceptional_set(a, member);
    k.gcap = set_minus(k.target, k.c);
    k.partition_ok = set_intersect(k.c, k.gcap).empty() && set_union(k.c, k.gcap) == k.target
                     && k.gcap.is_subset_of(k.g_set) && set_intersect(k.c, k.g_set).empty();

    k.g_target = productset(k.g_set, k.target);
    k.g_gcap = productset(k.g_set, k.gcap);
    k.g_c = productset(k.g_set, k.c);
    k.decomposition_ok = set_union(k.g_gcap, k.g_c) == k.g_target;
    k.gg = productset(k.g_set, k.g_set);
    k.gg_bound_ok = k.g_gcap.size() <= k.gg.size() && k.g_gcap.is_subset_of(k.gg);

    // g1 BB lies in G (and Pi(E,F) in G(AA+1)) whenever G is proper.
    const ScalarSet g1bb = scale(k.bb, k.g1);
    k.inclusion_ok = !k.g_proper || (g1bb.is_subset_of(k.g_set) && k.pi.is_subset_of(k.g_target));

    k.e_noncollinear = !collinear(k.e);
    k.f_noncollinear = !collinear(k.f);
    return k;
}

inline Json core_constants(const PipelineCore& k, std::uint64_t a_size, const Rational& epsilon, unsigned digits)
{
    const std::uint64_t ab = a_size * k.b.size();
    const std::uint64_t ag = a_size * k.g_set.size();
    Json c = Json::object();
    c["f_size"] = k.f.size();
    c["b_even_size"] = k.b_even.size();
    c["bb_size"] = k.bb.size();
    c["g_target_size"] = k.g_target.size();
    c["g_gcap_size"] = k.g_gcap.size();
    c["gc_size"] = k.g_c.size();
    c["gg_size"] = k.gg.size();
    c["g_proper"] = k.g_proper;
    c["claim_bb_ok"] = !k.g_proper || k.claim.pass;
    c["partition_ok"] = k.partition_ok;
    c["decomposition_ok"] = k.decomposition_ok;
    c["gg_bound_ok"] = k.gg_bound_ok;
    c["inclusion_ok"] = k.inclusion_ok;
    c["e_noncollinear"] = k.e_noncollinear;
    c["f_noncollinear"] = k.f_noncollinear;
    c["g_over_aa"] = rational_json(size_ratio(k.g_set.size(), k.aa.size()));
    c["b_over_g"] = rational_json(size_ratio(k.b.size(), k.g_set.size()));
    c["bb_over_aa"] = rational_json(size_ratio(k.bb.size(), k.aa.size()));
    c["e_over_ab"] = rational_json(size_ratio(k.e.size(), ab));
    c["pi_over_g_target"] = rational_json(size_ratio(k.pi.size(), k.g_target.size()));
    c["g_gcap_over_gg"] = rational_json(size_ratio(k.g_gcap.size(), k.gg.size()));
    c["gg_over_g"] = rational_json(size_ratio(k.gg.size(), k.g_set.size()));
    c["gc_over_g_target"] = rational_json(size_ratio(k.g_c.size(), k.g_target.size()));
    c["c_g_over_gc"] = rational_json(size_ratio(k.c.size() * k.g_set.size(), k.g_c.size()));
    c["aa_over_a_squared"] = rational_json(size_ratio(k.aa.size(), a_size * a_size));
    const Rational one_minus_eps = Rational(1) - epsilon;
    c["pi_over_ab_pow"] = power_decimal({{Rational(k.pi.size()), 1}, {Rational(ab), -one_minus_eps}}, digits);
    c["gc_over_ag_pow"] = power_decimal({{Rational(k.g_c.size()), 1}, {Rational(ag), -one_minus_eps}}, digits);
    c["c_over_a_g_pow"] = power_decimal(
        {{Rational(k.c.size()), 1}, {Rational(a_size), -one_minus_eps}, {Rational(k.g_set.size()), epsilon}}, digits);
    return c;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Rational pipeline
// ---------------------------------------------------------------------------

enum class SizePolicy { reject, warn };

struct MainOptions {
    Rational size_match_factor{2};
    Rational degeneracy_threshold{1};
    SizePolicy size_policy = SizePolicy::reject;
    bool compare_literal_construction = false;
    unsigned decimal_digits = 20;
};

struct PipelineInput {
    ScalarSet a;
    GgpSpec g;
    Rational delta;
};

struct MainReport {
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
    std::string bound_ratio;  ///< |C| / |A|^(1-delta), truncated decimal
    Json constants = Json::object();

    /// identity, partition, claim bb (when G is proper) and decomposition.
    bool structural_ok() const
    {
        return identity_ok && constants.value("partition_ok", false) && constants.value("claim_bb_ok", false)
               && constants.value("decomposition_ok", false);
    }

    friend bool operator==(const MainReport&, const MainReport&) = default;
};

inline Json to_json(const MainReport& r)
{
    Json j = Json::object();
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
    return j;
}

inline MainReport main_report_from_json(const Json& j)
{
    MainReport r;
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
    return r;
}

inline MainReport run_theorem_main(const PipelineInput& in, const MainOptions& opt = {})
{
    if (!in.a.domain().is_rational() || !in.g.is_rational()) {
        throw PreconditionError("the rational pipeline needs A and G over the rationals");
    }
    if (in.a.size() < 2) {
        throw PreconditionError("|A| must be at least 2");
    }
    if (in.delta.sign() <= 0 || in.delta >= Rational(1)) {
        throw PreconditionError("delta must lie in (0, 1)");
    }
    const Rational degeneracy = degeneracy_ratio(in.g);
    if (degeneracy > opt.degeneracy_threshold && opt.size_policy == SizePolicy::reject) {
        throw PreconditionError("G is degenerate: d / log2|G| = " + degeneracy.str() + " exceeds "
                                + opt.degeneracy_threshold.str());
    }

    detail::PipelineCore k = detail::run_core(in.a, in.g);
    const bool size_ok = sizes_match(k.g_set.size(), k.aa.size(), opt.size_match_factor);
    if (!size_ok && opt.size_policy == SizePolicy::reject) {
        throw PreconditionError("|G| = " + std::to_string(k.g_set.size()) + " is not within a factor "
                                + opt.size_match_factor.str() + " of |AA| = " + std::to_string(k.aa.size()));
    }

    MainReport r;
    r.a_size = in.a.size();
    r.aa_size = k.aa.size();
    r.g_formal_len = in.g.formal_length();
    r.g_realized_size = k.g_set.size();
    r.b_size = k.b.size();
    r.e_size = k.e.size();
    r.pi_size = k.pi.size();
    r.c_size = k.c.size();
    r.delta = in.delta;
    r.epsilon = in.delta / Rational(3);
    r.claim_bb_bound = k.claim.lower_bound;
    r.identity_ok = k.identity_ok;
    r.corollary1_ok = !k.c.empty();
    r.bound_ratio = power_decimal({{Rational(k.c.size()), 1}, {Rational(r.a_size), in.delta - Rational(1)}},
                                  opt.decimal_digits);
    r.constants = detail::core_constants(k, r.a_size, r.epsilon, opt.decimal_digits);
    r.constants["degeneracy_ratio"] = rational_json(degeneracy);
    r.constants["size_match_ok"] = size_ok;
    if (opt.compare_literal_construction) {
        const auto lit = build_EF(in.a, k.b, k.g1, EConstruction::literal);
        const ScalarSet lit_pi = dot_product_set(lit.e, lit.f);
        r.constants["literal_pi_size"] = lit_pi.size();
        r.constants["literal_identity_holds"] = lit_pi == k.rhs;
        r.constants["literal_equals_bb_g1_plus_aa"] = lit_pi == productset(k.bb, shift(k.aa, k.g1));
    }
    return r;
}

/// Shifted-GGP experiment: A = H' := H u {1}, so H is inside H'H' and |H'H'| is
/// comparable to |H|. Running the pipeline on (H', G) and checking (H+1) \ G
/// directly.
struct Corollary2Result {
    MainReport report;
    ScalarSet h;
    ScalarSet h_shift_outside_g;  ///< (H+1) \ G
    bool h_inside_hprime_sq = false;
    bool ok = false;  ///< (H+1) is not contained in G
};

inline Corollary2Result run_corollary2(const GgpSpec& h, const GgpSpec& g, const Rational& delta,
                                       const MainOptions& opt = {})
{
    Corollary2Result out{MainReport{}, enumerate_ggp(h), ScalarSet(h.domain())};
    ScalarSet hprime = out.h;
    hprime.insert(Rational(1));
    out.h_inside_hprime_sq = out.h.is_subset_of(productset(hprime, hprime));
    out.report = run_theorem_main({hprime, g, delta}, opt);
    const GgpMembership member(g);
    for (const auto& x : shift(out.h, Rational(1))) {
        if (!member.contains(x)) {
            out.h_shift_outside_g.insert(x);
        }
    }
    out.report.constants["hprime_sq_over_h"] =
        rational_json(size_ratio(productset(hprime, hprime).size(), out.h.size()));
    out.ok = !out.h_shift_outside_g.empty();
    return out;
}

}  // namespace shiftprod
