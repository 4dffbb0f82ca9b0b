#include <gtest/gtest.h>

#include "oracles.hpp"
#include "shiftprod/errors.hpp"
#include "shiftprod/generators.hpp"
#include "shiftprod/harness.hpp"

using namespace shiftprod;

namespace {

Rational q(std::int64_t n, std::int64_t d) { return Rational(mpz_class(n), mpz_class(d)); }

GgpSpec ggp(const Rational& base, std::int64_t r0, std::vector<std::int64_t> gens, std::vector<std::int64_t> lens)
{
    return GgpSpec(Scalar(base), GapSpec(r0, std::move(gens), std::move(lens)));
}

PointSet2 points(std::initializer_list<std::pair<std::int64_t, std::int64_t>> pts)
{
    PointSet2 out(Domain::rationals());
    for (const auto& [x, y] : pts) {
        out.insert(Point2(Scalar(x), Scalar(y)));
    }
    return out;
}

std::vector<oracle::Pt> to_pts(const PointSet2& s)
{
    std::vector<oracle::Pt> out;
    for (const auto& p : s) {
        out.push_back({p.x, p.y});
    }
    return out;
}

}  // namespace

TEST(Harness, FirstElementAndNormalize)
{
    EXPECT_EQ(first_element(ggp(2, 3, {1}, {3})), Scalar(8));
    EXPECT_EQ(first_element(ggp(2, 0, {1}, {3})), Scalar(1));
    EXPECT_EQ(first_element(ggp(q(1, 2), 2, {1}, {3})), Scalar(q(1, 4)));

    const GgpSpec g = ggp(2, 3, {1}, {3});
    EXPECT_EQ(enumerate_ggp(g), rationals({8, 16, 32}));
    EXPECT_EQ(normalize(g), ggp(2, 0, {1}, {3}));
    EXPECT_EQ(enumerate_ggp(normalize(g)), rationals({1, 2, 4}));
    EXPECT_EQ(normalize(ggp(2, 0, {1}, {3})), ggp(2, 0, {1}, {3}));
    EXPECT_EQ(enumerate_ggp(normalize(ggp(3, 1, {2}, {3}))), rationals({1, 9, 81}));
}

TEST(Harness, NormalizeScalesByFirstElement)
{
    Rng rng(6);
    for (int i = 0; i < 50; ++i) {
        const GapSpec r = random_proper_gap(rng, 1, 3, 3, 5, 6, 5);
        const GgpSpec g(Scalar(q(3, 2)), r);
        const Scalar g1 = first_element(g);
        EXPECT_EQ(enumerate_ggp(normalize(g)), scale(enumerate_ggp(g), g1.inverse()));
        EXPECT_EQ(enumerate_ggp(normalize(g)).size(), enumerate_ggp(g).size());
    }
}

TEST(Harness, BuildB)
{
    EXPECT_EQ(build_B(ggp(2, 0, {1}, {5})), rationals({1, 2, 4}));
    EXPECT_EQ(build_B(ggp(2, 0, {1}, {3})), rationals({1, 2}));
    EXPECT_EQ(build_B(ggp(3, 0, {2}, {3})), ScalarSet(Domain::rationals(), {Scalar(1), Scalar(9)}));
    EXPECT_THROW(build_B(ggp(2, 1, {1}, {3})), PreconditionError);
}

TEST(Harness, ClaimBb)
{
    const GgpSpec g5 = ggp(2, 0, {1}, {5});
    const auto c5 = claim_bb_check(g5, build_B(g5));
    EXPECT_EQ(c5.lower_bound, 2U);
    EXPECT_TRUE(c5.pass);
    const GgpSpec g33 = ggp(2, 0, {1, 3}, {3, 3});
    const auto c33 = claim_bb_check(g33, build_B(g33));
    EXPECT_EQ(c33.lower_bound, 1U);
    EXPECT_TRUE(c33.pass);
    const GgpSpec g3 = ggp(2, 0, {1}, {3});
    const auto c3 = claim_bb_check(g3, build_B(g3));
    EXPECT_EQ(c3.lower_bound, 1U);
    EXPECT_TRUE(c3.pass);
}

TEST(Harness, ClaimBbOnProperProgressions)
{
    Rng rng(31);
    for (int i = 0; i < 100; ++i) {
        const GapSpec r = random_proper_gap(rng, 1, 3, 3, 6, 9, 4);
        const GgpSpec g(Scalar(i % 2 == 0 ? Rational(2) : q(2, 5)), r);
        const ScalarSet b = build_B(normalize(g));
        const auto c = claim_bb_check(g, b);
        EXPECT_TRUE(c.pass) << g.str();
        EXPECT_TRUE(b.is_subset_of(enumerate_ggp(normalize(g))));
    }
}

TEST(Harness, EvenExponentSetDiffersFromPredicate)
{
    // R(0; 1; 5): exponents {0..4}; the predicate keeps x with 2x <= 4, the
    // even-exponent set keeps {0, 2, 4}.
    const GgpSpec g = ggp(2, 0, {1}, {5});
    EXPECT_EQ(build_B(g), rationals({1, 2, 4}));
    EXPECT_EQ(build_B_even_exponents(g), rationals({1, 4, 16}));
}

TEST(Harness, BuildEF)
{
    const auto ef = build_EF(rationals({1, 2}), rationals({1}), Scalar(2));
    EXPECT_EQ(ef.e, points({{2, 2}, {2, 4}}));
    EXPECT_EQ(ef.f, points({{1, 1}, {1, 2}}));
    const auto one = build_EF(rationals({1}), rationals({1}), Scalar(1));
    EXPECT_EQ(one.e, points({{1, 1}}));
    EXPECT_EQ(one.f, points({{1, 1}}));
    const auto sq = build_EF(rationals({1, 2}), rationals({1, 2}), Scalar(1));
    EXPECT_EQ(sq.e, points({{1, 1}, {1, 2}, {2, 2}, {2, 4}}));
    EXPECT_EQ(sq.f, sq.e);
    EXPECT_THROW(build_EF(ScalarSet(Domain::rationals()), rationals({1}), Scalar(1)), PreconditionError);
    EXPECT_THROW(build_EF(rationals({1}), rationals({1}), Scalar(0)), PreconditionError);
}

TEST(Harness, PiIdentityExamples)
{
    const auto a = pi_identity_check(rationals({1, 2}), rationals({1}), Scalar(2));
    EXPECT_EQ(a.lhs, rationals({4, 6, 10}));
    EXPECT_TRUE(a.equal);
    const auto b = pi_identity_check(rationals({1}), rationals({1}), Scalar(1));
    EXPECT_EQ(b.lhs, rationals({2}));
    EXPECT_TRUE(b.equal);
    const ScalarSet a13 = rationals({1, 3});
    const ScalarSet b12 = rationals({1, 2});
    const auto c = pi_identity_check(a13, b12, Scalar(1));
    EXPECT_TRUE(c.equal);
    EXPECT_EQ(oracle::to_set(c.lhs), oracle::identity_rhs(oracle::to_set(a13), oracle::to_set(b12), Scalar(1)));
}

TEST(Harness, PiIdentityRandomized)
{
    Rng rng(1234);
    for (int i = 0; i < 120; ++i) {
        const auto na = static_cast<std::size_t>(uniform_in(rng, 1, 7));
        const auto nb = static_cast<std::size_t>(uniform_in(rng, 1, 5));
        ScalarSet a = random_integer_set(rng, na, -12, 12);
        const ScalarSet b = random_integer_set(rng, nb, 1, 12);
        if (i % 3 == 0) {
            a = scale(a, Scalar(q(1, 3)));
        }
        const Scalar g1(q(uniform_in(rng, 1, 9), uniform_in(rng, 1, 4)));
        const auto ef = build_EF(a, b, g1);
        const auto res = pi_identity_check(a, b, g1);
        EXPECT_TRUE(res.equal);
        const auto expected = oracle::identity_rhs(oracle::to_set(a), oracle::to_set(b), g1);
        EXPECT_EQ(oracle::to_set(res.lhs), expected);
        EXPECT_EQ(oracle::dots(to_pts(ef.e), to_pts(ef.f)), expected);
    }
}

TEST(Harness, LiteralConstructionOnlyMatchesWhenFirstElementIsOne)
{
    Rng rng(55);
    for (int i = 0; i < 60; ++i) {
        const ScalarSet a = random_integer_set(rng, static_cast<std::size_t>(uniform_in(rng, 1, 5)), 1, 9);
        const ScalarSet b = random_integer_set(rng, static_cast<std::size_t>(uniform_in(rng, 1, 4)), 1, 9);
        const std::int64_t g1v = uniform_in(rng, 1, 4);
        const Scalar g1(g1v);
        const auto lit = build_EF(a, b, g1, EConstruction::literal);
        // brute force: (g1 b, b a) . (b', b' a') = b b' (g1 + a a')
        oracle::Set expected;
        for (const auto& b1 : b) {
            for (const auto& b2 : b) {
                for (const auto& a1 : a) {
                    for (const auto& a2 : a) {
                        expected.insert(b1 * b2 * (g1 + a1 * a2));
                    }
                }
            }
        }
        const ScalarSet lit_pi = dot_product_set(lit.e, lit.f);
        EXPECT_EQ(oracle::to_set(lit_pi), expected);
        const auto rhs = oracle::identity_rhs(oracle::to_set(a), oracle::to_set(b), g1);
        if (g1v == 1) {
            EXPECT_EQ(oracle::to_set(lit_pi), rhs);
        }
    }
    const auto lit = build_EF(rationals({1, 2}), rationals({1}), Scalar(2), EConstruction::literal);
    EXPECT_EQ(dot_product_set(lit.e, lit.f), rationals({3, 4, 6}));
    EXPECT_NE(dot_product_set(lit.e, lit.f), rationals({4, 6, 10}));
}

TEST(Harness, ExceptionalSet)
{
    const GgpSpec g = ggp(2, 0, {1}, {3});
    EXPECT_EQ(exceptional_set(rationals({1, 2}), g), rationals({3, 5}));
    EXPECT_TRUE(exceptional_set(rationals({1}), g).empty());
    EXPECT_TRUE(exceptional_set(rationals({0, 1}), ggp(2, 0, {1}, {3})).empty());
}

TEST(Harness, PartitionAndSizes)
{
    Rng rng(91);
    for (int i = 0; i < 60; ++i) {
        const ScalarSet a = random_integer_set(rng, static_cast<std::size_t>(uniform_in(rng, 2, 8)), 0, 16);
        const GgpSpec g(Scalar(2), random_proper_gap(rng, 1, 2, 3, 6, 3, 2));
        const ScalarSet target = shift(productset(a, a), Scalar(1));
        const ScalarSet c = exceptional_set(a, g);
        const ScalarSet gset = enumerate_ggp(g);
        const ScalarSet inside = set_intersect(target, gset);
        EXPECT_TRUE(set_intersect(c, inside).empty());
        EXPECT_EQ(set_union(c, inside), target);
        EXPECT_TRUE(c.is_subset_of(target));
        EXPECT_TRUE(set_intersect(c, gset).empty());
    }
}

TEST(Harness, InclusionNeedsProperSumset)
{
    // R(0; 1, 4; 3, 3) is proper but R+R is not; 2 and 5 lie in B while
    // 7 = 2 + 5 is not an exponent of G.
    const GgpSpec g = ggp(2, 0, {1, 4}, {3, 3});
    EXPECT_TRUE(is_proper(g));
    const ScalarSet b = build_B(g);
    EXPECT_TRUE(b.contains(Scalar(4)));
    EXPECT_TRUE(b.contains(Scalar(32)));
    EXPECT_FALSE(productset(b, b).is_subset_of(enumerate_ggp(g)));

    Rng rng(19);
    int checked = 0;
    for (int i = 0; i < 300 && checked < 100; ++i) {
        const GapSpec r = random_proper_gap(rng, 1, 3, 3, 5, 12, 4);
        const auto pr = prop_gp_check(r);
        if (pr.expanded_size != pr.tight_bound) {
            continue;
        }
        ++checked;
        const GgpSpec gg(Scalar(3), r);
        const Scalar g1 = first_element(gg);
        const ScalarSet bb = productset(build_B(normalize(gg)), build_B(normalize(gg)));
        EXPECT_TRUE(scale(bb, g1).is_subset_of(enumerate_ggp(gg))) << gg.str();
        EXPECT_TRUE(bb.is_subset_of(enumerate_ggp(normalize(gg))));
    }
    EXPECT_GE(checked, 50);
}

TEST(Harness, NonCollinearPointSets)
{
    Rng rng(23);
    for (int i = 0; i < 60; ++i) {
        const ScalarSet a = random_integer_set(rng, static_cast<std::size_t>(uniform_in(rng, 2, 6)), 1, 20);
        const ScalarSet b = random_integer_set(rng, static_cast<std::size_t>(uniform_in(rng, 2, 5)), 1, 20);
        const auto ef = build_EF(a, b, Scalar(q(uniform_in(rng, 1, 9), 2)));
        EXPECT_FALSE(collinear(ef.e));
        EXPECT_FALSE(collinear(ef.f));
        EXPECT_EQ(ef.e.size(), a.size() * b.size());
    }
}

TEST(Harness, MainPipelineExamples)
{
    const MainReport small = run_theorem_main({rationals({1, 2}), ggp(2, 0, {1}, {3}), q(1, 2)});
    EXPECT_EQ(small.c_size, 2U);
    EXPECT_EQ(small.bound_ratio, "1.41421356237309504880");
    EXPECT_TRUE(small.identity_ok);
    EXPECT_TRUE(small.corollary1_ok);
    EXPECT_TRUE(small.structural_ok());
    EXPECT_EQ(small.epsilon, q(1, 6));

    const MainReport r = run_theorem_main({rationals({1, 2, 3, 5}), ggp(2, 0, {1}, {10}), q(1, 2)});
    EXPECT_EQ(r.aa_size, 10U);
    EXPECT_EQ(r.g_formal_len, 10U);
    EXPECT_EQ(r.g_realized_size, 10U);
    EXPECT_TRUE(r.identity_ok);
    EXPECT_TRUE(r.corollary1_ok);
    EXPECT_GT(r.c_size, 0U);
    EXPECT_EQ(r.e_size, r.a_size * r.b_size);
    EXPECT_TRUE(r.structural_ok());
    EXPECT_EQ(r.constants.at("gc_size").get<std::uint64_t>(),
              productset(enumerate_ggp(ggp(2, 0, {1}, {10})), exceptional_set(rationals({1, 2, 3, 5}), ggp(2, 0, {1}, {10}))).size());
}

TEST(Harness, MainPipelinePreconditions)
{
    const GgpSpec g = ggp(2, 0, {1}, {3});
    EXPECT_THROW(run_theorem_main({rationals({1}), g, q(1, 2)}), PreconditionError);
    EXPECT_THROW(run_theorem_main({rationals({1, 2}), g, Rational(0)}), PreconditionError);
    EXPECT_THROW(run_theorem_main({rationals({1, 2}), g, Rational(1)}), PreconditionError);
    const PrimeField f(7);
    EXPECT_THROW(run_theorem_main({residues(f, {1, 2}), g, q(1, 2)}), PreconditionError);
    // |G| = 40 against |AA| = 3
    EXPECT_THROW(run_theorem_main({rationals({1, 2}), ggp(2, 0, {1}, {40}), q(1, 2)}), PreconditionError);
    // d = 2 with formal length 9: ratio 2/3, degenerate at threshold 1/2
    MainOptions strict;
    strict.degeneracy_threshold = q(1, 2);
    EXPECT_THROW(run_theorem_main({rationals({1, 2}), ggp(2, 0, {1, 3}, {3, 3}), q(1, 2)}, strict),
                 PreconditionError);
    MainOptions warn;
    warn.size_policy = SizePolicy::warn;
    const MainReport r = run_theorem_main({rationals({1, 2}), ggp(2, 0, {1}, {40}), q(1, 2)}, warn);
    EXPECT_TRUE(r.identity_ok);
    EXPECT_FALSE(r.constants.at("size_match_ok").get<bool>());
}

TEST(Harness, ReportJsonRoundTrip)
{
    MainOptions opt;
    opt.compare_literal_construction = true;
    const MainReport r = run_theorem_main({rationals({1, 2, 3, 5}), ggp(2, 1, {1}, {13}), q(1, 2)}, opt);
    const Json j = to_json(r);
    EXPECT_EQ(main_report_from_json(j), r);
    EXPECT_EQ(main_report_from_json(Json::parse(j.dump())), r);
    std::vector<std::string> keys;
    for (const auto& item : j.items()) {
        keys.push_back(item.key());
    }
    const std::vector<std::string> expected{"a_size",     "aa_size",        "g_formal_len", "g_realized_size",
                                            "b_size",     "e_size",         "pi_size",      "c_size",
                                            "epsilon",    "delta",          "claim_bb_bound", "identity_ok",
                                            "corollary1_ok", "bound_ratio", "constants"};
    EXPECT_EQ(keys, expected);
    EXPECT_FALSE(r.constants.at("literal_identity_holds").get<bool>());
    EXPECT_TRUE(r.constants.at("literal_equals_bb_g1_plus_aa").get<bool>());
}

TEST(Harness, Corollary2)
{
    // H = {1, 2, 4, 8}, H' = H, H'H' = {1, ..., 64}; G matches |AA| = 7.
    const GgpSpec h = ggp(2, 0, {1}, {4});
    const GgpSpec g = ggp(2, 0, {1}, {7});
    const Corollary2Result res = run_corollary2(h, g, q(1, 2));
    EXPECT_TRUE(res.h_inside_hprime_sq);
    EXPECT_TRUE(res.ok);
    EXPECT_EQ(res.h_shift_outside_g, rationals({3, 5, 9}));
    EXPECT_TRUE(res.report.identity_ok);
}
