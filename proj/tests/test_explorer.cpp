#include <gtest/gtest.h>

#include "oracles.hpp"
#include "shiftprod/errors.hpp"
#include "shiftprod/explorer.hpp"
#include "shiftprod/generators.hpp"

using namespace shiftprod;

namespace {

Rational q(std::int64_t n, std::int64_t d) { return Rational(mpz_class(n), mpz_class(d)); }

std::uint64_t recount(const ScalarSet& target, const CoverResult& r)
{
    return set_intersect(target, productset(r.best_b, r.best_c)).size();
}

ScalarSet target_of(const ScalarSet& a) { return shift(productset(a, a), Scalar(1)); }

}  // namespace

TEST(Explorer, SmallestInstance)
{
    const ScalarSet a = rationals({1, 2});
    const CoverResult r = search_bc({a, {}});
    EXPECT_TRUE(r.exhaustive);
    EXPECT_EQ(r.target_size, 3U);
    EXPECT_EQ(r.hit_count, 2U);
    EXPECT_EQ(r.coverage_fraction, q(2, 3));
    EXPECT_GE(r.best_b.size(), 2U);
    EXPECT_GE(r.best_c.size(), 2U);
    EXPECT_EQ(recount(target_of(a), r), r.hit_count);
    EXPECT_LE(productset(r.best_b, r.best_c).size(), 3U);
}

TEST(Explorer, StructuredTargetIsCoverable)
{
    const ScalarSet target = rationals({2, 4, 8, 16});
    const CoverResult r = search_cover(target, CoverParams{});
    EXPECT_EQ(r.hit_count, 4U);
    EXPECT_EQ(r.coverage_fraction, Rational(1));
    EXPECT_EQ(productset(r.best_b, r.best_c), target);
}

TEST(Explorer, SingletonFactorCoversEverything)
{
    Rng rng(8);
    CoverParams p;
    p.min_factor_size = 1;
    for (int i = 0; i < 30; ++i) {
        const ScalarSet a = random_integer_set(rng, static_cast<std::size_t>(uniform_in(rng, 2, 6)), 1, 30);
        const CoverResult r = search_bc({a, p});
        EXPECT_EQ(r.coverage_fraction, Rational(1)) << format_set(a);
        EXPECT_EQ(recount(target_of(a), r), r.hit_count);
        EXPECT_FALSE(tension(r, p));
    }
}

TEST(Explorer, HitCountIsConsistentAndRespectsCap)
{
    Rng rng(9);
    for (int i = 0; i < 20; ++i) {
        const ScalarSet a = random_integer_set(rng, static_cast<std::size_t>(uniform_in(rng, 2, 5)), 1, 25);
        const CoverResult r = search_bc({a, {}});
        const ScalarSet t = target_of(a);
        EXPECT_EQ(recount(t, r), r.hit_count);
        EXPECT_LE(productset(r.best_b, r.best_c).size(), t.size());
        EXPECT_GE(r.hit_count, 2U);
        EXPECT_EQ(r.coverage_fraction, Rational(mpz_class(r.hit_count), mpz_class(t.size())));
    }
}

TEST(Explorer, ExhaustiveTierMatchesDoubleSubsetOracle)
{
    Rng rng(10);
    for (int i = 0; i < 25; ++i) {
        const auto n = static_cast<std::size_t>(uniform_in(rng, 3, 7));
        ScalarSet universe(Domain::rationals());
        while (universe.size() < n) {
            universe.insert(Scalar(q(uniform_in(rng, 1, 8), uniform_in(rng, 1, 3))));
        }
        ScalarSet target(Domain::rationals());
        const auto tn = static_cast<std::size_t>(uniform_in(rng, 2, 6));
        while (target.size() < tn) {
            target.insert(Scalar(q(uniform_in(rng, 1, 12), uniform_in(rng, 1, 2))));
        }
        for (std::size_t m : {1U, 2U}) {
            for (bool capped : {true, false}) {
                CoverParams p;
                p.min_factor_size = m;
                if (!capped) {
                    p.max_product_ratio.reset();
                }
                const CoverResult r = search_cover(target, universe, p);
                ASSERT_TRUE(r.exhaustive);
                const long best = oracle::best_cover(universe.sorted(), oracle::to_set(target), m,
                                                     capped ? std::optional<std::size_t>(target.size()) : std::nullopt);
                if (best < 0) {
                    EXPECT_TRUE(r.best_b.empty());
                } else {
                    EXPECT_EQ(static_cast<long>(r.hit_count), best) << format_set(universe) << " " << format_set(target);
                    EXPECT_EQ(recount(target, r), r.hit_count);
                }
            }
        }
    }
}

TEST(Explorer, Deterministic)
{
    const ScalarSet a = rationals({2, 3, 7, 11, 13});
    const CoverResult r1 = search_bc({a, {}});
    const CoverResult r2 = search_bc({a, {}});
    EXPECT_EQ(r1.best_b, r2.best_b);
    EXPECT_EQ(r1.best_c, r2.best_c);
    EXPECT_EQ(r1.hit_count, r2.hit_count);
    EXPECT_EQ(r1.evaluations, r2.evaluations);
}

TEST(Explorer, BudgetBoundsTheSearch)
{
    CoverParams p;
    p.search_budget = 50;
    const CoverResult r = search_bc({rationals({1, 2, 3}), p});
    EXPECT_LE(r.evaluations, 50U);
    EXPECT_FALSE(r.exhaustive);
}

TEST(Explorer, Preconditions)
{
    CoverParams zero;
    zero.search_budget = 0;
    EXPECT_THROW(search_bc({rationals({1, 2}), zero}), PreconditionError);
    EXPECT_THROW(search_bc({ScalarSet(Domain::rationals()), {}}), PreconditionError);
    EXPECT_THROW(search_bc({rationals({1}), {}}), PreconditionError);
    CoverParams bad;
    bad.coverage_target = q(3, 2);
    EXPECT_THROW(search_bc({rationals({1, 2}), bad}), PreconditionError);
    bad.coverage_target = Rational(0);
    EXPECT_THROW(search_bc({rationals({1, 2}), bad}), PreconditionError);
    CoverParams ratio;
    ratio.max_product_ratio = q(1, 2);
    EXPECT_THROW(search_bc({rationals({1, 2}), ratio}), PreconditionError);
}

TEST(ConjectureScan, Families)
{
    std::vector<ScalarSet> family{rationals({1}), geometric_set(Scalar(2), 4), rationals({1, 2, 3})};
    const auto rows = conjecture_scan(family, CoverParams{});
    ASSERT_EQ(rows.size(), 3U);
    EXPECT_EQ(rows[0].aa1_size, 1U);
    EXPECT_EQ(rows[0].result.hit_count, 0U);
    EXPECT_FALSE(rows[0].tension_flag);
    EXPECT_EQ(rows[1].a_size, 4U);
    EXPECT_EQ(rows[1].aa1_size, 7U);
    EXPECT_LT(rows[1].result.coverage_fraction, Rational(1));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].instance_id, i);
    }
    const Json j = to_json(rows[2]);
    std::vector<std::string> keys;
    for (const auto& item : j.items()) {
        keys.push_back(item.key());
    }
    EXPECT_EQ(keys, (std::vector<std::string>{"instance_id", "a_size", "aa1_size", "b_size", "c_size", "hit_count",
                                              "coverage_fraction", "exhaustive", "tension_flag"}));
}

TEST(ConjectureScan, RandomSetsShowNoTension)
{
    Rng rng(7);
    std::vector<ScalarSet> family;
    for (std::size_t n = 3; n <= 5; ++n) {
        for (int k = 0; k < 3; ++k) {
            family.push_back(random_integer_set(rng, n, 1, 30));
        }
    }
    for (const auto& row : conjecture_scan(family, CoverParams{})) {
        EXPECT_FALSE(row.tension_flag) << row.instance_id;
    }
}
