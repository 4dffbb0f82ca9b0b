#include <gtest/gtest.h>

#include "oracles.hpp"
#include "shiftprod/errors.hpp"
#include "shiftprod/generators.hpp"
#include "shiftprod/setalg.hpp"

using namespace shiftprod;

namespace {

Rational q(std::int64_t n, std::int64_t d) { return Rational(mpz_class(n), mpz_class(d)); }

ScalarSet empty_q() { return ScalarSet(Domain::rationals()); }

PointSet2 points(std::initializer_list<std::pair<std::int64_t, std::int64_t>> pts)
{
    PointSet2 out(Domain::rationals());
    for (const auto& [x, y] : pts) {
        out.insert(Point2(Scalar(x), Scalar(y)));
    }
    return out;
}

ScalarSet random_rational_set(Rng& rng, std::size_t max_size)
{
    ScalarSet out(Domain::rationals());
    const auto n = uniform_in(rng, 0, static_cast<std::int64_t>(max_size));
    for (std::int64_t i = 0; i < n; ++i) {
        out.insert(q(uniform_in(rng, -9, 9), uniform_in(rng, 1, 4)));
    }
    return out;
}

}  // namespace

TEST(SetAlgebra, Sumset)
{
    EXPECT_EQ(sumset(rationals({1, 2}), rationals({1, 2})), rationals({2, 3, 4}));
    EXPECT_EQ(sumset(rationals({3, -4, 7}), rationals({0})), rationals({3, -4, 7}));
    EXPECT_EQ(sumset(rationals({1, 2, 4}), rationals({1, 2, 4})), rationals({2, 3, 4, 5, 6, 8}));
    EXPECT_TRUE(sumset(empty_q(), rationals({1})).empty());
}

TEST(SetAlgebra, Productset)
{
    EXPECT_EQ(productset(rationals({1, 2}), rationals({1, 2})), rationals({1, 2, 4}));
    EXPECT_EQ(productset(rationals({3, -4, 7}), rationals({1})), rationals({3, -4, 7}));
    EXPECT_EQ(productset(rationals({2, 3, 5}), rationals({2, 3, 5})), rationals({4, 6, 9, 10, 15, 25}));
}

TEST(SetAlgebra, ShiftAndScale)
{
    EXPECT_EQ(shift(rationals({1, 2, 4}), Scalar(1)), rationals({2, 3, 5}));
    EXPECT_EQ(shift(rationals({-1}), Scalar(1)), rationals({0}));
    EXPECT_TRUE(shift(empty_q(), Scalar(1)).empty());
    EXPECT_EQ(scale(rationals({1, 2, 4}), Scalar(2)), rationals({2, 4, 8}));
    EXPECT_EQ(scale(rationals({5, 6}), Scalar(1)), rationals({5, 6}));
    EXPECT_EQ(scale(rationals({1, 2}), Scalar(0)), rationals({0}));
}

TEST(SetAlgebra, MinusAndIntersect)
{
    EXPECT_EQ(set_minus(rationals({2, 3, 5}), rationals({1, 2, 4})), rationals({3, 5}));
    EXPECT_TRUE(set_minus(rationals({2, 3, 5}), rationals({2, 3, 5})).empty());
    EXPECT_EQ(set_intersect(rationals({2, 3, 5}), rationals({1, 2, 4})), rationals({2}));
}

TEST(SetAlgebra, DotProducts)
{
    EXPECT_EQ(dot_product_set(points({{1, 0}, {0, 1}}), points({{1, 0}, {0, 1}})), rationals({0, 1}));
    EXPECT_EQ(dot_product_set(points({{1, 1}}), points({{2, 3}})), rationals({5}));
    EXPECT_EQ(dot_product_set(points({{2, 2}, {2, 4}}), points({{1, 1}, {1, 2}})), rationals({4, 6, 10}));
}

TEST(SetAlgebra, Collinear)
{
    EXPECT_TRUE(collinear(points({{0, 0}, {1, 1}, {2, 2}})));
    EXPECT_FALSE(collinear(points({{0, 0}, {1, 1}, {1, 2}})));
    EXPECT_TRUE(collinear(points({{5, 7}})));
    EXPECT_TRUE(collinear(points({})));
    EXPECT_TRUE(collinear(points({{1, 0}, {1, 5}, {1, -3}})));
}

TEST(SetAlgebra, ExpansionRatios)
{
    const auto r1 = expansion_ratios(rationals({1, 2, 4, 8}));
    EXPECT_EQ(r1.sum_ratio, q(10, 4));
    EXPECT_EQ(r1.prod_ratio, q(7, 4));
    const auto r2 = expansion_ratios(rationals({0}));
    EXPECT_EQ(r2.sum_ratio, Rational(1));
    EXPECT_EQ(r2.prod_ratio, Rational(1));
    const auto r3 = expansion_ratios(rationals({1, 2, 3}));
    EXPECT_EQ(r3.sum_ratio, q(5, 3));
    EXPECT_EQ(r3.prod_ratio, Rational(2));
    EXPECT_THROW(expansion_ratios(empty_q()), PreconditionError);
}

TEST(SetAlgebra, DomainMismatch)
{
    const PrimeField f(7);
    const ScalarSet a = residues(f, {1, 2});
    EXPECT_THROW(sumset(a, rationals({1})), DomainMismatch);
    EXPECT_THROW(productset(rationals({1}), a), DomainMismatch);
    EXPECT_THROW(shift(a, Scalar(1)), DomainMismatch);
    EXPECT_THROW(set_minus(a, rationals({1})), DomainMismatch);
    ScalarSet b(Domain::rationals());
    EXPECT_THROW(b.insert(Scalar(f.element(1))), DomainMismatch);
}

TEST(SetAlgebra, FieldMode)
{
    const PrimeField f(7);
    EXPECT_EQ(productset(residues(f, {1, 2, 4}), residues(f, {1, 2, 4})), residues(f, {1, 2, 4}));
    EXPECT_EQ(shift(residues(f, {6}), Scalar(f.element(1))), residues(f, {0}));
    EXPECT_EQ(sumset(residues(f, {0, 1, 2, 3}), residues(f, {0, 4})), residues(f, {0, 1, 2, 3, 4, 5, 6}));
}

TEST(SetAlgebra, AgreesWithOrderedOracle)
{
    Rng rng(2024);
    for (int i = 0; i < 200; ++i) {
        const ScalarSet a = random_rational_set(rng, 7);
        const ScalarSet b = random_rational_set(rng, 7);
        const auto sa = oracle::to_set(a);
        const auto sb = oracle::to_set(b);
        EXPECT_EQ(oracle::to_set(sumset(a, b)), oracle::sums(sa, sb));
        EXPECT_EQ(oracle::to_set(productset(a, b)), oracle::products(sa, sb));
    }
}

TEST(SetAlgebra, CommutativeAndAssociative)
{
    Rng rng(99);
    for (int i = 0; i < 100; ++i) {
        const ScalarSet a = random_rational_set(rng, 5);
        const ScalarSet b = random_rational_set(rng, 5);
        const ScalarSet c = random_rational_set(rng, 5);
        EXPECT_EQ(sumset(a, b), sumset(b, a));
        EXPECT_EQ(productset(a, b), productset(b, a));
        EXPECT_EQ(sumset(sumset(a, b), c), sumset(a, sumset(b, c)));
        EXPECT_EQ(productset(productset(a, b), c), productset(a, productset(b, c)));
    }
}

TEST(SetAlgebra, ShiftIsInvertible)
{
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const ScalarSet a = random_rational_set(rng, 8);
        const Scalar c(q(uniform_in(rng, -9, 9), uniform_in(rng, 1, 5)));
        const ScalarSet s = shift(a, c);
        EXPECT_EQ(s.size(), a.size());
        EXPECT_EQ(shift(s, -c), a);
    }
}

TEST(SetAlgebra, OrderedFieldSizeBounds)
{
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        const ScalarSet a = random_rational_set(rng, 8);
        const ScalarSet b = random_rational_set(rng, 8);
        if (a.empty() || b.empty()) {
            continue;
        }
        EXPECT_GE(sumset(a, b).size(), a.size() + b.size() - 1);
        const ScalarSet aa = productset(a, a);
        EXPECT_LE(aa.size(), a.size() * a.size());

        const ScalarSet pa = random_integer_set(rng, a.size(), 1, 40);
        const ScalarSet pb = random_integer_set(rng, b.size(), 1, 40);
        EXPECT_GE(productset(pa, pb).size(), pa.size() + pb.size() - 1);
        EXPECT_GE(productset(pa, pa).size(), pa.size());
    }
}

TEST(SetAlgebra, DotProductSymmetryAndBound)
{
    Rng rng(8);
    const PrimeField f(11);
    for (int i = 0; i < 50; ++i) {
        const PointSet2 e = random_field_points(rng, f, static_cast<std::size_t>(uniform_in(rng, 1, 15)));
        const PointSet2 g = random_field_points(rng, f, static_cast<std::size_t>(uniform_in(rng, 1, 15)));
        const ScalarSet pi = dot_product_set(e, g);
        EXPECT_EQ(pi, dot_product_set(g, e));
        EXPECT_LE(pi.size(), e.size() * g.size());
        std::vector<oracle::Pt> ve;
        std::vector<oracle::Pt> vg;
        for (const auto& p : e) {
            ve.push_back({p.x, p.y});
        }
        for (const auto& p : g) {
            vg.push_back({p.x, p.y});
        }
        EXPECT_EQ(oracle::to_set(pi), oracle::dots(ve, vg));
    }
}

TEST(SetAlgebra, MinusAndIntersectPartition)
{
    Rng rng(21);
    for (int i = 0; i < 100; ++i) {
        const ScalarSet a = random_rational_set(rng, 8);
        const ScalarSet b = random_rational_set(rng, 8);
        const ScalarSet in = set_intersect(a, b);
        const ScalarSet out = set_minus(a, b);
        EXPECT_TRUE(set_intersect(in, out).empty());
        EXPECT_EQ(set_union(in, out), a);
    }
}

TEST(SetAlgebra, FormatAndParse)
{
    const ScalarSet a = rationals({5, -1, 3});
    EXPECT_EQ(format_set(a), "{-1, 3, 5}");
    EXPECT_EQ(parse_set("{ 5, -1,3 }"), a);
    EXPECT_EQ(parse_set("{}"), empty_q());
    EXPECT_EQ(parse_set("{1/2, 2/4}").size(), 1U);
    const PrimeField f(7);
    EXPECT_EQ(parse_set("{1 mod 7, 9 mod 7}"), residues(f, {1, 2}));
    EXPECT_EQ(parse_set("{1, 8}", Domain::field(7)), residues(f, {1}));
    EXPECT_EQ(format_set(residues(f, {4, 1})), "{1 mod 7, 4 mod 7}");
    EXPECT_THROW(parse_set("{1, 2"), ParseError);
    EXPECT_THROW(parse_set("{1 mod 7, 2}"), ParseError);
    const PointSet2 p = points({{1, 2}, {0, 1}});
    EXPECT_EQ(format_points(p), "{(0, 1), (1, 2)}");
    EXPECT_EQ(parse_points(format_points(p)), p);
}
