#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "shiftprod/errors.hpp"
#include "shiftprod/numeric.hpp"
#include "shiftprod/text.hpp"

namespace shiftprod {

/// Finite set of scalars from one ground domain.
class ScalarSet {
public:
    using container_type = std::unordered_set<Scalar, ScalarHash>;
    using const_iterator = container_type::const_iterator;

    explicit ScalarSet(Domain domain = Domain::rationals()) : domain_(domain) {}

    ScalarSet(Domain domain, std::initializer_list<Scalar> elems) : domain_(domain)
    {
        for (const auto& e : elems) {
            insert(e);
        }
    }

    template <class Range>
    static ScalarSet from_range(Domain domain, const Range& elems)
    {
        ScalarSet out(domain);
        for (const auto& e : elems) {
            out.insert(Scalar(e));
        }
        return out;
    }

    Domain domain() const { return domain_; }
    std::size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }
    const_iterator begin() const { return elems_.begin(); }
    const_iterator end() const { return elems_.end(); }

    bool contains(const Scalar& s) const { return elems_.count(s) != 0; }

    bool insert(Scalar s)
    {
        if (s.domain() != domain_) {
            throw DomainMismatch("cannot insert " + s.str() + " into a set over " + domain_.str());
        }
        return elems_.insert(std::move(s)).second;
    }

    void reserve(std::size_t n) { elems_.reserve(n); }

    std::vector<Scalar> sorted() const
    {
        std::vector<Scalar> v(elems_.begin(), elems_.end());
        std::sort(v.begin(), v.end());
        return v;
    }

    bool is_subset_of(const ScalarSet& other) const
    {
        require_same_domain(domain_, other.domain_);
        return std::all_of(elems_.begin(), elems_.end(), [&](const Scalar& s) { return other.contains(s); });
    }

    friend bool operator==(const ScalarSet& a, const ScalarSet& b)
    {
        return a.domain_ == b.domain_ && a.elems_ == b.elems_;
    }

private:
    Domain domain_;
    container_type elems_;
};

/// Set of rationals from integers, e.g. rationals({1, 2, 4}).
inline ScalarSet rationals(std::initializer_list<std::int64_t> values)
{
    ScalarSet out(Domain::rationals());
    for (auto v : values) {
        out.insert(Rational(v));
    }
    return out;
}

inline ScalarSet residues(const PrimeField& field, std::initializer_list<std::int64_t> values)
{
    ScalarSet out(Domain::field(field.modulus()));
    for (auto v : values) {
        out.insert(field.element(v));
    }
    return out;
}

/// Point of the plane over one ground domain.
struct Point2 {
    Scalar x;
    Scalar y;

    Point2(Scalar px, Scalar py) : x(std::move(px)), y(std::move(py))
    {
        require_same_domain(x.domain(), y.domain());
    }

    Domain domain() const { return x.domain(); }
    std::string str() const { return "(" + x.str() + ", " + y.str() + ")"; }

    friend bool operator==(const Point2&, const Point2&) = default;
    friend bool operator<(const Point2& a, const Point2& b)
    {
        if (a.x == b.x) {
            return a.y < b.y;
        }
        return a.x < b.x;
    }
};

struct Point2Hash {
    std::size_t operator()(const Point2& p) const { return detail::hash_combine(p.x.hash(), p.y.hash()); }
};

class PointSet2 {
public:
    using container_type = std::unordered_set<Point2, Point2Hash>;
    using const_iterator = container_type::const_iterator;

    explicit PointSet2(Domain domain = Domain::rationals()) : domain_(domain) {}

    PointSet2(Domain domain, std::initializer_list<Point2> pts) : domain_(domain)
    {
        for (const auto& p : pts) {
            insert(p);
        }
    }

    Domain domain() const { return domain_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const_iterator begin() const { return points_.begin(); }
    const_iterator end() const { return points_.end(); }
    bool contains(const Point2& p) const { return points_.count(p) != 0; }
    void reserve(std::size_t n) { points_.reserve(n); }

    bool insert(Point2 p)
    {
        require_same_domain(p.domain(), domain_);
        return points_.insert(std::move(p)).second;
    }

    std::vector<Point2> sorted() const
    {
        std::vector<Point2> v(points_.begin(), points_.end());
        std::sort(v.begin(), v.end());
        return v;
    }

    friend bool operator==(const PointSet2& a, const PointSet2& b)
    {
        return a.domain_ == b.domain_ && a.points_ == b.points_;
    }

private:
    Domain domain_;
    container_type points_;
};

// ---------------------------------------------------------------------------
// Set arithmetic
// ---------------------------------------------------------------------------

namespace detail {

// Hash tables are sized for the distinct results, capped so that a large
// product of sizes does not trigger a huge up-front allocation.
constexpr std::size_t reserve_cap = std::size_t{1} << 20;

inline std::size_t pair_reserve(std::size_t a, std::size_t b)
{
    if (a != 0 && b > reserve_cap / a) {
        return reserve_cap;
    }
    return a * b;
}

template <class Op>
ScalarSet pairwise(const ScalarSet& a, const ScalarSet& b, Op op)
{
    require_same_domain(a.domain(), b.domain());
    ScalarSet out(a.domain());
    out.reserve(pair_reserve(a.size(), b.size()));
    for (const auto& x : a) {
        for (const auto& y : b) {
            out.insert(op(x, y));
        }
    }
    return out;
}

}  // namespace detail

/// A + B.
inline ScalarSet sumset(const ScalarSet& a, const ScalarSet& b)
{
    return detail::pairwise(a, b, [](const Scalar& x, const Scalar& y) { return x + y; });
}

/// AB.
inline ScalarSet productset(const ScalarSet& a, const ScalarSet& b)
{
    return detail::pairwise(a, b, [](const Scalar& x, const Scalar& y) { return x * y; });
}

/// A + c.
inline ScalarSet shift(const ScalarSet& a, const Scalar& c)
{
    require_same_domain(a.domain(), c.domain());
    ScalarSet out(a.domain());
    out.reserve(a.size());
    for (const auto& x : a) {
        out.insert(x + c);
    }
    return out;
}

/// sA.
inline ScalarSet scale(const ScalarSet& a, const Scalar& s)
{
    require_same_domain(a.domain(), s.domain());
    ScalarSet out(a.domain());
    out.reserve(a.size());
    for (const auto& x : a) {
        out.insert(s * x);
    }
    return out;
}

inline ScalarSet set_minus(const ScalarSet& a, const ScalarSet& b)
{
    require_same_domain(a.domain(), b.domain());
    ScalarSet out(a.domain());
    for (const auto& x : a) {
        if (!b.contains(x)) {
            out.insert(x);
        }
    }
    return out;
}

inline ScalarSet set_intersect(const ScalarSet& a, const ScalarSet& b)
{
    require_same_domain(a.domain(), b.domain());
    const ScalarSet& small = a.size() <= b.size() ? a : b;
    const ScalarSet& large = a.size() <= b.size() ? b : a;
    ScalarSet out(a.domain());
    for (const auto& x : small) {
        if (large.contains(x)) {
            out.insert(x);
        }
    }
    return out;
}

inline ScalarSet set_union(const ScalarSet& a, const ScalarSet& b)
{
    require_same_domain(a.domain(), b.domain());
    ScalarSet out = a;
    for (const auto& x : b) {
        out.insert(x);
    }
    return out;
}

/// {a / b : a in A, b in B, b != 0}.
inline ScalarSet quotient_set(const ScalarSet& a, const ScalarSet& b)
{
    require_same_domain(a.domain(), b.domain());
    ScalarSet out(a.domain());
    out.reserve(detail::pair_reserve(a.size(), b.size()));
    for (const auto& y : b) {
        if (y.is_zero()) {
            continue;
        }
        const Scalar inv = y.inverse();
        for (const auto& x : a) {
            out.insert(x * inv);
        }
    }
    return out;
}

/// Pi(E, F) = {x1 y1 + x2 y2 : (x1, x2) in E, (y1, y2) in F}.
inline ScalarSet dot_product_set(const PointSet2& e, const PointSet2& f)
{
    require_same_domain(e.domain(), f.domain());
    ScalarSet out(e.domain());
    out.reserve(detail::pair_reserve(e.size(), f.size()));
    for (const auto& p : e) {
        for (const auto& r : f) {
            out.insert(p.x * r.x + p.y * r.y);
        }
    }
    return out;
}

/// True iff every point lies on one affine line. Sets of at most two points
/// are trivially collinear.
inline bool collinear(const PointSet2& pts)
{
    if (pts.size() <= 2) {
        return true;
    }
    auto it = pts.begin();
    const Point2& p0 = *it++;
    const Point2& p1 = *it++;
    const Scalar dx = p1.x - p0.x;
    const Scalar dy = p1.y - p0.y;
    for (; it != pts.end(); ++it) {
        const Scalar cross = dx * (it->y - p0.y) - dy * (it->x - p0.x);
        if (!cross.is_zero()) {
            return false;
        }
    }
    return true;
}

struct ExpansionRatios {
    Rational sum_ratio;
    Rational prod_ratio;
};

/// (|A+A| / |A|, |AA| / |A|).
inline ExpansionRatios expansion_ratios(const ScalarSet& a)
{
    if (a.empty()) {
        throw PreconditionError("expansion ratios of an empty set");
    }
    const auto n = static_cast<std::uint64_t>(a.size());
    return {Rational(mpz_class(static_cast<unsigned long>(sumset(a, a).size())), mpz_class(static_cast<unsigned long>(n))),
            Rational(mpz_class(static_cast<unsigned long>(productset(a, a).size())), mpz_class(static_cast<unsigned long>(n)))};
}

// ---------------------------------------------------------------------------
// Text form: {1, 2, 4/3}, {1 mod 5, 4 mod 5}, {(1, 0), (0, 1)}
// ---------------------------------------------------------------------------

inline std::string format_set(const ScalarSet& s)
{
    std::string out = "{";
    bool first = true;
    for (const auto& x : s.sorted()) {
        if (!first) {
            out += ", ";
        }
        out += x.str();
        first = false;
    }
    return out + "}";
}

inline std::string format_points(const PointSet2& s)
{
    std::string out = "{";
    bool first = true;
    for (const auto& p : s.sorted()) {
        if (!first) {
            out += ", ";
        }
        out += p.str();
        first = false;
    }
    return out + "}";
}

/// Parses a brace-delimited scalar list. Bare integers land in `fallback`; all
/// elements must end up in one domain.
inline ScalarSet parse_set(std::string_view text, Domain fallback = Domain::rationals())
{
    TextCursor cur(text);
    cur.expect('{');
    std::vector<std::pair<Scalar, std::size_t>> elems;
    if (!cur.consume('}')) {
        do {
            const std::size_t at = cur.pos();
            elems.emplace_back(parse_scalar(cur, fallback), at);
        } while (cur.consume(','));
        cur.expect('}');
    }
    cur.expect_end();
    Domain domain = elems.empty() ? fallback : elems.front().first.domain();
    ScalarSet out(domain);
    for (auto& [s, at] : elems) {
        if (s.domain() != domain) {
            throw ParseError("element " + s.str() + " is not in " + domain.str(), at);
        }
        out.insert(std::move(s));
    }
    return out;
}

inline PointSet2 parse_points(std::string_view text, Domain fallback = Domain::rationals())
{
    TextCursor cur(text);
    cur.expect('{');
    PointSet2 out(fallback);
    bool domain_fixed = false;
    if (!cur.consume('}')) {
        do {
            const std::size_t at = cur.pos();
            cur.expect('(');
            Scalar x = parse_scalar(cur, fallback);
            cur.expect(',');
            Scalar y = parse_scalar(cur, fallback);
            cur.expect(')');
            if (x.domain() != y.domain()) {
                throw ParseError("point coordinates in different domains", at);
            }
            if (!domain_fixed) {
                out = PointSet2(x.domain());
                domain_fixed = true;
            } else if (x.domain() != out.domain()) {
                throw ParseError("point is not in " + out.domain().str(), at);
            }
            out.insert(Point2(std::move(x), std::move(y)));
        } while (cur.consume(','));
        cur.expect('}');
    }
    cur.expect_end();
    return out;
}

}  // namespace shiftprod
