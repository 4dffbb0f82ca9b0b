#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "shiftprod/errors.hpp"
#include "shiftprod/numeric.hpp"
#include "shiftprod/setalg.hpp"
#include "shiftprod/text.hpp"

namespace shiftprod {

using ExponentVector = std::vector<std::int64_t>;

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) {
        throw PreconditionError("progression value overflows 64 bits");
    }
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw PreconditionError("progression value overflows 64 bits");
    }
    return r;
}

inline std::uint64_t checked_umul(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw PreconditionError("progression length overflows 64 bits");
    }
    return r;
}

}  // namespace detail

/// R(r0; r1..rd; l1..ld) = { r0 + sum x_j r_j : 0 <= x_j < l_j } with integer
/// generators and every l_j >= 3.
class GapSpec {
public:
    GapSpec(std::int64_t base, std::vector<std::int64_t> generators, std::vector<std::int64_t> lengths)
        : base_(base), generators_(std::move(generators)), lengths_(std::move(lengths))
    {
        if (generators_.empty()) {
            throw PreconditionError("progression needs at least one generator");
        }
        if (generators_.size() != lengths_.size()) {
            throw PreconditionError("progression has " + std::to_string(generators_.size()) + " generators but "
                                    + std::to_string(lengths_.size()) + " lengths");
        }
        for (auto l : lengths_) {
            if (l < 3) {
                throw PreconditionError("progression length " + std::to_string(l) + " is below 3");
            }
        }
        std::uint64_t n = 1;
        for (auto l : lengths_) {
            n = detail::checked_umul(n, static_cast<std::uint64_t>(l));
        }
        formal_length_ = n;
    }

    std::int64_t base() const { return base_; }
    const std::vector<std::int64_t>& generators() const { return generators_; }
    const std::vector<std::int64_t>& lengths() const { return lengths_; }
    std::size_t dimension() const { return generators_.size(); }
    std::uint64_t formal_length() const { return formal_length_; }

    GapSpec with_base(std::int64_t base) const { return GapSpec(base, generators_, lengths_); }

    std::int64_t value_at(const ExponentVector& x) const
    {
        std::int64_t v = base_;
        for (std::size_t j = 0; j < x.size(); ++j) {
            v = detail::checked_add(v, detail::checked_mul(x[j], generators_[j]));
        }
        return v;
    }

    /// Visits every exponent vector in lexicographic order (x1 slowest).
    template <class Fn>
    void for_each_vector(Fn&& fn) const
    {
        ExponentVector x(dimension(), 0);
        while (true) {
            fn(static_cast<const ExponentVector&>(x));
            std::size_t j = dimension();
            while (j > 0) {
                --j;
                if (++x[j] < lengths_[j]) {
                    break;
                }
                x[j] = 0;
                if (j == 0) {
                    return;
                }
            }
        }
    }

    /// Distinct values of the progression, ascending.
    std::vector<std::int64_t> values() const
    {
        std::vector<std::int64_t> out;
        out.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(formal_length_, 1U << 20)));
        for_each_vector([&](const ExponentVector& x) { out.push_back(value_at(x)); });
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    /// "gap r0; r1, ..., rd; l1, ..., ld"
    std::string str() const
    {
        std::string s = "gap " + std::to_string(base_) + "; ";
        for (std::size_t j = 0; j < generators_.size(); ++j) {
            s += (j ? ", " : "") + std::to_string(generators_[j]);
        }
        s += "; ";
        for (std::size_t j = 0; j < lengths_.size(); ++j) {
            s += (j ? ", " : "") + std::to_string(lengths_[j]);
        }
        return s;
    }

    static GapSpec parse(TextCursor& cur)
    {
        cur.expect_word("gap");
        const std::int64_t base = cur.int64();
        cur.expect(';');
        std::vector<std::int64_t> gens;
        do {
            gens.push_back(cur.int64());
        } while (cur.consume(','));
        cur.expect(';');
        const std::size_t lengths_pos = cur.pos();
        std::vector<std::int64_t> lens;
        do {
            lens.push_back(cur.int64());
        } while (cur.consume(','));
        try {
            return GapSpec(base, std::move(gens), std::move(lens));
        } catch (const PreconditionError& e) {
            throw ParseError(e.what(), lengths_pos);
        }
    }

    static GapSpec parse(std::string_view text)
    {
        TextCursor cur(text);
        GapSpec g = parse(cur);
        cur.expect_end();
        return g;
    }

    friend bool operator==(const GapSpec&, const GapSpec&) = default;

private:
    std::int64_t base_;
    std::vector<std::int64_t> generators_;
    std::vector<std::int64_t> lengths_;
    std::uint64_t formal_length_ = 0;
};

/// G(g0, R) = { g0^r : r in R }. Rational mode needs g0 > 0 and g0 != 1;
/// field mode needs g0 != 0.
class GgpSpec {
public:
    GgpSpec(Scalar base, GapSpec exponents) : base_(std::move(base)), exponents_(std::move(exponents))
    {
        if (base_.is_rational()) {
            const Rational& g = base_.rational();
            if (g.sign() <= 0 || g == Rational(1)) {
                throw PreconditionError("geometric base " + g.str() + " must be positive and different from 1");
            }
        } else if (base_.is_zero()) {
            throw PreconditionError("geometric base must be nonzero");
        }
    }

    const Scalar& base() const { return base_; }
    const GapSpec& exponents() const { return exponents_; }
    Domain domain() const { return base_.domain(); }
    bool is_rational() const { return base_.is_rational(); }
    std::size_t dimension() const { return exponents_.dimension(); }
    std::uint64_t formal_length() const { return exponents_.formal_length(); }

    /// "ggp g0; gap ..."
    std::string str() const { return "ggp " + base_.str() + "; " + exponents_.str(); }

    static GgpSpec parse(TextCursor& cur, Domain fallback = Domain::rationals())
    {
        cur.expect_word("ggp");
        const std::size_t base_pos = cur.pos();
        Scalar g = parse_scalar(cur, fallback);
        cur.expect(';');
        GapSpec r = GapSpec::parse(cur);
        try {
            return GgpSpec(std::move(g), std::move(r));
        } catch (const PreconditionError& e) {
            throw ParseError(e.what(), base_pos);
        }
    }

    static GgpSpec parse(std::string_view text, Domain fallback = Domain::rationals())
    {
        TextCursor cur(text);
        GgpSpec g = parse(cur, fallback);
        cur.expect_end();
        return g;
    }

    friend bool operator==(const GgpSpec&, const GgpSpec&) = default;

private:
    Scalar base_;
    GapSpec exponents_;
};

using ProgressionSpec = std::variant<GapSpec, GgpSpec>;

/// Parses either "gap ..." or "ggp ...".
inline ProgressionSpec parse_progression(std::string_view text, Domain fallback = Domain::rationals())
{
    TextCursor probe(text);
    if (probe.consume_word("ggp")) {
        return GgpSpec::parse(text, fallback);
    }
    return GapSpec::parse(text);
}

inline std::string format_progression(const ProgressionSpec& spec)
{
    return std::visit([](const auto& s) { return s.str(); }, spec);
}

// ---------------------------------------------------------------------------
// Enumeration and membership
// ---------------------------------------------------------------------------

inline ScalarSet enumerate_gap(const GapSpec& r)
{
    ScalarSet out(Domain::rationals());
    const auto vals = r.values();
    out.reserve(vals.size());
    for (auto v : vals) {
        out.insert(Rational(v));
    }
    return out;
}

namespace detail {

inline std::int64_t mod_floor(std::int64_t k, std::uint64_t m)
{
    const auto mm = static_cast<std::int64_t>(m);
    std::int64_t r = k % mm;
    return r < 0 ? r + mm : r;
}

/// Distinct exponent classes realized by a field-mode GGP (exponents mod ord(g0)).
inline std::vector<std::int64_t> reduced_exponents(const GgpSpec& g)
{
    const std::uint64_t ord = multiplicative_order(g.base());
    std::vector<std::int64_t> out;
    for (auto k : g.exponents().values()) {
        out.push_back(mod_floor(k, ord));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

inline ScalarSet enumerate_ggp(const GgpSpec& g)
{
    ScalarSet out(g.domain());
    const auto exps = g.is_rational() ? g.exponents().values() : detail::reduced_exponents(g);
    out.reserve(exps.size());
    for (auto k : exps) {
        out.insert(g.base().pow(k));
    }
    return out;
}

/// Lexicographically smallest exponent vector with value k, if any. Depth-first
/// over coordinates, pruned by the reachable range of the remaining ones.
inline std::optional<ExponentVector> gap_membership(const GapSpec& r, std::int64_t k)
{
    const std::size_t d = r.dimension();
    // Reachable [lo, hi] of sum_{i >= j} x_i r_i.
    std::vector<__int128> lo(d + 1, 0);
    std::vector<__int128> hi(d + 1, 0);
    for (std::size_t j = d; j-- > 0;) {
        const __int128 span = static_cast<__int128>(r.lengths()[j] - 1) * r.generators()[j];
        lo[j] = lo[j + 1] + std::min<__int128>(0, span);
        hi[j] = hi[j + 1] + std::max<__int128>(0, span);
    }
    ExponentVector x(d, 0);
    std::function<bool(std::size_t, __int128)> search = [&](std::size_t j, __int128 rest) -> bool {
        if (j == d) {
            return rest == 0;
        }
        if (rest < lo[j] || rest > hi[j]) {
            return false;
        }
        for (std::int64_t v = 0; v < r.lengths()[j]; ++v) {
            x[j] = v;
            if (search(j + 1, rest - static_cast<__int128>(v) * r.generators()[j])) {
                return true;
            }
        }
        return false;
    };
    if (search(0, static_cast<__int128>(k) - r.base())) {
        return x;
    }
    return std::nullopt;
}

namespace detail {

/// k >= 0 with p^k == a, for p > 1.
inline std::optional<std::int64_t> exact_exponent(mpz_class a, const mpz_class& p)
{
    std::int64_t k = 0;
    while (a != 1) {
        if (a == 0 || !mpz_divisible_p(a.get_mpz_t(), p.get_mpz_t())) {
            return std::nullopt;
        }
        mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
        ++k;
    }
    return k;
}

/// k >= 0 with g^k == x, for positive rationals g != 1 and x.
inline std::optional<std::int64_t> exact_log_nonneg(const Rational& x, const Rational& g)
{
    const auto k = g.numerator() != 1 ? exact_exponent(x.numerator(), g.numerator())
                                      : exact_exponent(x.denominator(), g.denominator());
    if (k && g.pow(*k) == x) {
        return k;
    }
    return std::nullopt;
}

}  // namespace detail

/// Integer k with g^k == x, recovered by repeated exact division.
inline std::optional<std::int64_t> exact_log(const Rational& x, const Rational& g)
{
    if (x.sign() <= 0 || g.sign() <= 0 || g == Rational(1)) {
        return std::nullopt;
    }
    if (auto k = detail::exact_log_nonneg(x, g)) {
        return k;
    }
    if (auto k = detail::exact_log_nonneg(x.inverse(), g)) {
        return -*k;
    }
    return std::nullopt;
}

/// Membership oracle for one GGP. Field mode keeps a brute-force discrete-log
/// table over the ord(g0) powers of g0 and the exponent classes of R mod ord(g0).
class GgpMembership {
public:
    explicit GgpMembership(GgpSpec spec) : spec_(std::move(spec))
    {
        if (!spec_.is_rational()) {
            order_ = multiplicative_order(spec_.base());
            const FieldElement& g = spec_.base().field_element();
            FieldElement power = g.sibling(1);
            for (std::uint64_t e = 0; e < order_; ++e) {
                dlog_.emplace(power.residue(), static_cast<std::int64_t>(e));
                power = power * g;
            }
            for (auto k : detail::reduced_exponents(spec_)) {
                classes_.insert(k);
            }
        }
    }

    const GgpSpec& spec() const { return spec_; }

    bool contains(const Scalar& x) const
    {
        require_same_domain(x.domain(), spec_.domain());
        if (spec_.is_rational()) {
            const auto k = exact_log(x.rational(), spec_.base().rational());
            return k && gap_membership(spec_.exponents(), *k).has_value();
        }
        if (x.is_zero()) {
            return false;
        }
        const auto it = dlog_.find(x.field_element().residue());
        return it != dlog_.end() && classes_.count(it->second) != 0;
    }

private:
    GgpSpec spec_;
    std::uint64_t order_ = 0;
    std::unordered_map<std::uint64_t, std::int64_t> dlog_;
    std::unordered_set<std::int64_t> classes_;
};

inline bool ggp_membership(const GgpSpec& g, const Scalar& x) { return GgpMembership(g).contains(x); }

// ---------------------------------------------------------------------------
// Properness, degeneracy, doubling bounds
// ---------------------------------------------------------------------------

inline bool is_proper(const GapSpec& r) { return r.values().size() == r.formal_length(); }

inline bool is_proper(const GgpSpec& g) { return enumerate_ggp(g).size() == g.formal_length(); }

inline bool is_proper(const ProgressionSpec& s)
{
    return std::visit([](const auto& x) { return is_proper(x); }, s);
}

namespace detail {
inline const GapSpec& gap_of(const GapSpec& r) { return r; }
inline const GapSpec& gap_of(const GgpSpec& g) { return g.exponents(); }
inline const GapSpec& gap_of(const ProgressionSpec& s)
{
    return std::visit([](const auto& x) -> const GapSpec& { return gap_of(x); }, s);
}
}  // namespace detail

/// d / (bit_length(formal_length) - 1): dimension against an integer log2 of
/// the formal length.
template <class Spec>
Rational degeneracy_ratio(const Spec& spec)
{
    const GapSpec& r = detail::gap_of(spec);
    const std::uint64_t n = r.formal_length();
    if (n < 2) {
        throw PreconditionError("degeneracy ratio needs formal length >= 2");
    }
    const auto log2 = static_cast<unsigned long>(63 - __builtin_clzll(n));
    return Rational(mpz_class(static_cast<unsigned long>(r.dimension())), mpz_class(log2));
}

template <class Spec>
bool is_degenerate(const Spec& spec, const Rational& threshold = Rational(1))
{
    return degeneracy_ratio(spec) > threshold;
}

struct PropGpResult {
    std::uint64_t size = 0;           ///< |S|
    std::uint64_t expanded_size = 0;  ///< |S+S| for a GAP, |SS| for a GGP
    std::uint64_t bound = 0;          ///< 2^d * formal length
    std::uint64_t tight_bound = 0;    ///< prod (2 l_j - 1)
    bool pass = false;                ///< expanded_size <= bound
    bool tight_pass = false;          ///< expanded_size <= tight_bound
};

namespace detail {

inline PropGpResult prop_gp_from(const GapSpec& r, std::uint64_t size, std::uint64_t expanded)
{
    PropGpResult out;
    out.size = size;
    out.expanded_size = expanded;
    std::uint64_t bound = r.formal_length();
    std::uint64_t tight = 1;
    for (auto l : r.lengths()) {
        bound = checked_umul(bound, 2);
        tight = checked_umul(tight, static_cast<std::uint64_t>(2 * l - 1));
    }
    out.bound = bound;
    out.tight_bound = tight;
    out.pass = expanded <= bound;
    out.tight_pass = expanded <= tight;
    return out;
}

}  // namespace detail

inline PropGpResult prop_gp_check(const GapSpec& r)
{
    const ScalarSet s = enumerate_gap(r);
    return detail::prop_gp_from(r, s.size(), sumset(s, s).size());
}

inline PropGpResult prop_gp_check(const GgpSpec& g)
{
    const ScalarSet s = enumerate_ggp(g);
    return detail::prop_gp_from(g.exponents(), s.size(), productset(s, s).size());
}

inline PropGpResult prop_gp_check(const ProgressionSpec& spec)
{
    return std::visit([](const auto& s) { return prop_gp_check(s); }, spec);
}

}  // namespace shiftprod
