#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "shiftprod/errors.hpp"
#include "shiftprod/text.hpp"

namespace shiftprod {

namespace detail {

inline std::size_t hash_combine(std::size_t seed, std::size_t v)
{
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

inline std::size_t hash_mpz(mpz_srcptr z)
{
    std::size_t h = std::hash<int>{}(mpz_sgn(z));
    const std::size_t n = mpz_size(z);
    for (std::size_t i = 0; i < n; ++i) {
        h = hash_combine(h, std::hash<mp_limb_t>{}(mpz_getlimbn(z, static_cast<mp_size_t>(i))));
    }
    return h;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m)
{
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp != 0) {
        if (exp & 1U) {
            result = mulmod(result, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1U;
    }
    return result;
}

/// Distinct prime factors by trial division, ascending.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) {
                n /= p;
            }
        }
    }
    if (n > 1) {
        out.push_back(n);
    }
    return out;
}

}  // namespace detail

/// Deterministic trial division up to sqrt(n).
inline bool is_prime(std::uint64_t n)
{
    if (n < 2) {
        return false;
    }
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Rational
// ---------------------------------------------------------------------------

/// Arbitrary-precision rational in canonical form (den > 0, gcd(|num|, den) = 1).
class Rational {
public:
    Rational() = default;

    template <std::integral T>
    Rational(T value)  // NOLINT(google-explicit-constructor)
    {
        if constexpr (std::is_signed_v<T>) {
            value_ = static_cast<long>(value);
        } else {
            value_ = static_cast<unsigned long>(value);
        }
    }

    Rational(const mpz_class& num, const mpz_class& den)
    {
        if (den == 0) {
            throw ArithmeticError("rational with zero denominator");
        }
        value_ = mpq_class(num, den);
        value_.canonicalize();
    }

    explicit Rational(mpq_class q) : value_(std::move(q)) { value_.canonicalize(); }

    const mpz_class& numerator() const { return value_.get_num(); }
    const mpz_class& denominator() const { return value_.get_den(); }
    const mpq_class& get_mpq() const { return value_; }

    int sign() const { return sgn(value_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return denominator() == 1; }

    Rational inverse() const
    {
        if (is_zero()) {
            throw ArithmeticError("inverse of zero");
        }
        return canonical(mpq_class(1) / value_);
    }

    /// g^k by square-and-multiply on numerator and denominator.
    Rational pow(std::int64_t k) const
    {
        if (k < 0 && is_zero()) {
            throw ArithmeticError("zero raised to a negative power");
        }
        const auto mag = k < 0 ? static_cast<unsigned long>(-(k + 1)) + 1UL
                               : static_cast<unsigned long>(k);
        mpz_class num;
        mpz_class den;
        mpz_pow_ui(num.get_mpz_t(), numerator().get_mpz_t(), mag);
        mpz_pow_ui(den.get_mpz_t(), denominator().get_mpz_t(), mag);
        return k < 0 ? Rational(den, num) : Rational(num, den);
    }

    std::string str() const
    {
        if (is_integer()) {
            return numerator().get_str();
        }
        return numerator().get_str() + "/" + denominator().get_str();
    }

    /// Accepts "p" or "p/q" with an optional leading sign on p.
    static Rational parse(TextCursor& cur)
    {
        std::string num(cur.signed_digits());
        if (num.front() == '+') {
            num.erase(0, 1);
        }
        mpz_class n(num, 10);
        mpz_class d(1);
        if (cur.consume('/')) {
            const std::size_t den_pos = cur.pos();
            d = mpz_class(std::string(cur.unsigned_digits()), 10);
            if (d == 0) {
                throw ParseError("zero denominator", den_pos);
            }
        }
        return Rational(n, d);
    }

    static Rational parse(std::string_view text)
    {
        TextCursor cur(text);
        Rational r = parse(cur);
        cur.expect_end();
        return r;
    }

    std::size_t hash() const
    {
        return detail::hash_combine(detail::hash_mpz(numerator().get_mpz_t()),
                                    detail::hash_mpz(denominator().get_mpz_t()));
    }

    friend Rational operator+(const Rational& a, const Rational& b) { return canonical(a.value_ + b.value_); }
    friend Rational operator-(const Rational& a, const Rational& b) { return canonical(a.value_ - b.value_); }
    friend Rational operator*(const Rational& a, const Rational& b) { return canonical(a.value_ * b.value_); }
    friend Rational operator/(const Rational& a, const Rational& b) { return a * b.inverse(); }
    Rational operator-() const { return canonical(-value_); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    // mpq arithmetic already yields canonical results.
    static Rational canonical(mpq_class q)
    {
        Rational r;
        r.value_ = std::move(q);
        return r;
    }

    mpq_class value_;
};

// ---------------------------------------------------------------------------
// Prime fields
// ---------------------------------------------------------------------------

class FieldElement;

/// F_q for a prime q < 2^32. Constructing one is the primality check.
class PrimeField {
public:
    static constexpr std::uint64_t max_modulus = std::uint64_t{1} << 32;

    explicit PrimeField(std::uint64_t q) : q_(q)
    {
        if (q >= max_modulus) {
            throw PreconditionError("modulus " + std::to_string(q) + " exceeds 2^32");
        }
        if (!is_prime(q)) {
            throw PreconditionError("q = " + std::to_string(q) + " is not prime");
        }
    }

    std::uint64_t modulus() const { return q_; }

    FieldElement element(std::int64_t value) const;
    FieldElement primitive_root() const;

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    std::uint64_t q_;
};

/// Residue in [0, q) of a prime field.
class FieldElement {
public:
    FieldElement(const PrimeField& field, std::int64_t value) : q_(field.modulus())
    {
        const auto q = static_cast<std::int64_t>(q_);
        std::int64_t r = value % q;
        if (r < 0) {
            r += q;
        }
        residue_ = static_cast<std::uint64_t>(r);
    }

    std::uint64_t residue() const { return residue_; }
    std::uint64_t modulus() const { return q_; }
    bool is_zero() const { return residue_ == 0; }

    FieldElement inverse() const
    {
        if (is_zero()) {
            throw ArithmeticError("inverse of zero in F_" + std::to_string(q_));
        }
        return raw(detail::powmod(residue_, q_ - 2, q_), q_);
    }

    FieldElement pow(std::int64_t k) const
    {
        if (k < 0) {
            if (is_zero()) {
                throw ArithmeticError("zero raised to a negative power");
            }
            // g^k = g^(k mod (q-1)) for g != 0
            const auto order = static_cast<std::int64_t>(q_ - 1);
            std::int64_t e = k % order;
            if (e < 0) {
                e += order;
            }
            return raw(detail::powmod(residue_, static_cast<std::uint64_t>(e), q_), q_);
        }
        return raw(detail::powmod(residue_, static_cast<std::uint64_t>(k), q_), q_);
    }

    /// Another element of the same field.
    FieldElement sibling(std::int64_t value) const
    {
        const auto q = static_cast<std::int64_t>(q_);
        std::int64_t r = value % q;
        return raw(static_cast<std::uint64_t>(r < 0 ? r + q : r), q_);
    }

    std::string str() const { return std::to_string(residue_) + " mod " + std::to_string(q_); }

    std::size_t hash() const
    {
        return detail::hash_combine(std::hash<std::uint64_t>{}(residue_), std::hash<std::uint64_t>{}(q_));
    }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b)
    {
        check(a, b);
        const std::uint64_t s = a.residue_ + b.residue_;
        return raw(s >= a.q_ ? s - a.q_ : s, a.q_);
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b)
    {
        check(a, b);
        return raw(a.residue_ >= b.residue_ ? a.residue_ - b.residue_ : a.residue_ + a.q_ - b.residue_, a.q_);
    }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b)
    {
        check(a, b);
        return raw(detail::mulmod(a.residue_, b.residue_, a.q_), a.q_);
    }
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }
    FieldElement operator-() const { return raw(residue_ == 0 ? 0 : q_ - residue_, q_); }

    friend bool operator==(const FieldElement&, const FieldElement&) = default;

private:
    FieldElement() = default;

    static FieldElement raw(std::uint64_t residue, std::uint64_t q)
    {
        FieldElement e;
        e.residue_ = residue;
        e.q_ = q;
        return e;
    }

    static void check(const FieldElement& a, const FieldElement& b)
    {
        if (a.q_ != b.q_) {
            throw DomainMismatch("F_" + std::to_string(a.q_) + " vs F_" + std::to_string(b.q_));
        }
    }

    std::uint64_t residue_ = 0;
    std::uint64_t q_ = 2;
};

inline FieldElement PrimeField::element(std::int64_t value) const { return FieldElement(*this, value); }

/// Smallest t >= 1 with g^t = 1. Walks down the divisors of q-1.
inline std::uint64_t multiplicative_order(const FieldElement& g)
{
    if (g.is_zero()) {
        throw ArithmeticError("multiplicative order of zero");
    }
    const std::uint64_t q = g.modulus();
    std::uint64_t t = q - 1;
    for (std::uint64_t p : detail::prime_factors(q - 1)) {
        while (t % p == 0 && detail::powmod(g.residue(), t / p, q) == 1) {
            t /= p;
        }
    }
    return t;
}

/// Smallest generator of F_q^*.
inline FieldElement PrimeField::primitive_root() const
{
    if (q_ == 2) {
        return element(1);
    }
    const auto factors = detail::prime_factors(q_ - 1);
    for (std::uint64_t g = 2; g < q_; ++g) {
        bool generator = true;
        for (std::uint64_t p : factors) {
            if (detail::powmod(g, (q_ - 1) / p, q_) == 1) {
                generator = false;
                break;
            }
        }
        if (generator) {
            return element(static_cast<std::int64_t>(g));
        }
    }
    throw ArithmeticError("no primitive root found");  // unreachable for prime q
}

// ---------------------------------------------------------------------------
// Scalars and domains
// ---------------------------------------------------------------------------

/// Ground domain tag: modulus 0 stands for the rationals.
struct Domain {
    std::uint64_t modulus = 0;

    static Domain rationals() { return {}; }
    static Domain field(std::uint64_t q) { return {q}; }

    bool is_rational() const { return modulus == 0; }
    std::string str() const { return is_rational() ? "Q" : "F_" + std::to_string(modulus); }

    friend auto operator<=>(const Domain&, const Domain&) = default;
};

inline void require_same_domain(const Domain& a, const Domain& b)
{
    if (a != b) {
        throw DomainMismatch("domain mismatch: " + a.str() + " vs " + b.str());
    }
}

/// Element of either ground domain.
class Scalar {
public:
    Scalar() = default;
    Scalar(Rational r) : value_(std::move(r)) {}  // NOLINT(google-explicit-constructor)
    Scalar(FieldElement e) : value_(e) {}          // NOLINT(google-explicit-constructor)
    template <std::integral T>
    Scalar(T v) : value_(Rational(v))  // NOLINT(google-explicit-constructor)
    {}

    bool is_rational() const { return std::holds_alternative<Rational>(value_); }
    const Rational& rational() const
    {
        if (!is_rational()) {
            throw DomainMismatch("expected a rational, got " + str());
        }
        return std::get<Rational>(value_);
    }
    const FieldElement& field_element() const
    {
        if (is_rational()) {
            throw DomainMismatch("expected a field element, got " + str());
        }
        return std::get<FieldElement>(value_);
    }

    Domain domain() const
    {
        return is_rational() ? Domain::rationals() : Domain::field(std::get<FieldElement>(value_).modulus());
    }

    bool is_zero() const
    {
        return is_rational() ? std::get<Rational>(value_).is_zero() : std::get<FieldElement>(value_).is_zero();
    }

    /// The additive (0) and multiplicative (1) identities of this scalar's domain.
    Scalar zero() const { return from_int(0); }
    Scalar one() const { return from_int(1); }
    Scalar from_int(std::int64_t v) const
    {
        if (is_rational()) {
            return Rational(v);
        }
        return std::get<FieldElement>(value_).sibling(v);
    }

    Scalar inverse() const
    {
        return std::visit([](const auto& x) -> Scalar { return x.inverse(); }, value_);
    }
    Scalar pow(std::int64_t k) const
    {
        return std::visit([k](const auto& x) -> Scalar { return x.pow(k); }, value_);
    }

    std::string str() const
    {
        return std::visit([](const auto& x) { return x.str(); }, value_);
    }

    std::size_t hash() const
    {
        return is_rational() ? std::get<Rational>(value_).hash() : ~std::get<FieldElement>(value_).hash();
    }

    friend Scalar operator+(const Scalar& a, const Scalar& b) { return combine(a, b, std::plus<>{}); }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { return combine(a, b, std::minus<>{}); }
    friend Scalar operator*(const Scalar& a, const Scalar& b) { return combine(a, b, std::multiplies<>{}); }
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return combine(a, b, std::divides<>{}); }
    Scalar operator-() const
    {
        return std::visit([](const auto& x) -> Scalar { return -x; }, value_);
    }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.value_ == b.value_; }

    /// Total order for deterministic output: rationals by value, field elements
    /// by residue, rationals before field elements.
    friend bool operator<(const Scalar& a, const Scalar& b)
    {
        if (a.is_rational() != b.is_rational()) {
            return a.is_rational();
        }
        if (a.is_rational()) {
            return std::get<Rational>(a.value_) < std::get<Rational>(b.value_);
        }
        const auto& x = std::get<FieldElement>(a.value_);
        const auto& y = std::get<FieldElement>(b.value_);
        return std::pair(x.modulus(), x.residue()) < std::pair(y.modulus(), y.residue());
    }

private:
    template <class Op>
    static Scalar combine(const Scalar& a, const Scalar& b, Op op)
    {
        if (a.is_rational() && b.is_rational()) {
            return op(std::get<Rational>(a.value_), std::get<Rational>(b.value_));
        }
        if (!a.is_rational() && !b.is_rational()) {
            return op(std::get<FieldElement>(a.value_), std::get<FieldElement>(b.value_));
        }
        throw DomainMismatch("domain mismatch: " + a.domain().str() + " vs " + b.domain().str());
    }

    std::variant<Rational, FieldElement> value_;
};

struct ScalarHash {
    std::size_t operator()(const Scalar& s) const { return s.hash(); }
};

inline Scalar scalar_add(const Scalar& a, const Scalar& b) { return a + b; }
inline Scalar scalar_mul(const Scalar& a, const Scalar& b) { return a * b; }
inline Scalar scalar_pow(const Scalar& g, std::int64_t k) { return g.pow(k); }

inline std::uint64_t multiplicative_order(const Scalar& g) { return multiplicative_order(g.field_element()); }

/// Parses "p", "p/q" or "r mod q". Bare integers are placed in `fallback`
/// (rationals by default, or F_q when the caller supplies one).
inline Scalar parse_scalar(TextCursor& cur, Domain fallback = Domain::rationals())
{
    const std::size_t start = cur.pos();
    Rational r = Rational::parse(cur);
    if (cur.consume_word("mod")) {
        const std::size_t mod_pos = cur.pos();
        const std::uint64_t q = cur.uint64();
        if (!r.is_integer()) {
            throw ParseError("field element must be an integer residue", start);
        }
        if (!r.numerator().fits_slong_p()) {
            throw ParseError("residue out of range", start);
        }
        try {
            PrimeField f(q);
            return f.element(r.numerator().get_si());
        } catch (const PreconditionError& e) {
            throw ParseError(e.what(), mod_pos);
        }
    }
    if (!fallback.is_rational()) {
        if (!r.is_integer() || !r.numerator().fits_slong_p()) {
            throw ParseError("expected an integer residue", start);
        }
        try {
            return PrimeField(fallback.modulus).element(r.numerator().get_si());
        } catch (const PreconditionError& e) {
            throw ParseError(e.what(), start);
        }
    }
    return r;
}

inline Scalar parse_scalar(std::string_view text, Domain fallback = Domain::rationals())
{
    TextCursor cur(text);
    Scalar s = parse_scalar(cur, fallback);
    cur.expect_end();
    return s;
}

}  // namespace shiftprod

template <>
struct std::hash<shiftprod::Scalar> {
    std::size_t operator()(const shiftprod::Scalar& s) const { return s.hash(); }
};
