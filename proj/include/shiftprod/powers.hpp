#pragma once

// Exact evaluation of products of rational powers, prod_i base_i^(e_i) with
// rational e_i. Raising to the common exponent denominator L turns every factor
// into an integer power, so comparisons are exact and decimal expansions come
// from integer root extraction.

#include <gmpxx.h>

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "shiftprod/errors.hpp"
#include "shiftprod/numeric.hpp"

namespace shiftprod {

struct PowerTerm {
    Rational base;
    Rational exponent;
};

/// value = lifted^(1/root), with lifted an exact rational.
struct LiftedPower {
    Rational lifted;
    std::uint64_t root = 1;
};

inline LiftedPower lift(std::span<const PowerTerm> terms)
{
    mpz_class common(1);
    for (const auto& t : terms) {
        mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), t.exponent.denominator().get_mpz_t());
    }
    if (!common.fits_slong_p()) {
        throw PreconditionError("exponent denominators too large");
    }
    Rational lifted(1);
    for (const auto& t : terms) {
        if (t.base.sign() < 0) {
            throw PreconditionError("negative base in real power");
        }
        const Rational e = t.exponent * Rational(common, mpz_class(1));
        if (!e.numerator().fits_slong_p()) {
            throw PreconditionError("exponent too large");
        }
        lifted = lifted * t.base.pow(e.numerator().get_si());
    }
    return {lifted, common.get_ui()};
}

inline LiftedPower lift(std::initializer_list<PowerTerm> terms)
{
    return lift(std::span<const PowerTerm>(terms.begin(), terms.size()));
}

/// Sign of (prod base^e) - 1, exactly.
inline int compare_to_one(const LiftedPower& p)
{
    const Rational diff = p.lifted - Rational(1);
    return diff.sign();
}

/// floor(10^digits * value), rendered as a decimal string with `digits`
/// fractional digits (truncated, never rounded up).
inline std::string to_decimal(const LiftedPower& p, unsigned digits = 20)
{
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits) * p.root);
    mpz_class scaled = p.lifted.numerator() * scale;
    mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), p.lifted.denominator().get_mpz_t());
    // floor(x^(1/L)) == floor(floor(x)^(1/L)) for x >= 0.
    mpz_class root;
    mpz_root(root.get_mpz_t(), scaled.get_mpz_t(), p.root);
    std::string s = root.get_str();
    if (digits == 0) {
        return s;
    }
    if (s.size() <= digits) {
        s.insert(0, digits + 1 - s.size(), '0');
    }
    s.insert(s.size() - digits, ".");
    return s;
}

inline std::string power_decimal(std::initializer_list<PowerTerm> terms, unsigned digits = 20)
{
    return to_decimal(lift(terms), digits);
}

/// Smallest integer m >= 0 with m >= base^e, for base >= 0, e >= 0.
inline mpz_class ceil_power(const mpz_class& base, const Rational& e)
{
    if (e.sign() < 0 || base < 0) {
        throw PreconditionError("ceil_power expects non-negative base and exponent");
    }
    if (!e.numerator().fits_ulong_p() || !e.denominator().fits_ulong_p()) {
        throw PreconditionError("exponent too large");
    }
    mpz_class target;
    mpz_pow_ui(target.get_mpz_t(), base.get_mpz_t(), e.numerator().get_ui());
    const unsigned long root = e.denominator().get_ui();
    mpz_class m;
    mpz_root(m.get_mpz_t(), target.get_mpz_t(), root);
    mpz_class check;
    mpz_pow_ui(check.get_mpz_t(), m.get_mpz_t(), root);
    if (check < target) {
        m += 1;
    }
    return m;
}

}  // namespace shiftprod
