#pragma once

// Seeded instance families. Draws go through uniform_below() rather than the
// standard distributions so a seed yields the same instance on every platform.

#include <cstdint>
#include <random>
#include <unordered_set>
#include <vector>

#include "shiftprod/errors.hpp"
#include "shiftprod/ffharness.hpp"
#include "shiftprod/numeric.hpp"
#include "shiftprod/progressions.hpp"
#include "shiftprod/setalg.hpp"

namespace shiftprod {

using Rng = std::mt19937_64;

/// Uniform integer in [0, n), by rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n)
{
    if (n == 0) {
        throw PreconditionError("empty range");
    }
    // mt19937_64 covers all of [0, 2^64); reject the short tail.
    const std::uint64_t threshold = (0 - n) % n;
    std::uint64_t x = 0;
    do {
        x = rng();
    } while (x < threshold);
    return x % n;
}

inline std::int64_t uniform_in(Rng& rng, std::int64_t lo, std::int64_t hi)
{
    if (hi < lo) {
        throw PreconditionError("empty range");
    }
    return lo + static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

/// `size` distinct integers drawn uniformly from [lo, hi].
inline std::vector<std::int64_t> sample_distinct(Rng& rng, std::size_t size, std::int64_t lo, std::int64_t hi)
{
    if (hi < lo || static_cast<std::uint64_t>(hi - lo) + 1 < size) {
        throw PreconditionError("range [" + std::to_string(lo) + ", " + std::to_string(hi) + "] has fewer than "
                                + std::to_string(size) + " integers");
    }
    std::vector<std::int64_t> out;
    std::unordered_set<std::int64_t> seen;
    while (out.size() < size) {
        const std::int64_t v = uniform_in(rng, lo, hi);
        if (seen.insert(v).second) {
            out.push_back(v);
        }
    }
    return out;
}

inline ScalarSet random_integer_set(Rng& rng, std::size_t size, std::int64_t lo, std::int64_t hi)
{
    ScalarSet out(Domain::rationals());
    for (auto v : sample_distinct(rng, size, lo, hi)) {
        out.insert(Rational(v));
    }
    return out;
}

/// {base^0, ..., base^(len-1)}.
inline ScalarSet geometric_set(const Scalar& base, std::size_t len)
{
    ScalarSet out(base.domain());
    Scalar x = base.one();
    for (std::size_t i = 0; i < len; ++i) {
        out.insert(x);
        x = x * base;
    }
    return out;
}

/// {start, start + step, ..., start + (len-1) step}.
inline ScalarSet arithmetic_set(const Scalar& start, const Scalar& step, std::size_t len)
{
    require_same_domain(start.domain(), step.domain());
    ScalarSet out(start.domain());
    Scalar x = start;
    for (std::size_t i = 0; i < len; ++i) {
        out.insert(x);
        x = x + step;
    }
    return out;
}

/// `size` distinct nonzero residues of F_q.
inline ScalarSet random_field_set(Rng& rng, const PrimeField& field, std::size_t size)
{
    ScalarSet out(Domain::field(field.modulus()));
    for (auto v : sample_distinct(rng, size, 1, static_cast<std::int64_t>(field.modulus()) - 1)) {
        out.insert(field.element(v));
    }
    return out;
}

/// `size` distinct points of F_q^2 (the origin included in the draw).
inline PointSet2 random_field_points(Rng& rng, const PrimeField& field, std::size_t size)
{
    const auto q = static_cast<std::int64_t>(field.modulus());
    PointSet2 out(Domain::field(field.modulus()));
    for (auto v : sample_distinct(rng, size, 0, q * q - 1)) {
        out.insert(Point2(field.element(v / q), field.element(v % q)));
    }
    return out;
}

/// Random GAP with d in dims, l_j in [lmin, lmax], generators in [1, gmax].
/// Redraws until the GAP is proper.
inline GapSpec random_proper_gap(Rng& rng, std::int64_t dmin, std::int64_t dmax, std::int64_t lmin,
                                 std::int64_t lmax, std::int64_t gmax, std::int64_t base_range = 3)
{
    for (int attempt = 0; attempt < 10'000; ++attempt) {
        const auto d = static_cast<std::size_t>(uniform_in(rng, dmin, dmax));
        std::vector<std::int64_t> gens;
        std::vector<std::int64_t> lens;
        for (std::size_t j = 0; j < d; ++j) {
            gens.push_back(uniform_in(rng, 1, gmax));
            lens.push_back(uniform_in(rng, lmin, lmax));
        }
        GapSpec r(uniform_in(rng, -base_range, base_range), gens, lens);
        if (is_proper(r)) {
            return r;
        }
    }
    throw PreconditionError("no proper progression found with these parameters");
}

}  // namespace shiftprod
