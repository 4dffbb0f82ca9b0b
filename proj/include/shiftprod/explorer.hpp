#pragma once

// Search for pairs (B, C) whose product set BC covers as much of AA+1 as
// possible while both factors stay at least min_factor_size large.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shiftprod/errors.hpp"
#include "shiftprod/numeric.hpp"
#include "shiftprod/report.hpp"
#include "shiftprod/setalg.hpp"

namespace shiftprod {

struct CoverParams {
    std::size_t min_factor_size = 2;
    Rational coverage_target{1};
    std::uint64_t search_budget = 200'000;
    /// Admissible pairs satisfy |BC| <= max_product_ratio * |AA+1|; unset means
    /// no limit on |BC|.
    std::optional<Rational> max_product_ratio = Rational(1);
    /// Universes up to this size are searched exhaustively.
    std::size_t universe_cutoff = 12;
};

struct CoverQuery {
    ScalarSet a;
    CoverParams params;
};

struct CoverResult {
    ScalarSet best_b;
    ScalarSet best_c;
    std::uint64_t hit_count = 0;
    Rational coverage_fraction;  ///< hit_count / |AA+1|
    bool exhaustive = false;
    std::uint64_t target_size = 0;
    std::uint64_t universe_size = 0;
    std::uint64_t evaluations = 0;
};

/// T/T together with T: every candidate factor considered for target T.
inline ScalarSet quotient_universe(const ScalarSet& target)
{
    return set_union(quotient_set(target, target), target);
}

namespace detail {

class CoverSearch {
public:
    CoverSearch(const ScalarSet& target, std::vector<Scalar> universe, const CoverParams& p)
        : target_(target), universe_(std::move(universe)), p_(p)
    {
        if (p_.max_product_ratio) {
            if (*p_.max_product_ratio < Rational(1)) {
                throw PreconditionError("max_product_ratio must be at least 1");
            }
            const Rational cap = *p_.max_product_ratio * Rational(target.size());
            mpz_class fl;
            mpz_fdiv_q(fl.get_mpz_t(), cap.numerator().get_mpz_t(), cap.denominator().get_mpz_t());
            cap_ = fl.get_ui();
        }
    }

    CoverResult run()
    {
        CoverResult out{ScalarSet(target_.domain()), ScalarSet(target_.domain()), 0, Rational(0)};
        out.target_size = target_.size();
        out.universe_size = universe_.size();
        if (universe_.size() <= p_.universe_cutoff) {
            exhaustive();
            out.exhaustive = !budget_hit_;
        } else {
            heuristic();
        }
        out.hit_count = best_hits_;
        out.evaluations = evaluations_;
        if (best_) {
            for (auto i : best_->first) {
                out.best_b.insert(universe_[i]);
            }
            for (auto i : best_->second) {
                out.best_c.insert(universe_[i]);
            }
        }
        out.coverage_fraction = size_ratio(best_hits_, target_.size());
        return out;
    }

private:
    using Index = std::vector<std::size_t>;

    bool spend()
    {
        if (evaluations_ >= p_.search_budget) {
            budget_hit_ = true;
            return false;
        }
        ++evaluations_;
        return true;
    }

    void offer(const Index& b, const Index& c, std::uint64_t hits)
    {
        if (b.size() < p_.min_factor_size || c.size() < p_.min_factor_size) {
            return;
        }
        if (!best_ || hits > best_hits_) {
            best_ = std::make_pair(b, c);
            best_hits_ = hits;
        }
    }

    bool done() const { return budget_hit_ || (best_ && best_hits_ == target_.size()); }

    // Every B (bitmask order), then a depth-first walk over C with the product
    // set grown incrementally; |BC| only grows, so exceeding the cap prunes.
    void exhaustive()
    {
        const std::size_t n = universe_.size();
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n) && !done(); ++mask) {
            if (static_cast<std::size_t>(__builtin_popcountll(mask)) < p_.min_factor_size) {
                continue;
            }
            Index b;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask >> i & 1U) {
                    b.push_back(i);
                }
            }
            Index c;
            ScalarSet products(target_.domain());
            walk_c(b, c, 0, products, 0);
        }
    }

    void walk_c(const Index& b, Index& c, std::size_t next, const ScalarSet& products, std::uint64_t hits)
    {
        for (std::size_t i = next; i < universe_.size() && !done(); ++i) {
            if (!spend()) {
                return;
            }
            ScalarSet grown = products;
            std::uint64_t grown_hits = hits;
            for (auto bi : b) {
                Scalar prod = universe_[bi] * universe_[i];
                const bool hit = target_.contains(prod);
                if (grown.insert(std::move(prod)) && hit) {
                    ++grown_hits;
                }
            }
            if (cap_ && grown.size() > *cap_) {
                continue;
            }
            c.push_back(i);
            offer(b, c, grown_hits);
            walk_c(b, c, i + 1, grown, grown_hits);
            c.pop_back();
        }
    }

    // C(B) = { c in U : bc in T for all b in B } keeps BC inside T. Seeds are
    // single elements and pairs, each grown greedily while |C(B)| stays
    // admissible and the covered count rises.
    void heuristic()
    {
        const std::size_t n = universe_.size();
        std::vector<std::vector<bool>> compat(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                compat[i][j] = target_.contains(universe_[i] * universe_[j]);
            }
        }
        const auto c_of = [&](const Index& b) {
            Index c;
            for (std::size_t j = 0; j < n; ++j) {
                if (std::all_of(b.begin(), b.end(), [&](std::size_t i) { return compat[i][j]; })) {
                    c.push_back(j);
                }
            }
            return c;
        };
        const auto covered = [&](const Index& b, const Index& c) {
            ScalarSet prods(target_.domain());
            for (auto i : b) {
                for (auto j : c) {
                    prods.insert(universe_[i] * universe_[j]);
                }
            }
            return static_cast<std::uint64_t>(prods.size());
        };
        const auto grow = [&](Index b) {
            Index c = c_of(b);
            std::uint64_t hits = covered(b, c);
            offer(b, c, hits);
            while (!done()) {
                std::optional<std::pair<Index, std::uint64_t>> step;
                Index step_c;
                for (std::size_t u = 0; u < n && !done(); ++u) {
                    if (std::find(b.begin(), b.end(), u) != b.end() || !spend()) {
                        continue;
                    }
                    Index nb = b;
                    nb.insert(std::upper_bound(nb.begin(), nb.end(), u), u);
                    Index nc = c_of(nb);
                    if (nc.size() < p_.min_factor_size) {
                        continue;
                    }
                    const std::uint64_t h = covered(nb, nc);
                    if (h > hits && (!step || h > step->second)) {
                        step = std::make_pair(std::move(nb), h);
                        step_c = std::move(nc);
                    }
                }
                if (!step) {
                    break;
                }
                b = std::move(step->first);
                c = std::move(step_c);
                hits = step->second;
                offer(b, c, hits);
            }
        };
        if (p_.min_factor_size <= 1) {
            const auto one = std::find(universe_.begin(), universe_.end(), target_.begin()->one());
            if (one != universe_.end() && spend()) {
                grow({static_cast<std::size_t>(one - universe_.begin())});
            }
            for (std::size_t i = 0; i < n && !done(); ++i) {
                if (spend()) {
                    grow({i});
                }
            }
        }
        const auto one = std::find(universe_.begin(), universe_.end(), target_.begin()->one());
        if (one != universe_.end()) {
            const auto o = static_cast<std::size_t>(one - universe_.begin());
            for (std::size_t u = 0; u < n && !done(); ++u) {
                if (u != o) {
                    free_grow(compat, o, u);
                }
            }
        }
        for (std::size_t i = 0; i < n && !done(); ++i) {
            for (std::size_t j = i + 1; j < n && !done(); ++j) {
                if (!spend() || !compat_pair_viable(compat, i, j)) {
                    continue;
                }
                grow({i, j});
            }
        }
    }

    // Starts from B = {b0, b1}, C = {} and adds one element at a time to B or C,
    // taking the move with most covered elements (ties: smaller |BC|) while
    // |BC| stays under the cap. Products outside the target are allowed; a
    // candidate must hit the target with at least one element of the other side.
    void free_grow(const std::vector<std::vector<bool>>& compat, std::size_t b0, std::size_t b1)
    {
        const std::size_t n = universe_.size();
        Index b{std::min(b0, b1), std::max(b0, b1)};
        Index c;
        ScalarSet products(target_.domain());
        std::uint64_t hits = 0;
        std::vector<Scalar> fresh;
        // New products and new hits from adding v against `fixed`.
        const auto gain = [&](const Index& fixed, std::size_t v) {
            fresh.clear();
            std::uint64_t h = 0;
            for (auto f : fixed) {
                Scalar prod = universe_[f] * universe_[v];
                if (products.contains(prod) || std::find(fresh.begin(), fresh.end(), prod) != fresh.end()) {
                    continue;
                }
                h += target_.contains(prod) ? 1 : 0;
                fresh.push_back(std::move(prod));
            }
            return std::make_pair(static_cast<std::uint64_t>(fresh.size()), h);
        };
        while (!done()) {
            const bool short_of_size = b.size() < p_.min_factor_size || c.size() < p_.min_factor_size;
            struct Move {
                bool to_c;
                std::size_t v;
                std::uint64_t hits;
                std::size_t size;
            };
            std::optional<Move> bestm;
            for (int side = 0; side < 2 && !done(); ++side) {
                const bool to_c = side == 0;
                const Index& grown = to_c ? c : b;
                const Index& fixed = to_c ? b : c;
                if (fixed.empty()) {
                    continue;
                }
                for (std::size_t v = 0; v < n && !done(); ++v) {
                    if (std::find(grown.begin(), grown.end(), v) != grown.end()
                        || std::none_of(fixed.begin(), fixed.end(), [&](std::size_t f) { return compat[f][v]; })
                        || !spend()) {
                        continue;
                    }
                    const auto [added, h_new] = gain(fixed, v);
                    const std::size_t size = products.size() + added;
                    const std::uint64_t h = hits + h_new;
                    if (cap_ && size > *cap_) {
                        continue;
                    }
                    if (!short_of_size && h <= hits) {
                        continue;
                    }
                    if (!bestm || h > bestm->hits || (h == bestm->hits && size < bestm->size)) {
                        bestm = Move{to_c, v, h, size};
                    }
                }
            }
            if (!bestm) {
                return;
            }
            Index& grown = bestm->to_c ? c : b;
            gain(bestm->to_c ? b : c, bestm->v);
            for (auto& prod : fresh) {
                products.insert(std::move(prod));
            }
            hits = bestm->hits;
            grown.insert(std::upper_bound(grown.begin(), grown.end(), bestm->v), bestm->v);
            offer(b, c, hits);
        }
    }

    bool compat_pair_viable(const std::vector<std::vector<bool>>& compat, std::size_t i, std::size_t j) const
    {
        std::size_t count = 0;
        for (std::size_t k = 0; k < compat.size(); ++k) {
            if (compat[i][k] && compat[j][k]) {
                ++count;
            }
        }
        return count >= p_.min_factor_size;
    }

    const ScalarSet& target_;
    std::vector<Scalar> universe_;
    CoverParams p_;
    std::optional<std::uint64_t> cap_;
    std::optional<std::pair<Index, Index>> best_;
    std::uint64_t best_hits_ = 0;
    std::uint64_t evaluations_ = 0;
    bool budget_hit_ = false;
};

}  // namespace detail

/// Best (B, C) over subsets of `universe` for covering `target`.
inline CoverResult search_cover(const ScalarSet& target, const ScalarSet& universe, const CoverParams& params)
{
    require_same_domain(target.domain(), universe.domain());
    if (params.search_budget == 0) {
        throw PreconditionError("search budget must be at least 1");
    }
    if (params.min_factor_size == 0) {
        throw PreconditionError("min_factor_size must be at least 1");
    }
    if (params.coverage_target.sign() <= 0 || params.coverage_target > Rational(1)) {
        throw PreconditionError("coverage target must lie in (0, 1]");
    }
    detail::CoverSearch search(target, universe.sorted(), params);
    return search.run();
}

inline CoverResult search_cover(const ScalarSet& target, const CoverParams& params)
{
    return search_cover(target, quotient_universe(target), params);
}

/// Searches factors for AA+1 over the quotient universe of AA+1.
inline CoverResult search_bc(const CoverQuery& query)
{
    if (query.a.empty()) {
        throw PreconditionError("A must be nonempty");
    }
    if (query.a.size() < 2) {
        throw PreconditionError("|A| must be at least 2");
    }
    const ScalarSet target = shift(productset(query.a, query.a), query.a.begin()->one());
    return search_cover(target, query.params);
}

/// Coverage reaches the target with both factors at least min_factor_size >= 2.
inline bool tension(const CoverResult& r, const CoverParams& p)
{
    return p.min_factor_size >= 2 && r.best_b.size() >= p.min_factor_size && r.best_c.size() >= p.min_factor_size
           && r.coverage_fraction >= p.coverage_target && r.hit_count > 0;
}

struct ScanRow {
    std::uint64_t instance_id = 0;
    std::uint64_t a_size = 0;
    std::uint64_t aa1_size = 0;
    CoverResult result;
    bool tension_flag = false;
};

/// One search per instance, in instance order. Instances with |A| < 2 still
/// get a row, searched directly on their AA+1.
inline std::vector<ScanRow> conjecture_scan(const std::vector<ScalarSet>& family, const CoverParams& params)
{
    std::vector<ScanRow> rows;
    rows.reserve(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) {
        const ScalarSet& a = family[i];
        ScanRow row;
        row.instance_id = i;
        row.a_size = a.size();
        const ScalarSet target =
            a.empty() ? ScalarSet(a.domain()) : shift(productset(a, a), a.begin()->one());
        row.aa1_size = target.size();
        row.result = search_cover(target, params);
        row.tension_flag = tension(row.result, params);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json to_json(const ScanRow& row)
{
    Json j = Json::object();
    j["instance_id"] = row.instance_id;
    j["a_size"] = row.a_size;
    j["aa1_size"] = row.aa1_size;
    j["b_size"] = row.result.best_b.size();
    j["c_size"] = row.result.best_c.size();
    j["hit_count"] = row.result.hit_count;
    j["coverage_fraction"] = rational_json(row.result.coverage_fraction);
    j["exhaustive"] = row.result.exhaustive;
    j["tension_flag"] = row.tension_flag;
    return j;
}

}  // namespace shiftprod
