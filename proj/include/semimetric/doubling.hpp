#ifndef SEMIMETRIC_DOUBLING_HPP
#define SEMIMETRIC_DOUBLING_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "generate.hpp"
#include "set_cover.hpp"
#include "space.hpp"

/**
 * @file doubling.hpp
 *
 * @brief Doubling constants (covering open balls B(x, r) by open balls of
 * radius r/2) and weak doubling constants (covering sets of diameter l by sets
 * of diameter at most l/2) of finite semimetric spaces.
 *
 * Both are computed exactly at desk scale by set-cover branch-and-bound and
 * bracketed otherwise. All balls are open unless a function says otherwise.
 */

namespace semimetric {

enum class BallKind { open, closed };

inline std::vector<std::size_t> ball(const SemimetricSpace& space, std::size_t center, double radius,
                                     BallKind kind = BallKind::open) {
    if (!(radius >= 0.0)) {
        throw ParameterError("ball radius must be non-negative, got " + detail::format_number(radius));
    }
    if (center >= space.size()) {
        throw ParameterError("ball center " + std::to_string(center) + " out of range");
    }
    std::vector<std::size_t> members;
    for (std::size_t y = 0; y < space.size(); ++y) {
        const double d = space(center, y);
        if (kind == BallKind::open ? d < radius : d <= radius) {
            members.push_back(y);
        }
    }
    return members;
}

inline constexpr std::size_t default_doubling_exact_limit = 15;
inline constexpr std::size_t default_weak_exact_limit = 12;

/// Minimum number of half-radius open balls covering one open ball; lower == upper when exact.
struct CellRequirement {
    std::size_t lower = 0;
    std::size_t upper = 0;
    std::size_t ball_size = 0;
    bool exact() const { return lower == upper; }
};

/**
 * Cover B(center, radius) by balls B(y, radius/2), y anywhere in X. Solved
 * exactly when the target ball has at most `exact_limit` points.
 */
inline CellRequirement cover_requirement(const DistanceMatrix& d, std::size_t center, double radius,
                                         std::size_t exact_limit) {
    const std::size_t n = d.size();
    std::vector<std::size_t> target;
    for (std::size_t u = 0; u < n; ++u) {
        if (d(center, u) < radius) {
            target.push_back(u);
        }
    }
    CellRequirement cell;
    cell.ball_size = target.size();
    if (target.empty()) {
        return cell;
    }
    const std::size_t t = target.size();
    std::vector<cover::Bitset> sets;
    sets.reserve(n);
    for (std::size_t y = 0; y < n; ++y) {
        cover::Bitset s(t);
        for (std::size_t k = 0; k < t; ++k) {
            if (2.0 * d(y, target[k]) < radius) {
                s.set(k);
            }
        }
        sets.push_back(std::move(s));
    }
    sets = cover::prune_dominated(std::move(sets));
    cover::Bitset universe(t);
    universe.set();
    const auto result = cover::min_cover(universe, sets, t <= exact_limit);
    cell.lower = result.lower;
    cell.upper = result.upper;
    return cell;
}

/**
 * Radii at which the doubling requirement around `center` is evaluated.
 *
 * The target ball changes only at r = d(center, u) and the half-radius balls
 * only at r = 2 d(u, v), so the requirement is constant on each interval
 * between consecutive breakpoints; one midpoint per interval plus one value
 * past the last breakpoint covers every configuration.
 */
inline std::vector<double> critical_radii(const DistanceMatrix& d, std::size_t center) {
    const std::size_t n = d.size();
    std::vector<double> breaks{0.0};
    for (std::size_t u = 0; u < n; ++u) {
        breaks.push_back(d(center, u));
        for (std::size_t v = u + 1; v < n; ++v) {
            breaks.push_back(2.0 * d(u, v));
        }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    std::vector<double> radii;
    radii.reserve(breaks.size());
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        radii.push_back(0.5 * (breaks[i] + breaks[i + 1]));
    }
    radii.push_back(breaks.back() + 1.0);
    return radii;
}

struct DoublingReport {
    std::size_t lower = 1;
    std::size_t upper = 1;
    /// Every cell was solved exactly, so lower == upper is the doubling constant.
    bool exact = true;
    std::size_t witness_center = 0;
    double witness_radius = 0.0;
    std::size_t witness_ball_size = 0;
    std::size_t critical_radii_examined = 0;
    BallKind convention = BallKind::open;

    std::size_t value() const { return upper; }
};

/**
 * Doubling constant: the maximum over centers x and radii r of the minimum
 * number of open balls of radius r/2 covering B(x, r). The witness is the
 * first cell (by center, then increasing radius) attaining the maximal lower
 * bound.
 */
inline DoublingReport doubling_constant(const DistanceMatrix& d,
                                        std::size_t exact_limit = default_doubling_exact_limit) {
    DoublingReport report;
    report.lower = 0;
    report.upper = 0;
    for (std::size_t x = 0; x < d.size(); ++x) {
        for (double r : critical_radii(d, x)) {
            ++report.critical_radii_examined;
            const auto cell = cover_requirement(d, x, r, exact_limit);
            if (!cell.exact()) {
                report.exact = false;
            }
            if (cell.lower > report.lower) {
                report.lower = cell.lower;
                report.witness_center = x;
                report.witness_radius = r;
                report.witness_ball_size = cell.ball_size;
            }
            report.upper = std::max(report.upper, cell.upper);
        }
    }
    if (report.lower == report.upper) {
        report.exact = true;
    }
    return report;
}

inline DoublingReport doubling_constant(const SemimetricSpace& space,
                                        std::size_t exact_limit = default_doubling_exact_limit) {
    return doubling_constant(space.matrix(), exact_limit);
}

// ---------------------------------------------------------------------------
// Weak doubling
// ---------------------------------------------------------------------------

struct WeakDoublingReport {
    std::size_t lower = 1;
    std::size_t upper = 1;
    bool exact = true;
    std::vector<std::size_t> witness_set;
    double witness_diameter = 0.0;
    std::size_t subsets_examined = 0;
};

namespace detail {

// Maximal cliques (Bron-Kerbosch with pivoting) of a graph on <= 64 vertices.
inline void maximal_cliques(const std::vector<std::uint64_t>& adj, std::uint64_t r, std::uint64_t p, std::uint64_t x,
                            std::vector<std::uint64_t>& out) {
    if (p == 0 && x == 0) {
        out.push_back(r);
        return;
    }
    const std::uint64_t px = p | x;
    const int pivot = std::countr_zero(px);
    std::uint64_t candidates = p & ~adj[static_cast<std::size_t>(pivot)];
    while (candidates != 0) {
        const int v = std::countr_zero(candidates);
        const std::uint64_t bit = std::uint64_t{1} << v;
        maximal_cliques(adj, r | bit, p & adj[static_cast<std::size_t>(v)], x & adj[static_cast<std::size_t>(v)], out);
        p &= ~bit;
        x |= bit;
        candidates &= ~bit;
    }
}

} // namespace detail

struct SubsetRequirement {
    std::size_t value = 1;
    double diameter = 0.0;
};

/**
 * Minimum number of sets of diameter <= diam(A)/2 covering A. Covering sets
 * may be taken inside A, where they are exactly the cliques of the graph
 * joining points at distance <= diam(A)/2; the maximal ones suffice.
 * Requires |A| <= 64.
 */
inline SubsetRequirement weak_requirement(const DistanceMatrix& d, const std::vector<std::size_t>& subset) {
    const std::size_t k = subset.size();
    if (k > 64) {
        throw ParameterError("exact weak covering supports at most 64 points per set");
    }
    SubsetRequirement req;
    for (std::size_t a : subset) {
        for (std::size_t b : subset) {
            req.diameter = std::max(req.diameter, d(a, b));
        }
    }
    if (k <= 1) {
        req.value = k;
        return req;
    }
    const double half = req.diameter / 2.0;
    std::vector<std::uint64_t> adj(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (i != j && d(subset[i], subset[j]) <= half) {
                adj[i] |= std::uint64_t{1} << j;
            }
        }
    }
    std::vector<std::uint64_t> cliques;
    const std::uint64_t all = (k == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << k) - 1);
    detail::maximal_cliques(adj, 0, all, 0, cliques);
    std::vector<cover::Bitset> sets;
    for (auto c : cliques) {
        cover::Bitset s(k, 0);
        for (std::size_t i = 0; i < k; ++i) {
            if ((c >> i) & 1U) {
                s.set(i);
            }
        }
        sets.push_back(std::move(s));
    }
    cover::Bitset universe(k);
    universe.set();
    req.value = cover::min_cover(universe, sets, true).upper;
    return req;
}

/**
 * Weak doubling constant. With n <= exact_limit every subset with at least
 * two points is examined. Larger spaces are sampled (seeded): the lower
 * bound comes from packings (points pairwise farther than diam/2 apart need
 * separate sets) on random subsets, exact covers on small samples, and the
 * upper bound is the trivial n.
 */
inline WeakDoublingReport weak_doubling_constant(const DistanceMatrix& d,
                                                 std::size_t exact_limit = default_weak_exact_limit,
                                                 std::uint64_t seed = 0, std::size_t samples = 2000) {
    const std::size_t n = d.size();
    WeakDoublingReport report;
    if (n < 2) {
        report.witness_set = n == 1 ? std::vector<std::size_t>{0} : std::vector<std::size_t>{};
        return report;
    }
    if (n <= std::min<std::size_t>(exact_limit, 24)) {
        report.lower = 0;
        const std::uint64_t limit = std::uint64_t{1} << n;
        std::vector<std::size_t> subset;
        for (std::uint64_t mask = 1; mask < limit; ++mask) {
            if (std::popcount(mask) < 2) {
                continue;
            }
            subset.clear();
            for (std::size_t i = 0; i < n; ++i) {
                if ((mask >> i) & 1U) {
                    subset.push_back(i);
                }
            }
            ++report.subsets_examined;
            const auto req = weak_requirement(d, subset);
            if (req.value > report.lower) {
                report.lower = req.value;
                report.witness_set = subset;
                report.witness_diameter = req.diameter;
            }
        }
        report.upper = report.lower;
        report.exact = true;
        return report;
    }

    report.exact = false;
    report.lower = 0;
    report.upper = n;
    std::mt19937_64 rng(seed);
    auto consider = [&](std::vector<std::size_t> subset) {
        ++report.subsets_examined;
        double diam = 0.0;
        for (std::size_t a : subset) {
            for (std::size_t b : subset) {
                diam = std::max(diam, d(a, b));
            }
        }
        std::size_t value = 0;
        if (subset.size() <= default_weak_exact_limit) {
            value = weak_requirement(d, subset).value;
        } else {
            std::vector<std::size_t> packed;
            for (std::size_t a : subset) {
                const bool far = std::all_of(packed.begin(), packed.end(),
                                             [&](std::size_t b) { return d(a, b) > diam / 2.0; });
                if (far) {
                    packed.push_back(a);
                }
            }
            value = packed.size();
        }
        if (value > report.lower) {
            report.lower = value;
            report.witness_set = std::move(subset);
            report.witness_diameter = diam;
        }
    };
    std::vector<std::size_t> everything(n);
    for (std::size_t i = 0; i < n; ++i) {
        everything[i] = i;
    }
    consider(everything);
    for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t size = 2 + static_cast<std::size_t>(detail::uniform01(rng) * static_cast<double>(std::min<std::size_t>(n, 24) - 1));
        std::vector<std::size_t> pool = everything;
        for (std::size_t i = 0; i < size; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(detail::uniform01(rng) * static_cast<double>(n - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(size);
        std::sort(pool.begin(), pool.end());
        consider(std::move(pool));
    }
    if (report.lower == report.upper) {
        report.exact = true;
    }
    return report;
}

inline WeakDoublingReport weak_doubling_constant(const SemimetricSpace& space,
                                                 std::size_t exact_limit = default_weak_exact_limit,
                                                 std::uint64_t seed = 0, std::size_t samples = 2000) {
    return weak_doubling_constant(space.matrix(), exact_limit, seed, samples);
}

// ---------------------------------------------------------------------------
// Bound checks for snowflakes and bi-Lipschitz perturbations
// ---------------------------------------------------------------------------

/// Compares a measured doubling constant against a bound of the form C0^N.
struct BoundCheck {
    DoublingReport base;
    DoublingReport transformed;
    /// N in C0^N.
    unsigned exponent = 1;
    /// C0^N, taken from the lower end of the base bracket when inexact.
    double bound = 1.0;
    /// The upper end of the transformed bracket.
    double measured = 1.0;
    bool holds = true;
    /// One of the brackets was not exact; the check is then indicative only.
    bool indicative = false;

    double margin() const { return bound - measured; }
};

namespace detail {

inline BoundCheck finish_bound_check(DoublingReport base, DoublingReport transformed, unsigned exponent) {
    BoundCheck check;
    check.exponent = exponent;
    check.bound = std::pow(static_cast<double>(base.lower), static_cast<double>(exponent));
    check.measured = static_cast<double>(transformed.upper);
    check.holds = check.measured <= check.bound;
    check.indicative = !(base.exact && transformed.exact);
    check.base = std::move(base);
    check.transformed = std::move(transformed);
    return check;
}

} // namespace detail

/// The snowflake d^p has doubling constant at most C^ceil(1/p).
inline BoundCheck check_snowflake_doubling(const SemimetricSpace& space, double p,
                                           std::size_t exact_limit = default_doubling_exact_limit) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw ParameterError("p must lie in (0, 1], got " + detail::format_number(p));
    }
    auto base = doubling_constant(space, exact_limit);
    auto snow = doubling_constant(power_matrix(space.matrix(), p), exact_limit);
    const auto exponent = static_cast<unsigned>(std::ceil(1.0 / p));
    return detail::finish_bound_check(std::move(base), std::move(snow), exponent);
}

/// Smallest integer N with alpha < 2^(N-1).
inline unsigned perturbation_exponent(double alpha) {
    unsigned n = 1;
    while (!(alpha < std::ldexp(1.0, static_cast<int>(n) - 1))) {
        ++n;
    }
    return n;
}

/**
 * If D <= d <= alpha D pointwise, then D is doubling with constant at most
 * C0^N where C0 is the doubling constant of d and alpha < 2^(N-1). The
 * sandwich is verified first (exact on the left, relative 1e-12 on the right)
 * and a violation is a `PreconditionError` naming the offending pair.
 */
inline BoundCheck check_perturbation_doubling(const SemimetricSpace& d_space, const SemimetricSpace& D_space,
                                              double alpha,
                                              std::size_t exact_limit = default_doubling_exact_limit) {
    if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
        throw ParameterError("alpha must be >= 1, got " + detail::format_number(alpha));
    }
    if (d_space.size() != D_space.size()) {
        throw StructuralError("spaces have different sizes");
    }
    for (std::size_t i = 0; i < d_space.size(); ++i) {
        for (std::size_t j = i + 1; j < d_space.size(); ++j) {
            const double big = d_space(i, j);
            const double small = D_space(i, j);
            if (small > big || big > alpha * small * (1.0 + 1e-12)) {
                throw PreconditionError("sandwich D <= d <= alpha*D fails at pair (" + d_space.label(i) + ", " +
                                        d_space.label(j) + "): d = " + detail::format_number(big) +
                                        ", D = " + detail::format_number(small));
            }
        }
    }
    auto base = doubling_constant(d_space, exact_limit);
    auto perturbed = doubling_constant(D_space, exact_limit);
    return detail::finish_bound_check(std::move(base), std::move(perturbed), perturbation_exponent(alpha));
}

} // namespace semimetric

#endif
