#ifndef SEMIMETRIC_TESTS_ORACLES_HPP
#define SEMIMETRIC_TESTS_ORACLES_HPP

// Brute-force reference computations. None of these call into the library's
// algorithms; they only read distance matrices.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <semimetric/space.hpp>

namespace oracle {

using semimetric::DistanceMatrix;

/// Symmetric matrix with off-diagonal entries uniform in [lo, hi).
inline DistanceMatrix random_semimetric(std::size_t n, std::uint64_t seed, double lo = 0.1, double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    DistanceMatrix d(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            d(i, j) = d(j, i) = dist(rng);
        }
    }
    return d;
}

/// max over ordered triples of distinct points of d(x,z) / (d(x,y) + d(y,z)), clamped at 1.
inline double relaxation(const DistanceMatrix& d) {
    double worst = 1.0;
    const std::size_t n = d.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                if (a == b || b == c || a == c) continue;
                worst = std::max(worst, d(a, c) / (d(a, b) + d(b, c)));
            }
    return worst;
}

/**
 * Minimum over simple chains from `s` to every other point of the chain
 * length summed left to right. Depth-first enumeration of simple chains,
 * skipping a prefix only when its length already reaches the largest current
 * best among points it has not visited (no extension can improve any of them).
 */
inline std::vector<double> min_chain_lengths(const DistanceMatrix& d, std::size_t s) {
    const std::size_t n = d.size();
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    best[s] = 0.0;
    std::vector<char> visited(n, 0);
    std::function<void(std::size_t, double)> walk = [&](std::size_t at, double length) {
        if (length < best[at]) best[at] = length;
        double worst_open = 0.0;
        for (std::size_t t = 0; t < n; ++t)
            if (!visited[t]) worst_open = std::max(worst_open, best[t]);
        if (length >= worst_open) return;
        for (std::size_t t = 0; t < n; ++t) {
            if (visited[t]) continue;
            visited[t] = 1;
            walk(t, length + d(at, t));
            visited[t] = 0;
        }
    };
    visited[s] = 1;
    walk(s, 0.0);
    return best;
}

/// max over pairs x < y of d(x,y) / (shortest simple chain from x to y).
inline double polygonal(const DistanceMatrix& d) {
    double worst = 1.0;
    bool any = false;
    for (std::size_t x = 0; x < d.size(); ++x) {
        const auto best = oracle::min_chain_lengths(d, x);
        for (std::size_t y = x + 1; y < d.size(); ++y) {
            const double ratio = d(x, y) / best[y];
            worst = any ? std::max(worst, ratio) : ratio;
            any = true;
        }
    }
    return worst;
}

/// Polygonal constant via repeated edge relaxation until nothing changes; for spaces too large for chain enumeration.
inline double polygonal_relaxed(const DistanceMatrix& d) {
    DistanceMatrix D = d;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t x = 0; x < d.size(); ++x)
            for (std::size_t y = 0; y < d.size(); ++y)
                for (std::size_t z = 0; z < d.size(); ++z)
                    if (D(x, y) + d(y, z) < D(x, z)) {
                        D(x, z) = D(x, y) + d(y, z);
                        changed = true;
                    }
    }
    double worst = 1.0;
    for (std::size_t x = 0; x < d.size(); ++x)
        for (std::size_t y = x + 1; y < d.size(); ++y) worst = std::max(worst, d(x, y) / D(x, y));
    return worst;
}

/// Smallest number of `sets` (bit masks) whose union contains `target`, by subset enumeration.
inline std::size_t min_cover_bruteforce(std::uint64_t target, const std::vector<std::uint64_t>& sets) {
    const std::size_t m = sets.size();
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << m); ++pick) {
        std::uint64_t covered = 0;
        for (std::size_t i = 0; i < m; ++i)
            if ((pick >> i) & 1U) covered |= sets[i];
        if ((covered & target) == target) best = std::min<std::size_t>(best, std::popcount(pick));
    }
    return best;
}

/// Minimum number of open balls B(y, r/2) covering B(x, r), by subset enumeration (n <= 20).
inline std::size_t cover_requirement(const DistanceMatrix& d, std::size_t x, double r) {
    std::uint64_t target = 0;
    for (std::size_t u = 0; u < d.size(); ++u)
        if (d(x, u) < r) target |= std::uint64_t{1} << u;
    std::vector<std::uint64_t> balls;
    for (std::size_t y = 0; y < d.size(); ++y) {
        std::uint64_t b = 0;
        for (std::size_t u = 0; u < d.size(); ++u)
            if (d(y, u) < r / 2) b |= std::uint64_t{1} << u;
        balls.push_back(b & target);
    }
    return oracle::min_cover_bruteforce(target, balls);
}

/**
 * Weak requirement of one subset: fewest groups of diameter <= diam/2 that
 * partition it, by trying every assignment of points to k groups for
 * increasing k. Covers can always be turned into partitions without growing
 * any diameter, so this equals the cover number.
 */
inline std::size_t weak_requirement(const DistanceMatrix& d, const std::vector<std::size_t>& subset) {
    const std::size_t m = subset.size();
    if (m <= 1) return m;
    double diam = 0.0;
    for (auto a : subset)
        for (auto b : subset) diam = std::max(diam, d(a, b));
    for (std::size_t k = 1; k <= m; ++k) {
        std::vector<std::size_t> group(m, 0);
        for (;;) {
            bool ok = true;
            for (std::size_t i = 0; i < m && ok; ++i)
                for (std::size_t j = i + 1; j < m && ok; ++j)
                    if (group[i] == group[j] && d(subset[i], subset[j]) > diam / 2) ok = false;
            if (ok) return k;
            std::size_t pos = 0;
            while (pos < m && ++group[pos] == k) group[pos++] = 0;
            if (pos == m) break;
        }
    }
    return m;
}

/// Weak doubling constant by enumerating every subset with at least two points.
inline std::size_t weak_doubling(const DistanceMatrix& d) {
    const std::size_t n = d.size();
    std::size_t best = 1;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        if (std::popcount(mask) < 2) continue;
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1U) subset.push_back(i);
        best = std::max(best, oracle::weak_requirement(d, subset));
    }
    return best;
}

} // namespace oracle

#endif
