#ifndef SEMIMETRIC_GENERATE_HPP
#define SEMIMETRIC_GENERATE_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "constants.hpp"
#include "space.hpp"

/**
 * @file generate.hpp
 *
 * @brief Seeded generators: the integer semimetric with a collapsed origin,
 * a doubling-but-not-weakly-doubling join, random b-metrics with a bounded
 * relaxation constant, snowflaked grids and Euclidean point clouds.
 */

namespace semimetric {

enum class Family { example31, doubling_not_weak, random_bmetric, snowflaked_grid, euclidean_points };

inline Family parse_family(const std::string& name) {
    if (name == "example31") return Family::example31;
    if (name == "doubling-not-weak") return Family::doubling_not_weak;
    if (name == "random-bmetric") return Family::random_bmetric;
    if (name == "snowflaked-grid") return Family::snowflaked_grid;
    if (name == "euclidean-points") return Family::euclidean_points;
    throw ParameterError("unknown family '" + name + "'");
}

inline std::string family_name(Family family) {
    switch (family) {
    case Family::example31: return "example31";
    case Family::doubling_not_weak: return "doubling-not-weak";
    case Family::random_bmetric: return "random-bmetric";
    case Family::snowflaked_grid: return "snowflaked-grid";
    case Family::euclidean_points: return "euclidean-points";
    }
    return "unknown";
}

/**
 * @brief Parameters for `generate()`.
 *
 * Which fields matter depends on the family:
 * - example31: `n` in [1, 500]; points {-n, ..., n}.
 * - doubling-not-weak: `n` naturals in [1, 500], `m` star points in [2, 500].
 * - random-bmetric: `n` in [2, 400], target relaxation `K` in [1, 64], `seed`.
 * - snowflaked-grid: side `k` in [1, 64], power `p` in (0, 8].
 * - euclidean-points: `n` in [1, 4000], `dim` in [1, 64], `seed`.
 */
struct GeneratorSpec {
    Family family = Family::example31;
    std::size_t n = 1;
    std::size_t m = 2;
    double K = 2.0;
    std::size_t k = 2;
    double p = 1.0;
    std::size_t dim = 2;
    std::uint64_t seed = 0;
};

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline void require_range(const char* name, double value, double lo, double hi) {
    if (!(value >= lo && value <= hi)) {
        throw ParameterError(std::string(name) + " = " + format_number(value) + " outside [" + format_number(lo) +
                             ", " + format_number(hi) + "]");
    }
}

inline SemimetricSpace make_example31(std::size_t n) {
    const auto size = 2 * n + 1;
    std::vector<std::string> labels;
    std::vector<long> values;
    for (long v = -static_cast<long>(n); v <= static_cast<long>(n); ++v) {
        labels.push_back(std::to_string(v));
        values.push_back(v);
    }
    DistanceMatrix d(size);
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
            const long x = values[i];
            const long y = values[j];
            if (x == y) {
                d(i, j) = 0.0;
            } else if (x == 0 || y == 0) {
                d(i, j) = 1.0;
            } else {
                d(i, j) = static_cast<double>(std::labs(x - y));
            }
        }
    }
    return {std::move(labels), std::move(d)};
}

// Star metric on m points (s0 is the hub) joined with naturals 1..n by
// rho(i, j) = max(1/i, 1/j) and rho(i, x) = 1/i.
inline SemimetricSpace make_doubling_not_weak(std::size_t n, std::size_t m) {
    const std::size_t size = m + n;
    std::vector<std::string> labels;
    for (std::size_t s = 0; s < m; ++s) {
        labels.push_back("s" + std::to_string(s));
    }
    for (std::size_t i = 1; i <= n; ++i) {
        labels.push_back(std::to_string(i));
    }
    DistanceMatrix d(size);
    for (std::size_t a = 0; a < size; ++a) {
        for (std::size_t b = 0; b < size; ++b) {
            if (a == b) {
                continue;
            }
            const bool a_star = a < m;
            const bool b_star = b < m;
            if (a_star && b_star) {
                d(a, b) = (a == 0 || b == 0) ? 1.0 : 2.0;
            } else if (!a_star && !b_star) {
                const double ia = static_cast<double>(a - m + 1);
                const double ib = static_cast<double>(b - m + 1);
                d(a, b) = std::max(1.0 / ia, 1.0 / ib);
            } else {
                const double natural = static_cast<double>((a_star ? b : a) - m + 1);
                d(a, b) = 1.0 / natural;
            }
        }
    }
    return {std::move(labels), std::move(d)};
}

// Shortest-path closure of weights drawn from [0.1, 1) on a 2^-24 grid (so
// chain sums are exact and the closure is an exact metric), raised to a power
// q >= 1. For a metric, (a + b)^q <= 2^(q-1) (a^q + b^q), so q = 1 + log2 K
// already meets the target; q is shrunk only if rounding pushes the measured
// constant above K.
inline SemimetricSpace make_random_bmetric(std::size_t n, double K, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    DistanceMatrix weights(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double w = std::ldexp(std::floor(std::ldexp(0.1 + 0.9 * uniform01(rng), 24)), -24);
            weights(i, j) = w;
            weights(j, i) = w;
        }
    }
    const DistanceMatrix metric = ChainClosure(weights).matrix();
    double q = 1.0 + std::log2(K);
    for (int attempt = 0; attempt < 400; ++attempt) {
        DistanceMatrix powered = power_matrix(metric, q);
        if (relaxation_constant(powered).K <= K) {
            return SemimetricSpace(std::move(powered));
        }
        q = 1.0 + (q - 1.0) * 0.995;
    }
    return SemimetricSpace(metric);
}

inline SemimetricSpace make_snowflaked_grid(std::size_t k, double p) {
    const std::size_t size = k * k;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            labels.push_back("g" + std::to_string(i) + "_" + std::to_string(j));
        }
    }
    DistanceMatrix d(size);
    for (std::size_t a = 0; a < size; ++a) {
        for (std::size_t b = 0; b < size; ++b) {
            if (a == b) {
                continue;
            }
            const double dx = static_cast<double>(a / k) - static_cast<double>(b / k);
            const double dy = static_cast<double>(a % k) - static_cast<double>(b % k);
            const double euclid = std::sqrt(dx * dx + dy * dy);
            d(a, b) = (p == 1.0) ? euclid : std::pow(euclid, p);
        }
    }
    return {std::move(labels), std::move(d)};
}

inline SemimetricSpace make_euclidean_points(std::size_t n, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> coords(n * dim);
    for (auto& c : coords) {
        c = uniform01(rng);
    }
    DistanceMatrix d(n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            double sum = 0.0;
            for (std::size_t t = 0; t < dim; ++t) {
                const double delta = coords[a * dim + t] - coords[b * dim + t];
                sum += delta * delta;
            }
            d(a, b) = std::sqrt(sum);
            d(b, a) = d(a, b);
        }
    }
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back("p" + std::to_string(i));
    }
    return {std::move(labels), std::move(d)};
}

} // namespace detail

/// Build the space described by `spec`. The seed fully determines the output.
inline SemimetricSpace generate(const GeneratorSpec& spec) {
    using detail::require_range;
    switch (spec.family) {
    case Family::example31:
        require_range("n", static_cast<double>(spec.n), 1, 500);
        return detail::make_example31(spec.n);
    case Family::doubling_not_weak:
        require_range("n", static_cast<double>(spec.n), 1, 500);
        require_range("m", static_cast<double>(spec.m), 2, 500);
        return detail::make_doubling_not_weak(spec.n, spec.m);
    case Family::random_bmetric:
        require_range("n", static_cast<double>(spec.n), 2, 400);
        require_range("K", spec.K, 1.0, 64.0);
        return detail::make_random_bmetric(spec.n, spec.K, spec.seed);
    case Family::snowflaked_grid:
        require_range("k", static_cast<double>(spec.k), 1, 64);
        if (!(spec.p > 0.0 && spec.p <= 8.0)) {
            throw ParameterError("p = " + detail::format_number(spec.p) + " outside (0, 8]");
        }
        return detail::make_snowflaked_grid(spec.k, spec.p);
    case Family::euclidean_points:
        require_range("n", static_cast<double>(spec.n), 1, 4000);
        require_range("dim", static_cast<double>(spec.dim), 1, 64);
        return detail::make_euclidean_points(spec.n, spec.dim, spec.seed);
    }
    throw ParameterError("unknown family");
}

} // namespace semimetric

#endif
