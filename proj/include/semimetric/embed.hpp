#ifndef SEMIMETRIC_EMBED_HPP
#define SEMIMETRIC_EMBED_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "constants.hpp"
#include "remetrize.hpp"
#include "space.hpp"

/**
 * @file embed.hpp
 *
 * @brief Multi-scale embedding of finite metric spaces into R^N with
 * pointwise-certified snowflake distortion, its extension to b-metrics via
 * remetrization, and the converse bound relating distortion to the
 * relaxation constant.
 *
 * The construction follows the classical net-and-coloring scheme. For scales
 * r_j = tau^j, each scale gets a greedy r_j-net whose points are colored so
 * that equal colors are at least A*r_j apart. A point x receives, in
 * coordinate (j mod m, color(z)), the bump
 *
 *     s_j * r_j^(alpha-1) * max(0, 2 r_j - d(x, z)),   s_j = (-1)^floor(j/m)
 *
 * from every net point z. The distortion is then measured over all pairs
 * rather than taken from theory; every result carries its certificate.
 */

namespace semimetric {

/// Relative slack on each side of an embedding certificate.
inline constexpr double embedding_tolerance = 1e-9;

/// Slack on K <= 1 for inputs that must be metrics.
inline constexpr double metric_input_tolerance = 1e-9;

namespace detail {

inline void require_metric(const DistanceMatrix& d, const char* what) {
    const double K = relaxation_constant(d).K;
    if (K > 1.0 + metric_input_tolerance) {
        throw PreconditionError(std::string(what) + " requires a metric space, found relaxation constant K = " +
                                format_number(K));
    }
}

inline std::vector<std::size_t> greedy_net(const DistanceMatrix& d, double r) {
    std::vector<std::size_t> net;
    for (std::size_t x = 0; x < d.size(); ++x) {
        const bool separated = std::all_of(net.begin(), net.end(), [&](std::size_t z) { return d(x, z) >= r; });
        if (separated) {
            net.push_back(x);
        }
    }
    return net;
}

inline std::vector<std::size_t> conflict_coloring(const DistanceMatrix& d, const std::vector<std::size_t>& net,
                                                  double radius) {
    std::vector<std::size_t> colors(net.size(), 0);
    std::vector<char> used;
    for (std::size_t i = 0; i < net.size(); ++i) {
        used.assign(i + 1, 0);
        for (std::size_t k = 0; k < i; ++k) {
            if (d(net[i], net[k]) < radius) {
                used[colors[k]] = 1;
            }
        }
        std::size_t c = 0;
        while (used[c]) {
            ++c;
        }
        colors[i] = c;
    }
    return colors;
}

inline long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

} // namespace detail

/// Maximal r-separated subset, scanning points in index order. Requires a metric.
inline std::vector<std::size_t> greedy_net(const SemimetricSpace& space, double r) {
    if (!(r > 0.0)) {
        throw ParameterError("net radius must be positive, got " + detail::format_number(r));
    }
    detail::require_metric(space.matrix(), "greedy_net");
    return detail::greedy_net(space.matrix(), r);
}

/**
 * Greedy coloring of the net points in scan order: each takes the smallest
 * color not used by an earlier net point closer than `radius`. Returns one
 * color per entry of `net`.
 */
inline std::vector<std::size_t> conflict_coloring(const SemimetricSpace& space, const std::vector<std::size_t>& net,
                                                  double radius) {
    if (!(radius > 0.0)) {
        throw ParameterError("conflict radius must be positive, got " + detail::format_number(radius));
    }
    return detail::conflict_coloring(space.matrix(), net, radius);
}

struct EmbeddingConfig {
    /// Snowflake exponent, in (0, 1).
    double alpha = 0.75;
    /// Ratio between consecutive scales, in (0, 1).
    double tau = 0.5;
    /// Same-colored net points are at least conflict_factor * r apart; > 2.
    double conflict_factor = 6.0;
    /// Number of coordinate blocks the scales cycle through.
    std::size_t phase_blocks = 3;

    void check() const {
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw ParameterError("alpha must lie in (0, 1), got " + detail::format_number(alpha));
        }
        if (!(tau > 0.0 && tau < 1.0)) {
            throw ParameterError("tau must lie in (0, 1), got " + detail::format_number(tau));
        }
        if (!(conflict_factor > 2.0) || !std::isfinite(conflict_factor)) {
            throw ParameterError("conflict factor must exceed 2, got " + detail::format_number(conflict_factor));
        }
        if (phase_blocks < 1) {
            throw ParameterError("phase_blocks must be positive");
        }
    }
};

struct ScaleInfo {
    long j = 0;
    double r = 0.0;
    std::vector<std::size_t> net;
    std::vector<std::size_t> colors;
    std::size_t color_count = 0;
};

/// Worst stretch factors of a map against d^alpha.
struct Distortion {
    /// min over pairs of |F(x) - F(y)| / d(x,y)^alpha.
    double L_lo = 0.0;
    /// max over pairs of the same ratio.
    double L_up = 0.0;
    IndexPair lo_pair{0, 0};
    IndexPair up_pair{0, 0};
};

struct Embedding {
    /// n x N, row-major, already rescaled by 1 / sqrt(L_lo * L_up).
    std::vector<double> coords;
    std::size_t n = 0;
    std::size_t N = 0;
    double alpha = 0.75;
    /// Stretch factors before rescaling.
    double L_lo = 0.0;
    double L_up = 0.0;
    /// sqrt(L_up / L_lo): after rescaling, C^-1 d^alpha <= |F(x)-F(y)| <= C d^alpha.
    double C = 1.0;
    bool injective = false;
    std::size_t colors = 0;
    std::vector<ScaleInfo> scales;
    EmbeddingConfig config;

    std::span<const double> point(std::size_t i) const { return {coords.data() + i * N, N}; }
};

inline double euclidean(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double delta = a[k] - b[k];
        sum += delta * delta;
    }
    return std::sqrt(sum);
}

/// Pairwise Euclidean distances between the rows of an embedding.
inline DistanceMatrix embedded_distances(const Embedding& embedding) {
    DistanceMatrix out(embedding.n);
    for (std::size_t i = 0; i < embedding.n; ++i) {
        for (std::size_t j = i + 1; j < embedding.n; ++j) {
            const double v = euclidean(embedding.point(i), embedding.point(j));
            out(i, j) = v;
            out(j, i) = v;
        }
    }
    return out;
}

/// Stretch factors of `image` (a distance matrix of F) against d^alpha.
inline Distortion measure_distortion(const DistanceMatrix& d, const DistanceMatrix& image, double alpha) {
    Distortion out;
    bool first = true;
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = i + 1; j < d.size(); ++j) {
            const double ratio = image(i, j) / std::pow(d(i, j), alpha);
            if (first || ratio < out.L_lo) {
                out.L_lo = ratio;
                out.lo_pair = {i, j};
            }
            if (first || ratio > out.L_up) {
                out.L_up = ratio;
                out.up_pair = {i, j};
            }
            first = false;
        }
    }
    return out;
}

/// Result of checking C^-1 d^alpha <= |F(x)-F(y)| <= C d^alpha on every pair.
struct Certificate {
    bool holds = true;
    /// Largest C^-1 d^alpha / |F(x)-F(y)| and |F(x)-F(y)| / (C d^alpha); both <= 1 when the bound holds.
    double worst_lower = 0.0;
    double worst_upper = 0.0;
    IndexPair lower_pair{0, 0};
    IndexPair upper_pair{0, 0};
};

inline Certificate certify(const DistanceMatrix& d, const DistanceMatrix& image, double alpha, double C,
                           double tolerance = embedding_tolerance) {
    Certificate cert;
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = i + 1; j < d.size(); ++j) {
            const double target = std::pow(d(i, j), alpha);
            const double lower = target / (C * image(i, j));
            const double upper = image(i, j) / (C * target);
            if (lower > cert.worst_lower) {
                cert.worst_lower = lower;
                cert.lower_pair = {i, j};
            }
            if (upper > cert.worst_upper) {
                cert.worst_upper = upper;
                cert.upper_pair = {i, j};
            }
        }
    }
    cert.holds = cert.worst_lower <= 1.0 + tolerance && cert.worst_upper <= 1.0 + tolerance;
    return cert;
}

/**
 * Embed a finite metric space into R^N. Throws `PreconditionError` (naming K)
 * for non-metric input and `DegenerateEmbedding` if two points collide.
 */
inline Embedding assouad_embed(const SemimetricSpace& space, const EmbeddingConfig& config = {}) {
    config.check();
    const std::size_t n = space.size();
    if (n < 2) {
        throw ParameterError("embedding needs at least two points");
    }
    const DistanceMatrix& d = space.matrix();
    detail::require_metric(d, "assouad_embed");

    const double log_tau = std::log(config.tau);
    const long j_top = static_cast<long>(std::floor(std::log(diameter(space)) / log_tau));
    const long j_bottom = static_cast<long>(std::ceil(std::log(min_distance(space)) / log_tau));
    const auto blocks = static_cast<long>(config.phase_blocks);

    Embedding out;
    out.n = n;
    out.alpha = config.alpha;
    out.config = config;
    for (long j = j_top; j <= j_bottom; ++j) {
        ScaleInfo scale;
        scale.j = j;
        scale.r = std::pow(config.tau, static_cast<double>(j));
        scale.net = detail::greedy_net(d, scale.r);
        scale.colors = detail::conflict_coloring(d, scale.net, config.conflict_factor * scale.r);
        scale.color_count = scale.colors.empty() ? 0 : *std::max_element(scale.colors.begin(), scale.colors.end()) + 1;
        out.colors = std::max(out.colors, scale.color_count);
        out.scales.push_back(std::move(scale));
    }
    out.N = config.phase_blocks * out.colors;
    out.coords.assign(n * out.N, 0.0);

    for (const auto& scale : out.scales) {
        const auto block = static_cast<std::size_t>(scale.j - detail::floor_div(scale.j, blocks) * blocks);
        const double sign = (detail::floor_div(scale.j, blocks) % 2 == 0) ? 1.0 : -1.0;
        const double amplitude = sign * std::pow(scale.r, config.alpha - 1.0);
        for (std::size_t x = 0; x < n; ++x) {
            double* row = out.coords.data() + x * out.N + block * out.colors;
            for (std::size_t k = 0; k < scale.net.size(); ++k) {
                const double bump = 2.0 * scale.r - d(x, scale.net[k]);
                if (bump > 0.0) {
                    row[scale.colors[k]] += amplitude * bump;
                }
            }
        }
    }

    const auto raw = measure_distortion(d, embedded_distances(out), config.alpha);
    out.L_lo = raw.L_lo;
    out.L_up = raw.L_up;
    out.injective = raw.L_lo > 0.0;
    if (!out.injective) {
        throw DegenerateEmbedding("embedding degenerate: points " + space.label(raw.lo_pair.first) + " and " +
                                  space.label(raw.lo_pair.second) + " collide");
    }
    out.C = std::sqrt(raw.L_up / raw.L_lo);
    const double scale = 1.0 / std::sqrt(raw.L_lo * raw.L_up);
    for (auto& c : out.coords) {
        c *= scale;
    }
    return out;
}

// ---------------------------------------------------------------------------
// b-metric pipeline
// ---------------------------------------------------------------------------

struct PipelineResult {
    Remetrization remetrization;
    Embedding embedding;
    /// Exponent of the embedding of (X, D).
    double alpha = 0.75;
    /// p * alpha: exponent against the original d.
    double alpha_prime = 0.75;
    /// Distortion of the embedding of (X, D).
    double C = 1.0;
    /// Smallest C' with C'^-1 d^(p alpha) <= |F(x)-F(y)| <= C' d^(p alpha), no rescaling.
    double C_prime = 1.0;
    /// 2^alpha * C.
    double constant_bound = 1.0;
    /// D <= d^p <= 2 D pointwise.
    bool remetrization_holds = true;
    Certificate certificate;
    bool constant_bound_holds = true;

    bool certified() const { return remetrization_holds && certificate.holds && constant_bound_holds; }
};

/**
 * Remetrize with eps = 1 (D <= d^p <= 2D), embed (X, D) with exponent alpha,
 * and certify the composite against d^(p alpha). The composite constant is
 * measured pointwise and cross-checked against 2^alpha * C.
 */
inline PipelineResult bmetric_assouad_pipeline(const SemimetricSpace& space, const EmbeddingConfig& config = {}) {
    config.check();
    PipelineResult result;
    result.remetrization = epsilon_remetrize(space, 1.0);
    const auto& rem = result.remetrization;
    const DistanceMatrix powered = power_matrix(space.matrix(), rem.p);
    const auto sandwich = measure_sandwich(powered, rem.D);
    result.remetrization_holds = sandwich.lo <= 1.0 && sandwich.hi <= 2.0;

    const SemimetricSpace metric(space.labels(), rem.D);
    result.embedding = assouad_embed(metric, config);
    result.alpha = config.alpha;
    result.alpha_prime = rem.p * config.alpha;
    result.C = result.embedding.C;
    result.constant_bound = std::pow(2.0, config.alpha) * result.C;

    const auto image = embedded_distances(result.embedding);
    const auto stretch = measure_distortion(space.matrix(), image, result.alpha_prime);
    result.C_prime = std::max({1.0, stretch.L_up, 1.0 / stretch.L_lo});
    result.certificate = certify(space.matrix(), image, result.alpha_prime, result.C_prime);
    result.constant_bound_holds = result.C_prime <= result.constant_bound * (1.0 + embedding_tolerance);
    return result;
}

// ---------------------------------------------------------------------------
// Converse: bi-Lipschitz embeddability of d^alpha forces a relaxation constant
// ---------------------------------------------------------------------------

struct ConverseReport {
    double alpha = 1.0;
    double L_lo = 1.0;
    double L_up = 1.0;
    /// sqrt(L_up / L_lo) for ratios target / d^alpha.
    double C_emp = 1.0;
    /// 2^(1/alpha) * C_emp^(2/alpha).
    double K_bound = 2.0;
    double K = 1.0;
    bool holds = true;
};

/**
 * Treat the identity as a map from (X, d^alpha) into the metric `target`,
 * measure its symmetric distortion after optimal scaling, and check that the
 * relaxation constant of d does not exceed 2^(1/alpha) C^(2/alpha).
 */
inline ConverseReport converse_bound(const SemimetricSpace& space, const DistanceMatrix& target, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw ParameterError("alpha must lie in (0, 1], got " + detail::format_number(alpha));
    }
    if (target.size() != space.size()) {
        throw StructuralError("target matrix has " + std::to_string(target.size()) + " points, space has " +
                              std::to_string(space.size()));
    }
    const SemimetricSpace checked(space.labels(), target);
    detail::require_metric(checked.matrix(), "converse_bound target");

    ConverseReport report;
    report.alpha = alpha;
    if (space.size() >= 2) {
        const auto stretch = measure_distortion(space.matrix(), target, alpha);
        report.L_lo = stretch.L_lo;
        report.L_up = stretch.L_up;
        report.C_emp = std::sqrt(stretch.L_up / stretch.L_lo);
    }
    report.K_bound = std::pow(2.0, 1.0 / alpha) * std::pow(report.C_emp, 2.0 / alpha);
    report.K = relaxation_constant(space).K;
    report.holds = report.K <= report.K_bound;
    return report;
}

} // namespace semimetric

#endif
