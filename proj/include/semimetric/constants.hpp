#ifndef SEMIMETRIC_CONSTANTS_HPP
#define SEMIMETRIC_CONSTANTS_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "space.hpp"

/**
 * @file constants.hpp
 *
 * @brief Relaxation constant of the relaxed triangle inequality
 * d(x,z) <= K (d(x,y) + d(y,z)) and the relaxed polygonal constant, i.e. the
 * worst ratio between d and its shortest-path (chain) closure.
 */

namespace semimetric {

/// Slack used only for classifying a space as metric.
inline constexpr double metric_tolerance = 1e-12;

struct RelaxationResult {
    /// max(1, worst ratio); 1 for spaces with fewer than three points.
    double K = 1.0;
    /// The unclamped worst ratio (0 when there are no triples).
    double worst_ratio = 0.0;
    /// (x, y, z) with d(x,z) / (d(x,y) + d(y,z)) = worst_ratio.
    std::optional<std::array<std::size_t, 3>> witness;
};

/**
 * Exact maximum over ordered triples of distinct points. Ties keep the
 * lexicographically smallest (x, y, z).
 */
inline RelaxationResult relaxation_constant(const DistanceMatrix& d) {
    RelaxationResult result;
    const std::size_t n = d.size();
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            if (y == x) {
                continue;
            }
            const double dxy = d(x, y);
            for (std::size_t z = 0; z < n; ++z) {
                if (z == x || z == y) {
                    continue;
                }
                const double ratio = d(x, z) / (dxy + d(y, z));
                if (!result.witness || ratio > result.worst_ratio) {
                    result.worst_ratio = ratio;
                    result.witness = std::array<std::size_t, 3>{x, y, z};
                }
            }
        }
    }
    result.K = std::max(1.0, result.worst_ratio);
    return result;
}

inline RelaxationResult relaxation_constant(const SemimetricSpace& space) {
    return relaxation_constant(space.matrix());
}

inline bool is_metric(const DistanceMatrix& d, double tolerance = metric_tolerance) {
    return relaxation_constant(d).K <= 1.0 + tolerance;
}

/**
 * @brief Shortest-path closure of a distance matrix.
 *
 * Computed by all-pairs relaxation with next-hop tracking. Each entry is then
 * re-summed left to right along its reconstructed chain and capped by the
 * direct distance, so D(x,y) is the literal length of a concrete chain and
 * D <= d holds exactly. The matrix is symmetric: the pair x < y is
 * canonical and (y, x) uses the reversed chain.
 */
class ChainClosure {
public:
    explicit ChainClosure(const DistanceMatrix& d) : n_(d.size()), closure_(d), next_(n_ * n_), direct_(n_ * n_, 0) {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                next_[i * n_ + j] = j;
            }
        }
        DistanceMatrix relaxed = d;
        for (std::size_t k = 0; k < n_; ++k) {
            for (std::size_t i = 0; i < n_; ++i) {
                const double dik = relaxed(i, k);
                for (std::size_t j = 0; j < n_; ++j) {
                    const double candidate = dik + relaxed(k, j);
                    if (candidate < relaxed(i, j)) {
                        relaxed(i, j) = candidate;
                        next_[i * n_ + j] = next_[i * n_ + k];
                    }
                }
            }
        }
        for (std::size_t i = 0; i < n_; ++i) {
            closure_(i, i) = 0.0;
            for (std::size_t j = i + 1; j < n_; ++j) {
                double length = 0.0;
                std::size_t at = i;
                while (at != j) {
                    const std::size_t hop = next_[at * n_ + j];
                    length += d(at, hop);
                    at = hop;
                }
                if (length >= d(i, j)) {
                    length = d(i, j);
                    direct_[i * n_ + j] = 1;
                }
                closure_(i, j) = length;
                closure_(j, i) = length;
            }
        }
    }

    const DistanceMatrix& matrix() const { return closure_; }
    double operator()(std::size_t i, std::size_t j) const { return closure_(i, j); }

    /// A chain x = x_1, ..., x_k = y whose length is D(x, y).
    std::vector<std::size_t> chain(std::size_t x, std::size_t y) const {
        if (x == y) {
            return {x};
        }
        const std::size_t lo = std::min(x, y);
        const std::size_t hi = std::max(x, y);
        std::vector<std::size_t> path{lo};
        if (direct_[lo * n_ + hi]) {
            path.push_back(hi);
        } else {
            std::size_t at = lo;
            while (at != hi) {
                at = next_[at * n_ + hi];
                path.push_back(at);
            }
        }
        if (x != lo) {
            std::reverse(path.begin(), path.end());
        }
        return path;
    }

private:
    std::size_t n_;
    DistanceMatrix closure_;
    std::vector<std::size_t> next_;
    std::vector<unsigned char> direct_;
};

struct PolygonalResult {
    /// max over pairs of d(x,y) / D(x,y); 1 for a single point.
    double c = 1.0;
    /// Minimizing chain for the maximizing pair (empty when n < 2).
    std::vector<std::size_t> chain;
};

inline PolygonalResult polygonal_constant(const DistanceMatrix& d, const ChainClosure& closure) {
    PolygonalResult result;
    const std::size_t n = d.size();
    bool found = false;
    IndexPair best{0, 0};
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = x + 1; y < n; ++y) {
            const double ratio = d(x, y) / closure(x, y);
            if (!found || ratio > result.c) {
                result.c = ratio;
                best = {x, y};
                found = true;
            }
        }
    }
    if (found) {
        result.chain = closure.chain(best.first, best.second);
    }
    return result;
}

inline PolygonalResult polygonal_constant(const DistanceMatrix& d) { return polygonal_constant(d, ChainClosure(d)); }

inline PolygonalResult polygonal_constant(const SemimetricSpace& space) { return polygonal_constant(space.matrix()); }

struct ConstantsReport {
    double relaxation_K = 1.0;
    double polygonal_c = 1.0;
    bool is_metric = true;
    std::optional<std::array<std::size_t, 3>> witness_triple;
    std::vector<std::size_t> witness_chain;
};

inline ConstantsReport compute_constants(const SemimetricSpace& space) {
    const auto relax = relaxation_constant(space);
    const auto poly = polygonal_constant(space);
    ConstantsReport report;
    report.relaxation_K = relax.K;
    report.polygonal_c = poly.c;
    report.is_metric = relax.K <= 1.0 + metric_tolerance;
    report.witness_triple = relax.witness;
    report.witness_chain = poly.chain;
    return report;
}

/// Length of a chain summed left to right.
inline double chain_length(const DistanceMatrix& d, const std::vector<std::size_t>& chain) {
    double length = 0.0;
    for (std::size_t i = 1; i < chain.size(); ++i) {
        length += d(chain[i - 1], chain[i]);
    }
    return length;
}

} // namespace semimetric

#endif
