#ifndef SEMIMETRIC_SPACE_HPP
#define SEMIMETRIC_SPACE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "errors.hpp"

/**
 * @file space.hpp
 *
 * @brief Finite semimetric spaces: a labelled, symmetric, zero-diagonal
 * distance matrix with strictly positive off-diagonal entries.
 */

namespace semimetric {

using IndexPair = std::pair<std::size_t, std::size_t>;

/**
 * @brief Dense row-major n×n matrix of doubles.
 *
 * Used both for semimetrics and for derived matrices (chain metrics,
 * embedding distances) that may not yet have been validated.
 */
class DistanceMatrix {
public:
    DistanceMatrix() = default;

    explicit DistanceMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    static DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        DistanceMatrix out(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size()) {
                throw StructuralError("matrix is not square: row " + std::to_string(i) + " has " +
                                      std::to_string(rows[i].size()) + " entries, expected " +
                                      std::to_string(rows.size()));
            }
            std::copy(rows[i].begin(), rows[i].end(), out.data_.begin() + static_cast<std::ptrdiff_t>(i * out.n_));
        }
        return out;
    }

    std::size_t size() const { return n_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

    const std::vector<double>& data() const { return data_; }

    friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Outcome of checking the two semimetric axioms on a candidate matrix.
struct ValidationReport {
    /// (S1): zero diagonal, strictly positive off-diagonal.
    bool s1 = true;
    std::optional<IndexPair> s1_witness;
    /// (S2): symmetry.
    bool s2 = true;
    std::optional<IndexPair> s2_witness;

    bool passed() const { return s1 && s2; }

    std::string describe() const {
        std::string out;
        if (!s1) {
            out += "S1 fails at (" + std::to_string(s1_witness->first) + "," + std::to_string(s1_witness->second) + ")";
        }
        if (!s2) {
            if (!out.empty()) {
                out += "; ";
            }
            out += "S2 fails at (" + std::to_string(s2_witness->first) + "," + std::to_string(s2_witness->second) + ")";
        }
        return out.empty() ? "passes S1 and S2" : out;
    }
};

namespace detail {

inline void check_labels(const std::vector<std::string>& labels, std::size_t n) {
    if (labels.size() != n) {
        throw StructuralError("label count " + std::to_string(labels.size()) + " does not match matrix size " +
                              std::to_string(n));
    }
    if (n == 0) {
        throw StructuralError("a space needs at least one point");
    }
    std::unordered_set<std::string> seen;
    for (const auto& label : labels) {
        if (!seen.insert(label).second) {
            throw StructuralError("duplicate label '" + label + "'");
        }
    }
}

} // namespace detail

/**
 * Check (S1) and (S2) on a square matrix.
 *
 * `tolerance` applies to the equalities only (zero diagonal, symmetry);
 * off-diagonal entries must be strictly positive regardless. Witnesses are
 * the first offending index pair in row-major order (upper triangle for S2).
 * Non-finite entries and shape problems are structural errors, not axiom
 * failures.
 */
inline ValidationReport validate(const std::vector<std::string>& labels, const DistanceMatrix& dist,
                                 double tolerance = 0.0) {
    detail::check_labels(labels, dist.size());
    const std::size_t n = dist.size();
    ValidationReport report;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = dist(i, j);
            if (!std::isfinite(v)) {
                throw StructuralError("non-finite distance at (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
            const bool bad = (i == j) ? std::abs(v) > tolerance : !(v > 0.0);
            if (bad && report.s1) {
                report.s1 = false;
                report.s1_witness = IndexPair{i, j};
            }
            if (i < j && std::abs(v - dist(j, i)) > tolerance && report.s2) {
                report.s2 = false;
                report.s2_witness = IndexPair{i, j};
            }
        }
    }
    return report;
}

inline ValidationReport validate(const std::vector<std::string>& labels, const std::vector<std::vector<double>>& rows,
                                 double tolerance = 0.0) {
    return validate(labels, DistanceMatrix::from_rows(rows), tolerance);
}

/// Labels "0", "1", ..., "n-1".
inline std::vector<std::string> index_labels(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(std::to_string(i));
    }
    return labels;
}

/**
 * @brief A validated finite semimetric space.
 *
 * Construction runs `validate()` and throws `AxiomError` on failure, so every
 * live instance satisfies (S1) and (S2) exactly. When a positive tolerance is
 * given, near-symmetric entries are averaged and the diagonal is zeroed.
 */
class SemimetricSpace {
public:
    SemimetricSpace(std::vector<std::string> labels, DistanceMatrix dist, double tolerance = 0.0)
        : labels_(std::move(labels)), dist_(std::move(dist)) {
        const auto report = validate(labels_, dist_, tolerance);
        if (!report.passed()) {
            throw AxiomError("not a semimetric: " + report.describe());
        }
        if (tolerance > 0.0) {
            const std::size_t n = dist_.size();
            for (std::size_t i = 0; i < n; ++i) {
                dist_(i, i) = 0.0;
                for (std::size_t j = i + 1; j < n; ++j) {
                    const double mean = 0.5 * (dist_(i, j) + dist_(j, i));
                    dist_(i, j) = mean;
                    dist_(j, i) = mean;
                }
            }
        }
    }

    explicit SemimetricSpace(DistanceMatrix dist) : SemimetricSpace(index_labels(dist.size()), std::move(dist)) {}

    std::size_t size() const { return dist_.size(); }
    double operator()(std::size_t i, std::size_t j) const { return dist_(i, j); }
    const DistanceMatrix& matrix() const { return dist_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_[i]; }

    friend bool operator==(const SemimetricSpace&, const SemimetricSpace&) = default;

private:
    std::vector<std::string> labels_;
    DistanceMatrix dist_;
};

/// Elementwise d ↦ d^p on a raw matrix; diagonal stays zero.
inline DistanceMatrix power_matrix(const DistanceMatrix& dist, double p) {
    DistanceMatrix out(dist.size());
    for (std::size_t i = 0; i < dist.size(); ++i) {
        for (std::size_t j = 0; j < dist.size(); ++j) {
            out(i, j) = (i == j) ? 0.0 : (p == 1.0 ? dist(i, j) : std::pow(dist(i, j), p));
        }
    }
    return out;
}

/// The snowflake d^p. Any p > 0 is accepted; p > 1 inflates the relaxation constant.
inline SemimetricSpace snowflake(const SemimetricSpace& space, double p) {
    if (!(p > 0.0) || !std::isfinite(p)) {
        throw ParameterError("snowflake exponent must be positive, got " + detail::format_number(p));
    }
    return SemimetricSpace(space.labels(), power_matrix(space.matrix(), p));
}

inline double diameter(const SemimetricSpace& space, std::span<const std::size_t> subset) {
    double diam = 0.0;
    for (std::size_t a : subset) {
        for (std::size_t b : subset) {
            diam = std::max(diam, space(a, b));
        }
    }
    return diam;
}

inline double diameter(const SemimetricSpace& space) {
    const auto& data = space.matrix().data();
    return data.empty() ? 0.0 : *std::max_element(data.begin(), data.end());
}

/// Smallest off-diagonal distance (0 for a single point).
inline double min_distance(const SemimetricSpace& space) {
    double best = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < space.size(); ++i) {
        for (std::size_t j = i + 1; j < space.size(); ++j) {
            if (first || space(i, j) < best) {
                best = space(i, j);
                first = false;
            }
        }
    }
    return best;
}

struct EnclosingBall {
    std::size_t center;
    double radius;
};

/// Every nonempty finite set A lies in the open ball B(a, diam(A) + 1) around any of its points.
inline EnclosingBall enclosing_ball(const SemimetricSpace& space, std::span<const std::size_t> subset) {
    if (subset.empty()) {
        throw ParameterError("enclosing_ball needs a nonempty subset");
    }
    for (std::size_t idx : subset) {
        if (idx >= space.size()) {
            throw ParameterError("subset index " + std::to_string(idx) + " out of range");
        }
    }
    return {subset.front(), diameter(space, subset) + 1.0};
}

} // namespace semimetric

#endif
