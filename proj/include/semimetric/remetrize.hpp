#ifndef SEMIMETRIC_REMETRIZE_HPP
#define SEMIMETRIC_REMETRIZE_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "constants.hpp"
#include "space.hpp"

/**
 * @file remetrize.hpp
 *
 * @brief Metrics sandwiched against a semimetric: the chain metric D <= d <= cD,
 * the K^2 certificate for relaxation constants up to 2, and the search for an
 * exponent p with D <= d^p <= (1 + eps) D.
 */

namespace semimetric {

enum class RemetrizeMethod { chain, chain_after_snowflake };

inline const char* method_name(RemetrizeMethod method) {
    return method == RemetrizeMethod::chain ? "chain" : "chain_after_snowflake";
}

/// Worst ratios in both directions between a powered semimetric and a metric below it.
struct Sandwich {
    /// max D / d^p (<= 1 when D is below d^p).
    double lo = 0.0;
    /// max d^p / D.
    double hi = 0.0;
    IndexPair lo_witness{0, 0};
    IndexPair hi_witness{0, 0};
};

/// Full pointwise scan over pairs x < y.
inline Sandwich measure_sandwich(const DistanceMatrix& powered, const DistanceMatrix& metric) {
    Sandwich s;
    bool first = true;
    for (std::size_t i = 0; i < powered.size(); ++i) {
        for (std::size_t j = i + 1; j < powered.size(); ++j) {
            const double down = metric(i, j) / powered(i, j);
            const double up = powered(i, j) / metric(i, j);
            if (first || down > s.lo) {
                s.lo = down;
                s.lo_witness = {i, j};
            }
            if (first || up > s.hi) {
                s.hi = up;
                s.hi_witness = {i, j};
            }
            first = false;
        }
    }
    if (first) {
        s.lo = 1.0;
        s.hi = 1.0;
    }
    return s;
}

struct SearchStep {
    double p;
    double c;
};

struct Remetrization {
    double p = 1.0;
    std::optional<double> epsilon;
    DistanceMatrix D;
    double sandwich_lo = 1.0;
    double sandwich_hi = 1.0;
    IndexPair hi_witness{0, 0};
    RemetrizeMethod method = RemetrizeMethod::chain;
    std::vector<SearchStep> search_trace;
};

namespace detail {

inline Remetrization remetrize_at(const DistanceMatrix& d, double p) {
    const DistanceMatrix powered = power_matrix(d, p);
    Remetrization out;
    out.p = p;
    out.D = ChainClosure(powered).matrix();
    const auto s = measure_sandwich(powered, out.D);
    out.sandwich_lo = s.lo;
    out.sandwich_hi = s.hi;
    out.hi_witness = s.hi_witness;
    out.method = (p == 1.0) ? RemetrizeMethod::chain : RemetrizeMethod::chain_after_snowflake;
    return out;
}

} // namespace detail

/// D = shortest-path closure of d; sandwich_hi is the polygonal constant.
inline Remetrization chain_metric(const SemimetricSpace& space) { return detail::remetrize_at(space.matrix(), 1.0); }

/// Result of testing d <= K^2 D for the chain metric.
struct FrinkCertificate {
    double K = 1.0;
    double bound = 1.0;
    double worst_ratio = 1.0;
    IndexPair witness{0, 0};
    bool holds = true;
    Remetrization remetrization;
};

/// Relative slack on the upper side of sandwich certificates.
inline constexpr double sandwich_tolerance = 1e-12;

/**
 * Certify d <= K^2 D pointwise for the chain metric D. Requires K <= 2 and
 * throws `PreconditionError` naming the computed K otherwise. A failed
 * certificate is returned with `holds == false`, never widened.
 */
inline FrinkCertificate frink_verify(const SemimetricSpace& space) {
    FrinkCertificate cert;
    cert.K = relaxation_constant(space).K;
    if (cert.K > 2.0) {
        throw PreconditionError("K ⩽ 2 required, found " + detail::format_number(cert.K));
    }
    cert.remetrization = chain_metric(space);
    cert.bound = cert.K * cert.K;
    cert.worst_ratio = cert.remetrization.sandwich_hi;
    cert.witness = cert.remetrization.hi_witness;
    cert.holds = cert.worst_ratio <= cert.bound * (1.0 + sandwich_tolerance);
    return cert;
}

/**
 * Find the largest p in (0, 1] (to within 1e-3) whose chain metric satisfies
 * d^p <= (1 + eps) D. c(p) is evaluated at p = 1, then p is halved until the
 * predicate holds, then bisected between the accepted value and the nearest
 * rejected one above it. Every evaluation is recorded in `search_trace`.
 */
inline Remetrization epsilon_remetrize(const SemimetricSpace& space, double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw ParameterError("epsilon must be positive, got " + detail::format_number(epsilon));
    }
    const double target = 1.0 + epsilon;
    std::vector<SearchStep> trace;
    auto evaluate = [&](double p) {
        auto candidate = detail::remetrize_at(space.matrix(), p);
        trace.push_back({p, candidate.sandwich_hi});
        return candidate;
    };

    auto accepted = evaluate(1.0);
    if (accepted.sandwich_hi > target) {
        double rejected = 1.0;
        double p = 1.0;
        for (;;) {
            p *= 0.5;
            if (p < 1e-300) {
                throw Error("epsilon_remetrize failed to terminate; this is a defect");
            }
            auto candidate = evaluate(p);
            if (candidate.sandwich_hi <= target) {
                accepted = std::move(candidate);
                break;
            }
            rejected = p;
        }
        while (rejected - accepted.p > 1e-3) {
            const double mid = 0.5 * (accepted.p + rejected);
            auto candidate = evaluate(mid);
            if (candidate.sandwich_hi <= target) {
                accepted = std::move(candidate);
            } else {
                rejected = mid;
            }
        }
    }
    accepted.epsilon = epsilon;
    accepted.search_trace = std::move(trace);
    return accepted;
}

} // namespace semimetric

#endif
