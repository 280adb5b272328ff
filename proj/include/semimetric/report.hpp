#ifndef SEMIMETRIC_REPORT_HPP
#define SEMIMETRIC_REPORT_HPP

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "constants.hpp"
#include "doubling.hpp"
#include "embed.hpp"
#include "remetrize.hpp"
#include "space.hpp"

// JSON views of the result types. Points are reported by label.

namespace semimetric::report {

using nlohmann::json;

inline constexpr const char* tool_version = "1.0.0";

inline json labels_of(const SemimetricSpace& space, const std::vector<std::size_t>& indices) {
    json out = json::array();
    for (auto i : indices) {
        out.push_back(space.label(i));
    }
    return out;
}

inline json matrix_json(const DistanceMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
    }
    return rows;
}

inline json pair_json(const SemimetricSpace& space, IndexPair pair) {
    return json::array({space.label(pair.first), space.label(pair.second)});
}

inline json constants_json(const SemimetricSpace& space, const ConstantsReport& r) {
    json triple = json::array();
    if (r.witness_triple) {
        for (auto i : *r.witness_triple) {
            triple.push_back(space.label(i));
        }
    }
    return {{"relaxation_K", r.relaxation_K},
            {"polygonal_c", r.polygonal_c},
            {"is_metric", r.is_metric},
            {"witness_triple", triple},
            {"witness_chain", labels_of(space, r.witness_chain)}};
}

inline json remetrization_json(const SemimetricSpace& space, const Remetrization& r, bool include_matrix = true) {
    json trace = json::array();
    for (const auto& step : r.search_trace) {
        trace.push_back({{"p", step.p}, {"c", step.c}});
    }
    json out = {{"p", r.p},
                {"epsilon", r.epsilon ? json(*r.epsilon) : json(nullptr)},
                {"sandwich_lo", r.sandwich_lo},
                {"sandwich_hi", r.sandwich_hi},
                {"sandwich_hi_pair", pair_json(space, r.hi_witness)},
                {"method", method_name(r.method)},
                {"search_trace", trace}};
    if (include_matrix) {
        out["D"] = matrix_json(r.D);
    }
    return out;
}

inline json doubling_json(const SemimetricSpace& space, const DoublingReport& r, std::size_t exact_limit) {
    return {{"doubling_C", r.exact ? json(r.upper) : json(nullptr)},
            {"lower", r.lower},
            {"upper", r.upper},
            {"exact", r.exact},
            {"convention", r.convention == BallKind::open ? "open" : "closed"},
            {"witness",
             {{"center", space.label(r.witness_center)},
              {"radius", r.witness_radius},
              {"ball_size", r.witness_ball_size}}},
            {"critical_radii_examined", r.critical_radii_examined},
            {"exact_limit", exact_limit}};
}

inline json weak_doubling_json(const SemimetricSpace& space, const WeakDoublingReport& r, std::size_t exact_limit) {
    return {{"weak_C", r.exact ? json(r.upper) : json(nullptr)},
            {"lower", r.lower},
            {"upper", r.upper},
            {"exact", r.exact},
            {"witness_set", labels_of(space, r.witness_set)},
            {"witness_diameter", r.witness_diameter},
            {"subsets_examined", r.subsets_examined},
            {"exact_limit", exact_limit}};
}

inline json config_json(const EmbeddingConfig& c) {
    return {{"alpha", c.alpha}, {"tau", c.tau}, {"conflict_factor", c.conflict_factor}, {"phase_blocks", c.phase_blocks}};
}

inline json embedding_json(const Embedding& e) {
    json scales = json::array();
    for (const auto& s : e.scales) {
        scales.push_back({{"j", s.j}, {"r", s.r}, {"net_size", s.net.size()}, {"colors", s.color_count}});
    }
    return {{"N", e.N},
            {"alpha", e.alpha},
            {"C", e.C},
            {"L_lo", e.L_lo},
            {"L_up", e.L_up},
            {"injective", e.injective},
            {"colors", e.colors},
            {"scales", scales},
            {"config", config_json(e.config)}};
}

inline json certificate_json(const SemimetricSpace& space, const Certificate& c) {
    return {{"holds", c.holds},
            {"worst_lower", c.worst_lower},
            {"worst_upper", c.worst_upper},
            {"lower_pair", pair_json(space, c.lower_pair)},
            {"upper_pair", pair_json(space, c.upper_pair)}};
}

inline json pipeline_json(const SemimetricSpace& space, const PipelineResult& r) {
    return {{"p", r.remetrization.p},
            {"alpha", r.alpha},
            {"alpha_prime", r.alpha_prime},
            {"C", r.C},
            {"C_prime", r.C_prime},
            {"constant_bound", r.constant_bound},
            {"remetrization_holds", r.remetrization_holds},
            {"constant_bound_holds", r.constant_bound_holds},
            {"certified", r.certified()},
            {"certificate", certificate_json(space, r.certificate)},
            {"remetrization", remetrization_json(space, r.remetrization)},
            {"embedding", embedding_json(r.embedding)}};
}

inline json converse_json(const ConverseReport& r) {
    return {{"alpha", r.alpha}, {"L_lo", r.L_lo},   {"L_up", r.L_up},  {"C_emp", r.C_emp},
            {"K_bound", r.K_bound}, {"K", r.K}, {"holds", r.holds}};
}

inline json bound_check_json(const SemimetricSpace& space, const BoundCheck& c, std::size_t exact_limit) {
    return {{"base", doubling_json(space, c.base, exact_limit)},
            {"transformed", doubling_json(space, c.transformed, exact_limit)},
            {"exponent", c.exponent},
            {"bound", c.bound},
            {"measured", c.measured},
            {"margin", c.margin()},
            {"holds", c.holds},
            {"indicative", c.indicative}};
}

} // namespace semimetric::report

#endif
