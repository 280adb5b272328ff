#ifndef SEMIMETRIC_IO_HPP
#define SEMIMETRIC_IO_HPP

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "embed.hpp"
#include "space.hpp"

/**
 * @file io.hpp
 *
 * @brief Space files. JSON: {"labels": [...], "matrix": [[...], ...]}.
 * CSV: a header row of labels followed by one row per point. Only full
 * matrices are accepted. Writers print 17 significant digits.
 */

namespace semimetric::io {

enum class Format { json, csv };

inline Format parse_format(const std::string& name) {
    if (name == "json") return Format::json;
    if (name == "csv") return Format::csv;
    throw ParameterError("unknown format '" + name + "' (expected json or csv)");
}

inline std::string number(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

/// Labels and matrix as read, before axiom checks.
struct RawSpace {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> rows;
};

inline RawSpace parse_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw StructuralError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("labels") || !doc.contains("matrix")) {
        throw StructuralError("space JSON must be an object with \"labels\" and \"matrix\"");
    }
    RawSpace raw;
    try {
        raw.labels = doc.at("labels").get<std::vector<std::string>>();
        raw.rows = doc.at("matrix").get<std::vector<std::vector<double>>>();
    } catch (const nlohmann::json::exception& e) {
        throw StructuralError(std::string("malformed space JSON: ") + e.what());
    }
    return raw;
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) {
        field = trim(field);
        if (field.size() >= 2 && field.front() == '"' && field.back() == '"') {
            field = field.substr(1, field.size() - 2);
        }
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

} // namespace detail

inline RawSpace parse_csv(const std::string& text) {
    std::istringstream stream(text);
    std::string line;
    RawSpace raw;
    bool header = true;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        if (detail::trim(line).empty()) {
            continue;
        }
        auto fields = detail::split_csv_line(line);
        if (header) {
            raw.labels = std::move(fields);
            header = false;
            continue;
        }
        std::vector<double> row;
        for (const auto& f : fields) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(f, &used));
                if (used != f.size()) {
                    throw std::invalid_argument(f);
                }
            } catch (const std::exception&) {
                throw StructuralError("line " + std::to_string(line_no) + ": not a number: '" + f + "'");
            }
        }
        raw.rows.push_back(std::move(row));
    }
    if (header) {
        throw StructuralError("empty CSV input");
    }
    return raw;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw StructuralError("cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Parse by extension (.json / .csv), falling back to sniffing for '{'.
inline RawSpace parse_any(const std::string& text, const std::string& path_hint = "") {
    auto ends_with = [&](const char* suffix) {
        const std::string s(suffix);
        return path_hint.size() >= s.size() && path_hint.compare(path_hint.size() - s.size(), s.size(), s) == 0;
    };
    if (ends_with(".json")) {
        return parse_json(text);
    }
    if (ends_with(".csv")) {
        return parse_csv(text);
    }
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        return parse_json(text);
    }
    return parse_csv(text);
}

/// Parse and validate; axiom failures surface as `AxiomError`.
inline SemimetricSpace to_space(const RawSpace& raw, double tolerance = 0.0) {
    return SemimetricSpace(raw.labels, DistanceMatrix::from_rows(raw.rows), tolerance);
}

inline SemimetricSpace load_space(const std::string& path, double tolerance = 0.0) {
    return to_space(parse_any(read_file(path), path), tolerance);
}

inline void write_matrix_json(std::ostream& out, const std::vector<std::string>& labels, const DistanceMatrix& m) {
    out << "{\n  \"labels\": [";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << (i ? ", " : "") << nlohmann::json(labels[i]).dump();
    }
    out << "],\n  \"matrix\": [\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << "    [";
        for (std::size_t j = 0; j < m.size(); ++j) {
            out << (j ? ", " : "") << number(m(i, j));
        }
        out << (i + 1 < m.size() ? "],\n" : "]\n");
    }
    out << "  ]\n}\n";
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    return s.find_first_of(",\"") == std::string::npos ? s : "\"" + s + "\"";
}

} // namespace detail

inline void write_matrix_csv(std::ostream& out, const std::vector<std::string>& labels, const DistanceMatrix& m) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << (i ? "," : "") << detail::csv_field(labels[i]);
    }
    out << "\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            out << (j ? "," : "") << number(m(i, j));
        }
        out << "\n";
    }
}

inline void write_space(std::ostream& out, const SemimetricSpace& space, Format format) {
    if (format == Format::json) {
        write_matrix_json(out, space.labels(), space.matrix());
    } else {
        write_matrix_csv(out, space.labels(), space.matrix());
    }
}

/// Header `label,x1,...,xN`, then one row per point.
inline void write_coords_csv(std::ostream& out, const std::vector<std::string>& labels, const Embedding& embedding) {
    out << "label";
    for (std::size_t k = 1; k <= embedding.N; ++k) {
        out << ",x" << k;
    }
    out << "\n";
    for (std::size_t i = 0; i < embedding.n; ++i) {
        out << detail::csv_field(labels[i]);
        for (double c : embedding.point(i)) {
            out << "," << number(c);
        }
        out << "\n";
    }
}

} // namespace semimetric::io

#endif
