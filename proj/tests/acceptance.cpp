// Acceptance suite: one PASS/FAIL line per criterion. With no arguments every
// criterion runs; otherwise only the numbered ones. Exit status is nonzero if
// any selected criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <semimetric/semimetric.hpp>

#include "json_schema.hpp"
#include "oracles.hpp"
#include "process.hpp"

using namespace semimetric;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double time_limit_s;
    std::function<Outcome()> run;
};

std::string fmt(const char* format, double a) {
    char buffer[128];
    std::snprintf(buffer, sizeof(buffer), format, a);
    return buffer;
}

SemimetricSpace random_bmetric(std::size_t n, double K, std::uint64_t seed) {
    GeneratorSpec spec;
    spec.family = Family::random_bmetric;
    spec.n = n;
    spec.K = K;
    spec.seed = seed;
    return generate(spec);
}

SemimetricSpace grid(std::size_t k, double p = 1.0) {
    GeneratorSpec spec;
    spec.family = Family::snowflaked_grid;
    spec.k = k;
    spec.p = p;
    return generate(spec);
}

SemimetricSpace euclidean_points(std::size_t n, std::size_t dim, std::uint64_t seed) {
    GeneratorSpec spec;
    spec.family = Family::euclidean_points;
    spec.n = n;
    spec.dim = dim;
    spec.seed = seed;
    return generate(spec);
}

double seeded_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Mix of raw semimetrics (wide and narrow ranges) and generated b-metrics.
SemimetricSpace mixed_space(std::uint64_t i, std::size_t max_n) {
    const std::size_t n = 3 + i % (max_n - 2);
    switch (i % 3) {
    case 0: return SemimetricSpace(oracle::random_semimetric(n, 1000 + i, 0.1, 1.0));
    case 1: return SemimetricSpace(oracle::random_semimetric(n, 1000 + i, 0.001, 10.0));
    default: return random_bmetric(n, 1.0 + static_cast<double>(i % 7), 1000 + i);
    }
}

// Embeddings produced in criteria 8 and 9, closed by criterion 10.
struct Produced {
    SemimetricSpace space;
    DistanceMatrix image;
    double alpha;
    std::string tag;
};
std::vector<Produced> produced_8;
std::vector<Produced> produced_9;

// ---------------------------------------------------------------------------

Outcome criterion_1() {
    std::size_t relax_mismatch = 0, poly_mismatch = 0;
    for (std::uint64_t i = 0; i < 500; ++i) {
        const auto s = mixed_space(i, 12);
        if (relaxation_constant(s).K != oracle::relaxation(s.matrix())) ++relax_mismatch;
        if (polygonal_constant(s).c != oracle::polygonal(s.matrix())) ++poly_mismatch;
    }
    return {relax_mismatch == 0 && poly_mismatch == 0,
            "500 spaces n<=12; relaxation mismatches " + std::to_string(relax_mismatch) + ", polygonal mismatches " +
                std::to_string(poly_mismatch)};
}

Outcome criterion_2() {
    std::size_t left = 0, right = 0;
    for (std::uint64_t i = 0; i < 500; ++i) {
        const auto s = mixed_space(i + 7000, 15);
        const auto r = chain_metric(s);
        const double c = compute_constants(s).polygonal_c;
        for (std::size_t x = 0; x < s.size(); ++x)
            for (std::size_t y = 0; y < s.size(); ++y) {
                if (r.D(x, y) > s(x, y)) ++left;
                if (s(x, y) > c * r.D(x, y) * (1 + 1e-12)) ++right;
            }
    }
    return {left == 0 && right == 0, "500 spaces; D>d pairs " + std::to_string(left) + ", d>cD pairs " +
                                         std::to_string(right)};
}

Outcome criterion_3() {
    std::size_t violations = 0;
    double worst_excess = 0.0;
    std::string worst_case;
    std::optional<SemimetricSpace> first_violation;
    std::mt19937_64 rng(2024);
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const std::size_t n = 3 + i % 13;
        const double K = 1.0 + seeded_uniform(rng);
        const auto s = random_bmetric(n, K, i);
        const auto cert = frink_verify(s);
        if (!cert.holds) {
            ++violations;
            const double excess = cert.worst_ratio / cert.bound;
            if (excess > worst_excess) {
                worst_excess = excess;
                worst_case = "seed " + std::to_string(i) + " n=" + std::to_string(n) + " K=" + fmt("%.4f", cert.K) +
                             " d/D=" + fmt("%.4f", cert.worst_ratio);
            }
            if (!first_violation) first_violation = s;
        }
    }
    std::string detail = "1000 random b-metrics K<=2 n<=15; violations " + std::to_string(violations);
    if (violations > 0) {
        detail += "; worst ratio/K^2 " + fmt("%.4f", worst_excess) + " (" + worst_case + ")";
        const auto dir = proc::scratch_dir("acceptance3");
        std::ostringstream text;
        io::write_space(text, *first_violation, io::Format::json);
        proc::write(dir + "/violation.json", text.str());
        const auto r = proc::run(SEMIMETRIC_CLI, "verify " + proc::quote(dir + "/violation.json") + " --theorem 2.1", dir);
        detail += "; CLI exit on first violation " + std::to_string(r.code);
        if (r.code != 2) detail += " (expected 2)";
    }
    return {violations == 0, detail};
}

Outcome criterion_4() {
    std::size_t failures = 0;
    double smallest_p = 1.0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        const auto s = mixed_space(i + 3000, 12);
        for (double eps : {1.0, 0.5, 0.1}) {
            const auto r = epsilon_remetrize(s, eps);
            bool ok = r.p > 0.0 && r.p <= 1.0;
            const auto powered = power_matrix(s.matrix(), r.p);
            for (std::size_t x = 0; x < s.size(); ++x)
                for (std::size_t y = 0; y < s.size(); ++y) {
                    if (r.D(x, y) > powered(x, y)) ok = false;
                    if (powered(x, y) > (1 + eps) * r.D(x, y)) ok = false;
                }
            if (oracle::polygonal_relaxed(powered) > (1 + eps) * (1 + 1e-12)) ok = false;
            if (!ok) ++failures;
            smallest_p = std::min(smallest_p, r.p);
        }
    }
    return {failures == 0, "600 searches; failures " + std::to_string(failures) + ", smallest p " + fmt("%.4g", smallest_p)};
}

Outcome criterion_5() {
    bool ok = true;
    std::string detail;
    for (std::size_t n : {3U, 5U, 10U}) {
        GeneratorSpec spec;
        spec.n = n;
        const auto s = generate(spec);
        std::size_t zero = 0;
        while (s.label(zero) != "0") ++zero;
        for (double r : {1.25, 1.5, 1.75}) {
            const auto cell = cover_requirement(s.matrix(), zero, r, 64);
            if (!cell.exact() || cell.upper != 2 * n + 1) ok = false;
        }
        const auto report = doubling_constant(s);
        if (report.lower < 2 * n + 1) ok = false;
        detail += "n=" + std::to_string(n) + ": B(0,r) needs " + std::to_string(2 * n + 1) + ", C>=" +
                  std::to_string(report.lower) + "; ";
    }
    GeneratorSpec spec;
    spec.n = 4;
    const auto weak = weak_doubling_constant(generate(spec), 12);
    if (!weak.exact || weak.upper > 3) ok = false;
    detail += "weak_C(n=4)=" + std::to_string(weak.upper) + " over " + std::to_string(weak.subsets_examined) + " subsets";
    return {ok, detail};
}

std::vector<SemimetricSpace> doubling_test_spaces() {
    std::vector<SemimetricSpace> spaces;
    for (std::uint64_t i = 0; i < 50; ++i) {
        switch (i % 5) {
        case 0: spaces.push_back(SemimetricSpace(oracle::random_semimetric(4 + i % 7, 500 + i, 0.1, 1.0))); break;
        case 1: spaces.push_back(euclidean_points(6 + i % 6, 1 + i % 3, 500 + i)); break;
        case 2: spaces.push_back(random_bmetric(5 + i % 6, 1.0 + static_cast<double>(i % 4), 500 + i)); break;
        case 3: spaces.push_back(grid(2 + i % 3)); break;
        default: {
            GeneratorSpec spec;
            spec.n = 1 + i % 5;
            spaces.push_back(generate(spec));
        }
        }
    }
    return spaces;
}

Outcome criterion_6() {
    std::size_t checks = 0, failures = 0, inexact = 0;
    double tightest = 1e300;
    for (const auto& s : doubling_test_spaces()) {
        for (double p : {1.0, 0.7, 0.5}) {
            const auto c = check_snowflake_doubling(s, p, 64);
            ++checks;
            if (c.indicative) ++inexact;
            if (!c.holds || c.indicative) ++failures;
            tightest = std::min(tightest, c.margin());
        }
    }
    return {failures == 0, std::to_string(checks) + " checks; failures " + std::to_string(failures) + ", inexact " +
                               std::to_string(inexact) + ", smallest margin " + fmt("%.0f", tightest)};
}

Outcome criterion_7() {
    std::size_t failures = 0, inexact = 0;
    std::mt19937_64 rng(77);
    for (std::uint64_t i = 0; i < 50; ++i) {
        std::optional<SemimetricSpace> d_space, D_space;
        double alpha = 1.0;
        switch (i % 4) {
        case 0: {  // D = d
            D_space = euclidean_points(5 + i % 6, 2, 900 + i);
            d_space = D_space;
            break;
        }
        case 1: {  // d = s * D on a grid
            D_space = grid(3);
            alpha = 1.0 + 2.0 * seeded_uniform(rng);
            DistanceMatrix m = D_space->matrix();
            for (std::size_t x = 0; x < m.size(); ++x)
                for (std::size_t y = 0; y < m.size(); ++y) m(x, y) *= alpha;
            d_space = SemimetricSpace(D_space->labels(), m);
            break;
        }
        case 2: {  // chain metric of a b-metric with K <= 2
            d_space = random_bmetric(10, 1.0 + seeded_uniform(rng), 900 + i);
            const auto rem = chain_metric(*d_space);
            D_space = SemimetricSpace(d_space->labels(), rem.D);
            const double K = relaxation_constant(*d_space).K;
            alpha = std::max(K * K, rem.sandwich_hi);
            break;
        }
        default: {  // independent pairwise stretch of a metric by factors in [1, alpha]
            D_space = euclidean_points(8, 2, 900 + i);
            alpha = 1.0 + 3.0 * seeded_uniform(rng);
            DistanceMatrix m = D_space->matrix();
            for (std::size_t x = 0; x < m.size(); ++x)
                for (std::size_t y = x + 1; y < m.size(); ++y) {
                    m(x, y) *= 1.0 + (alpha - 1.0) * seeded_uniform(rng);
                    m(y, x) = m(x, y);
                }
            d_space = SemimetricSpace(D_space->labels(), m);
        }
        }
        const auto c = check_perturbation_doubling(*d_space, *D_space, alpha, 64);
        if (c.indicative) ++inexact;
        if (!c.holds || c.indicative || c.exponent != perturbation_exponent(alpha)) ++failures;
    }
    return {failures == 0, "50 pairs; failures " + std::to_string(failures) + ", inexact " + std::to_string(inexact)};
}

Outcome criterion_8() {
    produced_8.clear();
    std::vector<std::size_t> dims;
    std::vector<double> constants;
    bool certified = true;
    for (std::size_t k : {4U, 8U, 16U}) {
        const auto s = grid(k);
        const auto e = assouad_embed(s);
        const auto image = embedded_distances(e);
        if (!certify(s.matrix(), image, e.alpha, e.C).holds) certified = false;
        dims.push_back(e.N);
        constants.push_back(e.C);
        produced_8.push_back({s, image, e.alpha, "grid " + std::to_string(k)});
    }
    const bool same_N = dims[0] == dims[1] && dims[1] == dims[2];
    const bool bounded = constants[2] <= 1.5 * constants[0];
    std::string detail = "certified " + std::string(certified ? "yes" : "no") + "; N = " + std::to_string(dims[0]) +
                         "/" + std::to_string(dims[1]) + "/" + std::to_string(dims[2]) + (same_N ? " (identical)" : " (differ)") +
                         "; C = " + fmt("%.4f", constants[0]) + "/" + fmt("%.4f", constants[1]) + "/" +
                         fmt("%.4f", constants[2]) + "; C(16)/C(4) = " + fmt("%.4f", constants[2] / constants[0]);
    return {certified && same_N && bounded, detail};
}

Outcome criterion_9() {
    produced_9.clear();
    std::size_t failures = 0;
    double worst = 0.0;
    std::mt19937_64 rng(99);
    for (std::uint64_t i = 0; i < 100; ++i) {
        const std::size_t n = 3 + i % 10;
        const double K = 1.0 + 2.0 * seeded_uniform(rng);
        const auto s = random_bmetric(n, K, 4000 + i);
        const auto r = bmetric_assouad_pipeline(s);
        const auto image = embedded_distances(r.embedding);
        bool ok = r.certified();
        // Independent pointwise scan against d^(p alpha).
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = x + 1; y < n; ++y) {
                const double target = std::pow(s(x, y), r.alpha_prime);
                if (image(x, y) > r.C_prime * target * (1 + 1e-9) || target > r.C_prime * image(x, y) * (1 + 1e-9))
                    ok = false;
            }
        if (r.C_prime > std::pow(2.0, r.alpha) * r.C * (1 + 1e-9)) ok = false;
        worst = std::max(worst, r.C_prime / (std::pow(2.0, r.alpha) * r.C));
        if (!ok) ++failures;
        produced_9.push_back({s, image, r.alpha_prime, "seed " + std::to_string(4000 + i)});
    }
    return {failures == 0, "100 pipelines; failures " + std::to_string(failures) + ", max C'/(2^a C) " + fmt("%.4f", worst)};
}

Outcome criterion_10() {
    if (produced_8.empty()) criterion_8();
    if (produced_9.empty()) criterion_9();
    std::size_t checked = 0, failures = 0;
    double tightest = 0.0;
    for (const auto* list : {&produced_8, &produced_9}) {
        for (const auto& p : *list) {
            const auto c = converse_bound(p.space, p.image, p.alpha);
            ++checked;
            if (!c.holds) ++failures;
            tightest = std::max(tightest, c.K / c.K_bound);
        }
    }
    return {failures == 0, std::to_string(checked) + " embeddings; failures " + std::to_string(failures) +
                               ", max K/K_bound " + fmt("%.4f", tightest)};
}

Outcome criterion_11() {
    const std::string cli = SEMIMETRIC_CLI;
    const auto dir = proc::scratch_dir("acceptance11");
    const schema::Validator validator(SEMIMETRIC_SCHEMAS);
    std::vector<std::string> problems;
    auto q = [](const std::string& s) { return proc::quote(s); };

    // Inputs.
    auto gen = [&](const std::string& args, const std::string& file) {
        const auto r = proc::run(cli, args + " --out " + q(dir + "/" + file), dir);
        if (r.code != 0) problems.push_back("generate failed: " + args);
        const auto doc = json::parse(r.out, nullptr, false);
        for (const auto& e : validator.validate(doc, "generate.schema.json")) problems.push_back("generate: " + e);
        return r.out;
    };
    const auto first = gen("--seed 5 generate random-bmetric --n 9 --K 2", "bm.json");
    const auto bm_bytes = proc::slurp(dir + "/bm.json");
    const auto second = gen("--seed 5 generate random-bmetric --n 9 --K 2", "bm.json");
    if (first != second || bm_bytes != proc::slurp(dir + "/bm.json")) problems.push_back("generate not reproducible");
    gen("generate snowflaked-grid --k 3", "grid.json");
    gen("generate example31 --n 3", "e31.json");
    gen("--seed 1 --format csv generate euclidean-points --n 12 --dim 3", "pts.csv");
    std::ostringstream bad;
    io::write_matrix_json(bad, {"a", "b", "c"}, DistanceMatrix::from_rows({{0, 1, 6}, {1, 0, 1}, {6, 1, 0}}));
    proc::write(dir + "/k3.json", bad.str());
    proc::write(dir + "/asym.csv", "a,b\n0,1\n2,0\n");
    proc::write(dir + "/ragged.csv", "a,b\n0,1\n1\n");
    std::ostringstream line;
    DistanceMatrix sq(6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) sq(i, j) = (double(i) - double(j)) * (double(i) - double(j));
    io::write_matrix_json(line, io::detail::split_csv_line("x0,x1,x2,x3,x4,x5"), sq);
    proc::write(dir + "/sqline.json", line.str());

    // Reports: run twice, compare bytes, validate schema.
    const std::vector<std::pair<std::string, std::string>> reports = {
        {"constants", "constants " + q(dir + "/bm.json")},
        {"remetrize", "remetrize " + q(dir + "/bm.json") + " --eps 0.5"},
        {"remetrize", "remetrize " + q(dir + "/pts.csv")},
        {"doubling", "doubling " + q(dir + "/e31.json") + " --weak"},
        {"doubling", "--seed 2 doubling " + q(dir + "/pts.csv") + " --weak --weak-exact-max 6 --samples 50 --exact-max 4"},
        {"embed", "embed " + q(dir + "/grid.json") + " --alpha 0.6"},
        {"pipeline", "pipeline " + q(dir + "/bm.json")},
        {"verify", "verify " + q(dir + "/bm.json") + " --theorem 2.2 --eps 0.1"},
        {"verify", "verify " + q(dir + "/grid.json") + " --theorem 3.3 --p 0.5"},
        {"verify", "verify " + q(dir + "/bm.json") + " --theorem 3.4"},
        {"verify", "verify " + q(dir + "/bm.json") + " --theorem 3.5"},
        {"verify", "verify " + q(dir + "/bm.json") + " --theorem 4.1"},
        {"verify", "verify " + q(dir + "/e31.json") + " --theorem 4.3"},
        {"verify", "verify " + q(dir + "/sqline.json") + " --theorem 2.1"},
    };
    std::size_t validated = 0;
    for (const auto& [command, args] : reports) {
        const auto a = proc::run(cli, args, dir);
        const auto b = proc::run(cli, args, dir);
        if (a.out != b.out || a.code != b.code) problems.push_back("not byte-identical: " + args);
        const auto doc = json::parse(a.out, nullptr, false);
        if (doc.is_discarded()) {
            problems.push_back("unparseable report: " + args);
            continue;
        }
        for (const auto& e : validator.validate(doc, schema::schema_for(command))) problems.push_back(args + ": " + e);
        ++validated;
    }

    // Exit-code matrix.
    const std::vector<std::pair<std::string, int>> matrix = {
        {"verify " + q(dir + "/e31.json") + " --theorem 4.3", 0},
        {"constants " + q(dir + "/pts.csv"), 0},
        {"--help", 0},
        {"verify " + q(dir + "/k3.json") + " --theorem 2.1", 1},
        {"embed " + q(dir + "/bm.json"), 1},
        {"constants " + q(dir + "/asym.csv"), 1},
        {"constants " + q(dir + "/ragged.csv"), 1},
        {"constants " + q(dir + "/does-not-exist.json"), 1},
        {"generate example31 --n 0", 1},
        {"verify " + q(dir + "/sqline.json") + " --theorem 2.1", 2},
    };
    std::size_t matrix_ok = 0;
    for (const auto& [args, expected] : matrix) {
        const auto r = proc::run(cli, args, dir);
        if (r.code == expected) {
            ++matrix_ok;
        } else {
            problems.push_back("exit " + std::to_string(r.code) + " (expected " + std::to_string(expected) + "): " + args);
        }
    }
    const auto k3 = proc::run(cli, "verify " + q(dir + "/k3.json") + " --theorem 2.1", dir);
    if (k3.err.find("K ⩽ 2 required, found 3") == std::string::npos) problems.push_back("missing K message");

    std::string detail = std::to_string(validated) + " reports reproduced and schema-checked; exit matrix " +
                         std::to_string(matrix_ok) + "/" + std::to_string(matrix.size());
    for (const auto& p : problems) detail += "\n      " + p;
    return {problems.empty(), detail};
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "constants match brute-force oracles", 30, criterion_1},
        {2, "chain metric sandwich D <= d <= cD", 0, criterion_2},
        {3, "d <= K^2 D for K <= 2", 120, criterion_3},
        {4, "epsilon remetrization certified", 0, criterion_4},
        {5, "integer semimetric replication", 60, criterion_5},
        {6, "snowflake doubling bound", 0, criterion_6},
        {7, "perturbation doubling bound", 0, criterion_7},
        {8, "grid embeddings", 60, criterion_8},
        {9, "b-metric pipeline", 0, criterion_9},
        {10, "converse bound on produced embeddings", 0, criterion_10},
        {11, "CLI reproducibility, schemas, exit codes", 0, criterion_11},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

    int failed = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::string timing = fmt("%.2fs", seconds);
        if (c.time_limit_s > 0) {
            timing += fmt(" (limit %.0fs)", c.time_limit_s);
            if (seconds > c.time_limit_s) {
                outcome.pass = false;
                outcome.detail += "; time limit exceeded";
            }
        }
        std::printf("[%s] %2d %s: %s [%s]\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name, outcome.detail.c_str(),
                    timing.c_str());
        std::fflush(stdout);
        if (!outcome.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
