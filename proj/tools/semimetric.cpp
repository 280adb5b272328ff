// Command-line front end: generate spaces, compute constants, remetrize,
// measure doubling constants, embed, and verify bounds on concrete inputs.
//
// Exit codes: 0 certified success, 1 usage or structural error,
// 2 a bound that should hold was violated on this instance.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <semimetric/semimetric.hpp>

namespace {

using nlohmann::json;
using namespace semimetric;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_violation = 2;

struct GlobalOptions {
    std::string out;
    std::uint64_t seed = 0;
    std::string format = "json";
    bool quiet = false;
    double tolerance = 0.0;
};

struct EmbedOptions {
    double alpha = 0.75;
    double tau = 0.5;
    double conflict_factor = 6.0;
    std::size_t phase_blocks = 3;

    EmbeddingConfig config() const { return {alpha, tau, conflict_factor, phase_blocks}; }
};

void add_embed_options(CLI::App* cmd, EmbedOptions& opts) {
    cmd->add_option("--alpha", opts.alpha, "snowflake exponent of the embedding, in (0,1)")->capture_default_str();
    cmd->add_option("--tau", opts.tau, "ratio between consecutive scales")->capture_default_str();
    cmd->add_option("--conflict-factor", opts.conflict_factor, "same-color separation in units of the scale")
        ->capture_default_str();
    cmd->add_option("--phase-blocks", opts.phase_blocks, "coordinate blocks cycled through by the scales")
        ->capture_default_str();
}

json embed_params(const EmbedOptions& o) {
    return {{"alpha", o.alpha}, {"tau", o.tau}, {"conflict_factor", o.conflict_factor}, {"phase_blocks", o.phase_blocks}};
}

class Runner {
public:
    explicit Runner(const GlobalOptions& g) : g_(g) {}

    json manifest(const std::string& command, json input, json parameters, std::vector<std::string> outputs = {}) const {
        if (!g_.out.empty()) {
            outputs.insert(outputs.begin(), g_.out);
        }
        return {{"command", command},
                {"input", std::move(input)},
                {"parameters", std::move(parameters)},
                {"seed", g_.seed},
                {"tool_version", report::tool_version},
                {"outputs", outputs}};
    }

    static json input_ref(const std::string& path) { return {{"path", path}}; }

    SemimetricSpace load(const std::string& path) const { return io::load_space(path, g_.tolerance); }

    void emit(const json& doc) const { emit_text(doc.dump(2) + "\n"); }

    void emit_text(const std::string& text) const {
        if (g_.out.empty()) {
            std::cout << text;
            return;
        }
        write_file(g_.out, text);
    }

    static void write_file(const std::string& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw StructuralError("cannot write '" + path + "'");
        }
        out << text;
    }

    void info(const std::string& message) const {
        if (!g_.quiet) {
            std::cerr << message << "\n";
        }
    }

    const GlobalOptions& globals() const { return g_; }

private:
    const GlobalOptions& g_;
};

// ---------------------------------------------------------------------------

struct GenerateArgs {
    std::string family;
    GeneratorSpec spec;
};

json generator_json(const GenerateArgs& a) {
    return {{"family", a.family}, {"n", a.spec.n},     {"m", a.spec.m},   {"K", a.spec.K},
            {"k", a.spec.k},      {"p", a.spec.p},     {"dim", a.spec.dim}, {"seed", a.spec.seed}};
}

int cmd_generate(const Runner& run, GenerateArgs args) {
    args.spec.family = parse_family(args.family);
    args.spec.seed = run.globals().seed;
    const auto format = io::parse_format(run.globals().format);
    const auto space = generate(args.spec);
    std::ostringstream text;
    io::write_space(text, space, format);
    const json man = run.manifest("generate", {{"generator", generator_json(args)}},
                                  {{"format", run.globals().format}, {"points", space.size()}});
    if (run.globals().out.empty()) {
        std::cout << text.str();
        run.info(man.dump(2));
        return exit_ok;
    }
    Runner::write_file(run.globals().out, text.str());
    const auto reread = io::load_space(run.globals().out);
    if (!(reread.labels() == space.labels())) {
        throw StructuralError("written file does not reproduce the generated labels");
    }
    std::cout << json{{"manifest", man}}.dump(2) << "\n";
    return exit_ok;
}

int cmd_constants(const Runner& run, const std::string& input) {
    const auto space = run.load(input);
    json doc = report::constants_json(space, compute_constants(space));
    doc["manifest"] = run.manifest("constants", Runner::input_ref(input), json::object());
    run.emit(doc);
    return exit_ok;
}

int cmd_remetrize(const Runner& run, const std::string& input, std::optional<double> eps, const std::string& matrix_out) {
    const auto space = run.load(input);
    const auto rem = eps ? epsilon_remetrize(space, *eps) : chain_metric(space);
    json doc = report::remetrization_json(space, rem);
    std::vector<std::string> outputs;
    if (!matrix_out.empty()) {
        std::ostringstream text;
        io::write_space(text, SemimetricSpace(space.labels(), rem.D), io::parse_format(run.globals().format));
        Runner::write_file(matrix_out, text.str());
        outputs.push_back(matrix_out);
    }
    doc["manifest"] = run.manifest("remetrize", Runner::input_ref(input),
                                   {{"eps", eps ? json(*eps) : json(nullptr)}}, outputs);
    run.emit(doc);
    return exit_ok;
}

struct DoublingArgs {
    std::string input;
    std::size_t exact_max = default_doubling_exact_limit;
    bool weak = false;
    std::size_t weak_exact_max = default_weak_exact_limit;
    std::size_t samples = 2000;
    std::string sweep_family;
    std::vector<std::size_t> sweep_sizes;
    std::size_t sweep_m = 4;
};

int cmd_doubling_sweep(const Runner& run, const DoublingArgs& a) {
    std::ostringstream csv;
    csv << "n,points,doubling_lower,doubling_upper,weak_lower,weak_upper\n";
    for (auto size : a.sweep_sizes) {
        GeneratorSpec spec;
        spec.family = parse_family(a.sweep_family);
        spec.n = size;
        spec.k = size;
        spec.m = a.sweep_m;
        spec.seed = run.globals().seed;
        const auto space = generate(spec);
        const auto dbl = doubling_constant(space, a.exact_max);
        csv << size << "," << space.size() << "," << dbl.lower << "," << dbl.upper;
        if (a.weak) {
            const auto weak = weak_doubling_constant(space, a.weak_exact_max, run.globals().seed, a.samples);
            csv << "," << weak.lower << "," << weak.upper << "\n";
        } else {
            csv << ",,\n";
        }
    }
    run.emit_text(csv.str());
    return exit_ok;
}

int cmd_doubling(const Runner& run, const DoublingArgs& a) {
    if (!a.sweep_family.empty()) {
        return cmd_doubling_sweep(run, a);
    }
    if (a.input.empty()) {
        throw ParameterError("doubling needs an input file or --sweep-family");
    }
    const auto space = run.load(a.input);
    json doc;
    doc["doubling"] = report::doubling_json(space, doubling_constant(space, a.exact_max), a.exact_max);
    json params = {{"exact_max", a.exact_max}, {"weak", a.weak}};
    if (a.weak) {
        const auto weak = weak_doubling_constant(space, a.weak_exact_max, run.globals().seed, a.samples);
        doc["weak_doubling"] = report::weak_doubling_json(space, weak, a.weak_exact_max);
        params["weak_exact_max"] = a.weak_exact_max;
        params["samples"] = a.samples;
    }
    doc["manifest"] = run.manifest("doubling", Runner::input_ref(a.input), params);
    run.emit(doc);
    return exit_ok;
}

struct EmbedArgs {
    std::string input;
    EmbedOptions opts;
    std::string coords_out;
    std::vector<std::size_t> sweep_grid;
};

int cmd_embed(const Runner& run, const EmbedArgs& a) {
    if (!a.sweep_grid.empty()) {
        std::ostringstream csv;
        csv << "k,points,N,C,L_lo,L_up\n";
        for (auto k : a.sweep_grid) {
            GeneratorSpec spec;
            spec.family = Family::snowflaked_grid;
            spec.k = k;
            const auto e = assouad_embed(generate(spec), a.opts.config());
            csv << k << "," << k * k << "," << e.N << "," << io::number(e.C) << "," << io::number(e.L_lo) << ","
                << io::number(e.L_up) << "\n";
        }
        run.emit_text(csv.str());
        return exit_ok;
    }
    if (a.input.empty()) {
        throw ParameterError("embed needs an input file or --sweep-grid");
    }
    const auto space = run.load(a.input);
    const auto embedding = assouad_embed(space, a.opts.config());
    const auto cert = certify(space.matrix(), embedded_distances(embedding), embedding.alpha, embedding.C);
    std::vector<std::string> outputs;
    if (!a.coords_out.empty()) {
        std::ostringstream text;
        io::write_coords_csv(text, space.labels(), embedding);
        Runner::write_file(a.coords_out, text.str());
        outputs.push_back(a.coords_out);
    }
    json doc = report::embedding_json(embedding);
    doc["certificate"] = report::certificate_json(space, cert);
    doc["manifest"] = run.manifest("embed", Runner::input_ref(a.input), embed_params(a.opts), outputs);
    run.emit(doc);
    return cert.holds ? exit_ok : exit_violation;
}

int cmd_pipeline(const Runner& run, const std::string& input, const EmbedOptions& opts) {
    const auto space = run.load(input);
    const auto result = bmetric_assouad_pipeline(space, opts.config());
    json doc = report::pipeline_json(space, result);
    doc["manifest"] = run.manifest("pipeline", Runner::input_ref(input), embed_params(opts));
    run.emit(doc);
    return result.certified() ? exit_ok : exit_violation;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
    std::string input;
    std::string theorem;
    double eps = 1.0;
    double p = 0.5;
    EmbedOptions embed;
    std::string other;
    std::optional<double> sandwich_alpha;
    std::size_t exact_max = default_doubling_exact_limit;
};

json verify_params(const VerifyArgs& a) {
    json params = {{"theorem", a.theorem}};
    if (a.theorem == "2.2") params["eps"] = a.eps;
    if (a.theorem == "3.3") params["p"] = a.p;
    if (a.theorem == "3.3" || a.theorem == "3.4") params["exact_max"] = a.exact_max;
    if (a.theorem == "3.5" || a.theorem == "4.1") params["embedding"] = embed_params(a.embed);
    if (!a.other.empty()) params["other"] = a.other;
    if (a.sandwich_alpha) params["sandwich_alpha"] = *a.sandwich_alpha;
    return params;
}

struct Verdict {
    bool holds = true;
    json details;
};

Verdict verify_chain_sandwich(const SemimetricSpace& space) {
    const auto rem = chain_metric(space);
    const auto& D = rem.D;
    const double c = rem.sandwich_hi;
    bool below = true;
    bool above = true;
    bool triangle = true;
    json witness = nullptr;
    const std::size_t n = space.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (D(i, j) > space(i, j)) {
                below = false;
                witness = report::pair_json(space, {i, j});
            }
            if (space(i, j) > c * D(i, j) * (1.0 + sandwich_tolerance)) {
                above = false;
                witness = report::pair_json(space, {i, j});
            }
            for (std::size_t k = 0; k < n; ++k) {
                if (D(i, k) > (D(i, j) + D(j, k)) * (1.0 + 1e-9)) {
                    triangle = false;
                }
            }
        }
    }
    return {below && above && triangle,
            {{"c", c},
             {"D_below_d", below},
             {"d_below_cD", above},
             {"D_triangle", triangle},
             {"witness", witness},
             {"remetrization", report::remetrization_json(space, rem, false)}}};
}

Verdict verify_epsilon(const SemimetricSpace& space, double eps) {
    const auto rem = epsilon_remetrize(space, eps);
    const auto recomputed = polygonal_constant(power_matrix(space.matrix(), rem.p)).c;
    const bool holds = rem.p > 0.0 && rem.p <= 1.0 && rem.sandwich_lo <= 1.0 && rem.sandwich_hi <= 1.0 + eps &&
                       recomputed <= 1.0 + eps;
    return {holds,
            {{"recomputed_c", recomputed}, {"remetrization", report::remetrization_json(space, rem, false)}}};
}

int cmd_verify(const Runner& run, const VerifyArgs& a) {
    const auto space = run.load(a.input);
    Verdict verdict;
    json witness = nullptr;
    if (a.theorem == "2.1") {
        const auto cert = frink_verify(space);
        verdict.holds = cert.holds;
        witness = report::pair_json(space, cert.witness);
        verdict.details = {{"K", cert.K}, {"bound", cert.bound}, {"worst_ratio", cert.worst_ratio}};
    } else if (a.theorem == "2.2") {
        verdict = verify_epsilon(space, a.eps);
    } else if (a.theorem == "3.3") {
        const auto check = check_snowflake_doubling(space, a.p, a.exact_max);
        verdict = {check.holds, report::bound_check_json(space, check, a.exact_max)};
    } else if (a.theorem == "3.4") {
        const auto D_space = a.other.empty() ? SemimetricSpace(space.labels(), chain_metric(space).D) : run.load(a.other);
        double alpha = 1.0;
        if (a.sandwich_alpha) {
            alpha = *a.sandwich_alpha;
        } else {
            alpha = std::max(1.0, measure_sandwich(space.matrix(), D_space.matrix()).hi);
        }
        const auto check = check_perturbation_doubling(space, D_space, alpha, a.exact_max);
        verdict = {check.holds, report::bound_check_json(space, check, a.exact_max)};
        verdict.details["alpha"] = alpha;
    } else if (a.theorem == "3.5") {
        const auto result = bmetric_assouad_pipeline(space, a.embed.config());
        verdict = {result.certified(), report::pipeline_json(space, result)};
    } else if (a.theorem == "4.1") {
        ConverseReport converse;
        if (!a.other.empty()) {
            converse = converse_bound(space, run.load(a.other).matrix(), a.embed.alpha);
        } else {
            const auto result = bmetric_assouad_pipeline(space, a.embed.config());
            converse = converse_bound(space, embedded_distances(result.embedding), result.alpha_prime);
        }
        verdict = {converse.holds, report::converse_json(converse)};
    } else if (a.theorem == "4.3") {
        verdict = verify_chain_sandwich(space);
    } else {
        throw ParameterError("unknown theorem '" + a.theorem + "'");
    }
    json doc = {{"theorem", a.theorem},
                {"status", verdict.holds ? "certified" : "violated"},
                {"holds", verdict.holds},
                {"witness", witness},
                {"details", verdict.details}};
    doc["manifest"] = run.manifest("verify", Runner::input_ref(a.input), verify_params(a));
    run.emit(doc);
    if (!verdict.holds) {
        run.info("bound violated on this instance (theorem " + a.theorem + ")");
    }
    return verdict.holds ? exit_ok : exit_violation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite semimetric spaces: constants, remetrization, doubling, embeddings"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(semimetric::report::tool_version));

    GlobalOptions g;
    app.add_option("--out", g.out, "write the report (or space) here instead of stdout");
    app.add_option("--seed", g.seed, "seed for generators and sampling")->capture_default_str();
    app.add_option("--format", g.format, "space/matrix output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app.add_flag("--quiet", g.quiet, "suppress informational messages");
    app.add_option("--tolerance", g.tolerance, "tolerance for S1/S2 equalities on input files")->capture_default_str();

    GenerateArgs gen;
    auto* generate_cmd = app.add_subcommand("generate", "write a generated space");
    generate_cmd->add_option("family", gen.family, "example31 | doubling-not-weak | random-bmetric | snowflaked-grid | euclidean-points")
        ->required();
    generate_cmd->add_option("--n", gen.spec.n, "size parameter");
    generate_cmd->add_option("--m", gen.spec.m, "star size (doubling-not-weak)");
    generate_cmd->add_option("--K", gen.spec.K, "relaxation target (random-bmetric)");
    generate_cmd->add_option("--k", gen.spec.k, "grid side (snowflaked-grid)");
    generate_cmd->add_option("--p", gen.spec.p, "snowflake power (snowflaked-grid)");
    generate_cmd->add_option("--dim", gen.spec.dim, "dimension (euclidean-points)");

    std::string input;
    auto* constants_cmd = app.add_subcommand("constants", "relaxation and polygonal constants");
    constants_cmd->add_option("input", input, "space file (.json or .csv)")->required();

    std::optional<double> eps;
    std::string matrix_out;
    auto* remetrize_cmd = app.add_subcommand("remetrize", "chain metric, or the (p, D) search with --eps");
    remetrize_cmd->add_option("input", input, "space file")->required();
    remetrize_cmd->add_option("--eps", eps, "target sandwich 1 + eps");
    remetrize_cmd->add_option("--matrix-out", matrix_out, "also write D as a space file");

    DoublingArgs dbl;
    auto* doubling_cmd = app.add_subcommand("doubling", "doubling and weak doubling constants");
    doubling_cmd->add_option("input", dbl.input, "space file");
    doubling_cmd->add_option("--exact-max", dbl.exact_max, "largest ball solved exactly")->capture_default_str();
    doubling_cmd->add_flag("--weak", dbl.weak, "also compute the weak doubling constant");
    doubling_cmd->add_option("--weak-exact-max", dbl.weak_exact_max, "largest space searched exhaustively")
        ->capture_default_str();
    doubling_cmd->add_option("--samples", dbl.samples, "random subsets when sampling")->capture_default_str();
    doubling_cmd->add_option("--sweep-family", dbl.sweep_family, "emit a CSV series over a generator family");
    doubling_cmd->add_option("--sweep-sizes", dbl.sweep_sizes, "size parameters for the series")->delimiter(',');
    doubling_cmd->add_option("--sweep-m", dbl.sweep_m, "star size for doubling-not-weak series")->capture_default_str();

    EmbedArgs emb;
    auto* embed_cmd = app.add_subcommand("embed", "embed a metric space into R^N");
    embed_cmd->add_option("input", emb.input, "space file");
    add_embed_options(embed_cmd, emb.opts);
    embed_cmd->add_option("--coords-out", emb.coords_out, "write coordinates as CSV");
    embed_cmd->add_option("--sweep-grid", emb.sweep_grid, "emit a CSV series over grid sides")->delimiter(',');

    EmbedOptions pipe_opts;
    auto* pipeline_cmd = app.add_subcommand("pipeline", "remetrize then embed a b-metric space");
    pipeline_cmd->add_option("input", input, "space file")->required();
    add_embed_options(pipeline_cmd, pipe_opts);

    VerifyArgs ver;
    auto* verify_cmd = app.add_subcommand("verify", "certify one bound on a space");
    verify_cmd->add_option("input", ver.input, "space file")->required();
    verify_cmd->add_option("--theorem", ver.theorem, "which bound")
        ->required()
        ->check(CLI::IsMember({"2.1", "2.2", "3.3", "3.4", "3.5", "4.1", "4.3"}));
    verify_cmd->add_option("--eps", ver.eps, "sandwich slack for 2.2")->capture_default_str();
    verify_cmd->add_option("--p", ver.p, "snowflake power for 3.3")->capture_default_str();
    verify_cmd->add_option("--other", ver.other, "second space: D for 3.4, target metric for 4.1");
    verify_cmd->add_option("--sandwich-alpha", ver.sandwich_alpha, "alpha in D <= d <= alpha D for 3.4");
    verify_cmd->add_option("--exact-max", ver.exact_max, "largest ball solved exactly")->capture_default_str();
    add_embed_options(verify_cmd, ver.embed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    const Runner run(g);
    try {
        if (generate_cmd->parsed()) return cmd_generate(run, gen);
        if (constants_cmd->parsed()) return cmd_constants(run, input);
        if (remetrize_cmd->parsed()) return cmd_remetrize(run, input, eps, matrix_out);
        if (doubling_cmd->parsed()) return cmd_doubling(run, dbl);
        if (embed_cmd->parsed()) return cmd_embed(run, emb);
        if (pipeline_cmd->parsed()) return cmd_pipeline(run, input, pipe_opts);
        if (verify_cmd->parsed()) return cmd_verify(run, ver);
    } catch (const semimetric::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
