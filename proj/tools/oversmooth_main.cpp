// Command-line surface: graph generation, spectra, energy traces, bound
// verification, and the edge-perturbation experiment with CSV/SVG output.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 I/O error, 4 numeric error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oversmooth/energy.hpp"
#include "oversmooth/errors.hpp"
#include "oversmooth/gcn.hpp"
#include "oversmooth/graph.hpp"
#include "oversmooth/model_zoo.hpp"
#include "oversmooth/perturb.hpp"
#include "oversmooth/report_io.hpp"
#include "oversmooth/rng.hpp"
#include "oversmooth/spectral.hpp"
#include "oversmooth/svg.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace oversmooth;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

struct GenOptions {
    std::string model;
    int n = 200;
    double p = 0.05; // default depends on the model when not given explicitly
    bool p_set = false;
    double radius = 0.2;
    std::vector<int> sizes;
    std::vector<double> p_in;
    double p_out = 0.01;
    double p_between = 0.08;
    int m = 4;
    int k = 4;
    std::uint64_t seed = 0;
    std::string out;

    double edge_p() const { return p_set ? p : 0.05; }
    double rewire_p() const { return p_set ? p : 0.1; }
};

GraphModel build_model(const GenOptions& o) {
    if (o.model == "er") return {ErdosRenyi{o.n, o.edge_p()}, o.seed};
    if (o.model == "geo") return {RandomGeometric{o.n, o.radius}, o.seed};
    if (o.model == "sbm2") {
        std::array<int, 2> sizes{100, 100};
        if (!o.sizes.empty()) {
            if (o.sizes.size() != 2) throw parameter_error("sbm2 needs exactly 2 block sizes");
            sizes = {o.sizes[0], o.sizes[1]};
        }
        const double p_in = o.p_in.empty() ? 0.1 : o.p_in.front();
        if (o.p_in.size() > 1) throw parameter_error("sbm2 takes a single --p-in");
        return {Sbm2{sizes, p_in, o.p_out}, o.seed};
    }
    if (o.model == "sbm4") {
        std::array<int, 4> sizes{50, 50, 50, 50};
        if (!o.sizes.empty()) {
            if (o.sizes.size() != 4) throw parameter_error("sbm4 needs exactly 4 block sizes");
            for (int b = 0; b < 4; ++b) sizes[static_cast<std::size_t>(b)] = o.sizes[static_cast<std::size_t>(b)];
        }
        std::array<double, 4> p_in{0.1, 0.2, 0.3, 0.4};
        if (!o.p_in.empty()) {
            if (o.p_in.size() != 4) throw parameter_error("sbm4 needs exactly 4 --p-in values");
            for (int b = 0; b < 4; ++b) p_in[static_cast<std::size_t>(b)] = o.p_in[static_cast<std::size_t>(b)];
        }
        return {Sbm4{sizes, p_in, o.p_between}, o.seed};
    }
    if (o.model == "ba") return {BarabasiAlbert{o.n, o.m}, o.seed};
    if (o.model == "ws") return {WattsStrogatz{o.n, o.k, o.rewire_p()}, o.seed};
    throw parameter_error("unknown model: " + o.model +
                          " (expected er, geo, sbm2, sbm4, ba, or ws)");
}

json model_sidecar(const GenOptions& o, const Graph& g) {
    json j;
    j["model"] = o.model;
    j["seed"] = o.seed;
    j["n_nodes"] = g.num_nodes();
    j["n_edges"] = g.num_edges();
    if (o.model == "er") {
        j["n"] = o.n;
        j["p"] = o.edge_p();
    } else if (o.model == "geo") {
        j["n"] = o.n;
        j["radius"] = o.radius;
    } else if (o.model == "sbm2") {
        j["sizes"] = o.sizes.empty() ? std::vector<int>{100, 100} : o.sizes;
        j["p_in"] = o.p_in.empty() ? 0.1 : o.p_in.front();
        j["p_out"] = o.p_out;
    } else if (o.model == "sbm4") {
        j["sizes"] = o.sizes.empty() ? std::vector<int>{50, 50, 50, 50} : o.sizes;
        j["p_in"] = o.p_in.empty() ? std::vector<double>{0.1, 0.2, 0.3, 0.4} : o.p_in;
        j["p_between"] = o.p_between;
    } else if (o.model == "ba") {
        j["n"] = o.n;
        j["m"] = o.m;
    } else if (o.model == "ws") {
        j["n"] = o.n;
        j["k"] = o.k;
        j["p"] = o.rewire_p();
    }
    return j;
}

int run_gen(const GenOptions& o) {
    const GraphModel model = build_model(o);
    const Graph g = generate(model);
    if (g.num_edges() == 0)
        std::cerr << "warning: generated graph has no edges (degenerate)\n";
    write_edge_list(g, o.out);
    std::ofstream sidecar(o.out + ".json");
    if (!sidecar) throw io_error("cannot write sidecar: " + o.out + ".json");
    sidecar << model_sidecar(o, g).dump(2) << '\n';
    std::cout << "wrote " << o.out << " (" << g.num_nodes() << " nodes, " << g.num_edges()
              << " edges)\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

struct SpectrumOptions {
    std::string graph_path;
    std::string out;
    std::string vectors_out;
    int nodes = 0;
    double zero_tol = 1e-8;
};

int run_spectrum(const SpectrumOptions& o) {
    LoadStats stats;
    const Graph g = load_edge_list(
        o.graph_path, o.nodes > 0 ? std::optional<int>(o.nodes) : std::nullopt, &stats);
    if (stats.duplicates_merged > 0)
        std::cerr << "warning: merged " << stats.duplicates_merged << " duplicate edges\n";
    if (stats.self_loops_dropped > 0)
        std::cerr << "warning: dropped " << stats.self_loops_dropped << " self-loops\n";
    const Spectrum s = eigendecompose(augmented_laplacian(g), o.zero_tol);
    write_spectrum_csv(s.eigenvalues, o.out);
    if (!o.vectors_out.empty()) write_eigenvectors_csv(s.eigenvectors, o.vectors_out);
    try {
        const ContractionFactors f = contraction_factors(s);
        std::cout << "lambda=" << format_double(f.lambda_smallest_nonzero)
                  << " gap_factor=" << format_double(f.gap_factor)
                  << " safe_factor=" << format_double(f.safe_factor) << '\n';
    } catch (const degenerate_spectrum_error&) {
        std::cerr << "warning: degenerate spectrum (all eigenvalues below zero tolerance)\n";
        std::cout << "lambda=nan gap_factor=nan safe_factor=nan\n";
    }
    std::cout << "wrote " << o.out << " (" << s.eigenvalues.size() << " rows)\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// trace
// ---------------------------------------------------------------------------

struct TraceOptions {
    std::string graph_path;
    int nodes = 0;
    int layers = 10;
    double target_s = 1.0;
    std::string activation = "relu";
    double slope = 0.01;
    int channels = 4;
    int depth = 1;
    std::uint64_t seed = 0;
    std::string out;
};

int run_trace(const TraceOptions& o) {
    if (o.layers < 0) throw parameter_error("--layers must be non-negative");
    if (o.channels < 1) throw parameter_error("--channels must be positive");
    LoadStats stats;
    const Graph g = load_edge_list(
        o.graph_path, o.nodes > 0 ? std::optional<int>(o.nodes) : std::nullopt, &stats);
    if (stats.duplicates_merged > 0)
        std::cerr << "warning: merged " << stats.duplicates_merged << " duplicate edges\n";
    if (stats.self_loops_dropped > 0)
        std::cerr << "warning: dropped " << stats.self_loops_dropped << " self-loops\n";
    const Activation act = parse_activation(o.activation, o.slope);

    std::vector<LayerSpec> layers;
    for (int l = 0; l < o.layers; ++l) {
        layers.push_back(random_layer(o.channels, o.channels, o.depth, o.target_s, act,
                                      derive_seed(o.seed, 1000 + static_cast<std::uint64_t>(l))));
    }
    const NetworkSpec net = make_network(std::move(layers));

    Rng rng(derive_seed(o.seed, 1));
    Eigen::MatrixXd x0(g.num_nodes(), o.channels);
    for (Eigen::Index i = 0; i < x0.rows(); ++i)
        for (Eigen::Index j = 0; j < x0.cols(); ++j) x0(i, j) = rng.normal();

    const EnergyTrace trace = forward_trace(net, g, x0, fs::path(o.graph_path).filename(), o.seed);
    if (act.kind == ActivationKind::Tanh || act.kind == ActivationKind::Sigmoid)
        std::cerr << "warning: no decay bound is asserted for " << activation_name(act) << '\n';
    if (o.layers > 0 && o.target_s * trace.safe_factor >= 1.0)
        std::cerr << "note: s * safe_factor = "
                  << format_double(o.target_s * trace.safe_factor)
                  << " >= 1; the decay bound is vacuous\n";
    write_trace_csv(trace, o.out);
    std::cout << "wrote " << o.out << " (" << trace.rows.size() << " rows, safe_factor="
              << format_double(trace.safe_factor) << ")\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyOptions {
    std::string suite;
    int trials = 1000;
    std::uint64_t seed = 1;
    std::string out = "verify_report.csv";
    std::string activation; // empty: suite default battery
    double slope = 0.01;
    std::string graph_class = "any";
};

void append_with_prefix(VerificationReport& into, const VerificationReport& from,
                        const std::string& prefix) {
    for (auto row : from.rows) {
        if (!prefix.empty()) row.quantity = prefix + ":" + row.quantity;
        into.rows.push_back(std::move(row));
    }
}

VerificationReport run_propagation_suite(int trials, std::uint64_t seed) {
    VerificationReport report;
    for (const auto& [name, model] : standard_models(seed)) {
        const Graph g = generate(model);
        const Spectrum s = eigendecompose(augmented_laplacian(g));
        append_with_prefix(report, verify_propagation_bound(g, s, trials, derive_seed(seed, 21)),
                           name);
    }
    return report;
}

VerificationReport run_activation_suite(const VerifyOptions& o) {
    VerificationReport report;
    if (!o.activation.empty()) {
        const Activation act = parse_activation(o.activation, o.slope);
        const GraphClass cls = o.graph_class == "regular" ? GraphClass::Regular : GraphClass::Any;
        if (o.graph_class != "regular" && o.graph_class != "any")
            throw parameter_error("--graph-class must be 'any' or 'regular'");
        append_with_prefix(report, verify_activation_bound(act, cls, o.trials, o.seed), "");
        return report;
    }
    // Default battery: the asserted combinations plus the observational
    // non-regular runs and the counterexample search.
    append_with_prefix(
        report, verify_activation_bound(Activation::relu(), GraphClass::Any, o.trials, o.seed),
        "");
    append_with_prefix(report,
                       verify_activation_bound(Activation::leaky_relu(0.01), GraphClass::Any,
                                               o.trials, derive_seed(o.seed, 31)),
                       "");
    append_with_prefix(report,
                       verify_activation_bound(Activation::tanh(), GraphClass::Regular, o.trials,
                                               derive_seed(o.seed, 32)),
                       "");
    append_with_prefix(report,
                       verify_activation_bound(Activation::sigmoid(), GraphClass::Regular,
                                               o.trials, derive_seed(o.seed, 33)),
                       "");
    append_with_prefix(report,
                       verify_activation_bound(Activation::sigmoid(), GraphClass::Any, o.trials,
                                               derive_seed(o.seed, 34)),
                       "");
    const auto ce =
        find_activation_counterexample(Activation::sigmoid(), 10000, derive_seed(o.seed, 35));
    report.rows.push_back({ce ? ce->attempt : -1, "sigmoid_counterexample_found",
                           ce ? ce->energy_after : 0.0, ce ? ce->energy_before : 0.0,
                           ce.has_value(), true});
    return report;
}

VerificationReport run_theorem_suite(int trials, std::uint64_t seed) {
    const Graph g = generate({ErdosRenyi{200, 0.05}, derive_seed(seed, 41)});
    std::vector<LayerSpec> layers;
    const double targets[] = {0.25, 1.0, 2.25, 1.0};
    for (int l = 0; l < 4; ++l) {
        layers.push_back(random_layer(4, 4, l % 2 + 1, targets[l], Activation::relu(),
                                      derive_seed(seed, 42 + static_cast<std::uint64_t>(l))));
    }
    return verify_theorem(make_network(std::move(layers)), g, trials, derive_seed(seed, 46));
}

int run_verify(const VerifyOptions& o) {
    if (o.trials < 1) throw parameter_error("--trials must be positive");
    VerificationReport report;
    if (o.suite == "propagation") {
        report = run_propagation_suite(o.trials, o.seed);
    } else if (o.suite == "weight") {
        report = verify_weight_bound(o.trials, o.seed);
    } else if (o.suite == "activation") {
        report = run_activation_suite(o);
    } else if (o.suite == "theorem") {
        report = run_theorem_suite(o.trials, o.seed);
    } else if (o.suite == "all") {
        append_with_prefix(report, run_propagation_suite(o.trials, o.seed), "propagation");
        append_with_prefix(report, verify_weight_bound(o.trials, derive_seed(o.seed, 51)),
                           "weight");
        VerifyOptions battery = o;
        battery.activation.clear();
        append_with_prefix(report, run_activation_suite(battery), "activation");
        append_with_prefix(report, run_theorem_suite(o.trials, derive_seed(o.seed, 52)),
                           "theorem");
    } else {
        throw parameter_error("unknown suite: " + o.suite +
                              " (expected propagation, weight, activation, theorem, or all)");
    }
    write_report_csv(report, o.out);
    const int failures = report.assertion_failures();
    int observed = 0;
    for (const auto& r : report.rows)
        if (!r.asserted && !r.pass) ++observed;
    std::cout << report.rows.size() << " rows, " << failures << " assertion failures, "
              << observed << " observed (non-asserted) violations; wrote " << o.out << '\n';
    if (failures > 0) {
        for (const auto& r : report.rows) {
            if (r.asserted && !r.pass)
                std::cerr << "FAIL trial " << r.trial << ' ' << r.quantity << ": lhs="
                          << format_double(r.lhs) << " rhs=" << format_double(r.rhs) << '\n';
        }
        return kExitVerificationFailure;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// experiment
// ---------------------------------------------------------------------------

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key))
            throw parameter_error("unknown key '" + key + "' in " + where);
    }
}

GraphModel model_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw parameter_error("config: model must be an object with a 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    const std::uint64_t seed = j.value("seed", 0ULL);
    if (kind == "er") {
        check_keys(j, {"kind", "seed", "n", "p"}, "model");
        return {ErdosRenyi{j.value("n", 200), j.value("p", 0.05)}, seed};
    }
    if (kind == "geo") {
        check_keys(j, {"kind", "seed", "n", "radius"}, "model");
        return {RandomGeometric{j.value("n", 200), j.value("radius", 0.2)}, seed};
    }
    if (kind == "sbm2") {
        check_keys(j, {"kind", "seed", "sizes", "p_in", "p_out"}, "model");
        std::array<int, 2> sizes{100, 100};
        if (j.contains("sizes")) {
            const auto v = j.at("sizes").get<std::vector<int>>();
            if (v.size() != 2) throw parameter_error("config: sbm2 sizes needs 2 entries");
            sizes = {v[0], v[1]};
        }
        return {Sbm2{sizes, j.value("p_in", 0.1), j.value("p_out", 0.01)}, seed};
    }
    if (kind == "sbm4") {
        check_keys(j, {"kind", "seed", "sizes", "p_in", "p_between"}, "model");
        std::array<int, 4> sizes{50, 50, 50, 50};
        if (j.contains("sizes")) {
            const auto v = j.at("sizes").get<std::vector<int>>();
            if (v.size() != 4) throw parameter_error("config: sbm4 sizes needs 4 entries");
            for (int b = 0; b < 4; ++b) sizes[static_cast<std::size_t>(b)] = v[static_cast<std::size_t>(b)];
        }
        std::array<double, 4> p_in{0.1, 0.2, 0.3, 0.4};
        if (j.contains("p_in")) {
            const auto v = j.at("p_in").get<std::vector<double>>();
            if (v.size() != 4) throw parameter_error("config: sbm4 p_in needs 4 entries");
            for (int b = 0; b < 4; ++b) p_in[static_cast<std::size_t>(b)] = v[static_cast<std::size_t>(b)];
        }
        return {Sbm4{sizes, p_in, j.value("p_between", 0.08)}, seed};
    }
    if (kind == "ba") {
        check_keys(j, {"kind", "seed", "n", "m"}, "model");
        return {BarabasiAlbert{j.value("n", 200), j.value("m", 4)}, seed};
    }
    if (kind == "ws") {
        check_keys(j, {"kind", "seed", "n", "k", "p"}, "model");
        return {WattsStrogatz{j.value("n", 200), j.value("k", 4), j.value("p", 0.1)}, seed};
    }
    if (kind == "file") {
        check_keys(j, {"kind", "seed", "path"}, "model");
        if (!j.contains("path")) throw parameter_error("config: file model needs 'path'");
        return {EdgeListFile{j.at("path").get<std::string>()}, seed};
    }
    throw parameter_error("config: unknown model kind '" + kind + "'");
}

struct ExperimentCliOverrides {
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int trials = 0;
    int threads = -1;
};

int run_experiment_cmd(const std::string& config_path, const ExperimentCliOverrides& over) {
    std::ifstream in(config_path);
    if (!in) throw io_error("cannot open config: " + config_path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw parameter_error("config: " + std::string(e.what()));
    }
    check_keys(j,
               {"model", "perturbation", "t_mix", "trials", "seed", "out_dir",
                "reuse_original_signal", "threads"},
               "config");
    if (!j.contains("model") || !j.contains("perturbation"))
        throw parameter_error("config: 'model' and 'perturbation' are required");

    const json& pj = j.at("perturbation");
    check_keys(pj, {"kind", "ratios", "new_weight"}, "perturbation");
    if (!pj.contains("kind") || !pj.contains("ratios"))
        throw parameter_error("config: perturbation needs 'kind' and 'ratios'");

    ExperimentConfig cfg;
    cfg.model = model_from_json(j.at("model"));
    cfg.kind = parse_perturbation_kind(pj.at("kind").get<std::string>());
    cfg.ratios = pj.at("ratios").get<std::vector<double>>();
    cfg.new_weight = pj.value("new_weight", 10000.0);
    cfg.t_mix = j.value("t_mix", 20);
    cfg.trials = over.trials > 0 ? over.trials : j.value("trials", 20);
    cfg.base_seed = over.seed_set ? over.seed : j.value("seed", 0ULL);
    cfg.reuse_original_signal = j.value("reuse_original_signal", false);
    cfg.threads = over.threads >= 0 ? over.threads : j.value("threads", 0);
    const std::string out_dir =
        !over.out_dir.empty() ? over.out_dir : j.value("out_dir", std::string("experiment_out"));

    fs::create_directories(out_dir);
    std::vector<std::string> written;
    try {
        const ExperimentResult result = run_experiment(cfg);
        const auto summary = summarize(result);

        auto path_of = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };
        written.push_back(path_of("energies.csv"));
        write_experiment_csv(result, written.back());
        written.push_back(path_of("eigenvalues.csv"));
        write_experiment_eigenvalues_csv(result, written.back());
        written.push_back(path_of("summary.csv"));
        write_summary_csv(summary, written.back());

        for (double ratio : cfg.ratios) {
            std::vector<ScatterSeries> series(3);
            const char* colors[3] = {"#1f77b4", "#ff7f0e", "#2ca02c"};
            const char* labels[3] = {"k=0 (x)", "k=1 (Px)", "k=2 (P^2 x)"};
            for (int k = 0; k < 3; ++k) {
                series[static_cast<std::size_t>(k)].label = labels[k];
                series[static_cast<std::size_t>(k)].color = colors[k];
            }
            for (const auto& row : result.rows) {
                if (row.ratio != ratio) continue;
                series[static_cast<std::size_t>(row.k)].points.emplace_back(row.e_orig,
                                                                            row.e_pert);
            }
            char name[64];
            std::snprintf(name, sizeof(name), "scatter_r%g.svg", ratio);
            const std::string svg =
                scatter_svg(series,
                            result.model_label + " " + result.kind_label + " ratio " +
                                format_double(ratio),
                            "energy on original graph", "energy on perturbed graph");
            written.push_back(path_of(name));
            std::ofstream svg_out(written.back());
            if (!svg_out) throw io_error("cannot write " + written.back());
            svg_out << svg;
        }

        json resolved = j;
        resolved["trials"] = cfg.trials;
        resolved["seed"] = cfg.base_seed;
        resolved["out_dir"] = out_dir;
        resolved["t_mix"] = cfg.t_mix;
        written.push_back(path_of("config.json"));
        std::ofstream cfg_out(written.back());
        if (!cfg_out) throw io_error("cannot write " + written.back());
        cfg_out << resolved.dump(2) << '\n';

        std::cout << "experiment complete: " << result.rows.size() << " energy rows over "
                  << cfg.ratios.size() << " ratios x " << cfg.trials << " trials; outputs in "
                  << out_dir << '\n';
        return kExitOk;
    } catch (...) {
        // Remove partial outputs so a failed run leaves nothing behind.
        for (const auto& p : written) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        throw;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dirichlet energy analysis of graph convolution smoothing"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* cmd_gen = app.add_subcommand("gen", "Generate a random graph edge list");
    cmd_gen->add_option("--model", gen.model, "er | geo | sbm2 | sbm4 | ba | ws")->required();
    cmd_gen->add_option("--n", gen.n, "node count");
    auto* gen_p_opt =
        cmd_gen->add_option("--p", gen.p, "edge probability (er) / rewiring probability (ws)");
    cmd_gen->add_option("--radius", gen.radius, "geometric connection radius");
    cmd_gen->add_option("--sizes", gen.sizes, "block sizes")->delimiter(',');
    cmd_gen->add_option("--p-in", gen.p_in, "within-block probabilities")->delimiter(',');
    cmd_gen->add_option("--p-out", gen.p_out, "cross-block probability (sbm2)");
    cmd_gen->add_option("--p-between", gen.p_between, "cross-block probability (sbm4)");
    cmd_gen->add_option("--m", gen.m, "attachment edges per node (ba)");
    cmd_gen->add_option("--k", gen.k, "ring lattice degree (ws)");
    cmd_gen->add_option("--seed", gen.seed, "random seed");
    cmd_gen->add_option("--out", gen.out, "output edge-list path")->required();

    SpectrumOptions spec;
    auto* cmd_spectrum = app.add_subcommand("spectrum", "Eigenvalues of the augmented Laplacian");
    cmd_spectrum->add_option("--graph", spec.graph_path, "edge-list file")->required();
    cmd_spectrum->add_option("--out", spec.out, "eigenvalue CSV path")->required();
    cmd_spectrum->add_option("--vectors", spec.vectors_out, "also write eigenvectors CSV");
    cmd_spectrum->add_option("--nodes", spec.nodes, "expected node count");
    cmd_spectrum->add_option("--zero-tol", spec.zero_tol, "zero-eigenvalue tolerance");

    TraceOptions trace;
    auto* cmd_trace = app.add_subcommand("trace", "Per-layer Dirichlet energy of a forward pass");
    cmd_trace->add_option("--graph", trace.graph_path, "edge-list file")->required();
    cmd_trace->add_option("--nodes", trace.nodes, "expected node count");
    cmd_trace->add_option("--layers", trace.layers, "number of layers");
    cmd_trace->add_option("--target-s", trace.target_s, "squared-norm product per layer");
    cmd_trace->add_option("--activation", trace.activation,
                          "identity | relu | leaky_relu | tanh | sigmoid");
    cmd_trace->add_option("--slope", trace.slope, "leaky ReLU slope");
    cmd_trace->add_option("--channels", trace.channels, "embedding width");
    cmd_trace->add_option("--depth", trace.depth, "weight matrices per layer");
    cmd_trace->add_option("--seed", trace.seed, "random seed");
    cmd_trace->add_option("--out", trace.out, "trace CSV path")->required();

    VerifyOptions verify;
    auto* cmd_verify = app.add_subcommand("verify", "Numerically verify the energy bounds");
    cmd_verify->add_option("suite", verify.suite, "propagation | weight | activation | theorem | all")
        ->required();
    cmd_verify->add_option("--trials", verify.trials, "trials per assertion");
    cmd_verify->add_option("--seed", verify.seed, "random seed");
    cmd_verify->add_option("--out", verify.out, "report CSV path");
    cmd_verify->add_option("--activation", verify.activation, "restrict to one activation");
    cmd_verify->add_option("--slope", verify.slope, "leaky ReLU slope");
    cmd_verify->add_option("--graph-class", verify.graph_class, "any | regular");

    std::string config_path;
    ExperimentCliOverrides over;
    auto* cmd_experiment =
        app.add_subcommand("experiment", "Edge-drop / reweight protocol with CSV + SVG output");
    cmd_experiment->add_option("--config", config_path, "JSON run description")->required();
    cmd_experiment->add_option("--out-dir", over.out_dir, "override output directory");
    auto* seed_opt = cmd_experiment->add_option("--seed", over.seed, "override base seed");
    cmd_experiment->add_option("--trials", over.trials, "override trial count");
    cmd_experiment->add_option("--threads", over.threads, "worker threads (0 = auto)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*cmd_gen) {
            gen.p_set = gen_p_opt->count() > 0;
            return run_gen(gen);
        }
        if (*cmd_spectrum) return run_spectrum(spec);
        if (*cmd_trace) return run_trace(trace);
        if (*cmd_verify) return run_verify(verify);
        if (*cmd_experiment) {
            over.seed_set = seed_opt->count() > 0;
            return run_experiment_cmd(config_path, over);
        }
    } catch (const parameter_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const shape_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const numeric_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitUsage;
}
