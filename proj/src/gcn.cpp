#include "oversmooth/gcn.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "oversmooth/energy.hpp"
#include "oversmooth/errors.hpp"
#include "oversmooth/parallel.hpp"
#include "oversmooth/rng.hpp"

namespace oversmooth {

// ---------------------------------------------------------------------------
// Activations
// ---------------------------------------------------------------------------

std::string activation_name(const Activation& a) {
    switch (a.kind) {
        case ActivationKind::Identity: return "identity";
        case ActivationKind::ReLU: return "relu";
        case ActivationKind::LeakyReLU: return "leaky_relu";
        case ActivationKind::Tanh: return "tanh";
        case ActivationKind::Sigmoid: return "sigmoid";
    }
    return "unknown";
}

Activation parse_activation(const std::string& name, double slope) {
    if (name == "identity") return Activation::identity();
    if (name == "relu") return Activation::relu();
    if (name == "leaky_relu") return Activation::leaky_relu(slope);
    if (name == "tanh") return Activation::tanh();
    if (name == "sigmoid") return Activation::sigmoid();
    throw parameter_error("unknown activation: " + name);
}

Eigen::MatrixXd apply_activation(const Activation& a, Eigen::MatrixXd x) {
    switch (a.kind) {
        case ActivationKind::Identity:
            return x;
        case ActivationKind::ReLU:
            return x.cwiseMax(0.0);
        case ActivationKind::LeakyReLU: {
            if (!(a.slope > 0.0 && a.slope <= 1.0))
                throw parameter_error("leaky ReLU slope must lie in (0, 1]");
            const double s = a.slope;
            return x.unaryExpr([s](double v) { return v >= 0.0 ? v : s * v; });
        }
        case ActivationKind::Tanh:
            return x.unaryExpr([](double v) { return std::tanh(v); });
        case ActivationKind::Sigmoid:
            return x.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
    }
    throw parameter_error("unknown activation kind");
}

// ---------------------------------------------------------------------------
// Layers
// ---------------------------------------------------------------------------

LayerSpec make_layer(std::vector<Eigen::MatrixXd> weights, Activation activation) {
    if (weights.empty()) throw parameter_error("a layer needs at least one weight matrix");
    for (std::size_t h = 1; h < weights.size(); ++h) {
        if (weights[h].rows() != weights[h - 1].cols())
            throw shape_error("weight chain breaks between matrices " + std::to_string(h - 1) +
                              " and " + std::to_string(h));
    }
    LayerSpec layer;
    layer.weights = std::move(weights);
    layer.activation = activation;
    layer.s_l = 1.0;
    for (const auto& w : layer.weights) {
        const double s = spectral_norm_squared(w);
        layer.s_lh.push_back(s);
        layer.s_l *= s;
    }
    return layer;
}

LayerSpec random_layer(int c_in, int c_out, int h, double target_s, Activation activation,
                       std::uint64_t seed) {
    if (c_in < 1 || c_out < 1) throw parameter_error("layer dimensions must be positive");
    if (h < 1) throw parameter_error("layer depth must be >= 1");
    if (!(target_s > 0.0)) throw parameter_error("target squared norm must be positive");
    Rng rng(seed);
    const double per_matrix = std::pow(target_s, 1.0 / h);
    std::vector<Eigen::MatrixXd> weights;
    for (int step = 0; step < h; ++step) {
        const int rows = step == 0 ? c_in : c_out;
        Eigen::MatrixXd w(rows, c_out);
        for (Eigen::Index i = 0; i < w.rows(); ++i)
            for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = rng.normal();
        const double current = spectral_norm_squared(w);
        w *= std::sqrt(per_matrix / current);
        weights.push_back(std::move(w));
    }
    return make_layer(std::move(weights), activation);
}

NetworkSpec make_network(std::vector<LayerSpec> layers) {
    NetworkSpec net;
    if (!layers.empty()) {
        net.input_dim = layers.front().input_dim();
        for (std::size_t l = 1; l < layers.size(); ++l) {
            if (layers[l].input_dim() != layers[l - 1].output_dim())
                throw shape_error("network dimensions break between layers " +
                                  std::to_string(l - 1) + " and " + std::to_string(l));
        }
    }
    net.layers = std::move(layers);
    return net;
}

Eigen::MatrixXd apply_layer(const LayerSpec& layer, const OperatorMatrix& p,
                            const Eigen::MatrixXd& x) {
    if (p.kind != OperatorMatrix::Kind::Propagation)
        throw parameter_error("apply_layer expects the propagation operator");
    if (x.rows() != p.m.rows())
        throw shape_error("signal rows do not match the operator size");
    if (x.cols() != layer.weights.front().rows())
        throw shape_error("signal channels do not match the first weight matrix");
    Eigen::MatrixXd y = p.m * x;
    for (const auto& w : layer.weights) {
        y = apply_activation(layer.activation, std::move(y));
        y = y * w;
    }
    return apply_activation(layer.activation, std::move(y));
}

Eigen::MatrixXd apply_layer_traced(const LayerSpec& layer, const OperatorMatrix& p,
                                   const Eigen::MatrixXd& x, const Graph& g,
                                   std::vector<SubstepEnergy>& substeps) {
    if (p.kind != OperatorMatrix::Kind::Propagation)
        throw parameter_error("apply_layer expects the propagation operator");
    Eigen::MatrixXd y = p.m * x;
    substeps.push_back({"P", dirichlet_energy_edgesum(y, g)});
    for (std::size_t h = 0; h < layer.weights.size(); ++h) {
        y = apply_activation(layer.activation, std::move(y));
        substeps.push_back({"sigma", dirichlet_energy_edgesum(y, g)});
        y = y * layer.weights[h];
        substeps.push_back({"W" + std::to_string(h + 1), dirichlet_energy_edgesum(y, g)});
    }
    y = apply_activation(layer.activation, std::move(y));
    substeps.push_back({"sigma", dirichlet_energy_edgesum(y, g)});
    return y;
}

// ---------------------------------------------------------------------------
// Forward trace
// ---------------------------------------------------------------------------

EnergyTrace forward_trace(const NetworkSpec& net, const Graph& g, const Eigen::MatrixXd& x0,
                          std::string graph_label, std::uint64_t seed) {
    if (!net.layers.empty() && x0.cols() != net.input_dim)
        throw shape_error("input signal channels do not match the network input dimension");
    const OperatorMatrix lap = augmented_laplacian(g);
    const OperatorMatrix p = propagation_operator(g);
    const Spectrum spectrum = eigendecompose(lap);

    EnergyTrace trace;
    trace.graph_label = std::move(graph_label);
    trace.seed = seed;
    double safe = 0.0;
    try {
        const ContractionFactors f = contraction_factors(spectrum);
        trace.gap_factor = f.gap_factor;
        trace.safe_factor = f.safe_factor;
        safe = f.safe_factor;
    } catch (const degenerate_spectrum_error&) {
        // Edgeless graph: every energy is exactly zero, so a zero factor is
        // a valid bound constant.
        trace.gap_factor = 0.0;
        trace.safe_factor = 0.0;
        trace.factor_used = "degenerate";
    }

    auto rayleigh_or_nan = [&](const Eigen::MatrixXd& x) {
        try {
            return rayleigh_quotient(x, lap);
        } catch (const undefined_quotient_error&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };

    Eigen::MatrixXd x = x0;
    double bound = dirichlet_energy_edgesum(x, g);
    trace.rows.push_back({0, bound, rayleigh_or_nan(x), bound});
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        x = apply_layer(net.layers[l], p, x);
        bound *= net.layers[l].s_l * safe;
        trace.rows.push_back({static_cast<int>(l) + 1, dirichlet_energy_edgesum(x, g),
                              rayleigh_or_nan(x), bound});
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

int VerificationReport::assertion_failures() const {
    int count = 0;
    for (const auto& r : rows)
        if (r.asserted && !r.pass) ++count;
    return count;
}

int VerificationReport::observed_violations(const std::string& quantity_prefix) const {
    int count = 0;
    for (const auto& r : rows)
        if (!r.pass && r.quantity.rfind(quantity_prefix, 0) == 0) ++count;
    return count;
}

namespace {

double slack_for(double energy) { return 1e-9 * (1.0 + energy); }

Eigen::MatrixXd random_signal(Rng& rng, int rows, int cols) {
    Eigen::MatrixXd x(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) x(i, j) = rng.normal();
    return x;
}

Graph make_star(int leaves) {
    std::vector<Edge> edges;
    for (int i = 1; i <= leaves; ++i) edges.push_back({0, i, 1.0});
    return Graph(leaves + 1, std::move(edges));
}

Graph make_cycle(int n) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
    return Graph(n, std::move(edges));
}

/// Small graph sampler for per-trial verification: mixes model families so
/// the suites see skewed, clustered, and sparse degree profiles.
Graph sample_small_graph(Rng& rng) {
    const int pick = static_cast<int>(rng.uniform_index(4));
    switch (pick) {
        case 0: {
            const int n = 8 + static_cast<int>(rng.uniform_index(41));
            return generate({ErdosRenyi{n, rng.uniform(0.1, 0.6)}, rng.next()});
        }
        case 1: {
            const int n = 8 + static_cast<int>(rng.uniform_index(41));
            return generate({RandomGeometric{n, rng.uniform(0.25, 0.6)}, rng.next()});
        }
        case 2: {
            const int n = 8 + static_cast<int>(rng.uniform_index(33));
            const int m = 1 + static_cast<int>(rng.uniform_index(3));
            return generate({BarabasiAlbert{n, m}, rng.next()});
        }
        default:
            return make_star(3 + static_cast<int>(rng.uniform_index(28)));
    }
}

Graph sample_regular_graph(Rng& rng) {
    switch (static_cast<int>(rng.uniform_index(3))) {
        case 0: return make_cycle(10);
        case 1: return make_cycle(50);
        default: {
            // 3-regular needs even n.
            const int n = 2 * (6 + static_cast<int>(rng.uniform_index(15)));
            return random_regular_graph(n, 3, rng.next());
        }
    }
}

/// Degree-scaled pattern: x_i = t * sqrt(1+d_i) makes every edge term vanish
/// before the activation, so any non-homogeneous activation re-introduces
/// energy on non-regular graphs. Optional noise keeps the search randomized.
Eigen::VectorXd pattern_signal(const Graph& g, Rng& rng, double noise_scale) {
    const auto aug = g.augmented_degrees();
    const double t = rng.uniform(0.2, 3.0);
    Eigen::VectorXd x(g.num_nodes());
    for (int i = 0; i < g.num_nodes(); ++i) {
        x(i) = t * std::sqrt(aug[static_cast<std::size_t>(i)]);
        if (noise_scale > 0.0) x(i) += noise_scale * t * rng.uniform(-1.0, 1.0);
    }
    return x;
}

std::vector<ReportRow> merge_trial_rows(std::vector<std::vector<ReportRow>> per_trial) {
    std::vector<ReportRow> rows;
    for (auto& chunk : per_trial)
        for (auto& r : chunk) rows.push_back(std::move(r));
    return rows;
}

} // namespace

VerificationReport verify_propagation_bound(const Graph& g, const Spectrum& s, int trials,
                                            std::uint64_t seed) {
    const ContractionFactors f = contraction_factors(s);
    std::vector<std::vector<ReportRow>> per_trial(static_cast<std::size_t>(trials));
    parallel_for(trials, 0, [&](int trial) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
        const int c = 1 + static_cast<int>(rng.uniform_index(8));
        const Eigen::MatrixXd x = random_signal(rng, g.num_nodes(), c);
        const Eigen::MatrixXd px = propagate_signal(g, x);
        const double ex = dirichlet_energy_edgesum(x, g);
        const double epx = dirichlet_energy_edgesum(px, g);
        const double slack = slack_for(ex);
        auto& rows = per_trial[static_cast<std::size_t>(trial)];
        rows.push_back({trial, "propagation_safe", epx, f.safe_factor * ex + slack,
                        epx <= f.safe_factor * ex + slack, true});
        rows.push_back({trial, "propagation_gap", epx, f.gap_factor * ex + slack,
                        epx <= f.gap_factor * ex + slack, false});
    });
    return {merge_trial_rows(std::move(per_trial))};
}

VerificationReport verify_weight_bound(int trials, std::uint64_t seed) {
    std::vector<std::vector<ReportRow>> per_trial(static_cast<std::size_t>(trials));
    parallel_for(trials, 0, [&](int trial) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
        const Graph g = sample_small_graph(rng);
        const OperatorMatrix lap = augmented_laplacian(g);
        const int c = 1 + static_cast<int>(rng.uniform_index(8));
        const int c_out = 1 + static_cast<int>(rng.uniform_index(8));
        const Eigen::MatrixXd x = random_signal(rng, g.num_nodes(), c);
        Eigen::MatrixXd w = random_signal(rng, c, c_out);

        const double s = spectral_norm_squared(w);
        const double ex = dirichlet_energy_edgesum(x, g);
        const double exw = dirichlet_energy_edgesum(x * w, g);
        const double slack = slack_for(ex);
        auto& rows = per_trial[static_cast<std::size_t>(trial)];
        rows.push_back(
            {trial, "weight_bound", exw, s * ex + slack, exw <= s * ex + slack, true});

        // Independent route: tr(X^T L X W W^T) bounded by the largest
        // eigenvalue of W W^T, taken from a dense symmetric solve.
        const Eigen::MatrixXd gram = x.transpose() * (lap.m * x);
        const double chain = (gram * (w * w.transpose())).trace();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w * w.transpose(),
                                                          Eigen::EigenvaluesOnly);
        const double sigma_max = es.eigenvalues().maxCoeff();
        const double ex_quad = dirichlet_energy_quadratic(x, lap);
        rows.push_back({trial, "weight_trace_chain", chain, ex_quad * sigma_max + slack,
                        chain <= ex_quad * sigma_max + slack, true});

        const double direct = dirichlet_energy_quadratic(x * w, lap);
        const double gap = std::abs(chain - direct);
        const double tol = 1e-9 * (1.0 + std::abs(direct));
        rows.push_back({trial, "weight_chain_agreement", gap, tol, gap <= tol, true});
    });
    return {merge_trial_rows(std::move(per_trial))};
}

VerificationReport verify_activation_bound(const Activation& activation, GraphClass graph_class,
                                           int trials, std::uint64_t seed) {
    if (activation.kind == ActivationKind::LeakyReLU &&
        !(activation.slope > 0.0 && activation.slope <= 1.0))
        throw parameter_error("leaky ReLU slope must lie in (0, 1]");
    const bool homogeneous = activation.kind == ActivationKind::Identity ||
                             activation.kind == ActivationKind::ReLU ||
                             activation.kind == ActivationKind::LeakyReLU;
    const bool asserted = homogeneous || graph_class == GraphClass::Regular;
    const std::string quantity = "activation_" + activation_name(activation) + "_" +
                                 (graph_class == GraphClass::Regular ? "regular" : "any");

    std::vector<std::vector<ReportRow>> per_trial(static_cast<std::size_t>(trials));
    parallel_for(trials, 0, [&](int trial) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
        const Graph g = graph_class == GraphClass::Regular ? sample_regular_graph(rng)
                                                           : sample_small_graph(rng);
        Eigen::MatrixXd x;
        if (!homogeneous && graph_class == GraphClass::Any && trial % 2 == 0) {
            // Seed half the trials with the pattern that exposes
            // non-homogeneous activations on skewed degrees.
            x = pattern_signal(g, rng, rng.uniform01() < 0.5 ? 0.0 : 0.05);
        } else {
            x = random_signal(rng, g.num_nodes(), 1 + static_cast<int>(rng.uniform_index(4)));
        }
        const double before = dirichlet_energy_edgesum(x, g);
        const double after = dirichlet_energy_edgesum(apply_activation(activation, x), g);
        const double rhs = before + slack_for(before);
        per_trial[static_cast<std::size_t>(trial)].push_back(
            {trial, quantity, after, rhs, after <= rhs, asserted});
    });
    return {merge_trial_rows(std::move(per_trial))};
}

VerificationReport verify_theorem(const NetworkSpec& net, const Graph& g, int trials,
                                  std::uint64_t seed) {
    for (const auto& layer : net.layers) {
        if (layer.activation.kind != ActivationKind::ReLU &&
            layer.activation.kind != ActivationKind::LeakyReLU)
            throw parameter_error("the layer bound is asserted for ReLU or LeakyReLU only");
    }
    const OperatorMatrix lap = augmented_laplacian(g);
    const OperatorMatrix p = propagation_operator(g);
    const ContractionFactors f = contraction_factors(eigendecompose(lap));

    // Layers whose per-layer constant is >= 1 satisfy the bound without
    // implying any decay; note them so the report is explicit about it.
    std::vector<ReportRow> notes;
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const double constant = net.layers[l].s_l * f.safe_factor;
        if (constant >= 1.0) {
            notes.push_back({-1, "theorem_layer_" + std::to_string(l + 1) + "_vacuous",
                             constant, 1.0, false, false});
        }
    }

    std::vector<std::vector<ReportRow>> per_trial(static_cast<std::size_t>(trials));
    parallel_for(trials, 0, [&](int trial) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
        Eigen::MatrixXd x = random_signal(rng, g.num_nodes(), net.input_dim);
        auto& rows = per_trial[static_cast<std::size_t>(trial)];
        for (std::size_t l = 0; l < net.layers.size(); ++l) {
            const double ex = dirichlet_energy_edgesum(x, g);
            x = apply_layer(net.layers[l], p, x);
            const double ey = dirichlet_energy_edgesum(x, g);
            const double rhs = net.layers[l].s_l * f.safe_factor * ex + slack_for(ex);
            rows.push_back({trial, "theorem_layer_" + std::to_string(l + 1), ey, rhs,
                            ey <= rhs, true});
        }
    });
    VerificationReport report{std::move(notes)};
    auto merged = merge_trial_rows(std::move(per_trial));
    report.rows.insert(report.rows.end(), std::make_move_iterator(merged.begin()),
                       std::make_move_iterator(merged.end()));
    return report;
}

std::optional<ActivationCounterexample> find_activation_counterexample(
    const Activation& activation, int max_attempts, std::uint64_t seed) {
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
        // Star-like graphs maximize the degree skew the pattern needs.
        Graph g = make_star(3 + static_cast<int>(rng.uniform_index(38)));
        const double noise = attempt % 3 == 0 ? 0.0 : std::pow(10.0, -rng.uniform(1.0, 3.0));
        const Eigen::VectorXd x = pattern_signal(g, rng, noise);
        const double before = dirichlet_energy_edgesum(x, g);
        const double after = dirichlet_energy_edgesum(apply_activation(activation, x), g);
        if (after > before + slack_for(before)) {
            return ActivationCounterexample{std::move(g), x, before, after, attempt};
        }
    }
    return std::nullopt;
}

} // namespace oversmooth
