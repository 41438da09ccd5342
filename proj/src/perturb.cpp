#include "oversmooth/perturb.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "oversmooth/energy.hpp"
#include "oversmooth/errors.hpp"
#include "oversmooth/parallel.hpp"
#include "oversmooth/rng.hpp"
#include "oversmooth/spectral.hpp"

namespace oversmooth {

std::string perturbation_kind_name(PerturbationSpec::Kind kind) {
    return kind == PerturbationSpec::Kind::Drop ? "drop" : "reweight";
}

PerturbationSpec::Kind parse_perturbation_kind(const std::string& name) {
    if (name == "drop") return PerturbationSpec::Kind::Drop;
    if (name == "reweight") return PerturbationSpec::Kind::Reweight;
    throw parameter_error("unknown perturbation kind: " + name);
}

Graph perturb(const Graph& g, const PerturbationSpec& spec) {
    if (!(spec.ratio >= 0.0 && spec.ratio <= 1.0))
        throw parameter_error("perturbation ratio must lie in [0, 1]");
    if (!(spec.new_weight > 0.0))
        throw parameter_error("reweight target must be positive");
    const int m = g.num_edges();
    // Round-half-up of ratio * |E|.
    const int k = static_cast<int>(std::floor(spec.ratio * m + 0.5));

    // Partial Fisher-Yates: the first k slots are the selected edges.
    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(spec.seed);
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(m - i)));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    std::vector<char> selected(static_cast<std::size_t>(m), 0);
    for (int i = 0; i < k; ++i) selected[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        Edge e = g.edges()[static_cast<std::size_t>(i)];
        if (selected[static_cast<std::size_t>(i)]) {
            if (spec.kind == PerturbationSpec::Kind::Drop) continue;
            e.w = spec.new_weight;
        }
        edges.push_back(e);
    }
    return Graph(g.num_nodes(), std::move(edges));
}

// ---------------------------------------------------------------------------
// Protocol
// ---------------------------------------------------------------------------

namespace {

struct TrialOutput {
    std::array<double, 3> e_orig{};
    std::array<double, 3> e_pert{};
    Eigen::VectorXd perturbed_eigenvalues;
};

std::array<double, 3> signal_energies(const Graph& g, const Eigen::MatrixXd& x) {
    std::array<double, 3> e{};
    Eigen::MatrixXd cur = x;
    e[0] = dirichlet_energy_edgesum(cur, g);
    for (int k = 1; k < 3; ++k) {
        cur = propagate_signal(g, cur);
        e[static_cast<std::size_t>(k)] = dirichlet_energy_edgesum(cur, g);
    }
    return e;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw parameter_error("experiment needs at least one trial");
    if (cfg.ratios.empty()) throw parameter_error("experiment needs at least one ratio");
    for (double r : cfg.ratios)
        if (!(r >= 0.0 && r <= 1.0)) throw parameter_error("ratios must lie in [0, 1]");

    const Graph original = generate(cfg.model);
    const int n = original.num_nodes();
    if (cfg.t_mix < 1 || cfg.t_mix > n)
        throw parameter_error("mix size T must satisfy 1 <= T <= " + std::to_string(n));

    const LowestSpectrum original_spectrum =
        eigendecompose_lowest(augmented_laplacian(original), cfg.t_mix);

    const int n_ratios = static_cast<int>(cfg.ratios.size());
    const int n_tasks = n_ratios * cfg.trials;
    std::vector<TrialOutput> slots(static_cast<std::size_t>(n_tasks));

    parallel_for(n_tasks, cfg.threads, [&](int task) {
        const int ratio_index = task / cfg.trials;
        const int trial = task % cfg.trials;
        const double ratio = cfg.ratios[static_cast<std::size_t>(ratio_index)];
        try {
            const std::uint64_t trial_seed = cfg.base_seed + static_cast<std::uint64_t>(trial);
            const std::uint64_t pert_seed =
                derive_seed(trial_seed, static_cast<std::uint64_t>(2 * ratio_index));
            const std::uint64_t mix_seed =
                derive_seed(trial_seed, static_cast<std::uint64_t>(2 * ratio_index + 1));

            const Graph perturbed =
                perturb(original, {cfg.kind, ratio, cfg.new_weight, pert_seed});
            const LowestSpectrum perturbed_spectrum =
                eigendecompose_lowest(augmented_laplacian(perturbed), cfg.t_mix);

            const Eigen::VectorXd x =
                low_eig_mix(original_spectrum.lowest_vectors, cfg.t_mix, mix_seed);
            const Eigen::VectorXd xp =
                cfg.reuse_original_signal
                    ? x
                    : low_eig_mix(perturbed_spectrum.lowest_vectors, cfg.t_mix, mix_seed);

            TrialOutput& out = slots[static_cast<std::size_t>(task)];
            out.e_orig = signal_energies(original, x);
            out.e_pert = signal_energies(perturbed, xp);
            out.perturbed_eigenvalues = perturbed_spectrum.eigenvalues;
        } catch (const std::exception& e) {
            throw numeric_error("experiment trial failed (ratio " + std::to_string(ratio) +
                                ", trial " + std::to_string(trial) + "): " + e.what());
        }
    });

    ExperimentResult result;
    result.n_nodes = n;
    result.n_edges = original.num_edges();
    result.model_label = model_name(cfg.model);
    result.kind_label = perturbation_kind_name(cfg.kind);
    result.base_seed = cfg.base_seed;
    result.rows.reserve(static_cast<std::size_t>(n_tasks) * 3);
    result.spectra.reserve(static_cast<std::size_t>(n_tasks));
    for (int task = 0; task < n_tasks; ++task) {
        const int ratio_index = task / cfg.trials;
        const int trial = task % cfg.trials;
        const double ratio = cfg.ratios[static_cast<std::size_t>(ratio_index)];
        const TrialOutput& out = slots[static_cast<std::size_t>(task)];
        for (int k = 0; k < 3; ++k) {
            result.rows.push_back({ratio, trial, k, out.e_orig[static_cast<std::size_t>(k)],
                                   out.e_pert[static_cast<std::size_t>(k)]});
        }
        result.spectra.push_back(
            {ratio, trial, original_spectrum.eigenvalues, out.perturbed_eigenvalues});
    }
    return result;
}

// ---------------------------------------------------------------------------
// Summary
// ---------------------------------------------------------------------------

namespace {

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

} // namespace

std::vector<SummaryRow> summarize(const ExperimentResult& result) {
    if (result.rows.empty()) throw parameter_error("cannot summarize an empty result");

    std::vector<double> ratios;
    for (const auto& row : result.rows)
        if (ratios.empty() || ratios.back() != row.ratio) ratios.push_back(row.ratio);

    std::vector<SummaryRow> summary;
    for (double ratio : ratios) {
        std::vector<double> eig_orig, eig_pert;
        for (const auto& rec : result.spectra) {
            if (rec.ratio != ratio) continue;
            eig_orig.insert(eig_orig.end(), rec.original.data(),
                            rec.original.data() + rec.original.size());
            eig_pert.insert(eig_pert.end(), rec.perturbed.data(),
                            rec.perturbed.data() + rec.perturbed.size());
        }
        for (int k = 0; k < 3; ++k) {
            std::vector<double> deltas;
            int increased = 0;
            for (const auto& row : result.rows) {
                if (row.ratio != ratio || row.k != k) continue;
                deltas.push_back(row.e_pert - row.e_orig);
                if (row.e_pert > row.e_orig) ++increased;
            }
            SummaryRow s{};
            s.ratio = ratio;
            s.k = k;
            s.mean_delta = std::accumulate(deltas.begin(), deltas.end(), 0.0) /
                           static_cast<double>(deltas.size());
            s.median_delta = quantile(deltas, 0.5);
            s.frac_increased = static_cast<double>(increased) / static_cast<double>(deltas.size());
            s.eig_q1_orig = quantile(eig_orig, 0.25);
            s.eig_med_orig = quantile(eig_orig, 0.5);
            s.eig_q3_orig = quantile(eig_orig, 0.75);
            s.eig_q1_pert = quantile(eig_pert, 0.25);
            s.eig_med_pert = quantile(eig_pert, 0.5);
            s.eig_q3_pert = quantile(eig_pert, 0.75);
            summary.push_back(s);
        }
    }
    return summary;
}

} // namespace oversmooth
