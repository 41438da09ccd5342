#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oversmooth/graph.hpp"

namespace oversmooth {

/// Uniform random edge perturbation: Drop removes the selected edges,
/// Reweight sets their weight to new_weight (default 10000).
struct PerturbationSpec {
    enum class Kind { Drop, Reweight };
    Kind kind = Kind::Drop;
    double ratio = 0.0;
    double new_weight = 10000.0;
    std::uint64_t seed = 0;
};

std::string perturbation_kind_name(PerturbationSpec::Kind kind);
PerturbationSpec::Kind parse_perturbation_kind(const std::string& name);

/// Selects round(ratio * |E|) edges uniformly without replacement
/// (deterministic per seed) and applies the perturbation. The node count
/// never changes; dropping every edge is allowed.
Graph perturb(const Graph& g, const PerturbationSpec& spec);

// ---------------------------------------------------------------------------
// Experiment protocol: signals x, Px, P^2x mixed from the T lowest
// eigenvectors, energies on the original and the perturbed graph, repeated
// over trials for each ratio.
// ---------------------------------------------------------------------------

struct ExperimentConfig {
    GraphModel model;
    PerturbationSpec::Kind kind = PerturbationSpec::Kind::Drop;
    std::vector<double> ratios;
    int trials = 20;
    int t_mix = 20;
    std::uint64_t base_seed = 0;
    double new_weight = 10000.0;
    /// When set, the perturbed energies reuse the original mixed signal
    /// instead of re-mixing from the perturbed spectrum.
    bool reuse_original_signal = false;
    int threads = 0; // <= 0: hardware concurrency
};

struct EnergyRow {
    double ratio;
    int trial;
    int k; // 0: x, 1: Px, 2: P^2 x
    double e_orig;
    double e_pert;
};

struct EigenvalueRecord {
    double ratio;
    int trial;
    Eigen::VectorXd original;
    Eigen::VectorXd perturbed;
};

struct ExperimentResult {
    std::vector<EnergyRow> rows;        // ordered by (ratio, trial, k)
    std::vector<EigenvalueRecord> spectra; // ordered by (ratio, trial)
    int n_nodes = 0;
    int n_edges = 0;
    std::string model_label;
    std::string kind_label;
    std::uint64_t base_seed = 0;
};

/// Runs the full protocol. Trials execute concurrently; each trial owns its
/// graphs and spectra and writes to a preassigned slot, so the result is
/// identical regardless of scheduling. Trial seeds are base_seed + trial;
/// the ratio index is mixed into the per-trial streams.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct SummaryRow {
    double ratio;
    int k;
    double mean_delta;     // mean of E'_k - E_k over trials
    double median_delta;
    double frac_increased; // fraction of trials with E'_k > E_k
    double eig_q1_orig, eig_med_orig, eig_q3_orig;
    double eig_q1_pert, eig_med_pert, eig_q3_pert;
};

std::vector<SummaryRow> summarize(const ExperimentResult& result);

} // namespace oversmooth
