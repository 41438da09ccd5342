#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "oversmooth/errors.hpp"

namespace oversmooth {

/// Undirected weighted edge, stored once per pair with u < v.
struct Edge {
    int u;
    int v;
    double w;
};

/// Weighted undirected graph. Immutable after construction; no self-loops
/// are stored (the augmented operators add them analytically).
class Graph {
public:
    /// Validates and canonicalizes: endpoints in [0, n), u != v, w > 0,
    /// no duplicate unordered pairs. Edges are normalized to u < v and
    /// sorted, so equal graphs have identical edge lists.
    Graph(int n_nodes, std::vector<Edge> edges);

    int num_nodes() const noexcept { return n_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    int num_edges() const noexcept { return static_cast<int>(edges_.size()); }

    /// Weighted degrees d_i = sum_j w_ij.
    std::vector<double> degrees() const;

    /// Augmented degrees 1 + d_i (always positive, even for isolated nodes).
    std::vector<double> augmented_degrees() const;

    /// True iff all augmented degrees agree to within tol.
    bool is_regular(double tol = 1e-12) const;

    /// Partition of [0, n) by edge connectivity, ordered by smallest member.
    std::vector<std::vector<int>> connected_components() const;

private:
    int n_;
    std::vector<Edge> edges_;
};

// ---------------------------------------------------------------------------
// Random graph models
// ---------------------------------------------------------------------------

struct ErdosRenyi {
    int n;
    double p;
};

/// 200 points uniform in the unit square; edge when distance <= radius.
struct RandomGeometric {
    int n;
    double radius;
};

struct Sbm2 {
    std::array<int, 2> sizes;
    double p_in;
    double p_out;
};

struct Sbm4 {
    std::array<int, 4> sizes;
    std::array<double, 4> p_in;
    double p_between;
};

struct BarabasiAlbert {
    int n;
    int m;
};

struct WattsStrogatz {
    int n;
    int k;
    double p;
};

struct EdgeListFile {
    std::string path;
};

using ModelKind = std::variant<ErdosRenyi, RandomGeometric, Sbm2, Sbm4,
                               BarabasiAlbert, WattsStrogatz, EdgeListFile>;

struct GraphModel {
    ModelKind kind;
    std::uint64_t seed = 0;
};

/// Human-readable tag for a model ("er", "geo", "sbm2", ...).
std::string model_name(const GraphModel& model);

/// Builds a graph from the model, deterministically for a fixed seed.
/// All weights start at 1. Throws parameter_error on invalid parameters.
Graph generate(const GraphModel& model);

/// Simple random k-regular graph via the pairing model with retries.
/// Requires n*k even and k < n. Used by the regular-graph activation suites.
Graph random_regular_graph(int n, int k, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Edge-list files: `i j [w]` per line, 0-based indices, optional positive
// weight (default 1), `#` comment lines ignored.
// ---------------------------------------------------------------------------

struct LoadStats {
    long duplicates_merged = 0;
    long self_loops_dropped = 0;
};

/// Parses an edge-list file. Duplicate unordered pairs keep the first weight;
/// self-loop lines are dropped; both are counted in stats when provided.
/// When expected_nodes is given, the node count is exactly that value and any
/// larger index is a parse error; otherwise the count is max index + 1.
Graph load_edge_list(const std::string& path,
                     std::optional<int> expected_nodes = std::nullopt,
                     LoadStats* stats = nullptr);

/// Writes the canonical edge list (one `u v w` line per edge).
void write_edge_list(const Graph& g, const std::string& path);

// ---------------------------------------------------------------------------
// Augmented operators
// ---------------------------------------------------------------------------

/// Dense symmetric operator built from a graph.
struct OperatorMatrix {
    enum class Kind { AugmentedLaplacian, Propagation };
    Kind kind;
    Eigen::MatrixXd m;
};

/// I - D^{-1/2} A D^{-1/2} with per-node self-loop augmentation:
/// diagonal 1 - 1/(1+d_i), off-diagonal -w_ij / sqrt((1+d_i)(1+d_j)).
OperatorMatrix augmented_laplacian(const Graph& g);

/// The complementary smoothing operator: entrywise I minus the Laplacian.
OperatorMatrix propagation_operator(const Graph& g);

/// Applies the propagation operator to an N x C signal through the edge
/// list, without materializing the dense matrix.
Eigen::MatrixXd propagate_signal(const Graph& g, const Eigen::MatrixXd& x);

} // namespace oversmooth
