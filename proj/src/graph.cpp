#include "oversmooth/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_set>

#include "oversmooth/rng.hpp"

namespace oversmooth {

namespace {

std::uint64_t pair_key(int u, int v) {
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

} // namespace

Graph::Graph(int n_nodes, std::vector<Edge> edges) : n_(n_nodes), edges_(std::move(edges)) {
    if (n_ < 1) throw parameter_error("graph needs at least one node, got " + std::to_string(n_));
    for (auto& e : edges_) {
        if (e.u == e.v) throw parameter_error("self-loop at node " + std::to_string(e.u));
        if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_)
            throw parameter_error("edge endpoint out of range: (" + std::to_string(e.u) + ", " +
                                  std::to_string(e.v) + ") with n = " + std::to_string(n_));
        if (!(e.w > 0.0) || !std::isfinite(e.w))
            throw parameter_error("edge weight must be a positive finite real");
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
    for (std::size_t i = 1; i < edges_.size(); ++i) {
        if (edges_[i - 1].u == edges_[i].u && edges_[i - 1].v == edges_[i].v)
            throw parameter_error("duplicate edge (" + std::to_string(edges_[i].u) + ", " +
                                  std::to_string(edges_[i].v) + ")");
    }
}

std::vector<double> Graph::degrees() const {
    std::vector<double> d(static_cast<std::size_t>(n_), 0.0);
    for (const auto& e : edges_) {
        d[static_cast<std::size_t>(e.u)] += e.w;
        d[static_cast<std::size_t>(e.v)] += e.w;
    }
    return d;
}

std::vector<double> Graph::augmented_degrees() const {
    auto d = degrees();
    for (auto& x : d) x += 1.0;
    return d;
}

bool Graph::is_regular(double tol) const {
    const auto aug = augmented_degrees();
    const double ref = aug.front();
    const double scale = std::max(1.0, ref);
    for (double a : aug) {
        if (std::abs(a - ref) > tol * scale) return false;
    }
    return true;
}

std::vector<std::vector<int>> Graph::connected_components() const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_));
    for (const auto& e : edges_) {
        adj[static_cast<std::size_t>(e.u)].push_back(e.v);
        adj[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    std::vector<std::vector<int>> comps;
    for (int s = 0; s < n_; ++s) {
        if (seen[static_cast<std::size_t>(s)]) continue;
        std::vector<int> comp;
        std::queue<int> q;
        q.push(s);
        seen[static_cast<std::size_t>(s)] = 1;
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            comp.push_back(u);
            for (int v : adj[static_cast<std::size_t>(u)]) {
                if (!seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    q.push(v);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

namespace {

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw parameter_error(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
}

Graph generate_er(const ErdosRenyi& m, Rng& rng) {
    if (m.n < 1) throw parameter_error("erdos-renyi: n must be positive");
    check_probability(m.p, "erdos-renyi: p");
    std::vector<Edge> edges;
    for (int i = 0; i < m.n; ++i)
        for (int j = i + 1; j < m.n; ++j)
            if (rng.bernoulli(m.p)) edges.push_back({i, j, 1.0});
    return Graph(m.n, std::move(edges));
}

Graph generate_geometric(const RandomGeometric& m, Rng& rng) {
    if (m.n < 1) throw parameter_error("geometric: n must be positive");
    if (!(m.radius > 0.0)) throw parameter_error("geometric: radius must be positive");
    std::vector<double> px(static_cast<std::size_t>(m.n)), py(static_cast<std::size_t>(m.n));
    for (int i = 0; i < m.n; ++i) {
        px[static_cast<std::size_t>(i)] = rng.uniform01();
        py[static_cast<std::size_t>(i)] = rng.uniform01();
    }
    const double r2 = m.radius * m.radius;
    std::vector<Edge> edges;
    for (int i = 0; i < m.n; ++i) {
        for (int j = i + 1; j < m.n; ++j) {
            const double dx = px[static_cast<std::size_t>(i)] - px[static_cast<std::size_t>(j)];
            const double dy = py[static_cast<std::size_t>(i)] - py[static_cast<std::size_t>(j)];
            if (dx * dx + dy * dy <= r2) edges.push_back({i, j, 1.0});
        }
    }
    return Graph(m.n, std::move(edges));
}

Graph generate_sbm2(const Sbm2& m, Rng& rng) {
    if (m.sizes[0] < 1 || m.sizes[1] < 1) throw parameter_error("sbm2: block sizes must be positive");
    check_probability(m.p_in, "sbm2: p_in");
    check_probability(m.p_out, "sbm2: p_out");
    const int n = m.sizes[0] + m.sizes[1];
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        const int bi = i < m.sizes[0] ? 0 : 1;
        for (int j = i + 1; j < n; ++j) {
            const int bj = j < m.sizes[0] ? 0 : 1;
            const double p = bi == bj ? m.p_in : m.p_out;
            if (rng.bernoulli(p)) edges.push_back({i, j, 1.0});
        }
    }
    return Graph(n, std::move(edges));
}

Graph generate_sbm4(const Sbm4& m, Rng& rng) {
    int n = 0;
    std::vector<int> block;
    for (int b = 0; b < 4; ++b) {
        if (m.sizes[static_cast<std::size_t>(b)] < 1)
            throw parameter_error("sbm4: block sizes must be positive");
        check_probability(m.p_in[static_cast<std::size_t>(b)], "sbm4: p_in");
        for (int i = 0; i < m.sizes[static_cast<std::size_t>(b)]; ++i) block.push_back(b);
        n += m.sizes[static_cast<std::size_t>(b)];
    }
    check_probability(m.p_between, "sbm4: p_between");
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double p = block[static_cast<std::size_t>(i)] == block[static_cast<std::size_t>(j)]
                                 ? m.p_in[static_cast<std::size_t>(block[static_cast<std::size_t>(i)])]
                                 : m.p_between;
            if (rng.bernoulli(p)) edges.push_back({i, j, 1.0});
        }
    }
    return Graph(n, std::move(edges));
}

// Preferential attachment over a multiset of endpoint repetitions; each new
// node attaches to m distinct existing targets.
Graph generate_ba(const BarabasiAlbert& m, Rng& rng) {
    if (m.m < 1) throw parameter_error("barabasi-albert: m must be >= 1");
    if (m.n <= m.m) throw parameter_error("barabasi-albert: n must exceed m");
    std::vector<Edge> edges;
    std::vector<int> repeated;
    std::set<int> targets;
    for (int t = 0; t < m.m; ++t) targets.insert(t);
    for (int src = m.m; src < m.n; ++src) {
        for (int t : targets) {
            edges.push_back({src, t, 1.0});
            repeated.push_back(t);
            repeated.push_back(src);
        }
        targets.clear();
        while (static_cast<int>(targets.size()) < m.m) {
            targets.insert(repeated[rng.uniform_index(repeated.size())]);
        }
    }
    return Graph(m.n, std::move(edges));
}

Graph generate_ws(const WattsStrogatz& m, Rng& rng) {
    if (m.k <= 0 || m.k % 2 != 0 || m.k >= m.n)
        throw parameter_error("watts-strogatz: k must be even with 0 < k < n");
    check_probability(m.p, "watts-strogatz: p");
    const int n = m.n;
    std::set<std::pair<int, int>> present;
    auto norm = [](int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); };
    for (int off = 1; off <= m.k / 2; ++off)
        for (int i = 0; i < n; ++i) present.insert(norm(i, (i + off) % n));
    // Rewire ring edges lattice-order, skipping saturated nodes.
    for (int off = 1; off <= m.k / 2; ++off) {
        for (int i = 0; i < n; ++i) {
            const auto old_edge = norm(i, (i + off) % n);
            if (!rng.bernoulli(m.p)) continue;
            if (!present.count(old_edge)) continue;
            int degree_i = 0;
            for (int v = 0; v < n; ++v)
                if (v != i && present.count(norm(i, v))) ++degree_i;
            if (degree_i >= n - 1) continue;
            int w;
            do {
                w = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
            } while (w == i || present.count(norm(i, w)));
            present.erase(old_edge);
            present.insert(norm(i, w));
        }
    }
    std::vector<Edge> edges;
    edges.reserve(present.size());
    for (const auto& [u, v] : present) edges.push_back({u, v, 1.0});
    return Graph(n, std::move(edges));
}

} // namespace

std::string model_name(const GraphModel& model) {
    struct Visitor {
        std::string operator()(const ErdosRenyi&) const { return "er"; }
        std::string operator()(const RandomGeometric&) const { return "geo"; }
        std::string operator()(const Sbm2&) const { return "sbm2"; }
        std::string operator()(const Sbm4&) const { return "sbm4"; }
        std::string operator()(const BarabasiAlbert&) const { return "ba"; }
        std::string operator()(const WattsStrogatz&) const { return "ws"; }
        std::string operator()(const EdgeListFile&) const { return "file"; }
    };
    return std::visit(Visitor{}, model.kind);
}

Graph generate(const GraphModel& model) {
    Rng rng(model.seed);
    struct Visitor {
        Rng& rng;
        Graph operator()(const ErdosRenyi& m) const { return generate_er(m, rng); }
        Graph operator()(const RandomGeometric& m) const { return generate_geometric(m, rng); }
        Graph operator()(const Sbm2& m) const { return generate_sbm2(m, rng); }
        Graph operator()(const Sbm4& m) const { return generate_sbm4(m, rng); }
        Graph operator()(const BarabasiAlbert& m) const { return generate_ba(m, rng); }
        Graph operator()(const WattsStrogatz& m) const { return generate_ws(m, rng); }
        Graph operator()(const EdgeListFile& m) const { return load_edge_list(m.path); }
    };
    return std::visit(Visitor{rng}, model.kind);
}

Graph random_regular_graph(int n, int k, std::uint64_t seed) {
    if (k < 1 || k >= n) throw parameter_error("regular graph: need 1 <= k < n");
    if ((static_cast<long long>(n) * k) % 2 != 0)
        throw parameter_error("regular graph: n*k must be even");
    Rng rng(seed);
    const int stubs = n * k;
    std::vector<int> stub(static_cast<std::size_t>(stubs));
    for (int i = 0; i < stubs; ++i) stub[static_cast<std::size_t>(i)] = i / k;
    for (int attempt = 0; attempt < 10000; ++attempt) {
        for (int i = stubs - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(i) + 1));
            std::swap(stub[static_cast<std::size_t>(i)], stub[static_cast<std::size_t>(j)]);
        }
        std::unordered_set<std::uint64_t> seen;
        std::vector<Edge> edges;
        bool simple = true;
        for (int i = 0; i < stubs; i += 2) {
            int u = stub[static_cast<std::size_t>(i)];
            int v = stub[static_cast<std::size_t>(i + 1)];
            if (u == v) {
                simple = false;
                break;
            }
            if (u > v) std::swap(u, v);
            if (!seen.insert(pair_key(u, v)).second) {
                simple = false;
                break;
            }
            edges.push_back({u, v, 1.0});
        }
        if (simple) return Graph(n, std::move(edges));
    }
    throw numeric_error("regular graph: pairing model failed to produce a simple graph");
}

// ---------------------------------------------------------------------------
// Edge-list IO
// ---------------------------------------------------------------------------

Graph load_edge_list(const std::string& path, std::optional<int> expected_nodes,
                     LoadStats* stats) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open edge list: " + path);
    if (expected_nodes && *expected_nodes < 1)
        throw parameter_error("expected_nodes must be positive");

    LoadStats local;
    std::unordered_set<std::uint64_t> seen;
    std::vector<Edge> edges;
    long max_index = -1;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::istringstream ss(line);
        long long i = 0, j = 0;
        double w = 1.0;
        if (!(ss >> i >> j)) throw parse_error(path, line_no, "expected 'i j [w]'");
        if (ss >> w) {
            if (!(w > 0.0) || !std::isfinite(w))
                throw parse_error(path, line_no, "weight must be a positive real");
        } else if (!ss.eof()) {
            throw parse_error(path, line_no, "weight must be a positive real");
        }
        ss.clear();
        std::string trailing;
        if (ss >> trailing) throw parse_error(path, line_no, "unexpected trailing tokens");
        if (i < 0 || j < 0) throw parse_error(path, line_no, "node indices must be non-negative");
        if (i > std::numeric_limits<int>::max() || j > std::numeric_limits<int>::max())
            throw parse_error(path, line_no, "node index too large");
        if (expected_nodes && (i >= *expected_nodes || j >= *expected_nodes))
            throw parse_error(path, line_no,
                              "node index exceeds expected node count " +
                                  std::to_string(*expected_nodes));
        if (i == j) {
            ++local.self_loops_dropped;
            continue;
        }
        int u = static_cast<int>(i), v = static_cast<int>(j);
        if (u > v) std::swap(u, v);
        if (!seen.insert(pair_key(u, v)).second) {
            ++local.duplicates_merged;
            continue;
        }
        edges.push_back({u, v, w});
        max_index = std::max(max_index, static_cast<long>(v));
    }
    if (stats) *stats = local;
    int n;
    if (expected_nodes) {
        n = *expected_nodes;
    } else if (max_index >= 0) {
        n = static_cast<int>(max_index) + 1;
    } else {
        throw parse_error(path, line_no,
                          "edge list is empty and no expected node count was given");
    }
    return Graph(n, std::move(edges));
}

void write_edge_list(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path);
    char buf[64];
    for (const auto& e : g.edges()) {
        std::snprintf(buf, sizeof(buf), "%.17g", e.w);
        out << e.u << ' ' << e.v << ' ' << buf << '\n';
    }
    if (!out) throw io_error("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

OperatorMatrix augmented_laplacian(const Graph& g) {
    const int n = g.num_nodes();
    const auto aug = g.augmented_degrees();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0 - 1.0 / aug[static_cast<std::size_t>(i)];
    for (const auto& e : g.edges()) {
        const double v = -e.w / std::sqrt(aug[static_cast<std::size_t>(e.u)] *
                                          aug[static_cast<std::size_t>(e.v)]);
        m(e.u, e.v) = v;
        m(e.v, e.u) = v;
    }
    return {OperatorMatrix::Kind::AugmentedLaplacian, std::move(m)};
}

OperatorMatrix propagation_operator(const Graph& g) {
    const int n = g.num_nodes();
    const auto aug = g.augmented_degrees();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0 / aug[static_cast<std::size_t>(i)];
    for (const auto& e : g.edges()) {
        const double v = e.w / std::sqrt(aug[static_cast<std::size_t>(e.u)] *
                                         aug[static_cast<std::size_t>(e.v)]);
        m(e.u, e.v) = v;
        m(e.v, e.u) = v;
    }
    return {OperatorMatrix::Kind::Propagation, std::move(m)};
}

Eigen::MatrixXd propagate_signal(const Graph& g, const Eigen::MatrixXd& x) {
    if (x.rows() != g.num_nodes())
        throw shape_error("signal has " + std::to_string(x.rows()) + " rows, graph has " +
                          std::to_string(g.num_nodes()) + " nodes");
    const auto aug = g.augmented_degrees();
    Eigen::MatrixXd y(x.rows(), x.cols());
    for (int i = 0; i < g.num_nodes(); ++i)
        y.row(i) = x.row(i) / aug[static_cast<std::size_t>(i)];
    for (const auto& e : g.edges()) {
        const double c = e.w / std::sqrt(aug[static_cast<std::size_t>(e.u)] *
                                         aug[static_cast<std::size_t>(e.v)]);
        y.row(e.u) += c * x.row(e.v);
        y.row(e.v) += c * x.row(e.u);
    }
    return y;
}

} // namespace oversmooth
