#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "oversmooth/graph.hpp"
#include "oversmooth/rng.hpp"

using namespace oversmooth;

namespace {

Graph k2() { return Graph(2, {{0, 1, 1.0}}); }

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = "test_tmp_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

} // namespace

TEST_CASE("graph construction validates and canonicalizes") {
    Graph g(3, {{2, 0, 1.5}, {0, 1, 1.0}});
    CHECK(g.num_edges() == 2);
    // normalized to u < v and sorted
    CHECK(g.edges()[0].u == 0);
    CHECK(g.edges()[0].v == 1);
    CHECK(g.edges()[1].u == 0);
    CHECK(g.edges()[1].v == 2);
    CHECK(g.edges()[1].w == 1.5);

    CHECK_THROWS_AS(Graph(2, {{0, 0, 1.0}}), parameter_error);         // self-loop
    CHECK_THROWS_AS(Graph(2, {{0, 2, 1.0}}), parameter_error);         // out of range
    CHECK_THROWS_AS(Graph(2, {{0, 1, 0.0}}), parameter_error);         // weight
    CHECK_THROWS_AS(Graph(2, {{0, 1, -1.0}}), parameter_error);        // weight
    CHECK_THROWS_AS(Graph(3, {{0, 1, 1.0}, {1, 0, 2.0}}), parameter_error); // duplicate
    CHECK_THROWS_AS(Graph(0, {}), parameter_error);
}

TEST_CASE("degrees and regularity") {
    Graph g = k2();
    const auto d = g.degrees();
    CHECK(d[0] == doctest::Approx(1.0));
    CHECK(d[1] == doctest::Approx(1.0));
    CHECK(g.is_regular());

    // C_10: all degrees 2
    std::vector<Edge> ring;
    for (int i = 0; i < 10; ++i) ring.push_back({i, (i + 1) % 10, 1.0});
    CHECK(Graph(10, ring).is_regular());

    // star S_5: hub degree differs
    std::vector<Edge> star;
    for (int i = 1; i <= 5; ++i) star.push_back({0, i, 1.0});
    CHECK_FALSE(Graph(6, star).is_regular());
}

TEST_CASE("connected components") {
    CHECK(k2().connected_components().size() == 1);
    Graph two(4, {{0, 1, 1.0}, {2, 3, 1.0}});
    const auto comps = two.connected_components();
    REQUIRE(comps.size() == 2);
    CHECK(comps[0] == std::vector<int>{0, 1});
    CHECK(comps[1] == std::vector<int>{2, 3});
    // isolated nodes are their own components
    Graph iso(3, {{0, 1, 1.0}});
    CHECK(iso.connected_components().size() == 2);
}

TEST_CASE("erdos-renyi edge count near the binomial mean") {
    // mean = p * C(200,2) = 995, sigma = sqrt(mean * (1 - p))
    const double mean = 0.05 * (200.0 * 199.0 / 2.0);
    const double sigma = std::sqrt(mean * 0.95);
    for (std::uint64_t seed : {1ULL, 7ULL, 42ULL}) {
        const Graph g = generate({ErdosRenyi{200, 0.05}, seed});
        CHECK(g.num_nodes() == 200);
        CHECK(std::abs(g.num_edges() - mean) <= 4.0 * sigma);
    }
    CHECK(generate({ErdosRenyi{50, 0.0}, 1}).num_edges() == 0);
    CHECK(generate({ErdosRenyi{20, 1.0}, 1}).num_edges() == 190);
}

TEST_CASE("generate is deterministic per seed") {
    for (const auto& model : {GraphModel{ErdosRenyi{100, 0.1}, 9},
                              GraphModel{RandomGeometric{100, 0.25}, 9},
                              GraphModel{BarabasiAlbert{100, 3}, 9},
                              GraphModel{WattsStrogatz{100, 4, 0.2}, 9}}) {
        const Graph a = generate(model);
        const Graph b = generate(model);
        REQUIRE(a.num_edges() == b.num_edges());
        for (int i = 0; i < a.num_edges(); ++i) {
            CHECK(a.edges()[static_cast<std::size_t>(i)].u == b.edges()[static_cast<std::size_t>(i)].u);
            CHECK(a.edges()[static_cast<std::size_t>(i)].v == b.edges()[static_cast<std::size_t>(i)].v);
        }
        GraphModel other = model;
        other.seed = 10;
        CHECK(generate(other).num_edges() != 0); // distinct seed still valid
    }
}

TEST_CASE("sbm2 block densities match a counting oracle over 50 seeds") {
    long within = 0, cross = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Graph g = generate({Sbm2{{100, 100}, 0.1, 0.01}, seed});
        for (const auto& e : g.edges()) {
            const bool same_block = (e.u < 100) == (e.v < 100);
            (same_block ? within : cross) += 1;
        }
    }
    // pooled within-block pairs: 50 * 2 * C(100,2) at p = 0.1
    const double within_mean = 50.0 * 2.0 * (100.0 * 99.0 / 2.0) * 0.1;
    const double within_sigma = std::sqrt(within_mean * 0.9);
    CHECK(std::abs(within - within_mean) <= 4.0 * within_sigma);
    // pooled cross pairs: 50 * 100 * 100 at p = 0.01
    const double cross_mean = 50.0 * 100.0 * 100.0 * 0.01;
    const double cross_sigma = std::sqrt(cross_mean * 0.99);
    CHECK(std::abs(cross - cross_mean) <= 4.0 * cross_sigma);
}

TEST_CASE("sbm4 respects per-block probabilities") {
    const Graph g = generate({Sbm4{{50, 50, 50, 50}, {0.1, 0.2, 0.3, 0.4}, 0.08}, 3});
    CHECK(g.num_nodes() == 200);
    // block 3 (p = 0.4) should be denser than block 0 (p = 0.1); crude but effective
    int in0 = 0, in3 = 0;
    for (const auto& e : g.edges()) {
        if (e.u < 50 && e.v < 50) ++in0;
        if (e.u >= 150 && e.v >= 150) ++in3;
    }
    CHECK(in3 > 2 * in0);
}

TEST_CASE("barabasi-albert structure") {
    const Graph g = generate({BarabasiAlbert{200, 4}, 5});
    CHECK(g.num_nodes() == 200);
    CHECK(g.num_edges() == (200 - 4) * 4);
    CHECK(g.connected_components().size() == 1);
    CHECK_THROWS_AS(generate({BarabasiAlbert{4, 4}, 1}), parameter_error);
    CHECK_THROWS_AS(generate({BarabasiAlbert{10, 0}, 1}), parameter_error);
}

TEST_CASE("watts-strogatz keeps the edge count and validates parameters") {
    const Graph g = generate({WattsStrogatz{200, 4, 0.1}, 5});
    CHECK(g.num_nodes() == 200);
    CHECK(g.num_edges() == 400);
    CHECK_THROWS_AS(generate({WattsStrogatz{10, 3, 0.1}, 1}), parameter_error); // odd k
    CHECK_THROWS_AS(generate({WattsStrogatz{10, 10, 0.1}, 1}), parameter_error); // k >= n
    CHECK_THROWS_AS(generate({ErdosRenyi{10, 1.5}, 1}), parameter_error);
}

TEST_CASE("random geometric extremes") {
    CHECK(generate({RandomGeometric{30, 1.5}, 1}).num_edges() == 30 * 29 / 2);
    CHECK(generate({RandomGeometric{10, 1e-6}, 1}).num_edges() == 0);
}

TEST_CASE("random regular graph") {
    const Graph g = random_regular_graph(20, 3, 7);
    const auto d = g.degrees();
    for (double di : d) CHECK(di == doctest::Approx(3.0));
    CHECK_THROWS_AS(random_regular_graph(5, 3, 1), parameter_error); // odd n*k
}

TEST_CASE("edge list loading") {
    SUBCASE("plain file with comments, duplicates, and self-loops") {
        const auto path = write_temp("load1.txt",
                                     "# comment\n"
                                     "0 1\n"
                                     "1 2 2.5\n"
                                     "1 0 9.0\n" // duplicate of 0 1, first weight kept
                                     "2 2\n"     // self-loop dropped
                                     "\n"
                                     "3 4 0.5\n");
        LoadStats stats;
        const Graph g = load_edge_list(path, std::nullopt, &stats);
        CHECK(g.num_nodes() == 5);
        CHECK(g.num_edges() == 3);
        CHECK(stats.duplicates_merged == 1);
        CHECK(stats.self_loops_dropped == 1);
        CHECK(g.edges()[0].w == 1.0); // kept first (default) weight
        std::remove(path.c_str());
    }
    SUBCASE("malformed lines carry the line number") {
        const auto path = write_temp("load2.txt", "0 1\nnot an edge\n");
        try {
            load_edge_list(path);
            FAIL("expected parse_error");
        } catch (const parse_error& e) {
            CHECK(e.line() == 2);
        }
        std::remove(path.c_str());
    }
    SUBCASE("negative weight rejected") {
        const auto path = write_temp("load3.txt", "0 1 -2\n");
        CHECK_THROWS_AS(load_edge_list(path), parse_error);
        std::remove(path.c_str());
    }
    SUBCASE("expected node count") {
        const auto path = write_temp("load4.txt", "0 1\n0 5\n");
        CHECK_THROWS_AS(load_edge_list(path, 3), parse_error);
        const Graph g = load_edge_list(path, 10);
        CHECK(g.num_nodes() == 10);
        std::remove(path.c_str());
    }
    SUBCASE("empty file with expected nodes gives isolated nodes") {
        const auto path = write_temp("load5.txt", "# nothing\n");
        const Graph g = load_edge_list(path, 3);
        CHECK(g.num_nodes() == 3);
        CHECK(g.num_edges() == 0);
        CHECK_THROWS_AS(load_edge_list(path), parse_error);
        std::remove(path.c_str());
    }
    SUBCASE("missing file") { CHECK_THROWS_AS(load_edge_list("no_such_file.txt"), io_error); }
}

TEST_CASE("edge list round trip") {
    const Graph g = generate({ErdosRenyi{40, 0.2}, 3});
    write_edge_list(g, "test_tmp_rt.txt");
    const Graph back = load_edge_list("test_tmp_rt.txt", 40);
    REQUIRE(back.num_edges() == g.num_edges());
    for (int i = 0; i < g.num_edges(); ++i) {
        CHECK(back.edges()[static_cast<std::size_t>(i)].u == g.edges()[static_cast<std::size_t>(i)].u);
        CHECK(back.edges()[static_cast<std::size_t>(i)].v == g.edges()[static_cast<std::size_t>(i)].v);
        CHECK(back.edges()[static_cast<std::size_t>(i)].w == g.edges()[static_cast<std::size_t>(i)].w);
    }
    std::remove("test_tmp_rt.txt");
}

TEST_CASE("augmented laplacian of K2 matches the hand computation") {
    const OperatorMatrix lap = augmented_laplacian(k2());
    CHECK(lap.m(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(lap.m(0, 1) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(lap.m(1, 0) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(lap.m(1, 1) == doctest::Approx(0.5).epsilon(1e-15));

    const OperatorMatrix p = propagation_operator(k2());
    CHECK(p.m(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.m(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("single isolated node: laplacian [0], propagation [1]") {
    Graph g(1, {});
    CHECK(augmented_laplacian(g).m(0, 0) == 0.0);
    CHECK(propagation_operator(g).m(0, 0) == 1.0);
}

TEST_CASE("laplacian plus propagation is the identity, entrywise") {
    for (std::uint64_t seed : {1ULL, 2ULL}) {
        const Graph g = generate({RandomGeometric{60, 0.3}, seed});
        const Eigen::MatrixXd sum = augmented_laplacian(g).m + propagation_operator(g).m;
        const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(60, 60);
        CHECK((sum - eye).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("operators are symmetric") {
    const Graph g = generate({ErdosRenyi{50, 0.2}, 4});
    const auto lap = augmented_laplacian(g);
    CHECK((lap.m - lap.m.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("propagate_signal agrees with the dense operator") {
    const Graph g = generate({ErdosRenyi{40, 0.2}, 11});
    const OperatorMatrix p = propagation_operator(g);
    Rng rng(13);
    Eigen::MatrixXd x(40, 3);
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 3; ++j) x(i, j) = rng.normal();
    const Eigen::MatrixXd direct = p.m * x;
    const Eigen::MatrixXd via_edges = propagate_signal(g, x);
    CHECK((direct - via_edges).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK_THROWS_AS(propagate_signal(g, Eigen::MatrixXd::Zero(5, 1)), shape_error);
}
