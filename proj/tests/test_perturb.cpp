#include <doctest.h>

#include <cmath>
#include <set>

#include "oversmooth/energy.hpp"
#include "oversmooth/graph.hpp"
#include "oversmooth/perturb.hpp"
#include "oversmooth/rng.hpp"
#include "oversmooth/spectral.hpp"

using namespace oversmooth;

namespace {

std::set<std::pair<int, int>> edge_set(const Graph& g) {
    std::set<std::pair<int, int>> s;
    for (const auto& e : g.edges()) s.insert({e.u, e.v});
    return s;
}

} // namespace

TEST_CASE("perturb ratio 0 returns the identical graph") {
    const Graph g = generate({ErdosRenyi{30, 0.3}, 3});
    const Graph p = perturb(g, {PerturbationSpec::Kind::Drop, 0.0, 10000.0, 1});
    CHECK(edge_set(p) == edge_set(g));
    const Graph r = perturb(g, {PerturbationSpec::Kind::Reweight, 0.0, 10000.0, 1});
    CHECK(edge_set(r) == edge_set(g));
}

TEST_CASE("drop ratio 1 removes every edge but keeps the nodes") {
    const Graph g = generate({ErdosRenyi{30, 0.3}, 3});
    const Graph p = perturb(g, {PerturbationSpec::Kind::Drop, 1.0, 10000.0, 1});
    CHECK(p.num_edges() == 0);
    CHECK(p.num_nodes() == 30);
}

TEST_CASE("drop counts are exact and reproducible") {
    std::vector<Edge> ten;
    for (int i = 0; i < 10; ++i) ten.push_back({i, i + 1, 1.0});
    const Graph g(11, ten);
    const Graph a = perturb(g, {PerturbationSpec::Kind::Drop, 0.5, 10000.0, 7});
    CHECK(a.num_edges() == 5);
    const Graph b = perturb(g, {PerturbationSpec::Kind::Drop, 0.5, 10000.0, 7});
    CHECK(edge_set(a) == edge_set(b));

    // round-half-up: 0.25 * 10 = 2.5 -> 3 dropped
    CHECK(perturb(g, {PerturbationSpec::Kind::Drop, 0.25, 10000.0, 7}).num_edges() == 7);
    // 0.05 * 10 = 0.5 -> 1 dropped
    CHECK(perturb(g, {PerturbationSpec::Kind::Drop, 0.05, 10000.0, 7}).num_edges() == 9);

    // general exactness: |E| - round(r|E|)
    const Graph big = generate({RandomGeometric{100, 0.3}, 5});
    for (double r : {0.1, 0.33, 0.72, 0.9}) {
        const int expect = big.num_edges() -
                           static_cast<int>(std::floor(r * big.num_edges() + 0.5));
        CHECK(perturb(big, {PerturbationSpec::Kind::Drop, r, 1.0, 9}).num_edges() == expect);
    }
}

TEST_CASE("reweight preserves topology and hits the selected weights") {
    const Graph g = generate({ErdosRenyi{30, 0.3}, 5});
    const Graph p = perturb(g, {PerturbationSpec::Kind::Reweight, 0.4, 10000.0, 11});
    CHECK(p.num_edges() == g.num_edges());
    CHECK(edge_set(p) == edge_set(g));
    int changed = 0;
    for (int i = 0; i < p.num_edges(); ++i) {
        const double w = p.edges()[static_cast<std::size_t>(i)].w;
        if (w == 10000.0) ++changed;
        else CHECK(w == 1.0);
    }
    CHECK(changed == static_cast<int>(std::floor(0.4 * g.num_edges() + 0.5)));
}

TEST_CASE("perturbed graphs keep the spectral invariants, even at weight 10000") {
    const Graph g = generate({RandomGeometric{80, 0.3}, 13});
    const Graph p = perturb(g, {PerturbationSpec::Kind::Reweight, 0.3, 10000.0, 17});
    const Spectrum s = eigendecompose(augmented_laplacian(p));
    CHECK(s.eigenvalues(0) >= -1e-9);
    CHECK(s.eigenvalues(79) < 2.0);
}

TEST_CASE("perturb validates its parameters") {
    const Graph g(2, {{0, 1, 1.0}});
    CHECK_THROWS_AS(perturb(g, {PerturbationSpec::Kind::Drop, -0.1, 1.0, 1}), parameter_error);
    CHECK_THROWS_AS(perturb(g, {PerturbationSpec::Kind::Drop, 1.1, 1.0, 1}), parameter_error);
    CHECK_THROWS_AS(perturb(g, {PerturbationSpec::Kind::Reweight, 0.5, 0.0, 1}), parameter_error);
    CHECK_THROWS_AS(parse_perturbation_kind("remove"), parameter_error);
}

TEST_CASE("experiment protocol") {
    ExperimentConfig cfg;
    cfg.model = {RandomGeometric{60, 0.3}, 19};
    cfg.kind = PerturbationSpec::Kind::Drop;
    cfg.ratios = {0.0, 0.3};
    cfg.trials = 5;
    cfg.t_mix = 10;
    cfg.base_seed = 23;

    const ExperimentResult result = run_experiment(cfg);

    SUBCASE("row and spectrum counts") {
        CHECK(result.rows.size() == 2 * 5 * 3);
        CHECK(result.spectra.size() == 2 * 5);
        CHECK(result.n_nodes == 60);
    }
    SUBCASE("ratio 0 reproduces the original energies exactly") {
        for (const auto& row : result.rows) {
            if (row.ratio == 0.0) CHECK(row.e_orig == row.e_pert);
        }
        for (const auto& rec : result.spectra) {
            if (rec.ratio == 0.0)
                CHECK((rec.original - rec.perturbed).cwiseAbs().maxCoeff() == 0.0);
        }
    }
    SUBCASE("identical config is bit-identical, regardless of threading") {
        ExperimentConfig cfg1 = cfg;
        cfg1.threads = 1;
        ExperimentConfig cfg2 = cfg;
        cfg2.threads = 2;
        const ExperimentResult a = run_experiment(cfg1);
        const ExperimentResult b = run_experiment(cfg2);
        REQUIRE(a.rows.size() == b.rows.size());
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            CHECK(a.rows[i].e_orig == b.rows[i].e_orig);
            CHECK(a.rows[i].e_pert == b.rows[i].e_pert);
            CHECK(a.rows[i].ratio == b.rows[i].ratio);
            CHECK(a.rows[i].trial == b.rows[i].trial);
        }
        for (std::size_t i = 0; i < a.spectra.size(); ++i)
            CHECK((a.spectra[i].perturbed - b.spectra[i].perturbed).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("reuse_original_signal mode keeps e_orig and changes only the perturbed side") {
        ExperimentConfig alt = cfg;
        alt.reuse_original_signal = true;
        const ExperimentResult b = run_experiment(alt);
        REQUIRE(b.rows.size() == result.rows.size());
        for (std::size_t i = 0; i < b.rows.size(); ++i)
            CHECK(b.rows[i].e_orig == result.rows[i].e_orig);
        for (const auto& row : b.rows)
            if (row.ratio == 0.0) CHECK(row.e_orig == row.e_pert);
    }
    SUBCASE("parameter validation") {
        ExperimentConfig bad = cfg;
        bad.t_mix = 61;
        CHECK_THROWS_AS(run_experiment(bad), parameter_error);
        bad = cfg;
        bad.ratios = {};
        CHECK_THROWS_AS(run_experiment(bad), parameter_error);
        bad = cfg;
        bad.ratios = {1.5};
        CHECK_THROWS_AS(run_experiment(bad), parameter_error);
        bad = cfg;
        bad.trials = 0;
        CHECK_THROWS_AS(run_experiment(bad), parameter_error);
    }
}

TEST_CASE("experiment energies agree with a direct re-computation") {
    // one ratio, one trial: recompute everything by hand through the library
    ExperimentConfig cfg;
    cfg.model = {ErdosRenyi{40, 0.2}, 29};
    cfg.kind = PerturbationSpec::Kind::Reweight;
    cfg.ratios = {0.5};
    cfg.trials = 1;
    cfg.t_mix = 8;
    cfg.base_seed = 31;
    const ExperimentResult result = run_experiment(cfg);
    REQUIRE(result.rows.size() == 3);

    const Graph g = generate(cfg.model);
    const LowestSpectrum ls = eigendecompose_lowest(augmented_laplacian(g), 8);
    // same derivation used by the engine: trial seed + ratio-indexed streams
    const std::uint64_t trial_seed = cfg.base_seed;
    const Eigen::VectorXd x = low_eig_mix(ls.lowest_vectors, 8, derive_seed(trial_seed, 1));
    CHECK(result.rows[0].e_orig == dirichlet_energy_edgesum(x, g));
    const Eigen::MatrixXd px = propagate_signal(g, x);
    CHECK(result.rows[1].e_orig == dirichlet_energy_edgesum(px, g));
    CHECK(result.rows[2].e_orig ==
          dirichlet_energy_edgesum(propagate_signal(g, px), g));
}

TEST_CASE("summaries") {
    ExperimentConfig cfg;
    cfg.model = {RandomGeometric{50, 0.3}, 37};
    cfg.kind = PerturbationSpec::Kind::Drop;
    cfg.ratios = {0.0, 0.5};
    cfg.trials = 4;
    cfg.t_mix = 6;
    cfg.base_seed = 41;
    const ExperimentResult result = run_experiment(cfg);
    const auto summary = summarize(result);
    REQUIRE(summary.size() == 2 * 3);

    for (const auto& s : summary) {
        if (s.ratio == 0.0) {
            CHECK(s.mean_delta == 0.0);
            CHECK(s.median_delta == 0.0);
            CHECK(s.frac_increased == 0.0);
        }
        CHECK(s.frac_increased >= 0.0);
        CHECK(s.frac_increased <= 1.0);
    }

    SUBCASE("single-trial medians equal the single values") {
        ExperimentConfig one = cfg;
        one.trials = 1;
        one.ratios = {0.4};
        const ExperimentResult r1 = run_experiment(one);
        const auto s1 = summarize(r1);
        REQUIRE(s1.size() == 3);
        for (int k = 0; k < 3; ++k) {
            const auto& row = r1.rows[static_cast<std::size_t>(k)];
            CHECK(s1[static_cast<std::size_t>(k)].median_delta ==
                  doctest::Approx(row.e_pert - row.e_orig));
            CHECK(s1[static_cast<std::size_t>(k)].mean_delta ==
                  doctest::Approx(row.e_pert - row.e_orig));
        }
    }
    SUBCASE("empty result is rejected") {
        CHECK_THROWS_AS(summarize(ExperimentResult{}), parameter_error);
    }
}
