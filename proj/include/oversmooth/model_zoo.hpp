#pragma once

#include <string>
#include <utility>
#include <vector>

#include "oversmooth/graph.hpp"
#include "oversmooth/rng.hpp"

namespace oversmooth {

/// The six synthetic models at their default parameters, each seeded from
/// its own sub-stream of `seed`. Defaults: G(200, 0.05); geometric radius
/// 0.2 on the unit square; two 100-node blocks at 0.1/0.01; four 50-node
/// blocks at {0.1, 0.2, 0.3, 0.4} within and 0.08 between; preferential
/// attachment with n = 200, m = 4; ring lattice n = 200, k = 4 rewired at
/// p = 0.1 (the lattice parameters are project defaults).
inline std::vector<std::pair<std::string, GraphModel>> standard_models(std::uint64_t seed) {
    std::vector<std::pair<std::string, GraphModel>> models;
    models.emplace_back("er", GraphModel{ErdosRenyi{200, 0.05}, derive_seed(seed, 11)});
    models.emplace_back("geo", GraphModel{RandomGeometric{200, 0.2}, derive_seed(seed, 12)});
    models.emplace_back("sbm2", GraphModel{Sbm2{{100, 100}, 0.1, 0.01}, derive_seed(seed, 13)});
    models.emplace_back(
        "sbm4", GraphModel{Sbm4{{50, 50, 50, 50}, {0.1, 0.2, 0.3, 0.4}, 0.08},
                           derive_seed(seed, 14)});
    models.emplace_back("ba", GraphModel{BarabasiAlbert{200, 4}, derive_seed(seed, 15)});
    models.emplace_back("ws", GraphModel{WattsStrogatz{200, 4, 0.1}, derive_seed(seed, 16)});
    return models;
}

} // namespace oversmooth
