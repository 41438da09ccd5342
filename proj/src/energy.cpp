#include "oversmooth/energy.hpp"

#include <cmath>
#include <string>

#include "oversmooth/errors.hpp"

namespace oversmooth {

namespace {

void check_rows(Eigen::Index rows, Eigen::Index expected, const char* what) {
    if (rows != expected)
        throw shape_error(std::string(what) + ": signal has " + std::to_string(rows) +
                          " rows, expected " + std::to_string(expected));
}

} // namespace

double dirichlet_energy_quadratic(const Eigen::MatrixXd& x, const OperatorMatrix& lap) {
    if (lap.kind != OperatorMatrix::Kind::AugmentedLaplacian)
        throw parameter_error("dirichlet energy is defined against the augmented Laplacian");
    check_rows(x.rows(), lap.m.rows(), "dirichlet_energy_quadratic");
    const double value = (x.array() * (lap.m * x).array()).sum();
    if (value < 0.0 && value >= -1e-9) return 0.0;
    return value;
}

double dirichlet_energy_edgesum(const Eigen::MatrixXd& x, const Graph& g) {
    check_rows(x.rows(), g.num_nodes(), "dirichlet_energy_edgesum");
    const auto aug = g.augmented_degrees();
    std::vector<double> inv_sqrt(aug.size());
    for (std::size_t i = 0; i < aug.size(); ++i) inv_sqrt[i] = 1.0 / std::sqrt(aug[i]);
    double total = 0.0;
    for (const auto& e : g.edges()) {
        const double diff = (x.row(e.u) * inv_sqrt[static_cast<std::size_t>(e.u)] -
                             x.row(e.v) * inv_sqrt[static_cast<std::size_t>(e.v)])
                                .squaredNorm();
        total += e.w * diff;
    }
    return total;
}

double rayleigh_quotient(const Eigen::MatrixXd& x, const OperatorMatrix& lap) {
    const double denom = x.squaredNorm();
    if (denom == 0.0) throw undefined_quotient_error("Rayleigh quotient of the zero signal");
    return dirichlet_energy_quadratic(x, lap) / denom;
}

} // namespace oversmooth
