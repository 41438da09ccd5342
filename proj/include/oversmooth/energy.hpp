#pragma once

#include <Eigen/Dense>

#include "oversmooth/graph.hpp"

namespace oversmooth {

/// Dirichlet energy as the quadratic form tr(X^T L X) against the dense
/// augmented Laplacian. Round-off results in [-1e-9, 0) are clamped to 0.
double dirichlet_energy_quadratic(const Eigen::MatrixXd& x, const OperatorMatrix& lap);

/// Dirichlet energy as the sum over stored edges of
/// w_ij * || x_i/sqrt(1+d_i) - x_j/sqrt(1+d_j) ||^2.
/// Non-negative by construction; this is the reference formula.
double dirichlet_energy_edgesum(const Eigen::MatrixXd& x, const Graph& g);

/// tr(X^T L X) / ||X||_F^2, the scale-invariant smoothness of a signal.
/// Always in [0, 2). Throws undefined_quotient_error for the zero signal.
double rayleigh_quotient(const Eigen::MatrixXd& x, const OperatorMatrix& lap);

} // namespace oversmooth
