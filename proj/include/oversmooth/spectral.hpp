#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "oversmooth/graph.hpp"

namespace oversmooth {

/// Full eigendecomposition of the augmented Laplacian. Eigenvalues ascend;
/// column i of eigenvectors is the unit eigenvector for eigenvalues[i], with
/// the sign fixed so each vector's largest-magnitude entry is positive.
struct Spectrum {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    double zero_tol = 1e-8;

    /// Count of eigenvalues classified as zero (<= zero_tol).
    int num_zero() const;
};

Spectrum eigendecompose(const OperatorMatrix& lap, double zero_tol = 1e-8);

/// Per-layer contraction constants derived from the spectrum.
/// gap_factor is (1-lambda)^2 for lambda the smallest nonzero eigenvalue;
/// safe_factor is max over nonzero eigenvalues of (1-lambda_i)^2, the
/// constant for which the propagation bound holds unconditionally. The two
/// coincide whenever every nonzero eigenvalue lies in [lambda, 2-lambda].
struct ContractionFactors {
    double lambda_smallest_nonzero;
    double gap_factor;
    double safe_factor;
};

ContractionFactors contraction_factors(const Spectrum& s);

/// Squared largest singular value via power iteration on W^T W (or W W^T,
/// whichever is smaller), relative tolerance 1e-10, at most 10000 iterations.
double spectral_norm_squared(const Eigen::MatrixXd& w);

/// x = sum_{i<=T} c_i v_i with c_i ~ Uniform(0,1), deterministic per seed.
Eigen::VectorXd low_eig_mix(const Spectrum& s, int t, std::uint64_t seed);

/// Same mix over an explicit eigenvector basis (columns ascending).
Eigen::VectorXd low_eig_mix(const Eigen::MatrixXd& eigenvectors, int t, std::uint64_t seed);

/// All eigenvalues plus only the t lowest eigenvectors. For matrices above
/// dense_threshold this runs one Householder tridiagonalization and solves
/// the tridiagonal problem directly (all values, then inverse iteration for
/// the t lowest vectors), which is much cheaper than accumulating the full
/// eigenvector matrix. Falls back to the full solver on any failure, so the
/// result always satisfies the same residual and orthonormality contracts.
struct LowestSpectrum {
    Eigen::VectorXd eigenvalues;    // all N, ascending
    Eigen::MatrixXd lowest_vectors; // N x t, sign-fixed columns
};

LowestSpectrum eigendecompose_lowest(const OperatorMatrix& lap, int t,
                                     int dense_threshold = 512);

} // namespace oversmooth
