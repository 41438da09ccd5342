#include "oversmooth/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "oversmooth/errors.hpp"
#include "oversmooth/rng.hpp"

extern "C" {
void dsterf_(int* n, double* d, double* e, int* info);
void dstebz_(const char* range, const char* order, int* n, double* vl, double* vu, int* il,
             int* iu, double* abstol, double* d, double* e, int* m, int* nsplit, double* w,
             int* iblock, int* isplit, double* work, int* iwork, int* info);
void dstein_(int* n, double* d, double* e, int* m, double* w, int* iblock, int* isplit,
             double* z, int* ldz, double* work, int* iwork, int* ifail, int* info);
}

namespace oversmooth {

namespace {

// Largest-magnitude entry positive; first index wins ties so the convention
// is deterministic.
void fix_column_signs(Eigen::MatrixXd& v) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        Eigen::Index idx = 0;
        v.col(c).cwiseAbs().maxCoeff(&idx);
        if (v(idx, c) < 0.0) v.col(c) = -v.col(c);
    }
}

void require_laplacian(const OperatorMatrix& op) {
    if (op.kind != OperatorMatrix::Kind::AugmentedLaplacian)
        throw parameter_error("operator must be the augmented Laplacian");
}

} // namespace

int Spectrum::num_zero() const {
    int count = 0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
        if (eigenvalues(i) <= zero_tol) ++count;
    return count;
}

Spectrum eigendecompose(const OperatorMatrix& lap, double zero_tol) {
    require_laplacian(lap);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap.m, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw numeric_error("symmetric eigensolver did not converge (n = " +
                            std::to_string(lap.m.rows()) + ")");
    Spectrum s;
    s.eigenvalues = solver.eigenvalues();
    s.eigenvectors = solver.eigenvectors();
    s.zero_tol = zero_tol;
    fix_column_signs(s.eigenvectors);
    return s;
}

ContractionFactors contraction_factors(const Spectrum& s) {
    const Eigen::Index n = s.eigenvalues.size();
    Eigen::Index first = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (s.eigenvalues(i) > s.zero_tol) {
            first = i;
            break;
        }
    }
    if (first < 0)
        throw degenerate_spectrum_error(
            "all eigenvalues are below the zero tolerance (edgeless graph?)");
    const double lambda = s.eigenvalues(first);
    double safe = 0.0;
    for (Eigen::Index i = first; i < n; ++i) {
        const double f = (1.0 - s.eigenvalues(i)) * (1.0 - s.eigenvalues(i));
        safe = std::max(safe, f);
    }
    return {lambda, (1.0 - lambda) * (1.0 - lambda), safe};
}

double spectral_norm_squared(const Eigen::MatrixXd& w) {
    if (w.size() == 0) throw parameter_error("spectral norm of an empty matrix");
    // Iterate on the smaller Gram matrix.
    const bool use_wtw = w.cols() <= w.rows();
    const Eigen::MatrixXd b = use_wtw ? Eigen::MatrixXd(w.transpose() * w)
                                      : Eigen::MatrixXd(w * w.transpose());
    const Eigen::Index n = b.rows();
    Rng rng(0x5eedc0de);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
    v.normalize();
    double estimate = 0.0;
    int stable = 0;
    constexpr int kMaxIter = 10000;
    constexpr double kRelTol = 1e-10;
    for (int iter = 0; iter < kMaxIter; ++iter) {
        Eigen::VectorXd bv = b * v;
        const double norm = bv.norm();
        if (norm == 0.0) return 0.0;
        const double next = v.dot(bv);
        v = bv / norm;
        // require the tolerance met on consecutive iterations so a slowly
        // creeping estimate near tied singular values does not stop early
        if (iter > 0 && std::abs(next - estimate) <= kRelTol * std::max(std::abs(next), 1e-300)) {
            if (++stable >= 3) return next;
        } else {
            stable = 0;
        }
        estimate = next;
    }
    const double residual = (b * v - estimate * v).norm();
    throw numeric_error("power iteration hit the iteration cap; residual = " +
                        std::to_string(residual));
}

Eigen::VectorXd low_eig_mix(const Eigen::MatrixXd& eigenvectors, int t, std::uint64_t seed) {
    if (t < 1 || t > eigenvectors.cols())
        throw parameter_error("mix size T must satisfy 1 <= T <= " +
                              std::to_string(eigenvectors.cols()) + ", got " + std::to_string(t));
    Rng rng(seed);
    Eigen::VectorXd c(t);
    for (int i = 0; i < t; ++i) c(i) = rng.uniform01();
    return eigenvectors.leftCols(t) * c;
}

Eigen::VectorXd low_eig_mix(const Spectrum& s, int t, std::uint64_t seed) {
    return low_eig_mix(s.eigenvectors, t, seed);
}

namespace {

LowestSpectrum lowest_from_full(const OperatorMatrix& lap, int t, double zero_tol) {
    Spectrum s = eigendecompose(lap, zero_tol);
    return {s.eigenvalues, s.eigenvectors.leftCols(t)};
}

// Tridiagonal route: Householder reduction once, dsterf for all eigenvalues,
// dstebz/dstein for the t lowest pairs, then the blocked back-transform.
bool try_lowest_tridiagonal(const OperatorMatrix& lap, int t, LowestSpectrum& out) {
    int n = static_cast<int>(lap.m.rows());
    Eigen::Tridiagonalization<Eigen::MatrixXd> tri(lap.m);
    Eigen::VectorXd diag = tri.diagonal();
    Eigen::VectorXd sub = tri.subDiagonal();

    std::vector<double> d_all(diag.data(), diag.data() + n);
    std::vector<double> e_all(sub.data(), sub.data() + n - 1);
    e_all.push_back(0.0);
    int info = 0;
    dsterf_(&n, d_all.data(), e_all.data(), &info);
    if (info != 0) return false;

    std::vector<double> d(diag.data(), diag.data() + n);
    std::vector<double> e(sub.data(), sub.data() + n - 1);
    e.push_back(0.0);
    int m = 0, nsplit = 0, il = 1, iu = t;
    double vl = 0.0, vu = 0.0, abstol = 0.0;
    std::vector<double> w(static_cast<std::size_t>(n));
    std::vector<int> iblock(static_cast<std::size_t>(n)), isplit(static_cast<std::size_t>(n));
    std::vector<double> work(static_cast<std::size_t>(5 * n));
    std::vector<int> iwork(static_cast<std::size_t>(3 * n));
    dstebz_("I", "B", &n, &vl, &vu, &il, &iu, &abstol, d.data(), e.data(), &m, &nsplit, w.data(),
            iblock.data(), isplit.data(), work.data(), iwork.data(), &info);
    if (info != 0 || m != t) return false;

    Eigen::MatrixXd z(n, m);
    std::vector<int> ifail(static_cast<std::size_t>(m));
    dstein_(&n, d.data(), e.data(), &m, w.data(), iblock.data(), isplit.data(), z.data(), &n,
            work.data(), iwork.data(), ifail.data(), &info);
    if (info != 0) return false;

    // dstebz with block ordering is not globally sorted; restore ascending order.
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
        return w[static_cast<std::size_t>(a)] < w[static_cast<std::size_t>(b)];
    });
    Eigen::MatrixXd z_sorted(n, m);
    for (int c = 0; c < m; ++c) z_sorted.col(c) = z.col(perm[static_cast<std::size_t>(c)]);

    out.eigenvalues = Eigen::Map<Eigen::VectorXd>(d_all.data(), n);
    out.lowest_vectors = tri.matrixQ() * z_sorted;
    fix_column_signs(out.lowest_vectors);
    return true;
}

} // namespace

LowestSpectrum eigendecompose_lowest(const OperatorMatrix& lap, int t, int dense_threshold) {
    require_laplacian(lap);
    const Eigen::Index n = lap.m.rows();
    if (t < 1 || t > n)
        throw parameter_error("mix size T must satisfy 1 <= T <= " + std::to_string(n) +
                              ", got " + std::to_string(t));
    if (n <= std::max<Eigen::Index>(2, dense_threshold)) return lowest_from_full(lap, t, 1e-8);
    LowestSpectrum out;
    if (try_lowest_tridiagonal(lap, t, out)) return out;
    return lowest_from_full(lap, t, 1e-8);
}

} // namespace oversmooth
