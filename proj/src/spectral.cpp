#include "gbssl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <lapacke.h>

namespace gbssl {

SpectralBasis SpectralBasis::leading(Index k) const {
    if (k < 1 || k > count()) throw std::invalid_argument("leading: k out of range");
    return {eigenvalues.head(k), eigenvectors.leftCols(k)};
}

void normalize_signs(Matrix& vectors) {
    for (Index c = 0; c < vectors.cols(); ++c) {
        Index best = 0;
        double best_abs = -1.0;
        for (Index r = 0; r < vectors.rows(); ++r) {
            const double a = std::abs(vectors(r, c));
            if (a > best_abs) {
                best_abs = a;
                best = r;
            }
        }
        if (vectors(best, c) < 0.0) vectors.col(c) *= -1.0;
    }
}

double max_relative_residual(const GraphLaplacian& lap, const SpectralBasis& basis) {
    double worst = 0.0;
    for (Index i = 0; i < basis.count(); ++i) {
        const Vector psi = basis.eigenvectors.col(i);
        const double lambda = basis.eigenvalues[i];
        const double r = (lap.matrix * psi - lambda * psi).norm() / ((1.0 + std::abs(lambda)) * psi.norm());
        worst = std::max(worst, r);
    }
    return worst;
}

namespace {

constexpr double kResidualTolerance = 1e-8;

SpectralBasis finish(Vector values, Matrix vectors) {
    const double root_n = std::sqrt(static_cast<double>(vectors.rows()));
    for (Index c = 0; c < vectors.cols(); ++c) vectors.col(c) *= root_n / vectors.col(c).norm();
    normalize_signs(vectors);
    return {std::move(values), std::move(vectors)};
}

SpectralBasis dense_smallest(const GraphLaplacian& lap, Index k) {
    const Index n = lap.n;
    Matrix a = Matrix(lap.matrix);
    Vector w(n);
    Matrix z(n, k);
    std::vector<lapack_int> support(static_cast<std::size_t>(2 * k));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dsyevr(
        LAPACK_COL_MAJOR, 'V', 'I', 'U', static_cast<lapack_int>(n), a.data(),
        static_cast<lapack_int>(n), 0.0, 0.0, 1, static_cast<lapack_int>(k), 0.0, &found, w.data(),
        z.data(), static_cast<lapack_int>(n), support.data());
    if (info != 0 || found != k)
        throw SpectralError("dsyevr failed with info " + std::to_string(info),
                            std::numeric_limits<double>::infinity());
    return finish(w.head(k), std::move(z));
}

// Block subspace iteration on (L + shift I)^{-1} with Rayleigh-Ritz on the
// original operator. The block is wider than k so clustered and repeated
// eigenvalues converge together.
SpectralBasis iterative_smallest(const GraphLaplacian& lap, Index k) {
    const Index n = lap.n;
    const Index block = std::min<Index>(n, k + std::max<Index>(k, 10));
    if (block >= n) return dense_smallest(lap, k);

    const double diag_scale = lap.matrix.diagonal().cwiseAbs().mean();
    const double shift = 1e-3 * (diag_scale > 0.0 ? diag_scale : 1.0);
    SparseMatrix shifted = lap.matrix;
    for (Index i = 0; i < n; ++i) shifted.coeffRef(i, i) += shift;
    Eigen::SimplicialLDLT<SparseMatrix> solver(shifted);
    if (solver.info() != Eigen::Success)
        throw SpectralError("sparse factorization of shifted Laplacian failed",
                            std::numeric_limits<double>::infinity());

    Rng rng(0x5eed);
    Matrix q = Matrix(n, block);
    for (Index c = 0; c < block; ++c) q.col(c) = standard_normal(rng, n);
    Eigen::HouseholderQR<Matrix> qr(q);
    q = qr.householderQ() * Matrix::Identity(n, block);

    double residual = std::numeric_limits<double>::infinity();
    constexpr int kMaxIterations = 1000;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        Matrix y = solver.solve(q);
        Eigen::HouseholderQR<Matrix> qr_y(y);
        q = qr_y.householderQ() * Matrix::Identity(n, block);
        const Matrix lq = lap.matrix * q;
        const Matrix h = q.transpose() * lq;
        Eigen::SelfAdjointEigenSolver<Matrix> ritz(0.5 * (h + h.transpose()));
        q = q * ritz.eigenvectors();
        const Vector& theta = ritz.eigenvalues();
        const Matrix r = lap.matrix * q.leftCols(k) - q.leftCols(k) * theta.head(k).asDiagonal();
        residual = 0.0;
        for (Index c = 0; c < k; ++c)
            residual = std::max(residual, r.col(c).norm() / (1.0 + std::abs(theta[c])));
        if (residual < 0.01 * kResidualTolerance) return finish(theta.head(k), q.leftCols(k));
    }
    throw SpectralError("subspace iteration did not converge", residual);
}

}  // namespace

SpectralBasis eigendecompose(const GraphLaplacian& lap, Index k, EigenMethod method) {
    if (k < 1 || k > lap.n) throw std::invalid_argument("eigendecompose: need 1 <= k <= n");
    SpectralBasis basis =
        method == EigenMethod::dense ? dense_smallest(lap, k) : iterative_smallest(lap, k);
    // Eigenvalues of a PSD matrix; clip round-off below zero.
    for (Index i = 0; i < basis.count(); ++i)
        if (basis.eigenvalues[i] < 0.0 && basis.eigenvalues[i] > -1e-10 * (1.0 + basis.eigenvalues.cwiseAbs().maxCoeff()))
            basis.eigenvalues[i] = 0.0;
    const double residual = max_relative_residual(lap, basis);
    if (!(residual <= kResidualTolerance))
        throw SpectralError("eigenpairs failed the residual check", residual);
    return basis;
}

std::vector<double> spectral_error(const Vector& graph_eigenvalues,
                                   const Vector& reference_eigenvalues, Index count) {
    if (count < 1 || count > graph_eigenvalues.size() || count > reference_eigenvalues.size())
        throw std::invalid_argument("spectral_error: count exceeds available eigenvalues");
    std::vector<double> errors;
    for (Index i = 1; i < count; ++i)
        errors.push_back(std::abs(1.0 - graph_eigenvalues[i] / reference_eigenvalues[i]));
    return errors;
}

void write_spectra_csv(std::ostream& out, const Vector& graph_eigenvalues,
                       const Vector& reference_eigenvalues) {
    const Index count = std::min(graph_eigenvalues.size(), reference_eigenvalues.size());
    out << "index,graph,continuum\n" << std::setprecision(17);
    for (Index i = 0; i < count; ++i)
        out << i + 1 << ',' << graph_eigenvalues[i] << ',' << reference_eigenvalues[i] << '\n';
}

}  // namespace gbssl
