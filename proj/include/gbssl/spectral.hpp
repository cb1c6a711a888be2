#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "gbssl/graph.hpp"

namespace gbssl {

/// Eigensolver failure; `residual` is the worst relative residual reached.
class SpectralError : public std::runtime_error {
public:
    SpectralError(const std::string& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// The k smallest eigenpairs of a graph Laplacian.
///
/// Eigenvectors are columns of an n x k matrix, orthonormal in L^2(gamma_n),
/// i.e. (1/n) sum_x psi_i(x) psi_j(x) = delta_ij, so each has Euclidean norm
/// sqrt(n). Signs are fixed so that the largest-magnitude entry of each
/// vector is positive (lowest index on ties).
struct SpectralBasis {
    Vector eigenvalues;
    Matrix eigenvectors;

    Index count() const noexcept { return eigenvalues.size(); }
    Index n() const noexcept { return eigenvectors.rows(); }

    /// The first k pairs.
    SpectralBasis leading(Index k) const;
};

enum class EigenMethod {
    dense,      // LAPACK dsyevr on the dense matrix, index range 1..k
    iterative,  // shift-inverted block subspace iteration on the sparse matrix
};

SpectralBasis eigendecompose(const GraphLaplacian& lap, Index k,
                             EigenMethod method = EigenMethod::dense);

/// Largest relative residual |L psi - lambda psi| / ((1 + lambda) |psi|).
double max_relative_residual(const GraphLaplacian& lap, const SpectralBasis& basis);

/// In-place sign normalization used by eigendecompose.
void normalize_signs(Matrix& vectors);

/// Relative eigenvalue errors |1 - graph_i / reference_i| for i = 2..count
/// (1-based); the zero eigenvalue is skipped. Returns count - 1 values.
std::vector<double> spectral_error(const Vector& graph_eigenvalues,
                                   const Vector& reference_eigenvalues, Index count);

/// `index,graph,continuum` rows (1-based index) for spectra plots.
void write_spectra_csv(std::ostream& out, const Vector& graph_eigenvalues,
                       const Vector& reference_eigenvalues);

}  // namespace gbssl
