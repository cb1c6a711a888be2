#pragma once

#include <cstdint>
#include <vector>

#include "gbssl/cloud.hpp"
#include "gbssl/prior.hpp"
#include "gbssl/spectral.hpp"
#include "gbssl/sphere.hpp"

namespace gbssl {

enum class ObservationMode { pointwise, ball_average };

/// Which cloud points are labeled and how they are observed.
struct ObservationDesign {
    std::vector<Index> labeled;
    ObservationMode mode = ObservationMode::pointwise;
    double delta = 0.0;  // ball radius, ball_average only

    /// The first p cloud points.
    static ObservationDesign first(Index p, ObservationMode mode = ObservationMode::pointwise,
                                   double delta = 0.0);

    Index size() const noexcept { return static_cast<Index>(labeled.size()); }

    /// Throws unless indices are distinct and in [0, n), p >= 1, and delta > 0
    /// for ball averages.
    void validate(Index n) const;
};

/// Member lists of the observation: for pointwise mode {x_j}, for ball
/// averages every cloud point within delta of x_j.
std::vector<std::vector<Index>> observation_supports(const ObservationDesign& design,
                                                     const PointCloud& cloud);

/// Coefficients of nodal values in the first k eigenvectors, and the
/// L^2(gamma_n) norm of what lies outside their span.
struct Projection {
    CloudFunction function;
    double residual = 0.0;
};
Projection project(const Vector& values, const SpectralBasis& basis, Index k);

/// exp(-t L) on the retained span: a_i -> exp(-lambda_i t) a_i. Inputs without
/// coefficients are projected onto the full basis first; the discarded
/// residual norm is written to *residual when given.
CloudFunction heat_graph(const CloudFunction& u, const SpectralBasis& basis, double t,
                         double* residual = nullptr);

/// Degree-l coefficients scaled by exp(-l(l+1) t).
Vector heat_continuum(const Vector& coeffs, const ContinuumBasis& cont, double t);

/// O_n applied to nodal values.
Vector observe(const Vector& values, const ObservationDesign& design, const PointCloud& cloud);

struct ContinuumObservation {
    Vector values;
    Vector std_error;  // zero in pointwise mode
};

/// O applied to a harmonic expansion. Ball averages are Monte Carlo estimates
/// from `samples` uniform points in each spherical cap B_delta(x_j) on S^2.
ContinuumObservation observe_continuum(const Vector& coeffs, const ContinuumBasis& cont,
                                       const ObservationDesign& design, const PointCloud& cloud,
                                       int samples = 10'000, std::uint64_t seed = 0);

/// Uniform points on the cap {x in S^2 : |x - center| <= delta}.
RowMatrix sample_cap(const Eigen::Vector3d& center, double delta, Index count, Rng& rng);

/// G_n = O_n exp(-t L) restricted to the first k eigenvectors, stored as the
/// p x k matrix M[j, i] = exp(-lambda_i t) (O_n psi_i)_j.
class GraphForwardMap {
public:
    GraphForwardMap(const SpectralBasis& basis, Index k, double t, const ObservationDesign& design,
                    const PointCloud& cloud);

    const Matrix& matrix() const noexcept { return matrix_; }
    /// O_n psi_i without the heat factor (p x k).
    const Matrix& observed_basis() const noexcept { return observed_basis_; }
    Index modes() const noexcept { return matrix_.cols(); }
    Index observations() const noexcept { return matrix_.rows(); }
    double time() const noexcept { return t_; }

    Vector apply(const Vector& coeffs) const { return matrix_ * coeffs; }

private:
    Matrix observed_basis_;
    Matrix matrix_;
    double t_;
};

/// Same composition for harmonic coefficients. Ball averages use the Monte
/// Carlo cap estimate of each basis function.
class ContinuumForwardMap {
public:
    ContinuumForwardMap(const ContinuumBasis& cont, double t, const ObservationDesign& design,
                        const PointCloud& cloud, int samples = 10'000, std::uint64_t seed = 0);

    const Matrix& matrix() const noexcept { return matrix_; }
    const Matrix& observed_basis() const noexcept { return observed_basis_; }
    Vector apply(const Vector& coeffs) const { return matrix_ * coeffs; }

private:
    Matrix observed_basis_;
    Matrix matrix_;
};

/// G_n(u) by the two-step path: heat_graph then observe.
Vector forward_observe(const CloudFunction& u, const SpectralBasis& basis, double t,
                       const ObservationDesign& design, const PointCloud& cloud);

/// G(u) for a harmonic expansion: heat_continuum then observe_continuum.
ContinuumObservation forward_observe_continuum(const Vector& coeffs, const ContinuumBasis& cont,
                                               double t, const ObservationDesign& design,
                                               const PointCloud& cloud, int samples = 10'000,
                                               std::uint64_t seed = 0);

}  // namespace gbssl
