#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gbssl/types.hpp"

namespace gbssl {

/// (l(l+1), 2l+1): eigenvalue of -Delta on S^2 and its multiplicity.
std::pair<double, int> sphere_eigenvalue(int l);

/// Real spherical harmonic of degree l and order -l <= order <= l, normalized
/// in L^2 of the uniform probability measure on S^2 (the standard orthonormal
/// harmonics times sqrt(4 pi)). Order > 0 carries cos(order*phi), order < 0
/// sin(|order|*phi). Throws if `point` is off the unit sphere by more than 1e-9.
double sphere_harmonic(int l, int order, const Eigen::Vector3d& point);

struct HarmonicLabel {
    int degree;
    int order;
};

/// All real harmonics with degree <= l_max, ordered by degree then order
/// -l..l; the continuum analogue of SpectralBasis.
class ContinuumBasis {
public:
    explicit ContinuumBasis(int l_max);

    int l_max() const noexcept { return l_max_; }
    Index size() const noexcept { return static_cast<Index>(labels_.size()); }
    const std::vector<HarmonicLabel>& labels() const noexcept { return labels_; }
    const Vector& eigenvalues() const noexcept { return eigenvalues_; }

    /// Index of (degree, order) in the flattened list.
    static Index flat_index(int degree, int order) { return degree * degree + degree + order; }

    /// Row r holds every basis function evaluated at points.row(r).
    Matrix evaluate(const RowMatrix& points) const;
    Vector evaluate(const Eigen::Vector3d& point) const;

    /// sum_j coeffs_j psi_j(x) for each row x.
    Vector synthesize(const Vector& coeffs, const RowMatrix& points) const;

private:
    int l_max_;
    std::vector<HarmonicLabel> labels_;
    Vector eigenvalues_;
};

}  // namespace gbssl
