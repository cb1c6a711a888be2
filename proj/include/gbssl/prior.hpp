#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "gbssl/cloud.hpp"
#include "gbssl/spectral.hpp"
#include "gbssl/sphere.hpp"

namespace gbssl {

/// Gaussian prior N(0, (alpha I + L)^{-s/2}) truncated to the first
/// `truncation` eigenpairs. truncation == kUntruncated means all n pairs.
struct PriorSpec {
    static constexpr Index kUntruncated = -1;

    double alpha = 1.0;
    double s = 5.0;
    Index truncation = kUntruncated;
    /// Drop the constant (zero-eigenvalue) mode; required when alpha == 0.
    bool exclude_constant = false;

    /// Validates alpha >= 0 and s > m.
    PriorSpec(double alpha, double s, Index truncation, int intrinsic_dim,
              bool exclude_constant = false);

    /// Number of retained modes for a basis over n points.
    Index modes(Index n) const { return truncation == kUntruncated ? n : truncation; }
};

/// Karhunen-Loeve standard deviations (alpha + lambda_i)^{-s/4} of the first
/// spec.modes(n) eigenpairs. Rejects alpha == 0 with a zero eigenvalue unless
/// the constant mode is excluded, in which case its scale is 0.
Vector prior_scales(const Vector& eigenvalues, const PriorSpec& spec);

/// Function on a point cloud: nodal values, optionally with the coefficients
/// that produced them in some SpectralBasis.
struct CloudFunction {
    Vector values;
    std::optional<Vector> coefficients;

    static CloudFunction from_coefficients(const SpectralBasis& basis, Vector coeffs);
};

/// k_n = max(2, floor(eps^{-m} / log n)), clamped to n.
Index default_truncation(Index n, double eps, int m);

/// One draw sum_{i <= k_n} (alpha + lambda_i)^{-s/4} xi_i psi_i.
CloudFunction sample_graph_prior(const SpectralBasis& basis, const PriorSpec& spec,
                                 std::uint64_t seed);

/// Harmonic coefficients (alpha + l(l+1))^{-s/4} xi over all (l, order) of the basis.
Vector sample_continuum_prior(const ContinuumBasis& cont, const PriorSpec& spec,
                              std::uint64_t seed);

/// Prior variance left out by truncating at l_max:
/// sum_{l > l_max} (2l+1) (alpha + l(l+1))^{-s/2}. Evaluated to relative 1e-12.
double continuum_prior_tail(const PriorSpec& spec, int l_max);

/// sum_i lambda_i^s <u, psi_i>^2 over the retained coefficients of u.
double hs_seminorm(const CloudFunction& u, const SpectralBasis& basis, double s);

struct Oscillation {
    Vector per_point;
    double max = 0.0;
};

/// osc(x_i) = max - min of u over the closed eps-ball around x_i.
Oscillation oscillation(const CloudFunction& u, const PointCloud& cloud, double eps);

/// (1/(n^2 eps^p)) sum_{i,j} K(|x_i - x_j|/eps) |u_i - u_j|^p, ordered pairs.
double p_laplacian_energy(const CloudFunction& u, const PointCloud& cloud, double eps,
                          double p_exp);

struct RegularityRow {
    double s = 0.0;
    double max_osc = 0.0;
    double log_max_osc = 0.0;
};

/// For each s: `draws` graph-prior samples (alpha, truncation from `base`),
/// each rescaled to unit H^s seminorm, and the largest oscillation over all
/// draws and points. Draw d of every s uses seed derive_seed(seed, d).
std::vector<RegularityRow> regularity_experiment(const SpectralBasis& basis,
                                                 const PointCloud& cloud, double eps,
                                                 const std::vector<double>& s_grid,
                                                 int draws, const PriorSpec& base,
                                                 std::uint64_t seed);

void write_regularity_csv(std::ostream& out, const std::vector<RegularityRow>& rows);

}  // namespace gbssl
