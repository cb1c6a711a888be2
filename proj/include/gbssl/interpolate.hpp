#pragma once

#include <cstdint>
#include <iosfwd>

#include "gbssl/oracle.hpp"
#include "gbssl/sampler.hpp"

namespace gbssl {

/// I_n^k: the mean of u over the k nearest cloud points of each query row
/// (ties by lower index).
Vector knn_interpolate(const Vector& values, const PointCloud& cloud, Index k, const RowMatrix& queries);

/// Interpolation weights as a sparse queries x n operator, each row holding
/// 1/k at the k neighbours.
SparseMatrix knn_operator(const PointCloud& cloud, Index k, const RowMatrix& queries);

/// Push a summary through I_n^k. The mean is interpolated exactly. When the
/// summary carries its coefficient covariance the variance of the
/// interpolant is exact as well; otherwise the interpolated pointwise
/// variance is used, which bounds it from above (and is exact for k = 1).
PosteriorSummary pushforward_summary(const PosteriorSummary& summary, const SpectralBasis& basis,
                                     const PointCloud& cloud, Index k, const RowMatrix& queries);

/// Monte Carlo push-forward: interpolate every retained sample, then take
/// the sample mean and variance at each query.
PosteriorSummary pushforward_samples(const ChainResult& chain, const SpectralBasis& basis,
                                     const PointCloud& cloud, Index k, const RowMatrix& queries,
                                     const ModelEcho& model);

/// Uniform points on S^2; the common grid for L^2 comparisons.
RowMatrix sphere_grid(Index count = 10'000, std::uint64_t seed = 0);

/// Root-mean-square difference of two fields on the same grid.
double l2_distance(const Vector& a, const Vector& b);

/// Relative RMS of what is left of `values` after the least-squares fit by
/// the degree-l harmonics on `grid`; zero when the field lies in that
/// eigenspace.
double eigenspace_residual(const Vector& values, const RowMatrix& grid, int degree);

/// `x,y,z,value` rows.
void write_field_csv(std::ostream& out, const RowMatrix& points, const Vector& values);

}  // namespace gbssl
