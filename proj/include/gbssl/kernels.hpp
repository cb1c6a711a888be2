#pragma once

// Data-parallel hot loops over point clouds.
//
// Every kernel in gbssl::kernels has a counterpart in gbssl::kernels::serial
// with the same signature and bit-identical output. The serial versions are
// plain brute-force loops kept as the reference for tests and benchmarks.

#include <vector>

#include "gbssl/types.hpp"

namespace gbssl::kernels {

/// Neighbor lists: entry i holds sorted indices j with |x_i - x_j| <= eps,
/// i itself included.
using Adjacency = std::vector<std::vector<Index>>;

/// Closed-ball neighbor lists for every point. Uses a uniform cell grid for
/// ambient dimension <= 3 and brute force otherwise.
Adjacency radius_neighbors(const RowMatrix& points, double eps);

/// k nearest cloud points for each query row (ambient Euclidean distance,
/// ties broken by lower index). Row q of the result lists indices by
/// increasing distance.
std::vector<std::vector<Index>> knn_batch(const RowMatrix& points, const RowMatrix& queries,
                                          Index k);

/// max - min of values over each neighbor list.
Vector oscillation(const Adjacency& adjacency, const Vector& values);

/// sum_i sum_{j in N(i)} |u_i - u_j|^p_exp, ordered pairs.
double power_difference_sum(const Adjacency& adjacency, const Vector& values, double p_exp);

/// Mean of each row of `knn` lists applied to values.
Vector neighbor_mean(const std::vector<std::vector<Index>>& lists, const Vector& values);

namespace serial {

Adjacency radius_neighbors(const RowMatrix& points, double eps);
std::vector<std::vector<Index>> knn_batch(const RowMatrix& points, const RowMatrix& queries,
                                          Index k);
Vector oscillation(const Adjacency& adjacency, const Vector& values);
double power_difference_sum(const Adjacency& adjacency, const Vector& values, double p_exp);
Vector neighbor_mean(const std::vector<std::vector<Index>>& lists, const Vector& values);

}  // namespace serial

}  // namespace gbssl::kernels
