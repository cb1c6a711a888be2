#pragma once

#include <iosfwd>

#include <Eigen/SparseCore>

#include "gbssl/cloud.hpp"

namespace gbssl {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Volume of the unit ball in R^m, pi^{m/2} / Gamma(m/2 + 1).
double unit_ball_volume(int m);

/// Common weight of every edge of the eps-graph: (m+2) / (n^2 alpha_m eps^{m+2}).
double edge_weight(Index n, int m, double eps);

/// Connectivity radius multiplier * n^{-1/(2m)}; for m = 2 this is the
/// multiplier * n^{-1/4} rule used on the sphere.
double default_eps(Index n, int m, double multiplier);

/// eps-neighborhood graph with the indicator kernel. Self pairs are not stored.
struct GeometricGraph {
    double eps = 0.0;
    Index n = 0;
    int m = 0;
    double weight = 0.0;  // value of every stored edge
    SparseMatrix weights;  // symmetric, zero diagonal
    Index components = 0;

    bool connected() const noexcept { return components == 1; }
    Index edge_count() const noexcept { return weights.nonZeros() / 2; }
};

GeometricGraph build_eps_graph(const PointCloud& cloud, double eps);

/// Same graph assembled from the serial reference kernels.
GeometricGraph build_eps_graph_serial(const PointCloud& cloud, double eps);

/// Unnormalized Laplacian calibration * (D - W).
struct GraphLaplacian {
    SparseMatrix matrix;
    double calibration = 1.0;
    Index n = 0;
    double eps = 0.0;
    int m = 0;
};

GraphLaplacian laplacian(const GeometricGraph& graph, double calibration = 1.0);

/// Calibration that brings calibration * (D - W) onto the Laplace-Beltrami
/// scale for uniform samples on a manifold of the given volume: 2 n vol(M).
/// For the unit sphere this is 8 pi n.
double volume_calibration(Index n, double manifold_volume);
double sphere_calibration(Index n);

/// Weight matrix as `i j value` lines (0-based), upper triangle only.
void write_coo(const GeometricGraph& graph, std::ostream& out);

}  // namespace gbssl
