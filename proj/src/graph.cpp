#include "gbssl/graph.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "gbssl/kernels.hpp"

namespace gbssl {

double unit_ball_volume(int m) {
    if (m < 1) throw std::invalid_argument("dimension must be positive");
    return std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

double edge_weight(Index n, int m, double eps) {
    const double nn = static_cast<double>(n);
    return (m + 2.0) / (nn * nn * unit_ball_volume(m) * std::pow(eps, m + 2));
}

double default_eps(Index n, int m, double multiplier) {
    if (n < 2) throw std::invalid_argument("default_eps: n must be at least 2");
    if (m < 1) throw std::invalid_argument("default_eps: m must be positive");
    if (!(multiplier > 0.0)) throw std::invalid_argument("default_eps: multiplier must be positive");
    return multiplier * std::pow(static_cast<double>(n), -1.0 / (2.0 * m));
}

namespace {

Index count_components(const kernels::Adjacency& adjacency) {
    const auto n = static_cast<Index>(adjacency.size());
    std::vector<Index> label(static_cast<std::size_t>(n), -1);
    std::vector<Index> stack;
    Index components = 0;
    for (Index root = 0; root < n; ++root) {
        if (label[root] >= 0) continue;
        label[root] = components;
        stack.push_back(root);
        while (!stack.empty()) {
            const Index v = stack.back();
            stack.pop_back();
            for (Index w : adjacency[v])
                if (label[w] < 0) {
                    label[w] = components;
                    stack.push_back(w);
                }
        }
        ++components;
    }
    return components;
}

GeometricGraph assemble(const PointCloud& cloud, double eps, const kernels::Adjacency& adjacency) {
    GeometricGraph g;
    g.eps = eps;
    g.n = cloud.size();
    g.m = cloud.intrinsic_dim();
    g.weight = edge_weight(g.n, g.m, eps);
    std::vector<Eigen::Triplet<double>> triplets;
    std::size_t total = 0;
    for (const auto& row : adjacency) total += row.size();
    triplets.reserve(total);
    for (Index i = 0; i < g.n; ++i)
        for (Index j : adjacency[i])
            if (j != i) triplets.emplace_back(i, j, g.weight);
    g.weights.resize(g.n, g.n);
    g.weights.setFromTriplets(triplets.begin(), triplets.end());
    g.weights.makeCompressed();
    g.components = count_components(adjacency);
    return g;
}

void check_eps(double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("build_eps_graph: eps must be positive");
}

}  // namespace

GeometricGraph build_eps_graph(const PointCloud& cloud, double eps) {
    check_eps(eps);
    return assemble(cloud, eps, kernels::radius_neighbors(cloud.points(), eps));
}

GeometricGraph build_eps_graph_serial(const PointCloud& cloud, double eps) {
    check_eps(eps);
    return assemble(cloud, eps, kernels::serial::radius_neighbors(cloud.points(), eps));
}

GraphLaplacian laplacian(const GeometricGraph& graph, double calibration) {
    if (!(calibration > 0.0)) throw std::invalid_argument("laplacian: calibration must be positive");
    GraphLaplacian lap;
    lap.n = graph.n;
    lap.eps = graph.eps;
    lap.m = graph.m;
    lap.calibration = calibration;
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(graph.weights.nonZeros() + graph.n));
    for (Index col = 0; col < graph.weights.outerSize(); ++col) {
        double degree = 0.0;
        for (SparseMatrix::InnerIterator it(graph.weights, col); it; ++it) {
            degree += it.value();
            triplets.emplace_back(it.row(), col, -calibration * it.value());
        }
        triplets.emplace_back(col, col, calibration * degree);
    }
    lap.matrix.resize(graph.n, graph.n);
    lap.matrix.setFromTriplets(triplets.begin(), triplets.end());
    lap.matrix.makeCompressed();
    return lap;
}

double volume_calibration(Index n, double manifold_volume) {
    if (!(manifold_volume > 0.0)) throw std::invalid_argument("manifold volume must be positive");
    return 2.0 * static_cast<double>(n) * manifold_volume;
}

double sphere_calibration(Index n) { return volume_calibration(n, 4.0 * std::numbers::pi); }

void write_coo(const GeometricGraph& graph, std::ostream& out) {
    out << std::setprecision(17);
    for (Index col = 0; col < graph.weights.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(graph.weights, col); it; ++it)
            if (it.row() < col) out << it.row() << ' ' << col << ' ' << it.value() << '\n';
}

}  // namespace gbssl
