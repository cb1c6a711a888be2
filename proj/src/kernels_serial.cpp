#include <algorithm>
#include <cmath>

#include "gbssl/kernels.hpp"
#include "kernels_detail.hpp"

namespace gbssl::kernels::serial {

Adjacency radius_neighbors(const RowMatrix& points, double eps) {
    detail::check_radius(eps);
    const Index n = points.rows();
    const double eps2 = eps * eps;
    Adjacency adjacency(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (detail::squared_distance(points, i, points, j) <= eps2) adjacency[i].push_back(j);
        }
    }
    return adjacency;
}

std::vector<std::vector<Index>> knn_batch(const RowMatrix& points, const RowMatrix& queries,
                                          Index k) {
    detail::check_knn(points, queries, k);
    const Index n = points.rows();
    std::vector<std::vector<Index>> result(static_cast<std::size_t>(queries.rows()));
    std::vector<detail::DistanceIndex> all(static_cast<std::size_t>(n));
    for (Index q = 0; q < queries.rows(); ++q) {
        for (Index j = 0; j < n; ++j) all[j] = {detail::squared_distance(queries, q, points, j), j};
        std::sort(all.begin(), all.end());
        for (Index r = 0; r < k; ++r) result[q].push_back(all[r].second);
    }
    return result;
}

Vector oscillation(const Adjacency& adjacency, const Vector& values) {
    Vector osc = Vector::Zero(values.size());
    for (std::size_t i = 0; i < adjacency.size(); ++i) {
        double best = 0.0;
        // pairwise scan keeps this independent of the max-min shortcut
        for (Index a : adjacency[i])
            for (Index b : adjacency[i]) best = std::max(best, std::abs(values[a] - values[b]));
        osc[static_cast<Index>(i)] = best;
    }
    return osc;
}

double power_difference_sum(const Adjacency& adjacency, const Vector& values, double p_exp) {
    detail::check_p_exp(p_exp);
    double total = 0.0;
    for (std::size_t i = 0; i < adjacency.size(); ++i) {
        double row = 0.0;
        for (Index j : adjacency[i]) row += std::pow(std::abs(values[static_cast<Index>(i)] - values[j]), p_exp);
        total += row;
    }
    return total;
}

Vector neighbor_mean(const std::vector<std::vector<Index>>& lists, const Vector& values) {
    Vector out(static_cast<Index>(lists.size()));
    for (std::size_t q = 0; q < lists.size(); ++q) {
        double acc = 0.0;
        for (Index j : lists[q]) acc += values[j];
        out[static_cast<Index>(q)] = acc / static_cast<double>(lists[q].size());
    }
    return out;
}

}  // namespace gbssl::kernels::serial
