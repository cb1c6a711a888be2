#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gbssl/types.hpp"

namespace gbssl::kernels::detail {

inline double squared_distance(const RowMatrix& a, Index i, const RowMatrix& b, Index j) {
    double acc = 0.0;
    for (Index c = 0; c < a.cols(); ++c) {
        const double diff = a(i, c) - b(j, c);
        acc += diff * diff;
    }
    return acc;
}

inline void check_radius(double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("neighbor radius must be positive");
}

inline void check_knn(const RowMatrix& points, const RowMatrix& queries, Index k) {
    if (k < 1 || k > points.rows())
        throw std::invalid_argument("k must satisfy 1 <= k <= n (got k=" + std::to_string(k) +
                                    ", n=" + std::to_string(points.rows()) + ")");
    if (queries.cols() != points.cols())
        throw std::invalid_argument("query dimension does not match cloud dimension");
}

inline void check_p_exp(double p_exp) {
    if (!(p_exp > 1.0)) throw std::invalid_argument("p-Laplacian exponent must exceed 1");
}

using DistanceIndex = std::pair<double, Index>;

}  // namespace gbssl::kernels::detail
