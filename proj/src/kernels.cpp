#include "gbssl/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "kernels_detail.hpp"

namespace gbssl::kernels {

namespace {

// Uniform cell grid with cell side >= eps; every eps-neighbor of a point lies
// in the 3^d block of cells around it.
class CellGrid {
public:
    CellGrid(const RowMatrix& points, double eps) : dim_(points.cols()) {
        const Index n = points.rows();
        lo_.fill(0.0);
        counts_.fill(1);
        // Slightly inflated so pairs at distance exactly eps never straddle two cells.
        double side = eps * (1.0 + 1e-9);
        std::array<double, 3> extent{0.0, 0.0, 0.0};
        for (Index c = 0; c < dim_; ++c) {
            lo_[c] = points.col(c).minCoeff();
            extent[c] = points.col(c).maxCoeff() - lo_[c];
        }
        // Cap the cell count near 4n so tiny radii do not allocate huge grids.
        auto total_cells = [&](double s) {
            double total = 1.0;
            for (Index c = 0; c < dim_; ++c) total *= std::floor(extent[c] / s) + 1.0;
            return total;
        };
        const double cap = 4.0 * static_cast<double>(std::max<Index>(n, 1)) + 8.0;
        while (total_cells(side) > cap) side *= 1.5;
        side_ = side;
        for (Index c = 0; c < dim_; ++c)
            counts_[c] = static_cast<Index>(std::floor(extent[c] / side_)) + 1;

        Index cells = 1;
        for (Index c = 0; c < dim_; ++c) cells *= counts_[c];
        start_.assign(static_cast<std::size_t>(cells) + 1, 0);
        cell_of_.resize(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) {
            cell_of_[i] = linear(coords(points, i));
            ++start_[cell_of_[i] + 1];
        }
        for (std::size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
        members_.resize(static_cast<std::size_t>(n));
        std::vector<Index> fill(start_.begin(), start_.end() - 1);
        for (Index i = 0; i < n; ++i) members_[fill[cell_of_[i]]++] = i;
    }

    std::array<Index, 3> coords(const RowMatrix& points, Index i) const {
        std::array<Index, 3> cc{0, 0, 0};
        for (Index c = 0; c < dim_; ++c) {
            const auto k = static_cast<Index>(std::floor((points(i, c) - lo_[c]) / side_));
            cc[c] = std::clamp<Index>(k, 0, counts_[c] - 1);
        }
        return cc;
    }

    Index linear(const std::array<Index, 3>& cc) const {
        return cc[0] + counts_[0] * (cc[1] + counts_[1] * cc[2]);
    }

    template <class Visit>
    void for_each_candidate(const std::array<Index, 3>& cc, Visit&& visit) const {
        std::array<Index, 3> lo{0, 0, 0}, hi{0, 0, 0};
        for (Index c = 0; c < dim_; ++c) {
            lo[c] = std::max<Index>(cc[c] - 1, 0);
            hi[c] = std::min<Index>(cc[c] + 1, counts_[c] - 1);
        }
        for (Index z = lo[2]; z <= hi[2]; ++z)
            for (Index y = lo[1]; y <= hi[1]; ++y)
                for (Index x = lo[0]; x <= hi[0]; ++x) {
                    const Index cell = linear({x, y, z});
                    for (Index m = start_[cell]; m < start_[cell + 1]; ++m) visit(members_[m]);
                }
    }

private:
    Index dim_;
    double side_ = 1.0;
    std::array<double, 3> lo_{};
    std::array<Index, 3> counts_{};
    std::vector<Index> start_;
    std::vector<Index> cell_of_;
    std::vector<Index> members_;
};

}  // namespace

Adjacency radius_neighbors(const RowMatrix& points, double eps) {
    detail::check_radius(eps);
    const Index n = points.rows();
    const double eps2 = eps * eps;
    Adjacency adjacency(static_cast<std::size_t>(n));
    if (n == 0) return adjacency;

    if (points.cols() <= 3) {
        const CellGrid grid(points, eps);
#pragma omp parallel for schedule(dynamic, 64)
        for (Index i = 0; i < n; ++i) {
            auto& row = adjacency[i];
            grid.for_each_candidate(grid.coords(points, i), [&](Index j) {
                if (detail::squared_distance(points, i, points, j) <= eps2) row.push_back(j);
            });
            std::sort(row.begin(), row.end());
        }
        return adjacency;
    }

#pragma omp parallel for schedule(dynamic, 64)
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j)
            if (detail::squared_distance(points, i, points, j) <= eps2) adjacency[i].push_back(j);
    }
    return adjacency;
}

std::vector<std::vector<Index>> knn_batch(const RowMatrix& points, const RowMatrix& queries,
                                          Index k) {
    detail::check_knn(points, queries, k);
    const Index n = points.rows();
    const Index nq = queries.rows();
    std::vector<std::vector<Index>> result(static_cast<std::size_t>(nq));
#pragma omp parallel
    {
        std::vector<detail::DistanceIndex> all(static_cast<std::size_t>(n));
#pragma omp for schedule(static)
        for (Index q = 0; q < nq; ++q) {
            for (Index j = 0; j < n; ++j)
                all[j] = {detail::squared_distance(queries, q, points, j), j};
            std::partial_sort(all.begin(), all.begin() + k, all.end());
            auto& row = result[q];
            row.reserve(static_cast<std::size_t>(k));
            for (Index r = 0; r < k; ++r) row.push_back(all[r].second);
        }
    }
    return result;
}

Vector oscillation(const Adjacency& adjacency, const Vector& values) {
    const auto n = static_cast<Index>(adjacency.size());
    Vector osc = Vector::Zero(n);
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (Index j : adjacency[i]) {
            lo = std::min(lo, values[j]);
            hi = std::max(hi, values[j]);
        }
        osc[i] = adjacency[i].empty() ? 0.0 : hi - lo;
    }
    return osc;
}

double power_difference_sum(const Adjacency& adjacency, const Vector& values, double p_exp) {
    detail::check_p_exp(p_exp);
    const auto n = static_cast<Index>(adjacency.size());
    // Row partials summed serially afterwards: the result does not depend on
    // the thread count.
    Vector rows = Vector::Zero(n);
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) {
        double row = 0.0;
        for (Index j : adjacency[i]) row += std::pow(std::abs(values[i] - values[j]), p_exp);
        rows[i] = row;
    }
    double total = 0.0;
    for (Index i = 0; i < n; ++i) total += rows[i];
    return total;
}

Vector neighbor_mean(const std::vector<std::vector<Index>>& lists, const Vector& values) {
    const auto nq = static_cast<Index>(lists.size());
    Vector out(nq);
#pragma omp parallel for schedule(static)
    for (Index q = 0; q < nq; ++q) {
        double acc = 0.0;
        for (Index j : lists[q]) acc += values[j];
        out[q] = acc / static_cast<double>(lists[q].size());
    }
    return out;
}

}  // namespace gbssl::kernels
