#include "gbssl/interpolate.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include <Eigen/QR>

#include "gbssl/kernels.hpp"

namespace gbssl {

namespace {

void check_queries(const PointCloud& cloud, Index k, const RowMatrix& queries) {
    if (k < 1 || k > cloud.size())
        throw std::invalid_argument("interpolate: need 1 <= k <= n (k=" + std::to_string(k) +
                                    ", n=" + std::to_string(cloud.size()) + ")");
    if (queries.cols() != cloud.ambient_dim())
        throw std::invalid_argument("interpolate: query dimension does not match the cloud");
}

}  // namespace

SparseMatrix knn_operator(const PointCloud& cloud, Index k, const RowMatrix& queries) {
    check_queries(cloud, k, queries);
    const auto lists = kernels::knn_batch(cloud.points(), queries, k);
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(queries.rows() * k));
    const double w = 1.0 / static_cast<double>(k);
    for (Index q = 0; q < queries.rows(); ++q)
        for (Index j : lists[q]) entries.emplace_back(q, j, w);
    SparseMatrix op(queries.rows(), cloud.size());
    op.setFromTriplets(entries.begin(), entries.end());
    return op;
}

Vector knn_interpolate(const Vector& values, const PointCloud& cloud, Index k, const RowMatrix& queries) {
    if (values.size() != cloud.size()) throw std::invalid_argument("knn_interpolate: size mismatch");
    check_queries(cloud, k, queries);
    return kernels::neighbor_mean(kernels::knn_batch(cloud.points(), queries, k), values);
}

PosteriorSummary pushforward_summary(const PosteriorSummary& summary, const SpectralBasis& basis,
                                     const PointCloud& cloud, Index k, const RowMatrix& queries) {
    if (summary.mean.size() != cloud.size())
        throw std::invalid_argument("pushforward_summary: summary is not on the cloud");
    const SparseMatrix op = knn_operator(cloud, k, queries);
    PosteriorSummary out;
    out.locations = queries;
    out.mean = op * summary.mean;
    out.source = summary.source;
    out.model = summary.model;
    if (summary.coefficient_covariance) {
        const Matrix& cov = *summary.coefficient_covariance;
        const Matrix features = op * basis.eigenvectors.leftCols(cov.rows());
        out.variance = (features * cov).cwiseProduct(features).rowwise().sum().cwiseMax(0.0);
    } else {
        out.variance = op * summary.variance;
    }
    return out;
}

PosteriorSummary pushforward_samples(const ChainResult& chain, const SpectralBasis& basis,
                                     const PointCloud& cloud, Index k, const RowMatrix& queries,
                                     const ModelEcho& model) {
    const Index samples = chain.samples.rows();
    if (samples == 0) throw std::invalid_argument("pushforward_samples: no retained samples");
    const SparseMatrix op = knn_operator(cloud, k, queries);
    // Query values of every sample, one column per sample.
    const Matrix fields = op * (basis.eigenvectors.leftCols(chain.modes()) * chain.samples.transpose());
    PosteriorSummary out;
    out.locations = queries;
    out.mean = fields.rowwise().mean();
    const Matrix centered = fields.colwise() - out.mean;
    out.variance = centered.rowwise().squaredNorm() / static_cast<double>(std::max<Index>(samples - 1, 1));
    out.source = SummarySource::chain;
    out.model = model;
    return out;
}

RowMatrix sphere_grid(Index count, std::uint64_t seed) { return sample_sphere(count, seed).points(); }

double l2_distance(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("l2_distance: grid size mismatch");
    if (a.size() == 0) return 0.0;
    return std::sqrt((a - b).squaredNorm() / static_cast<double>(a.size()));
}

double eigenspace_residual(const Vector& values, const RowMatrix& grid, int degree) {
    if (values.size() != grid.rows()) throw std::invalid_argument("eigenspace_residual: size mismatch");
    if (degree < 0) throw std::invalid_argument("eigenspace_residual: degree must be >= 0");
    const ContinuumBasis cont(degree);
    const Index first = ContinuumBasis::flat_index(degree, -degree);
    const Matrix design = cont.evaluate(grid).rightCols(cont.size() - first);
    const Vector fit = design * design.colPivHouseholderQr().solve(values);
    const double norm = values.norm();
    return norm > 0.0 ? (values - fit).norm() / norm : 0.0;
}

void write_field_csv(std::ostream& out, const RowMatrix& points, const Vector& values) {
    if (points.rows() != values.size()) throw std::invalid_argument("write_field_csv: size mismatch");
    out << (points.cols() == 3 ? "x,y,z,value\n" : "point,value\n") << std::setprecision(17);
    for (Index i = 0; i < values.size(); ++i) {
        if (points.cols() == 3)
            out << points(i, 0) << ',' << points(i, 1) << ',' << points(i, 2);
        else
            out << i;
        out << ',' << values[i] << '\n';
    }
}

}  // namespace gbssl
