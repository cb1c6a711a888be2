#include "gbssl/oracle.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace gbssl {

namespace {

Vector series_weights(KernelKind kind, const Vector& prior_variance, const Vector& heat) {
    switch (kind) {
        case KernelKind::u: return prior_variance;
        case KernelKind::v: return prior_variance.cwiseProduct(heat).cwiseProduct(heat);
        case KernelKind::w: return prior_variance.cwiseProduct(heat);
    }
    return prior_variance;
}

void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("kernel: t must be finite and >= 0");
}

}  // namespace

GraphKernels::GraphKernels(const SpectralBasis& basis, const PriorSpec& spec, double t) : basis_(&basis) {
    check_time(t);
    const Vector scales = prior_scales(basis.eigenvalues, spec);
    prior_variance_ = scales.cwiseProduct(scales);
    heat_ = (-t * basis.eigenvalues.head(scales.size())).array().exp().matrix();
}

Vector GraphKernels::weights(KernelKind kind) const { return series_weights(kind, prior_variance_, heat_); }

double GraphKernels::operator()(KernelKind kind, Index a, Index b) const {
    const Vector w = weights(kind);
    const Index k = w.size();
    const auto ra = basis_->eigenvectors.row(a).head(k);
    const auto rb = basis_->eigenvectors.row(b).head(k);
    return (ra.array() * w.transpose().array() * rb.array()).sum();
}

Matrix GraphKernels::matrix(KernelKind kind, const std::vector<Index>& rows, const std::vector<Index>& cols) const {
    const Vector w = weights(kind);
    const Index k = w.size();
    Matrix a(static_cast<Index>(rows.size()), k);
    Matrix b(static_cast<Index>(cols.size()), k);
    for (std::size_t i = 0; i < rows.size(); ++i) a.row(i) = basis_->eigenvectors.row(rows[i]).head(k);
    for (std::size_t i = 0; i < cols.size(); ++i) b.row(i) = basis_->eigenvectors.row(cols[i]).head(k);
    return a * w.asDiagonal() * b.transpose();
}

ContinuumKernels::ContinuumKernels(const ContinuumBasis& cont, const PriorSpec& spec, double t) : cont_(&cont) {
    check_time(t);
    PriorSpec full = spec;
    full.truncation = cont.size();
    const Vector scales = prior_scales(cont.eigenvalues(), full);
    prior_variance_ = scales.cwiseProduct(scales);
    heat_ = (-t * cont.eigenvalues()).array().exp().matrix();
}

Vector ContinuumKernels::weights(KernelKind kind) const { return series_weights(kind, prior_variance_, heat_); }

double ContinuumKernels::operator()(KernelKind kind, const Eigen::Vector3d& x, const Eigen::Vector3d& x_tilde) const {
    return (cont_->evaluate(x).array() * weights(kind).array() * cont_->evaluate(x_tilde).array()).sum();
}

Matrix ContinuumKernels::matrix(KernelKind kind, const RowMatrix& a, const RowMatrix& b) const {
    return cont_->evaluate(a) * weights(kind).asDiagonal() * cont_->evaluate(b).transpose();
}

namespace {

// Coefficient posterior for y = M a + eta, a ~ N(0, diag(gamma)), eta ~ N(0, sigma^2 I):
// mean = Gamma M' S^{-1} y, covariance = Gamma - Gamma M' S^{-1} M Gamma with
// S = M Gamma M' + sigma^2 I, i.e. c_v(X, X) + sigma^2 I.
std::pair<Vector, Matrix> coefficient_posterior(const Matrix& forward, const Vector& gamma, const Vector& y,
                                                double sigma) {
    const Matrix a = gamma.asDiagonal() * forward.transpose();  // k x p, rows of c_w
    Matrix system = forward * a;
    system = 0.5 * (system + system.transpose());
    double nugget = sigma * sigma;
    if (sigma < 1e-8) nugget += 1e-12 * std::max(system.trace() / static_cast<double>(system.rows()), 1.0);
    system.diagonal().array() += nugget;
    Eigen::LLT<Matrix> chol(system);
    if (chol.info() != Eigen::Success)
        throw std::runtime_error("posterior: c_v(X, X) + sigma^2 I is not positive definite");
    const Vector mean = a * chol.solve(y);
    const Matrix half = chol.matrixL().solve(a.transpose());  // p x k
    Matrix cov = Matrix(gamma.asDiagonal()) - half.transpose() * half;
    cov = 0.5 * (cov + cov.transpose());
    return {mean, cov};
}

Vector pointwise_variance(const Matrix& features, const Matrix& cov) {
    Vector var = (features * cov).cwiseProduct(features).rowwise().sum();
    return var.cwiseMax(0.0);
}

void require_gaussian(const LabeledData& data) {
    data.validate();
    if (data.model.kind != NoiseKind::gaussian)
        throw std::invalid_argument("closed-form posterior requires gaussian noise");
}

double noise_level(const LabeledData& data, std::optional<double> sigma) {
    const double level = sigma ? *sigma : data.model.sigma;
    if (!(level >= 0.0) || !std::isfinite(level)) throw std::invalid_argument("posterior: sigma must be >= 0");
    return level;
}

}  // namespace

PosteriorSummary graph_posterior(const LabeledData& data, const SpectralBasis& basis, const PointCloud& cloud,
                                 const PriorSpec& spec, std::optional<double> sigma) {
    require_gaussian(data);
    const double level = noise_level(data, sigma);
    const Vector scales = prior_scales(basis.eigenvalues, spec);
    const Index k = scales.size();
    const GraphForwardMap forward(basis, k, data.t, data.design, cloud);
    auto [mean, cov] = coefficient_posterior(forward.matrix(), scales.cwiseProduct(scales), data.y, level);

    PosteriorSummary summary;
    summary.locations = cloud.points();
    const auto features = basis.eigenvectors.leftCols(k);
    summary.mean = features * mean;
    summary.variance = pointwise_variance(features, cov);
    summary.source = SummarySource::oracle;
    summary.model = {spec.alpha, spec.s, data.t, level, data.design.size()};
    summary.coefficient_mean = std::move(mean);
    summary.coefficient_covariance = std::move(cov);
    return summary;
}

PosteriorSummary continuum_posterior(const LabeledData& data, const ContinuumBasis& cont, const PointCloud& cloud,
                                     const PriorSpec& spec, const RowMatrix& queries, int samples,
                                     std::uint64_t seed, std::optional<double> sigma) {
    require_gaussian(data);
    const double level = noise_level(data, sigma);
    if (queries.cols() != 3) throw std::invalid_argument("continuum_posterior: queries must be points in R^3");
    PriorSpec full = spec;
    full.truncation = cont.size();
    const Vector scales = prior_scales(cont.eigenvalues(), full);
    const ContinuumForwardMap forward(cont, data.t, data.design, cloud, samples, seed);
    auto [mean, cov] = coefficient_posterior(forward.matrix(), scales.cwiseProduct(scales), data.y, level);

    PosteriorSummary summary;
    summary.locations = queries;
    const Matrix features = cont.evaluate(queries);
    summary.mean = features * mean;
    summary.variance = pointwise_variance(features, cov);
    summary.source = SummarySource::oracle;
    summary.model = {spec.alpha, spec.s, data.t, level, data.design.size()};
    summary.coefficient_mean = std::move(mean);
    summary.coefficient_covariance = std::move(cov);
    return summary;
}

Vector prior_variance(const SpectralBasis& basis, const PriorSpec& spec) {
    const Vector scales = prior_scales(basis.eigenvalues, spec);
    const auto features = basis.eigenvectors.leftCols(scales.size());
    return features.array().square().matrix() * scales.cwiseProduct(scales);
}

ErrorReport compare(const PosteriorSummary& a, const PosteriorSummary& b, const std::optional<Vector>& weights) {
    if (a.mean.size() != b.mean.size() || a.locations.rows() != b.locations.rows() ||
        a.locations.cols() != b.locations.cols())
        throw std::invalid_argument("compare: summaries have different locations");
    if ((a.locations - b.locations).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("compare: summaries have different locations");
    const Index n = a.mean.size();
    Vector w = weights ? *weights : Vector::Constant(n, 1.0 / static_cast<double>(n));
    if (w.size() != n) throw std::invalid_argument("compare: weight count mismatch");

    auto weighted_norm = [&](const Vector& v) { return std::sqrt((w.array() * v.array().square()).sum()); };
    ErrorReport report;
    const Vector dm = a.mean - b.mean;
    const double ref = weighted_norm(b.mean);
    report.relative_mean_error = ref > 0.0 ? weighted_norm(dm) / ref : weighted_norm(dm);
    report.max_abs_mean = n ? dm.cwiseAbs().maxCoeff() : 0.0;
    if (a.variance.size() == n && b.variance.size() == n) {
        const Vector dv = a.variance - b.variance;
        report.max_abs_variance = n ? dv.cwiseAbs().maxCoeff() : 0.0;
        const double vref = weighted_norm(b.variance);
        report.relative_variance_error = vref > 0.0 ? weighted_norm(dv) / vref : weighted_norm(dv);
    }
    return report;
}

std::string to_string(SummarySource source) { return source == SummarySource::oracle ? "oracle" : "chain"; }

void write_summary_csv(std::ostream& out, const PosteriorSummary& summary) {
    const char* axes[] = {"x", "y", "z"};
    out << "index";
    for (Index c = 0; c < summary.locations.cols(); ++c)
        out << ',' << (c < 3 ? std::string(axes[c]) : "x" + std::to_string(c + 1));
    out << ",mean,variance\n" << std::setprecision(17);
    for (Index i = 0; i < summary.mean.size(); ++i) {
        out << i;
        for (Index c = 0; c < summary.locations.cols(); ++c) out << ',' << summary.locations(i, c);
        out << ',' << summary.mean[i] << ',' << (summary.variance.size() ? summary.variance[i] : 0.0) << '\n';
    }
}

}  // namespace gbssl
