#include "gbssl/forward.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Geometry>

namespace gbssl {

ObservationDesign ObservationDesign::first(Index p, ObservationMode mode, double delta) {
    if (p < 1) throw std::invalid_argument("observation design needs p >= 1");
    ObservationDesign d;
    d.labeled.resize(static_cast<std::size_t>(p));
    for (Index j = 0; j < p; ++j) d.labeled[j] = j;
    d.mode = mode;
    d.delta = delta;
    return d;
}

void ObservationDesign::validate(Index n) const {
    if (labeled.empty()) throw std::invalid_argument("observation design needs p >= 1");
    std::vector<Index> sorted = labeled;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() < 0 || sorted.back() >= n)
        throw std::invalid_argument("labeled index out of range for a cloud of " + std::to_string(n));
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("labeled indices must be distinct");
    if (mode == ObservationMode::ball_average && !(delta > 0.0))
        throw std::invalid_argument("ball-average observation needs delta > 0");
}

std::vector<std::vector<Index>> observation_supports(const ObservationDesign& design,
                                                     const PointCloud& cloud) {
    design.validate(cloud.size());
    std::vector<std::vector<Index>> supports;
    supports.reserve(design.labeled.size());
    for (Index j : design.labeled) {
        if (design.mode == ObservationMode::pointwise)
            supports.push_back({j});
        else
            supports.push_back(neighbors_within(cloud, j, design.delta));
    }
    return supports;
}

Projection project(const Vector& values, const SpectralBasis& basis, Index k) {
    if (values.size() != basis.n()) throw std::invalid_argument("project: size mismatch");
    if (k < 1 || k > basis.count()) throw std::invalid_argument("project: k out of range");
    const double n = static_cast<double>(basis.n());
    Vector coeffs = basis.eigenvectors.leftCols(k).transpose() * values / n;
    Projection p;
    p.function = CloudFunction::from_coefficients(basis, std::move(coeffs));
    p.residual = std::sqrt((values - p.function.values).squaredNorm() / n);
    return p;
}

namespace {

void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("heat map needs finite t >= 0");
}

}  // namespace

CloudFunction heat_graph(const CloudFunction& u, const SpectralBasis& basis, double t, double* residual) {
    check_time(t);
    Vector coeffs;
    if (u.coefficients) {
        coeffs = *u.coefficients;
        if (residual) *residual = 0.0;
    } else {
        Projection p = project(u.values, basis, basis.count());
        coeffs = *p.function.coefficients;
        if (residual) *residual = p.residual;
    }
    for (Index i = 0; i < coeffs.size(); ++i) coeffs[i] *= std::exp(-basis.eigenvalues[i] * t);
    return CloudFunction::from_coefficients(basis, std::move(coeffs));
}

Vector heat_continuum(const Vector& coeffs, const ContinuumBasis& cont, double t) {
    check_time(t);
    if (coeffs.size() != cont.size()) throw std::invalid_argument("heat_continuum: size mismatch");
    return coeffs.cwiseProduct((-t * cont.eigenvalues()).array().exp().matrix());
}

Vector observe(const Vector& values, const ObservationDesign& design, const PointCloud& cloud) {
    if (values.size() != cloud.size()) throw std::invalid_argument("observe: size mismatch");
    const auto supports = observation_supports(design, cloud);
    Vector out(design.size());
    for (Index j = 0; j < design.size(); ++j) {
        double acc = 0.0;
        for (Index k : supports[j]) acc += values[k];
        out[j] = acc / static_cast<double>(supports[j].size());
    }
    return out;
}

RowMatrix sample_cap(const Eigen::Vector3d& center, double delta, Index count, Rng& rng) {
    if (!(delta > 0.0)) throw std::invalid_argument("sample_cap: delta must be positive");
    const Eigen::Vector3d c = center.normalized();
    // Orthonormal frame around c.
    Eigen::Vector3d helper = std::abs(c.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    const Eigen::Vector3d e1 = (helper - helper.dot(c) * c).normalized();
    const Eigen::Vector3d e2 = c.cross(e1);
    // |x - c| <= delta  <=>  x.c >= 1 - delta^2/2; uniform area <=> uniform height.
    const double lowest = std::max(-1.0, 1.0 - 0.5 * delta * delta);
    std::uniform_real_distribution<double> height(lowest, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    RowMatrix pts(count, 3);
    for (Index r = 0; r < count; ++r) {
        const double z = height(rng);
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = angle(rng);
        Eigen::Vector3d x = z * c + rho * (std::cos(phi) * e1 + std::sin(phi) * e2);
        pts.row(r) = x.normalized().transpose();
    }
    return pts;
}

namespace {

// Row j: O applied to every basis function, plus Monte Carlo standard errors.
std::pair<Matrix, Matrix> observed_harmonics(const ContinuumBasis& cont, const ObservationDesign& design,
                                             const PointCloud& cloud, int samples, std::uint64_t seed) {
    design.validate(cloud.size());
    if (cloud.ambient_dim() != 3) throw std::invalid_argument("continuum observation needs a cloud in R^3");
    const Index p = design.size();
    Matrix values(p, cont.size());
    Matrix errors = Matrix::Zero(p, cont.size());
    if (design.mode == ObservationMode::pointwise) {
        RowMatrix pts(p, 3);
        for (Index j = 0; j < p; ++j) pts.row(j) = cloud.point(design.labeled[j]);
        values = cont.evaluate(pts);
        return {values, errors};
    }
    if (samples < 2) throw std::invalid_argument("ball-average Monte Carlo needs at least 2 samples");
    for (Index j = 0; j < p; ++j) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(j)));
        const RowMatrix pts = sample_cap(cloud.point(design.labeled[j]).transpose(), design.delta, samples, rng);
        const Matrix evals = cont.evaluate(pts);
        const Eigen::RowVectorXd mean = evals.colwise().mean();
        values.row(j) = mean;
        const Eigen::RowVectorXd var =
            (evals.rowwise() - mean).array().square().colwise().sum() / static_cast<double>(samples - 1);
        errors.row(j) = (var.array() / static_cast<double>(samples)).sqrt();
    }
    return {values, errors};
}

}  // namespace

ContinuumObservation observe_continuum(const Vector& coeffs, const ContinuumBasis& cont,
                                       const ObservationDesign& design, const PointCloud& cloud,
                                       int samples, std::uint64_t seed) {
    if (coeffs.size() != cont.size()) throw std::invalid_argument("observe_continuum: size mismatch");
    ContinuumObservation obs;
    if (design.mode == ObservationMode::pointwise) {
        auto [values, errors] = observed_harmonics(cont, design, cloud, samples, seed);
        obs.values = values * coeffs;
        obs.std_error = Vector::Zero(design.size());
        return obs;
    }
    // Standard error of the sample mean of sum_i c_i psi_i at each cap.
    design.validate(cloud.size());
    const Index p = design.size();
    obs.values.resize(p);
    obs.std_error.resize(p);
    for (Index j = 0; j < p; ++j) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(j)));
        const RowMatrix pts = sample_cap(cloud.point(design.labeled[j]).transpose(), design.delta, samples, rng);
        const Vector f = cont.evaluate(pts) * coeffs;
        const double mean = f.mean();
        obs.values[j] = mean;
        const double var = (f.array() - mean).square().sum() / static_cast<double>(samples - 1);
        obs.std_error[j] = std::sqrt(var / samples);
    }
    return obs;
}

GraphForwardMap::GraphForwardMap(const SpectralBasis& basis, Index k, double t,
                                 const ObservationDesign& design, const PointCloud& cloud)
    : t_(t) {
    check_time(t);
    if (k < 1 || k > basis.count()) throw std::invalid_argument("forward map: k out of range");
    if (basis.n() != cloud.size()) throw std::invalid_argument("forward map: basis/cloud mismatch");
    const auto supports = observation_supports(design, cloud);
    observed_basis_.resize(design.size(), k);
    for (Index j = 0; j < design.size(); ++j) {
        Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(k);
        for (Index m : supports[j]) acc += basis.eigenvectors.row(m).head(k);
        observed_basis_.row(j) = acc / static_cast<double>(supports[j].size());
    }
    const Vector damping = (-t * basis.eigenvalues.head(k)).array().exp().matrix();
    matrix_ = observed_basis_ * damping.asDiagonal();
}

ContinuumForwardMap::ContinuumForwardMap(const ContinuumBasis& cont, double t,
                                         const ObservationDesign& design, const PointCloud& cloud,
                                         int samples, std::uint64_t seed) {
    check_time(t);
    observed_basis_ = observed_harmonics(cont, design, cloud, samples, seed).first;
    const Vector damping = (-t * cont.eigenvalues()).array().exp().matrix();
    matrix_ = observed_basis_ * damping.asDiagonal();
}

Vector forward_observe(const CloudFunction& u, const SpectralBasis& basis, double t,
                       const ObservationDesign& design, const PointCloud& cloud) {
    return observe(heat_graph(u, basis, t).values, design, cloud);
}

ContinuumObservation forward_observe_continuum(const Vector& coeffs, const ContinuumBasis& cont,
                                               double t, const ObservationDesign& design,
                                               const PointCloud& cloud, int samples,
                                               std::uint64_t seed) {
    return observe_continuum(heat_continuum(coeffs, cont, t), cont, design, cloud, samples, seed);
}

}  // namespace gbssl
