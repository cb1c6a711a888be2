#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "gbssl/forward.hpp"
#include "gbssl/likelihood.hpp"
#include "gbssl/prior.hpp"

namespace gbssl {

enum class KernelKind {
    u,  // sum (alpha + lambda)^{-s/2} psi psi
    v,  // with exp(-2 lambda t): covariance of exp(-tL) u
    w,  // with exp(-lambda t): cross-covariance of u and exp(-tL) u
};

/// Truncated series covariance kernels on the graph, evaluated at nodes.
class GraphKernels {
public:
    GraphKernels(const SpectralBasis& basis, const PriorSpec& spec, double t);

    double operator()(KernelKind kind, Index a, Index b) const;
    /// Kernel matrix between node lists.
    Matrix matrix(KernelKind kind, const std::vector<Index>& rows, const std::vector<Index>& cols) const;
    /// Series weights (prior variance times the heat factor) per retained mode.
    Vector weights(KernelKind kind) const;

private:
    const SpectralBasis* basis_;
    Vector prior_variance_;
    Vector heat_;
};

/// The same kernels from the spherical-harmonic expansion up to l_max.
class ContinuumKernels {
public:
    ContinuumKernels(const ContinuumBasis& cont, const PriorSpec& spec, double t);

    double operator()(KernelKind kind, const Eigen::Vector3d& x, const Eigen::Vector3d& x_tilde) const;
    Matrix matrix(KernelKind kind, const RowMatrix& a, const RowMatrix& b) const;
    Vector weights(KernelKind kind) const;

private:
    const ContinuumBasis* cont_;
    Vector prior_variance_;
    Vector heat_;
};

enum class SummarySource { oracle, chain };

struct ModelEcho {
    double alpha = 0.0;
    double s = 0.0;
    double t = 0.0;
    double sigma = 0.0;
    Index p = 0;
};

/// Mean and pointwise variance of a Gaussian-type posterior at a list of
/// locations. When the posterior lives on a finite basis the coefficient
/// mean and covariance are kept as well.
struct PosteriorSummary {
    RowMatrix locations;
    Vector mean;
    Vector variance;
    SummarySource source = SummarySource::oracle;
    ModelEcho model;
    std::optional<Vector> coefficient_mean;
    std::optional<Matrix> coefficient_covariance;
};

/// Gaussian-noise posterior on the graph at every node. Uses the p x k
/// forward matrix of the data's design, so ball averages are covered too.
/// Throws for probit data and when the p x p system cannot be factorized.
/// `sigma` overrides the data's noise level and may be 0 (noiseless limit,
/// stabilized by a 1e-12 relative jitter below 1e-8).
PosteriorSummary graph_posterior(const LabeledData& data, const SpectralBasis& basis,
                                 const PointCloud& cloud, const PriorSpec& spec,
                                 std::optional<double> sigma = {});

/// Gaussian-noise posterior of the harmonic truncation at arbitrary sphere
/// points. Ball averages use the Monte Carlo cap estimate of each harmonic.
PosteriorSummary continuum_posterior(const LabeledData& data, const ContinuumBasis& cont,
                                     const PointCloud& cloud, const PriorSpec& spec,
                                     const RowMatrix& queries, int samples = 10'000,
                                     std::uint64_t seed = 0, std::optional<double> sigma = {});

/// Prior pointwise variance c_u(x, x) at the summary's locations.
Vector prior_variance(const SpectralBasis& basis, const PriorSpec& spec);

struct ErrorReport {
    double relative_mean_error = 0.0;  // |a - b| / |b| in the weighted L^2 norm
    double max_abs_mean = 0.0;
    double max_abs_variance = 0.0;
    double relative_variance_error = 0.0;
};

/// Compare two summaries over the same locations; `b` is the reference. The
/// default weights are uniform, giving the L^2(gamma_n) norm on a cloud.
ErrorReport compare(const PosteriorSummary& a, const PosteriorSummary& b,
                    const std::optional<Vector>& weights = {});

/// `index,x,y,z,...,mean,variance` rows.
void write_summary_csv(std::ostream& out, const PosteriorSummary& summary);

std::string to_string(SummarySource source);

}  // namespace gbssl
