#include "gbssl/prior.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

#include "gbssl/kernels.hpp"

namespace gbssl {

PriorSpec::PriorSpec(double alpha_, double s_, Index truncation_, int intrinsic_dim,
                     bool exclude_constant_)
    : alpha(alpha_), s(s_), truncation(truncation_), exclude_constant(exclude_constant_) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("prior: alpha must be a finite nonnegative number");
    if (!(s > intrinsic_dim))
        throw std::invalid_argument("prior: need s > m for draws in L^2 (s=" + std::to_string(s) +
                                    ", m=" + std::to_string(intrinsic_dim) + ")");
    if (truncation != kUntruncated && truncation < 1)
        throw std::invalid_argument("prior: truncation must be >= 1 or untruncated");
}

namespace {

// Shared by the validated prior and the regularity study, which also
// samples at s <= m where the truncated prior is still a finite Gaussian.
Vector kl_scales(const Vector& eigenvalues, double alpha, double s, Index k, bool exclude_constant) {
    if (k > eigenvalues.size())
        throw std::invalid_argument("prior truncation " + std::to_string(k) + " exceeds the " +
                                    std::to_string(eigenvalues.size()) + " available eigenpairs");
    Vector scales(k);
    for (Index i = 0; i < k; ++i) {
        const double base = alpha + std::max(eigenvalues[i], 0.0);
        if (exclude_constant && i == 0) {
            scales[i] = 0.0;
        } else if (base <= 0.0) {
            throw std::invalid_argument(
                "prior: alpha = 0 with a zero eigenvalue is singular; exclude the constant mode");
        } else {
            scales[i] = std::pow(base, -s / 4.0);
        }
    }
    return scales;
}

}  // namespace

Vector prior_scales(const Vector& eigenvalues, const PriorSpec& spec) {
    return kl_scales(eigenvalues, spec.alpha, spec.s, spec.modes(eigenvalues.size()),
                     spec.exclude_constant);
}

CloudFunction CloudFunction::from_coefficients(const SpectralBasis& basis, Vector coeffs) {
    if (coeffs.size() > basis.count())
        throw std::invalid_argument("more coefficients than basis vectors");
    CloudFunction u;
    u.values = basis.eigenvectors.leftCols(coeffs.size()) * coeffs;
    u.coefficients = std::move(coeffs);
    return u;
}

Index default_truncation(Index n, double eps, int m) {
    if (n < 2) throw std::invalid_argument("default_truncation: n must be at least 2");
    if (!(eps > 0.0)) throw std::invalid_argument("default_truncation: eps must be positive");
    const double rule = std::floor(std::pow(eps, -m) / std::log(static_cast<double>(n)));
    if (rule >= static_cast<double>(n)) return n;
    return std::min<Index>(n, std::max<Index>(2, static_cast<Index>(rule)));
}

CloudFunction sample_graph_prior(const SpectralBasis& basis, const PriorSpec& spec,
                                 std::uint64_t seed) {
    const Vector scales = prior_scales(basis.eigenvalues, spec);
    Rng rng(seed);
    return CloudFunction::from_coefficients(basis, scales.cwiseProduct(standard_normal(rng, scales.size())));
}

Vector sample_continuum_prior(const ContinuumBasis& cont, const PriorSpec& spec, std::uint64_t seed) {
    const Vector scales = kl_scales(cont.eigenvalues(), spec.alpha, spec.s, cont.size(),
                                    spec.exclude_constant);
    Rng rng(seed);
    return scales.cwiseProduct(standard_normal(rng, scales.size()));
}

double continuum_prior_tail(const PriorSpec& spec, int l_max) {
    if (l_max < 0) throw std::invalid_argument("continuum_prior_tail: l_max must be nonnegative");
    // Terms decay like 2 l^{1-s}; sum until the integral bound on the rest is negligible.
    double tail = 0.0;
    for (long l = l_max + 1;; ++l) {
        const double ll = static_cast<double>(l);
        const double term = (2.0 * ll + 1.0) * std::pow(spec.alpha + ll * (ll + 1.0), -spec.s / 2.0);
        tail += term;
        // sum_{j > l} (2j+1) j^{-s} <= int_l^inf 3 x^{1-s} dx = 3 l^{2-s}/(s-2) for s > 2
        const double rest = spec.s > 2.0 ? 3.0 * std::pow(ll, 2.0 - spec.s) / (spec.s - 2.0)
                                         : std::numeric_limits<double>::infinity();
        if (rest <= 1e-12 * tail || l > 10'000'000) break;
    }
    return tail;
}

double hs_seminorm(const CloudFunction& u, const SpectralBasis& basis, double s) {
    if (!u.coefficients) throw std::invalid_argument("hs_seminorm: function has no coefficients");
    const Vector& a = *u.coefficients;
    if (a.size() > basis.count()) throw std::invalid_argument("hs_seminorm: basis too small");
    double total = 0.0;
    for (Index i = 0; i < a.size(); ++i) {
        const double lambda = std::max(basis.eigenvalues[i], 0.0);
        if (lambda == 0.0) continue;
        total += std::pow(lambda, s) * a[i] * a[i];
    }
    return total;
}

Oscillation oscillation(const CloudFunction& u, const PointCloud& cloud, double eps) {
    if (u.values.size() != cloud.size()) throw std::invalid_argument("oscillation: size mismatch");
    const auto adjacency = kernels::radius_neighbors(cloud.points(), eps);
    Oscillation osc;
    osc.per_point = kernels::oscillation(adjacency, u.values);
    osc.max = osc.per_point.size() ? osc.per_point.maxCoeff() : 0.0;
    return osc;
}

double p_laplacian_energy(const CloudFunction& u, const PointCloud& cloud, double eps, double p_exp) {
    if (u.values.size() != cloud.size()) throw std::invalid_argument("p_laplacian_energy: size mismatch");
    if (!(p_exp > 1.0)) throw std::invalid_argument("p_laplacian_energy: exponent must exceed 1");
    const auto adjacency = kernels::radius_neighbors(cloud.points(), eps);
    const double n = static_cast<double>(cloud.size());
    return kernels::power_difference_sum(adjacency, u.values, p_exp) / (n * n * std::pow(eps, p_exp));
}

std::vector<RegularityRow> regularity_experiment(const SpectralBasis& basis, const PointCloud& cloud,
                                                 double eps, const std::vector<double>& s_grid,
                                                 int draws, const PriorSpec& base,
                                                 std::uint64_t seed) {
    if (draws < 1) throw std::invalid_argument("regularity_experiment: draws must be >= 1");
    if (basis.n() != cloud.size()) throw std::invalid_argument("regularity_experiment: basis/cloud mismatch");
    const Index k = base.modes(basis.n());
    if (k > basis.count() || basis.eigenvalues.head(k).maxCoeff() <= 0.0)
        throw std::invalid_argument("regularity_experiment: need a retained nonzero eigenvalue");
    const auto adjacency = kernels::radius_neighbors(cloud.points(), eps);
    std::vector<RegularityRow> rows;
    for (double s : s_grid) {
        const Vector scales = kl_scales(basis.eigenvalues, base.alpha, s, k, base.exclude_constant);
        double worst = 0.0;
        for (int d = 0; d < draws; ++d) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(d)));
            CloudFunction u;
            double norm = 0.0;
            do {
                u = CloudFunction::from_coefficients(basis, scales.cwiseProduct(standard_normal(rng, k)));
                norm = hs_seminorm(u, basis, s);
            } while (norm < 1e-14);
            const double factor = 1.0 / std::sqrt(norm);
            u.values *= factor;
            *u.coefficients *= factor;
            worst = std::max(worst, kernels::oscillation(adjacency, u.values).maxCoeff());
        }
        rows.push_back({s, worst, std::log(worst)});
    }
    return rows;
}

void write_regularity_csv(std::ostream& out, const std::vector<RegularityRow>& rows) {
    out << "s,max_osc,log_max_osc\n" << std::setprecision(17);
    for (const auto& r : rows) out << r.s << ',' << r.max_osc << ',' << r.log_max_osc << '\n';
}

}  // namespace gbssl
