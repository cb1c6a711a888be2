#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gbssl/oracle.hpp"
#include "gbssl/prior.hpp"

namespace gbssl {

struct SamplerConfig {
    double beta = 0.01;
    long iterations = 100'000;  // J
    long burn_in = 90'000;      // the last 10^4 of 10^5 are kept by default
    long thinning = 1;
    std::uint64_t seed = 0;

    /// Throws unless beta in (0, 1], 0 <= burn_in < iterations, thinning >= 1.
    void validate() const;
    long retained() const { return (iterations - burn_in) / thinning; }
};

/// Negative log-likelihood as a function of the KL coefficients.
using Potential = std::function<double(const Vector&)>;

struct ChainResult {
    Matrix samples;         // retained states, one row per sample
    Vector potential_trace;  // Phi after each iterate, length J
    long accepted = 0;
    long proposed = 0;
    long nonfinite_rejections = 0;
    SamplerConfig config;
    Vector scales;  // KL standard deviations used by the proposal
    std::vector<std::string> warnings;

    Index modes() const noexcept { return samples.cols(); }
    /// 1-based iterate that produced retained row r.
    long iterate_of(Index r) const { return config.burn_in + (r + 1) * config.thinning; }
};

/// pCN in coefficient space: a_i -> sqrt(1 - beta^2) a_i + beta scale_i xi_i,
/// accepted with probability min(1, exp(Phi(a) - Phi(a~))). Proposals with
/// a non-finite potential are rejected and counted. The initial state
/// defaults to zero and must have a finite potential.
ChainResult pcn(const Vector& scales, const Potential& potential, const SamplerConfig& config,
                const std::optional<Vector>& initial = {});

/// Graph pCN with the KL scales of `spec` on `basis`.
ChainResult pcn(const SpectralBasis& basis, const PriorSpec& spec, const Potential& potential,
                const SamplerConfig& config, const std::optional<Vector>& initial = {});

/// pCN on the harmonic truncation of the continuum prior.
ChainResult pcn(const ContinuumBasis& cont, const PriorSpec& spec, const Potential& potential,
                const SamplerConfig& config, const std::optional<Vector>& initial = {});

/// Random-walk Metropolis with prior-preconditioned steps a~ = a + step * scale * xi;
/// the acceptance ratio includes the prior density ratio. Modes with zero
/// scale stay fixed.
ChainResult rwm(const Vector& scales, const Potential& potential, const SamplerConfig& config,
                double step, const std::optional<Vector>& initial = {});

ChainResult rwm(const SpectralBasis& basis, const PriorSpec& spec, const Potential& potential,
                const SamplerConfig& config, double step, const std::optional<Vector>& initial = {});

double acceptance_rate(const ChainResult& chain);

/// Mean of the retained coefficients mapped to nodal values.
CloudFunction posterior_mean(const ChainResult& chain, const SpectralBasis& basis);

/// S^N(f) = (1/N) sum_j f(a^(j)) over the retained samples.
double empirical_average(const ChainResult& chain, const std::function<double(const Vector&)>& f);

/// Integrated autocorrelation time of a scalar trace by the initial monotone
/// sequence estimator. Returns NaN for a constant trace.
double iact(const Vector& trace);
double iact(const ChainResult& chain, const std::function<double(const Vector&)>& f);

/// Nodal mean and pointwise variance from the retained samples.
PosteriorSummary chain_summary(const ChainResult& chain, const SpectralBasis& basis,
                               const PointCloud& cloud, const ModelEcho& model);

/// `iterate,potential,a1,...` for the retained samples; `columns` selects
/// coefficients (all when empty).
void write_chain_csv(std::ostream& out, const ChainResult& chain,
                     const std::vector<Index>& columns = {});

/// JSON with acceptance, proposals, IACT of `trace_iact` (if given), and
/// coefficient means.
void write_chain_json(std::ostream& out, const ChainResult& chain,
                      std::optional<double> trace_iact = {});

}  // namespace gbssl
