#include "gbssl/sampler.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace gbssl {

void SamplerConfig::validate() const {
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("sampler: beta must lie in (0, 1]");
    if (iterations < 1) throw std::invalid_argument("sampler: iterations must be >= 1");
    if (burn_in < 0 || burn_in >= iterations)
        throw std::invalid_argument("sampler: burn_in must satisfy 0 <= burn_in < iterations");
    if (thinning < 1) throw std::invalid_argument("sampler: thinning must be >= 1");
}

namespace {

// Shared Metropolis loop; `propose` fills the candidate and returns the log
// prior ratio to add to the acceptance exponent.
template <class Propose>
ChainResult metropolis(const Vector& scales, const Potential& potential, const SamplerConfig& config,
                       const std::optional<Vector>& initial, Propose propose) {
    config.validate();
    const Index k = scales.size();
    if (k < 1) throw std::invalid_argument("sampler: no modes");
    if ((scales.array() < 0.0).any() || !scales.allFinite())
        throw std::invalid_argument("sampler: scales must be finite and nonnegative");
    Vector state = initial ? *initial : Vector::Zero(k);
    if (state.size() != k) throw std::invalid_argument("sampler: initial state has the wrong size");
    double phi = potential(state);
    if (!std::isfinite(phi)) throw std::invalid_argument("sampler: potential is not finite at the initial state");

    ChainResult chain;
    chain.config = config;
    chain.scales = scales;
    chain.samples.resize(config.retained(), k);
    chain.potential_trace.resize(config.iterations);

    Rng rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vector candidate(k);
    Index row = 0;
    for (long j = 0; j < config.iterations; ++j) {
        const double log_prior_ratio = propose(state, candidate, rng);
        const double phi_new = potential(candidate);
        ++chain.proposed;
        if (!std::isfinite(phi_new)) {
            ++chain.nonfinite_rejections;
        } else {
            const double log_ratio = phi - phi_new + log_prior_ratio;
            if (std::log(unit(rng)) < log_ratio) {
                state.swap(candidate);
                phi = phi_new;
                ++chain.accepted;
            }
        }
        chain.potential_trace[j] = phi;
        const long after = j + 1 - config.burn_in;
        if (after > 0 && after % config.thinning == 0 && row < chain.samples.rows())
            chain.samples.row(row++) = state.transpose();
    }
    if (chain.nonfinite_rejections > 0)
        chain.warnings.push_back(std::to_string(chain.nonfinite_rejections) +
                                 " proposals had a non-finite potential and were rejected");
    return chain;
}

Vector spec_scales(const Vector& eigenvalues, const PriorSpec& spec, Index available) {
    PriorSpec copy = spec;
    if (copy.truncation == PriorSpec::kUntruncated) copy.truncation = available;
    return prior_scales(eigenvalues, copy);
}

}  // namespace

ChainResult pcn(const Vector& scales, const Potential& potential, const SamplerConfig& config,
                const std::optional<Vector>& initial) {
    const double keep = std::sqrt(1.0 - config.beta * config.beta);
    const double beta = config.beta;
    return metropolis(scales, potential, config, initial, [&](const Vector& a, Vector& out, Rng& rng) {
        std::normal_distribution<double> normal(0.0, 1.0);
        for (Index i = 0; i < a.size(); ++i) out[i] = keep * a[i] + beta * scales[i] * normal(rng);
        return 0.0;
    });
}

ChainResult pcn(const SpectralBasis& basis, const PriorSpec& spec, const Potential& potential,
                const SamplerConfig& config, const std::optional<Vector>& initial) {
    return pcn(spec_scales(basis.eigenvalues, spec, basis.count()), potential, config, initial);
}

ChainResult pcn(const ContinuumBasis& cont, const PriorSpec& spec, const Potential& potential,
                const SamplerConfig& config, const std::optional<Vector>& initial) {
    PriorSpec full = spec;
    full.truncation = cont.size();
    return pcn(prior_scales(cont.eigenvalues(), full), potential, config, initial);
}

ChainResult rwm(const Vector& scales, const Potential& potential, const SamplerConfig& config, double step,
                const std::optional<Vector>& initial) {
    if (!(step >= 0.0) || !std::isfinite(step)) throw std::invalid_argument("rwm: step must be finite and >= 0");
    auto log_prior = [&](const Vector& a) {
        double total = 0.0;
        for (Index i = 0; i < a.size(); ++i)
            if (scales[i] > 0.0) total -= 0.5 * (a[i] / scales[i]) * (a[i] / scales[i]);
        return total;
    };
    return metropolis(scales, potential, config, initial, [&](const Vector& a, Vector& out, Rng& rng) {
        std::normal_distribution<double> normal(0.0, 1.0);
        for (Index i = 0; i < a.size(); ++i) out[i] = a[i] + step * scales[i] * normal(rng);
        return log_prior(out) - log_prior(a);
    });
}

ChainResult rwm(const SpectralBasis& basis, const PriorSpec& spec, const Potential& potential,
                const SamplerConfig& config, double step, const std::optional<Vector>& initial) {
    return rwm(spec_scales(basis.eigenvalues, spec, basis.count()), potential, config, step, initial);
}

double acceptance_rate(const ChainResult& chain) {
    if (chain.proposed == 0) throw std::invalid_argument("acceptance_rate: empty chain");
    return static_cast<double>(chain.accepted) / static_cast<double>(chain.proposed);
}

CloudFunction posterior_mean(const ChainResult& chain, const SpectralBasis& basis) {
    if (chain.samples.rows() == 0) throw std::invalid_argument("posterior_mean: no retained samples");
    return CloudFunction::from_coefficients(basis, chain.samples.colwise().mean().transpose());
}

double empirical_average(const ChainResult& chain, const std::function<double(const Vector&)>& f) {
    if (chain.samples.rows() == 0) throw std::invalid_argument("empirical_average: no retained samples");
    double total = 0.0;
    for (Index r = 0; r < chain.samples.rows(); ++r) total += f(chain.samples.row(r).transpose());
    return total / static_cast<double>(chain.samples.rows());
}

double iact(const Vector& trace) {
    const Index n = trace.size();
    if (n < 2) throw std::invalid_argument("iact: need at least two samples");
    const Vector x = trace.array() - trace.mean();
    auto autocov = [&](Index lag) {
        return x.head(n - lag).dot(x.tail(n - lag)) / static_cast<double>(n);
    };
    const double c0 = autocov(0);
    if (c0 <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    // Geyer: pair sums Gamma_m = c(2m) + c(2m+1), kept while positive and
    // forced non-increasing.
    double sum = 0.0;
    double previous = std::numeric_limits<double>::infinity();
    for (Index m = 0; 2 * m + 1 < n; ++m) {
        double pair = autocov(2 * m) + autocov(2 * m + 1);
        if (pair <= 0.0) break;
        pair = std::min(pair, previous);
        sum += pair;
        previous = pair;
    }
    return std::max((2.0 * sum - c0) / c0, 1.0 / static_cast<double>(n));
}

double iact(const ChainResult& chain, const std::function<double(const Vector&)>& f) {
    Vector trace(chain.samples.rows());
    for (Index r = 0; r < chain.samples.rows(); ++r) trace[r] = f(chain.samples.row(r).transpose());
    return iact(trace);
}

PosteriorSummary chain_summary(const ChainResult& chain, const SpectralBasis& basis, const PointCloud& cloud,
                               const ModelEcho& model) {
    const Index samples = chain.samples.rows();
    if (samples == 0) throw std::invalid_argument("chain_summary: no retained samples");
    const Index k = chain.modes();
    if (k > basis.count() || basis.n() != cloud.size())
        throw std::invalid_argument("chain_summary: basis does not match the chain");
    const Vector mean = chain.samples.colwise().mean().transpose();
    const Matrix centered = chain.samples.rowwise() - mean.transpose();
    Matrix cov = centered.transpose() * centered / static_cast<double>(std::max<Index>(samples - 1, 1));
    const auto features = basis.eigenvectors.leftCols(k);

    PosteriorSummary summary;
    summary.locations = cloud.points();
    summary.mean = features * mean;
    summary.variance = (features * cov).cwiseProduct(features).rowwise().sum().cwiseMax(0.0);
    summary.source = SummarySource::chain;
    summary.model = model;
    summary.coefficient_mean = mean;
    summary.coefficient_covariance = std::move(cov);
    return summary;
}

void write_chain_csv(std::ostream& out, const ChainResult& chain, const std::vector<Index>& columns) {
    std::vector<Index> cols = columns;
    if (cols.empty())
        for (Index c = 0; c < chain.modes(); ++c) cols.push_back(c);
    for (Index c : cols)
        if (c < 0 || c >= chain.modes()) throw std::out_of_range("write_chain_csv: coefficient index out of range");
    out << "iterate,potential";
    for (Index c : cols) out << ",a" << c + 1;
    out << '\n' << std::setprecision(17);
    for (Index r = 0; r < chain.samples.rows(); ++r) {
        const long it = chain.iterate_of(r);
        out << it << ',' << chain.potential_trace[it - 1];
        for (Index c : cols) out << ',' << chain.samples(r, c);
        out << '\n';
    }
}

void write_chain_json(std::ostream& out, const ChainResult& chain, std::optional<double> trace_iact) {
    nlohmann::json j;
    j["acceptance"] = chain.proposed ? acceptance_rate(chain) : 0.0;
    j["accepted"] = chain.accepted;
    j["proposed"] = chain.proposed;
    j["nonfinite_rejections"] = chain.nonfinite_rejections;
    j["beta"] = chain.config.beta;
    j["iterations"] = chain.config.iterations;
    j["burn_in"] = chain.config.burn_in;
    j["thinning"] = chain.config.thinning;
    j["seed"] = chain.config.seed;
    j["retained"] = chain.samples.rows();
    if (trace_iact) j["iact"] = std::isfinite(*trace_iact) ? nlohmann::json(*trace_iact) : nlohmann::json(nullptr);
    std::vector<double> means;
    if (chain.samples.rows() > 0)
        for (Index c = 0; c < chain.modes(); ++c) means.push_back(chain.samples.col(c).mean());
    j["coefficient_means"] = means;
    out << j.dump(2) << '\n';
}

}  // namespace gbssl
