#include "gbssl/experiments.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>

#include <omp.h>

namespace gbssl::experiments {

SphereGraph sphere_graph(Index n, std::uint64_t seed, double eps_multiplier, Index eigenpairs, bool calibrated,
                         EigenMethod method) {
    PointCloud cloud = sample_sphere(n, seed);
    const double eps = default_eps(n, 2, eps_multiplier);
    GeometricGraph graph = build_eps_graph(cloud, eps);
    GraphLaplacian lap = laplacian(graph, calibrated ? sphere_calibration(n) : 1.0);
    SpectralBasis basis = eigendecompose(lap, std::min(eigenpairs, n), method);
    return {std::move(cloud), eps, std::move(graph), std::move(lap), std::move(basis)};
}

Vector sphere_spectrum(Index count) {
    Vector out(count);
    Index i = 0;
    for (int l = 0; i < count; ++l)
        for (int m = 0; m < 2 * l + 1 && i < count; ++m) out[i++] = sphere_eigenvalue(l).first;
    return out;
}

Vector truth_coefficients(const ContinuumBasis& cont) {
    if (cont.l_max() < 2) throw std::invalid_argument("truth_coefficients: need l_max >= 2");
    Vector c = Vector::Zero(cont.size());
    c[ContinuumBasis::flat_index(0, 0)] = 0.5;
    c[ContinuumBasis::flat_index(1, 0)] = 0.8;
    c[ContinuumBasis::flat_index(2, 1)] = 0.4;
    return c;
}

LabeledData truth_data(const PointCloud& cloud, const ObservationDesign& design, const ModelSettings& model,
                       std::uint64_t seed) {
    const ContinuumBasis cont(2);
    return synthesize_data_continuum(truth_coefficients(cont), cont, cloud, model.t, design,
                                     NoiseModel(model.noise, model.sigma), stream_seed(seed, Stream::noise),
                                     model.mc_samples);
}

LinearPotential graph_potential(const SphereGraph& g, const LabeledData& data, Index modes) {
    const GraphForwardMap forward(g.basis, modes, data.t, data.design, g.cloud);
    return LinearPotential(forward.matrix(), data.y, data.model);
}

namespace {

ObservationDesign design_for(Index n, Index p, const ModelSettings& model) {
    return ObservationDesign::first(p == 0 ? n : p, model.mode, model.delta);
}

SamplerConfig sampler_config(const ChainSettings& chain, std::uint64_t seed) {
    SamplerConfig config;
    config.beta = chain.beta;
    config.iterations = chain.iterations;
    config.burn_in = chain.burn_in;
    config.thinning = chain.thinning;
    config.seed = stream_seed(seed, Stream::chain);
    return config;
}

}  // namespace

SweepPoint sweep_point(Index n, Index p, const ModelSettings& model, const ChainSettings& chain,
                       std::uint64_t seed) {
    const PriorSpec spec = model.prior();
    const SphereGraph g = sphere_graph(n, seed, model.eps_multiplier, model.modes);
    const ObservationDesign design = design_for(n, p, model);
    const LabeledData data = truth_data(g.cloud, design, model, seed);
    const LinearPotential phi = graph_potential(g, data, model.modes);
    const ChainResult result = pcn(g.basis, spec, phi, sampler_config(chain, seed));
    const Vector at_first = g.basis.eigenvectors.row(0).head(model.modes).transpose();
    SweepPoint point;
    point.n = n;
    point.p = design.size();
    point.seed = seed;
    point.acceptance = acceptance_rate(result);
    point.iact = iact(result, [&](const Vector& a) { return at_first.dot(a); });
    return point;
}

std::vector<SweepPoint> acceptance_sweep(const std::vector<Index>& ns, Index p, const ModelSettings& model,
                                         const ChainSettings& chain, std::uint64_t seed, int replicates,
                                         int jobs) {
    if (replicates < 1) throw std::invalid_argument("acceptance_sweep: replicates must be >= 1");
    const long total = static_cast<long>(ns.size()) * replicates;
    std::vector<SweepPoint> points(static_cast<std::size_t>(total));
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(std::max(jobs, 1))
    for (long job = 0; job < total; ++job) {
        try {
            const Index n = ns[static_cast<std::size_t>(job / replicates)];
            const auto r = static_cast<std::uint64_t>(job % replicates);
            points[static_cast<std::size_t>(job)] = sweep_point(n, p, model, chain, derive_seed(seed, r));
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return points;
}

PosteriorRun posterior_run(Index n, Index p, const ModelSettings& model, const ChainSettings& chain,
                           std::uint64_t seed) {
    if (model.noise != NoiseKind::gaussian) throw std::invalid_argument("posterior_run: gaussian noise only");
    const PriorSpec spec = model.prior();
    SphereGraph g = sphere_graph(n, seed, model.eps_multiplier, model.modes);
    LabeledData data = truth_data(g.cloud, design_for(n, p, model), model, seed);
    const LinearPotential phi = graph_potential(g, data, model.modes);
    ChainResult result = pcn(g.basis, spec, phi, sampler_config(chain, seed));
    PosteriorSummary oracle = graph_posterior(data, g.basis, g.cloud, spec);
    PosteriorSummary summary = chain_summary(result, g.basis, g.cloud, oracle.model);
    const ErrorReport error = compare(summary, oracle);
    return {std::move(g), std::move(data), std::move(oracle), std::move(summary), std::move(result), error};
}

ConsistencyPoint consistency_point(Index n, Index p, const ModelSettings& model, const RowMatrix& grid,
                                   std::uint64_t seed) {
    if (p > n) throw std::invalid_argument("consistency_point: p exceeds n");
    const PriorSpec spec = model.prior();
    const SphereGraph g = sphere_graph(n, seed, model.eps_multiplier, model.modes);
    const LabeledData data = truth_data(g.cloud, design_for(n, p, model), model, seed);
    const PosteriorSummary graph_post = graph_posterior(data, g.basis, g.cloud, spec);
    const Vector pushed = knn_interpolate(graph_post.mean, g.cloud, 1, grid);
    const ContinuumBasis cont(model.l_max);
    const PosteriorSummary cont_post = continuum_posterior(data, cont, g.cloud, spec, grid, model.mc_samples,
                                                           stream_seed(seed, Stream::monte_carlo));
    return {n, seed, l2_distance(pushed, cont_post.mean)};
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty list");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace gbssl::experiments
