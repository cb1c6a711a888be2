#pragma once

// Drivers for the sphere experiments, shared by the command-line runner and
// the acceptance suite.

#include <cstdint>
#include <vector>

#include "gbssl/interpolate.hpp"
#include "gbssl/likelihood.hpp"
#include "gbssl/oracle.hpp"
#include "gbssl/sampler.hpp"

namespace gbssl::experiments {

/// Stream tags below a replicate's root seed. The cloud itself uses the root.
enum Stream : std::uint64_t { noise = 1, chain = 2, prior = 3, monte_carlo = 4 };

/// Cloud, eps-graph, calibrated Laplacian and leading eigenpairs on S^2.
struct SphereGraph {
    PointCloud cloud;
    double eps;
    GeometricGraph graph;
    GraphLaplacian laplacian;
    SpectralBasis basis;
};

/// `calibrated` scales D - W by 8 pi n so that the spectrum sits on the
/// l(l+1) scale of the sphere.
SphereGraph sphere_graph(Index n, std::uint64_t seed, double eps_multiplier, Index eigenpairs,
                         bool calibrated = true, EigenMethod method = EigenMethod::dense);

/// l(l+1) repeated 2l+1 times, the first `count` values.
Vector sphere_spectrum(Index count);

/// Ground truth u = 0.5 + 0.8 Y_{1,0} + 0.4 Y_{2,1} as coefficients in `cont`
/// (needs l_max >= 2).
Vector truth_coefficients(const ContinuumBasis& cont);

struct ModelSettings {
    double alpha = 1.0;
    double s = 5.0;
    Index modes = 9;  // k_n
    double t = 0.1;
    double sigma = 0.1;
    NoiseKind noise = NoiseKind::gaussian;
    ObservationMode mode = ObservationMode::pointwise;
    double delta = 0.0;
    double eps_multiplier = 2.0;
    int l_max = 12;  // continuum truncation
    int mc_samples = 10'000;  // cap samples for continuum ball averages

    PriorSpec prior() const { return PriorSpec(alpha, s, modes, 2); }
};

struct ChainSettings {
    double beta = 0.01;
    long iterations = 100'000;
    long burn_in = 90'000;
    long thinning = 1;
};

/// y = G(u) + eta with the continuum forward map and the default truth,
/// observed at the design's cloud points.
LabeledData truth_data(const PointCloud& cloud, const ObservationDesign& design,
                       const ModelSettings& model, std::uint64_t seed);

/// pCN target for a graph model: phi^y(M a) with the p x k forward matrix.
LinearPotential graph_potential(const SphereGraph& g, const LabeledData& data, Index modes);

struct SweepPoint {
    Index n = 0;
    Index p = 0;
    std::uint64_t seed = 0;
    double acceptance = 0.0;
    double iact = 0.0;  // of u(x_1) over the retained samples
};

/// One pCN run on a fresh sphere graph. p == 0 labels every point.
SweepPoint sweep_point(Index n, Index p, const ModelSettings& model, const ChainSettings& chain,
                       std::uint64_t seed);

/// All (n, replicate) pairs; replicate r uses root seed derive_seed(seed, r).
/// Points run in parallel on `jobs` threads; results are ordered by n, then r.
std::vector<SweepPoint> acceptance_sweep(const std::vector<Index>& ns, Index p,
                                         const ModelSettings& model, const ChainSettings& chain,
                                         std::uint64_t seed, int replicates = 1, int jobs = 1);

struct PosteriorRun {
    SphereGraph graph;
    LabeledData data;
    PosteriorSummary oracle;
    PosteriorSummary chain;
    ChainResult result;
    ErrorReport error;
};

/// Gaussian-noise graph posterior by pCN and by the closed form.
PosteriorRun posterior_run(Index n, Index p, const ModelSettings& model, const ChainSettings& chain,
                           std::uint64_t seed);

struct ConsistencyPoint {
    Index n = 0;
    std::uint64_t seed = 0;
    double distance = 0.0;
};

/// RMS distance on `grid` between the 1-NN interpolated graph posterior mean
/// and the continuum posterior mean for the same data at the first p points.
ConsistencyPoint consistency_point(Index n, Index p, const ModelSettings& model, const RowMatrix& grid,
                                   std::uint64_t seed);

/// Median of a non-empty list.
double median(std::vector<double> values);

}  // namespace gbssl::experiments
