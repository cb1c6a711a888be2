// Acceptance suite: `acceptance <criterion>...` (1-9, or `all`) prints one
// PASS/FAIL line per criterion and exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gbssl/experiments.hpp"

using namespace gbssl;
namespace ex = gbssl::experiments;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string join(const std::vector<double>& v, int precision = 4) {
    std::ostringstream out;
    out.precision(precision);
    out << '[';
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
    out << ']';
    return out.str();
}

const std::vector<Index> kSweep = {300, 600, 900, 1200, 1500, 2000};

ex::ModelSettings table_model(double t) {
    ex::ModelSettings model;
    model.t = t;
    model.sigma = 0.1;
    return model;
}

// 1. pCN with zero potential keeps the prior.
Outcome prior_preservation() {
    const Index n = 1000, k = 50;
    const auto g = ex::sphere_graph(n, 0, 2.0, k);
    const PriorSpec spec(1.0, 5.0, k, 2);
    SamplerConfig config;
    config.beta = 0.5;
    config.iterations = 100'000;
    config.burn_in = 1000;
    config.seed = stream_seed(0, ex::Stream::chain);
    const auto chain = pcn(g.basis, spec, [](const Vector&) { return 0.0; }, config);
    const Vector scales = prior_scales(g.basis.eigenvalues, spec);

    double worst_var = 0.0, worst_z = 0.0;
    for (Index i = 0; i < k; ++i) {
        const Vector col = chain.samples.col(i);
        const double mean = col.mean();
        const double var = (col.array() - mean).square().sum() / static_cast<double>(col.size() - 1);
        const double target = scales[i] * scales[i];
        worst_var = std::max(worst_var, std::abs(var / target - 1.0));
        const double se = std::sqrt(var * iact(col) / static_cast<double>(col.size()));
        worst_z = std::max(worst_z, std::abs(mean) / se);
    }
    std::ostringstream d;
    d << "max |var/target - 1| = " << worst_var << " (<= 0.05), max |mean|/SE = " << worst_z
      << " (<= 3), acceptance = " << acceptance_rate(chain);
    return {worst_var <= 0.05 && worst_z <= 3.0 && chain.accepted == chain.proposed, d.str()};
}

// 2. pCN posterior mean against the closed-form graph posterior.
Outcome oracle_equivalence() {
    const auto run = ex::posterior_run(1000, 200, table_model(0.1), ex::ChainSettings{}, 0);
    std::ostringstream d;
    d << "relative L2 mean error = " << run.error.relative_mean_error << " (<= 0.05), acceptance = "
      << acceptance_rate(run.result);
    return {run.error.relative_mean_error <= 0.05, d.str()};
}

std::vector<double> acceptances(const std::vector<ex::SweepPoint>& pts) {
    std::vector<double> out;
    for (const auto& p : pts) out.push_back(p.acceptance);
    return out;
}

// 3. Semi-supervised acceptance stays in the Table-1 band and flat in n.
Outcome acceptance_flatness() {
    const auto acc = acceptances(ex::acceptance_sweep(kSweep, 200, table_model(0.1), ex::ChainSettings{}, 0));
    bool in_band = true;
    for (double a : acc) in_band = in_band && a >= 0.18 && a <= 0.30;
    const double spread = *std::max_element(acc.begin(), acc.end()) - *std::min_element(acc.begin(), acc.end());
    std::ostringstream d;
    d << "acceptance " << join(acc) << ", band [0.18, 0.30] " << (in_band ? "ok" : "missed")
      << ", spread " << spread << " (<= 0.06)";
    return {in_band && spread <= 0.06, d.str()};
}

// 4. Fully supervised acceptance deteriorates with n.
Outcome supervised_deterioration() {
    const auto acc = acceptances(ex::acceptance_sweep(kSweep, 0, table_model(0.0), ex::ChainSettings{}, 0));
    bool monotone = true;
    for (std::size_t i = 1; i < acc.size(); ++i) monotone = monotone && acc[i] <= acc[i - 1];
    const bool first = acc.front() >= 0.37 && acc.front() <= 0.53;
    const bool last = acc.back() >= 0.07 && acc.back() <= 0.16;
    std::ostringstream d;
    d << "acceptance " << join(acc) << ", non-increasing " << (monotone ? "yes" : "no") << ", n=300 in [0.37, 0.53] "
      << (first ? "yes" : "no") << ", n=2000 in [0.07, 0.16] " << (last ? "yes" : "no");
    return {monotone && first && last, d.str()};
}

// 5. Graph spectrum against the sphere clusters.
Outcome spectral_agreement() {
    const Vector reference = ex::sphere_spectrum(9);
    auto error_for = [&](double mult) {
        std::vector<double> per_seed;
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const auto g = ex::sphere_graph(1000, seed, mult, 9, true, EigenMethod::dense);
            const auto errs = spectral_error(g.basis.eigenvalues, reference, 9);
            double mean = 0.0;
            for (double e : errs) mean += e;
            per_seed.push_back(mean / static_cast<double>(errs.size()));
        }
        return ex::median(per_seed);
    };
    const double good = error_for(2.0);
    const double narrow = error_for(1.0);
    std::ostringstream d;
    d << "median mean relative error: eps=2n^-1/4 " << good << " (<= 0.25), eps=n^-1/4 " << narrow
      << " (must be larger)";
    return {good <= 0.25 && narrow > good, d.str()};
}

// 6. Oscillation of seminorm-normalized prior draws decreases with s.
Outcome regularity_trend() {
    const Index n = 1000, k = 9;
    const auto g = ex::sphere_graph(n, 0, 2.0, k);
    const PriorSpec base(1.0, 5.0, k, 2);
    const std::vector<double> s_grid = {2, 3, 4, 5, 6, 7, 8};
    const auto rows = regularity_experiment(g.basis, g.cloud, g.eps, s_grid, 100, base,
                                            stream_seed(0, ex::Stream::prior));
    std::vector<double> osc;
    for (const auto& r : rows) osc.push_back(r.max_osc);
    int inversions = 0;
    bool small = true;
    for (std::size_t i = 1; i < osc.size(); ++i)
        if (osc[i] > osc[i - 1]) {
            ++inversions;
            small = small && (osc[i] - osc[i - 1]) <= 0.05 * osc[i - 1];
        }
    std::ostringstream d;
    d << "max osc over s=2..8 " << join(osc) << ", inversions " << inversions << " (<= 1, each <= 5%)";
    return {inversions <= 1 && small, d.str()};
}

// 7. Structural properties of the heat map, Laplacian, eigenbasis and oracle.
Outcome structure_suite() {
    const Index n = 1000, k = 30;
    const auto g = ex::sphere_graph(n, 3, 2.0, k, true, EigenMethod::dense);
    std::vector<std::string> failures;
    auto require = [&](bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    };
    Rng rng(11);
    auto random_function = [&] { return CloudFunction::from_coefficients(g.basis, standard_normal(rng, k)); };
    const auto u = random_function();
    const auto v = random_function();
    const double nn = static_cast<double>(n);
    auto inner = [&](const Vector& a, const Vector& b) { return a.dot(b) / nn; };

    const Vector two_step = heat_graph(heat_graph(u, g.basis, 0.05), g.basis, 0.1).values;
    require((two_step - heat_graph(u, g.basis, 0.15).values).cwiseAbs().maxCoeff() <= 1e-12, "semigroup");
    require(std::sqrt(inner(heat_graph(u, g.basis, 0.2).values, heat_graph(u, g.basis, 0.2).values)) <=
                std::sqrt(inner(u.values, u.values)) * (1 + 1e-12),
            "contraction");
    const double lhs = inner(heat_graph(u, g.basis, 0.3).values, v.values);
    const double rhs = inner(u.values, heat_graph(v, g.basis, 0.3).values);
    require(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(lhs)), "self-adjoint heat map");

    const Matrix dense = Matrix(g.laplacian.matrix);
    require((dense - dense.transpose()).cwiseAbs().maxCoeff() == 0.0, "Laplacian symmetric");
    require(dense.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-9 * dense.diagonal().maxCoeff(), "row sums zero");
    require(g.basis.eigenvalues.minCoeff() >= 0.0, "Laplacian PSD");
    const Matrix gram = g.basis.eigenvectors.transpose() * g.basis.eigenvectors / nn;
    require((gram - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() <= 1e-10, "orthonormal eigenbasis");

    const PriorSpec spec(1.0, 5.0, 9, 2);
    const auto design = ObservationDesign::first(100);
    const auto data = ex::truth_data(g.cloud, design, table_model(0.1), 0);
    const auto post = graph_posterior(data, g.basis, g.cloud, spec);
    const Vector prior_var = prior_variance(g.basis, spec);
    require(((post.variance - prior_var).array() <= 1e-12).all(), "posterior variance <= prior variance");
    LabeledData other = data;
    other.y = standard_normal(rng, data.y.size());
    const auto post_other = graph_posterior(other, g.basis, g.cloud, spec);
    require(post_other.variance == post.variance, "variance independent of y");

    std::string detail = failures.empty() ? "all structural checks hold" : "failed:";
    for (const auto& f : failures) detail += " " + f + ";";
    return {failures.empty(), detail};
}

// 8. IACT of u(x_1) is flat across the Table-1 sweep.
Outcome uniform_gap_proxy() {
    const auto pts = ex::acceptance_sweep(kSweep, 200, table_model(0.1), ex::ChainSettings{}, 0, 3);
    std::vector<double> medians;
    for (std::size_t i = 0; i < kSweep.size(); ++i) {
        std::vector<double> per_seed;
        for (int r = 0; r < 3; ++r) per_seed.push_back(pts[i * 3 + r].iact);
        medians.push_back(ex::median(per_seed));
    }
    const double ratio = *std::max_element(medians.begin(), medians.end()) /
                         *std::min_element(medians.begin(), medians.end());
    std::ostringstream d;
    d << "median IACT by n " << join(medians) << ", max/min " << ratio << " (<= 2)";
    return {std::isfinite(ratio) && ratio <= 2.0, d.str()};
}

// 9. Interpolated graph posterior mean approaches the continuum posterior mean.
Outcome consistency_trend() {
    const std::vector<Index> ns = {300, 1000, 2000};
    const RowMatrix grid = sphere_grid(10'000, 999);
    const auto model = table_model(0.1);
    std::vector<double> medians;
    for (Index n : ns) {
        std::vector<double> per_seed;
        for (std::uint64_t seed = 0; seed < 3; ++seed)
            per_seed.push_back(ex::consistency_point(n, 50, model, grid, seed).distance);
        medians.push_back(ex::median(per_seed));
    }
    const bool trend = medians[1] <= medians[0] && medians[2] <= medians[1];
    std::ostringstream d;
    d << "median RMS distance for n=300,1000,2000 " << join(medians) << " (non-increasing)";
    return {trend, d.str()};
}

const std::map<int, std::pair<const char*, std::function<Outcome()>>> kCriteria = {
    {1, {"prior preservation", prior_preservation}},
    {2, {"oracle equivalence", oracle_equivalence}},
    {3, {"acceptance flatness", acceptance_flatness}},
    {4, {"supervised deterioration", supervised_deterioration}},
    {5, {"spectral agreement", spectral_agreement}},
    {6, {"regularity trend", regularity_trend}},
    {7, {"structure suite", structure_suite}},
    {8, {"uniform gap proxy", uniform_gap_proxy}},
    {9, {"consistency trend", consistency_trend}},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "all") {
            for (const auto& [id, _] : kCriteria) which.push_back(id);
        } else {
            which.push_back(std::atoi(arg.c_str()));
        }
    }
    if (which.empty()) {
        std::fprintf(stderr, "usage: %s <criterion 1-9>... | all\n", argv[0]);
        return 2;
    }
    int failed = 0;
    for (int id : which) {
        const auto it = kCriteria.find(id);
        if (it == kCriteria.end()) {
            std::fprintf(stderr, "unknown criterion %d\n", id);
            return 2;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = it->second.second();
        } catch (const std::exception& e) {
            outcome = {false, std::string("error: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %d (%s): %s  %s  [%.1fs]\n", id, it->second.first, outcome.pass ? "PASS" : "FAIL",
                    outcome.detail.c_str(), seconds);
        std::fflush(stdout);
        if (!outcome.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
