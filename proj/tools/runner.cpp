#include "runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <unistd.h>

#include <Eigen/Core>
#include <omp.h>

#include "svg.hpp"

#ifndef GBSSL_VERSION
#define GBSSL_VERSION "unknown"
#endif

namespace gbssl::cli {

namespace fs = std::filesystem;
using nlohmann::json;
namespace ex = experiments;

namespace {

// Collects the files and warnings of one run inside its staging directory.
class Bundle {
public:
    explicit Bundle(fs::path dir) : dir_(std::move(dir)) {}

    std::ofstream open(const std::string& name) {
        std::ofstream out(dir_ / name);
        if (!out) throw std::runtime_error("cannot open " + (dir_ / name).string() + " for writing");
        out << std::setprecision(17);
        files_.push_back(name);
        return out;
    }

    fs::path path(const std::string& name) {
        files_.push_back(name);
        return dir_ / name;
    }

    void warn(const std::string& message) {
        if (std::find(warnings_.begin(), warnings_.end(), message) == warnings_.end()) warnings_.push_back(message);
    }

    const fs::path& dir() const { return dir_; }
    std::vector<std::string>& files() { return files_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    json seeds = json::object();

private:
    fs::path dir_;
    std::vector<std::string> files_;
    std::vector<std::string> warnings_;
};

std::string number_tag(double value) {
    std::ostringstream s;
    s << value;
    return s.str();
}

void check_connected(Bundle& bundle, const GeometricGraph& graph, Index n, std::uint64_t seed) {
    if (!graph.connected())
        bundle.warn("graph with n=" + std::to_string(n) + ", seed=" + std::to_string(seed) + " has " +
                    std::to_string(graph.components) +
                    " connected components; the zero eigenvalue is repeated and results may be unreliable");
}

void check_connected(Bundle& bundle, Index n, std::uint64_t seed, double multiplier) {
    const auto cloud = sample_sphere(n, seed);
    check_connected(bundle, build_eps_graph(cloud, default_eps(n, 2, multiplier)), n, seed);
}

json stream_seeds(std::uint64_t root) {
    return {{"root", root},
            {"cloud", root},
            {"noise", stream_seed(root, ex::Stream::noise)},
            {"chain", stream_seed(root, ex::Stream::chain)},
            {"prior", stream_seed(root, ex::Stream::prior)},
            {"monte_carlo", stream_seed(root, ex::Stream::monte_carlo)}};
}

ex::SphereGraph graph_for(const ExperimentConfig& c, double multiplier) {
    return ex::sphere_graph(c.n, c.seed, multiplier, c.eigenpairs, c.calibrated, c.solver);
}

void run_spectra(const ExperimentConfig& c, Bundle& bundle) {
    std::ofstream errors = bundle.open("spectral_errors.csv");
    errors << "eps_multiplier,eps,index,graph,continuum,relative_error\n";
    for (double mult : c.eps_multipliers) {
        const auto g = graph_for(c, mult);
        check_connected(bundle, g.graph, c.n, c.seed);
        const Vector reference = ex::sphere_spectrum(g.basis.count());
        std::ofstream out = bundle.open("spectra_eps" + number_tag(mult) + ".csv");
        write_spectra_csv(out, g.basis.eigenvalues, reference);
        const auto rel = spectral_error(g.basis.eigenvalues, reference, g.basis.count());
        for (std::size_t i = 0; i < rel.size(); ++i)
            errors << mult << ',' << g.eps << ',' << i + 2 << ',' << g.basis.eigenvalues[static_cast<Index>(i) + 1]
                   << ',' << reference[static_cast<Index>(i) + 1] << ',' << rel[i] << '\n';
        if (c.svg) {
            Series graph{"graph", {}, {}}, sphere{"sphere", {}, {}};
            for (Index i = 0; i < g.basis.count(); ++i) {
                graph.x.push_back(static_cast<double>(i + 1));
                graph.y.push_back(g.basis.eigenvalues[i]);
                sphere.x.push_back(static_cast<double>(i + 1));
                sphere.y.push_back(reference[i]);
            }
            write_svg({"Spectra, n=" + std::to_string(c.n) + ", eps=" + number_tag(mult) + " n^-1/4", "index",
                       "eigenvalue", {sphere, graph}},
                      bundle.path("spectra_eps" + number_tag(mult) + ".svg"));
        }
    }
    bundle.seeds["cloud"] = c.seed;
}

void run_regularity(const ExperimentConfig& c, Bundle& bundle) {
    const auto g = graph_for(c, c.model.eps_multiplier);
    check_connected(bundle, g.graph, c.n, c.seed);
    const std::uint64_t prior_seed = stream_seed(c.seed, ex::Stream::prior);
    const auto rows = regularity_experiment(g.basis, g.cloud, g.eps, c.s_grid, c.draws, c.model.prior(), prior_seed);
    std::ofstream out = bundle.open("regularity.csv");
    write_regularity_csv(out, rows);
    if (c.svg) {
        Series s{"log max osc", {}, {}};
        for (const auto& r : rows) {
            s.x.push_back(r.s);
            s.y.push_back(r.log_max_osc);
        }
        write_svg({"Regularity of prior draws, n=" + std::to_string(c.n), "s", "log max oscillation", {s}},
                  bundle.path("regularity.svg"));
    }
    bundle.seeds = {{"cloud", c.seed}, {"prior_draws", {{"root", prior_seed}, {"rule", "root + draw index"}}}};
}

void write_fields(Bundle& bundle, const RowMatrix& grid, const std::vector<std::pair<std::string, Vector>>& columns) {
    std::ofstream out = bundle.open("fields.csv");
    out << "x,y,z";
    for (const auto& [name, _] : columns) out << ',' << name;
    out << '\n';
    for (Index i = 0; i < grid.rows(); ++i) {
        out << grid(i, 0) << ',' << grid(i, 1) << ',' << grid(i, 2);
        for (const auto& [_, values] : columns) out << ',' << values[i];
        out << '\n';
    }
}

json error_json(const ErrorReport& e) {
    return {{"relative_mean_error", e.relative_mean_error},
            {"max_abs_mean", e.max_abs_mean},
            {"max_abs_variance", e.max_abs_variance},
            {"relative_variance_error", e.relative_variance_error}};
}

void run_posterior(const ExperimentConfig& c, Bundle& bundle) {
    const RowMatrix grid = sphere_grid(c.grid_points, c.grid_seed);
    const ContinuumBasis truth_basis(2);
    const Vector truth = truth_basis.synthesize(ex::truth_coefficients(truth_basis), grid);
    bundle.seeds = stream_seeds(c.seed);
    bundle.seeds["grid"] = c.grid_seed;

    if (c.model.noise == NoiseKind::gaussian) {
        const auto r = ex::posterior_run(c.n, c.p, c.model, c.chain, c.seed);
        check_connected(bundle, r.graph.graph, c.n, c.seed);
        for (const auto& w : r.result.warnings) bundle.warn(w);
        save_labels(r.data, bundle.path("labels.csv"));
        bundle.files().push_back("labels.csv.json");
        {
            std::ofstream out = bundle.open("oracle_summary.csv");
            write_summary_csv(out, r.oracle);
        }
        {
            std::ofstream out = bundle.open("chain_summary.csv");
            write_summary_csv(out, r.chain);
        }
        {
            std::ofstream out = bundle.open("chain_trace.csv");
            write_chain_csv(out, r.result);
        }
        const Vector at_first = r.graph.basis.eigenvectors.row(0).head(c.model.modes).transpose();
        {
            std::ofstream out = bundle.open("chain.json");
            write_chain_json(out, r.result, iact(r.result, [&](const Vector& a) { return at_first.dot(a); }));
        }
        {
            std::ofstream out = bundle.open("comparison.json");
            out << json({{"chain_vs_oracle", error_json(r.error)}}).dump(2) << '\n';
        }
        const auto oracle = pushforward_summary(r.oracle, r.graph.basis, r.graph.cloud, c.interpolation_k, grid);
        const auto chain = pushforward_summary(r.chain, r.graph.basis, r.graph.cloud, c.interpolation_k, grid);
        write_fields(bundle, grid,
                     {{"truth", truth},
                      {"oracle_mean", oracle.mean},
                      {"chain_mean", chain.mean},
                      {"mean_difference", (chain.mean - oracle.mean).cwiseAbs()},
                      {"oracle_variance", oracle.variance},
                      {"chain_variance", chain.variance},
                      {"variance_difference", (chain.variance - oracle.variance).cwiseAbs()}});
        if (c.svg) {
            Series trace{"potential", {}, {}};
            const Index step = std::max<Index>(1, r.result.potential_trace.size() / 2000);
            for (Index j = 0; j < r.result.potential_trace.size(); j += step) {
                trace.x.push_back(static_cast<double>(j + 1));
                trace.y.push_back(r.result.potential_trace[j]);
            }
            write_svg({"pCN potential trace", "iterate", "potential", {trace}}, bundle.path("potential_trace.svg"));
        }
        return;
    }

    // Probit: no closed form, the chain alone.
    const auto g = ex::sphere_graph(c.n, c.seed, c.model.eps_multiplier, c.model.modes);
    check_connected(bundle, g.graph, c.n, c.seed);
    const auto data = ex::truth_data(g.cloud, ObservationDesign::first(c.p, c.model.mode, c.model.delta), c.model, c.seed);
    const auto phi = ex::graph_potential(g, data, c.model.modes);
    SamplerConfig config;
    config.beta = c.chain.beta;
    config.iterations = c.chain.iterations;
    config.burn_in = c.chain.burn_in;
    config.thinning = c.chain.thinning;
    config.seed = stream_seed(c.seed, ex::Stream::chain);
    const auto result = pcn(g.basis, c.model.prior(), phi, config);
    for (const auto& w : result.warnings) bundle.warn(w);
    save_labels(data, bundle.path("labels.csv"));
    bundle.files().push_back("labels.csv.json");
    const ModelEcho echo{c.model.alpha, c.model.s, c.model.t, c.model.sigma, c.p};
    const auto summary = chain_summary(result, g.basis, g.cloud, echo);
    {
        std::ofstream out = bundle.open("chain_summary.csv");
        write_summary_csv(out, summary);
    }
    {
        std::ofstream out = bundle.open("chain_trace.csv");
        write_chain_csv(out, result);
    }
    const Vector at_first = g.basis.eigenvectors.row(0).head(c.model.modes).transpose();
    {
        std::ofstream out = bundle.open("chain.json");
        write_chain_json(out, result, iact(result, [&](const Vector& a) { return at_first.dot(a); }));
    }
    const auto pushed = pushforward_summary(summary, g.basis, g.cloud, c.interpolation_k, grid);
    write_fields(bundle, grid,
                 {{"truth", truth},
                  {"chain_mean", pushed.mean},
                  {"chain_variance", pushed.variance},
                  {"class", pushed.mean.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; })}});
}

void run_sweep(const ExperimentConfig& c, Bundle& bundle, int jobs, bool supervised) {
    const Index p = supervised ? 0 : c.p;
    const auto points = ex::acceptance_sweep(c.ns, p, c.model, c.chain, c.seed, c.replicates, jobs);
    json per_job = json::array();
    for (Index n : c.ns)
        for (int r = 0; r < c.replicates; ++r) {
            const std::uint64_t root = derive_seed(c.seed, static_cast<std::uint64_t>(r));
            check_connected(bundle, n, root, c.model.eps_multiplier);
            json entry = stream_seeds(root);
            entry["n"] = n;
            entry["replicate"] = r;
            per_job.push_back(entry);
        }
    bundle.seeds = {{"root", c.seed}, {"replicate_rule", "root + replicate index"}, {"jobs", per_job}};

    {
        std::ofstream out = bundle.open("sweep.csv");
        out << "n,p,replicate,seed,acceptance,iact\n";
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto& pt = points[i];
            out << pt.n << ',' << pt.p << ',' << i % static_cast<std::size_t>(c.replicates) << ',' << pt.seed << ','
                << pt.acceptance << ',' << pt.iact << '\n';
        }
    }
    std::ofstream table = bundle.open("acceptance_table.csv");
    table << "n,p,mean_acceptance,median_iact\n";
    Series acc{"acceptance", {}, {}};
    for (std::size_t k = 0; k < c.ns.size(); ++k) {
        double sum = 0.0;
        std::vector<double> taus;
        for (int r = 0; r < c.replicates; ++r) {
            const auto& pt = points[k * static_cast<std::size_t>(c.replicates) + static_cast<std::size_t>(r)];
            sum += pt.acceptance;
            taus.push_back(pt.iact);
        }
        const double mean = sum / c.replicates;
        table << c.ns[k] << ',' << points[k * static_cast<std::size_t>(c.replicates)].p << ',' << mean << ','
              << ex::median(taus) << '\n';
        acc.x.push_back(static_cast<double>(c.ns[k]));
        acc.y.push_back(mean);
    }
    if (c.svg)
        write_svg({supervised ? "Acceptance with every point labeled" : "Acceptance with p=" + std::to_string(c.p), "n",
                   "mean acceptance", {acc}},
                  bundle.path("acceptance.svg"));
}

void run_oracle_compare(const ExperimentConfig& c, Bundle& bundle, int jobs) {
    const RowMatrix grid = sphere_grid(c.grid_points, c.grid_seed);
    const auto per_n = static_cast<std::size_t>(c.replicates);
    auto seed_of = [&](std::size_t r) { return derive_seed(c.seed, r); };
    const long total = static_cast<long>(c.ns.size() * per_n);
    std::vector<ex::ConsistencyPoint> points(static_cast<std::size_t>(total));
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(std::max(jobs, 1))
    for (long job = 0; job < total; ++job) {
        try {
            const auto k = static_cast<std::size_t>(job);
            points[k] = ex::consistency_point(c.ns[k / per_n], c.p, c.model, grid, seed_of(k % per_n));
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    json per_job = json::array();
    for (Index n : c.ns)
        for (std::size_t r = 0; r < per_n; ++r) {
            check_connected(bundle, n, seed_of(r), c.model.eps_multiplier);
            json entry = stream_seeds(seed_of(r));
            entry["n"] = n;
            entry["replicate"] = r;
            per_job.push_back(entry);
        }
    bundle.seeds = {{"root", c.seed}, {"replicate_rule", "root + replicate index"}, {"grid", c.grid_seed},
                    {"jobs", per_job}};

    {
        std::ofstream out = bundle.open("consistency.csv");
        out << "n,seed,distance\n";
        for (const auto& pt : points) out << pt.n << ',' << pt.seed << ',' << pt.distance << '\n';
    }
    std::ofstream out = bundle.open("consistency_medians.csv");
    out << "n,median_distance\n";
    Series med{"median L2 distance", {}, {}};
    for (std::size_t k = 0; k < c.ns.size(); ++k) {
        std::vector<double> d;
        for (std::size_t r = 0; r < per_n; ++r) d.push_back(points[k * per_n + r].distance);
        const double m = ex::median(d);
        out << c.ns[k] << ',' << m << '\n';
        med.x.push_back(static_cast<double>(c.ns[k]));
        med.y.push_back(m);
    }
    if (c.svg)
        write_svg({"Graph vs continuum posterior mean", "n", "L2 distance", {med}}, bundle.path("consistency.svg"));
}

void run_prior_sample(const ExperimentConfig& c, Bundle& bundle) {
    const auto g = graph_for(c, c.model.eps_multiplier);
    check_connected(bundle, g.graph, c.n, c.seed);
    const PriorSpec spec = c.model.prior();
    const std::uint64_t root = stream_seed(c.seed, ex::Stream::prior);
    std::vector<CloudFunction> draws;
    for (int d = 0; d < c.draws; ++d)
        draws.push_back(sample_graph_prior(g.basis, spec, derive_seed(root, static_cast<std::uint64_t>(d))));
    {
        std::ofstream out = bundle.open("prior_samples.csv");
        out << "index,x,y,z";
        for (int d = 0; d < c.draws; ++d) out << ",draw" << d + 1;
        out << '\n';
        for (Index i = 0; i < c.n; ++i) {
            out << i << ',' << g.cloud.points()(i, 0) << ',' << g.cloud.points()(i, 1) << ',' << g.cloud.points()(i, 2);
            for (const auto& u : draws) out << ',' << u.values[i];
            out << '\n';
        }
    }
    std::ofstream out = bundle.open("prior_coefficients.csv");
    out << "draw";
    for (Index i = 0; i < spec.truncation; ++i) out << ",a" << i + 1;
    out << '\n';
    for (int d = 0; d < c.draws; ++d) {
        out << d + 1;
        for (Index i = 0; i < spec.truncation; ++i) out << ',' << (*draws[static_cast<std::size_t>(d)].coefficients)[i];
        out << '\n';
    }
    bundle.seeds = {{"cloud", c.seed}, {"prior_draws", {{"root", root}, {"rule", "root + draw index"}}}};
}

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

json version_info() {
    std::ostringstream eigen;
    eigen << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION;
    std::ostringstream json_version;
    json_version << NLOHMANN_JSON_VERSION_MAJOR << '.' << NLOHMANN_JSON_VERSION_MINOR << '.'
                 << NLOHMANN_JSON_VERSION_PATCH;
#if defined(__clang__)
    const std::string compiler = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
    const std::string compiler = std::string("gcc ") + __VERSION__;
#else
    const std::string compiler = "unknown";
#endif
    return {{"gbssl", GBSSL_VERSION},
            {"config_schema", kSchemaVersion},
            {"eigen", eigen.str()},
            {"nlohmann_json", json_version.str()},
            {"openmp", _OPENMP},
            {"compiler", compiler},
            {"cplusplus", __cplusplus}};
}

fs::path resolve_output(const ExperimentConfig& config) {
    if (config.output) return *config.output;
    std::string leaf = to_string(config.kind);
    if (config.kind == ExperimentKind::posterior && config.model.noise == NoiseKind::probit) leaf += "-probit";
    leaf += "-seed" + std::to_string(config.seed);
    if (const char* root = std::getenv("GBSSL_OUTPUT_ROOT"); root && *root) return fs::path(root) / leaf;
    return fs::path("runs") / leaf;
}

RunReport run(const ExperimentConfig& config, const fs::path& out, const RunOptions& options) {
    const auto problems = check(config);
    if (!problems.empty()) throw ConfigError(problems);
    if (fs::exists(out) && !(fs::is_directory(out) && fs::is_empty(out)) && !options.overwrite)
        throw std::runtime_error("output directory " + out.string() + " already exists (use --overwrite)");

    const fs::path target = fs::absolute(out).lexically_normal();
    const fs::path parent = target.parent_path();
    fs::create_directories(parent);
    const fs::path staging = parent / ("." + target.filename().string() + ".partial-" + std::to_string(::getpid()));
    fs::remove_all(staging);
    fs::create_directories(staging);

    const auto start = std::chrono::steady_clock::now();
    const std::string started_at = utc_now();
    Bundle bundle(staging);
    try {
        switch (config.kind) {
            case ExperimentKind::spectra: run_spectra(config, bundle); break;
            case ExperimentKind::regularity: run_regularity(config, bundle); break;
            case ExperimentKind::posterior: run_posterior(config, bundle); break;
            case ExperimentKind::acceptance_sweep: run_sweep(config, bundle, options.jobs, false); break;
            case ExperimentKind::supervised_sweep: run_sweep(config, bundle, options.jobs, true); break;
            case ExperimentKind::oracle_compare: run_oracle_compare(config, bundle, options.jobs); break;
            case ExperimentKind::prior_sample: run_prior_sample(config, bundle); break;
        }
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::sort(bundle.files().begin(), bundle.files().end());
        json manifest = {{"tool", "gbssl"},
                         {"kind", to_string(config.kind)},
                         {"config", to_json(config)},
                         {"seeds", bundle.seeds},
                         {"versions", version_info()},
                         {"jobs", options.jobs},
                         {"started_at", started_at},
                         {"wall_time_seconds", wall},
                         {"files", bundle.files()},
                         {"warnings", bundle.warnings()}};
        {
            std::ofstream m(staging / "manifest.json");
            if (!m) throw std::runtime_error("cannot write manifest");
            m << manifest.dump(2) << '\n';
        }
        if (fs::exists(target)) fs::remove_all(target);
        fs::rename(staging, target);
        RunReport report;
        report.directory = target;
        report.files = bundle.files();
        report.files.push_back("manifest.json");
        report.warnings = bundle.warnings();
        report.wall_seconds = wall;
        return report;
    } catch (...) {
        std::error_code ignored;
        fs::remove_all(staging, ignored);
        throw;
    }
}

}  // namespace gbssl::cli
