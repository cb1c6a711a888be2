#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace gbssl::cli {

using nlohmann::json;

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = {
        {ExperimentKind::spectra, "spectra", "graph vs sphere Laplacian eigenvalues for a grid of eps multipliers"},
        {ExperimentKind::regularity, "regularity", "largest oscillation of normalized prior draws for each s"},
        {ExperimentKind::posterior, "posterior", "pCN posterior on one graph, compared with the closed form"},
        {ExperimentKind::acceptance_sweep, "acceptance-sweep", "pCN acceptance and IACT over n with p fixed"},
        {ExperimentKind::supervised_sweep, "supervised-sweep", "pCN acceptance and IACT over n with every point labeled"},
        {ExperimentKind::oracle_compare, "oracle-compare", "graph oracle mean vs continuum oracle mean over n"},
        {ExperimentKind::prior_sample, "prior-sample", "graph prior draws as nodal values"},
    };
    return entries;
}

std::string to_string(ExperimentKind kind) {
    for (const auto& e : catalog())
        if (e.kind == kind) return e.name;
    throw std::logic_error("unknown experiment kind");
}

namespace {

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

std::string catalog_names() {
    std::string out;
    for (const auto& e : catalog()) out += (out.empty() ? "" : ", ") + e.name;
    return out;
}

}  // namespace

std::string suggest_kind(const std::string& name) {
    std::string best;
    std::size_t best_d = std::string::npos;
    for (const auto& e : catalog()) {
        const std::size_t d = edit_distance(name, e.name);
        if (d < best_d) {
            best_d = d;
            best = e.name;
        }
    }
    return best_d <= std::max<std::size_t>(3, name.size() / 3) ? best : std::string();
}

ExperimentKind kind_from_string(const std::string& name) {
    for (const auto& e : catalog())
        if (e.name == name) return e.kind;
    std::string msg = "kind: unknown experiment kind '" + name + "'";
    const std::string guess = suggest_kind(name);
    if (!guess.empty()) msg += "; did you mean '" + guess + "'?";
    msg += " (available: " + catalog_names() + ")";
    throw ConfigError({msg});
}

namespace {

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) out += "\n  " + p;
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid config:" + join(problems)), problems_(std::move(problems)) {}

ExperimentConfig defaults_for(ExperimentKind kind) {
    ExperimentConfig c;
    c.kind = kind;
    switch (kind) {
        case ExperimentKind::spectra:
            c.eps_multipliers = {1.0, 2.0, 3.0};
            c.eigenpairs = 50;
            break;
        case ExperimentKind::supervised_sweep:
            c.model.t = 0.0;
            break;
        case ExperimentKind::oracle_compare:
            c.ns = {300, 1000, 2000};
            c.p = 50;
            c.replicates = 3;
            break;
        case ExperimentKind::prior_sample:
            c.draws = 10;
            break;
        default:
            break;
    }
    return c;
}

namespace {

std::string mode_name(ObservationMode m) { return m == ObservationMode::pointwise ? "pointwise" : "ball-average"; }
std::string solver_name(EigenMethod m) { return m == EigenMethod::dense ? "dense" : "iterative"; }

// Walks one JSON section, reading typed fields and recording problems.
class Section {
public:
    Section(const json& doc, std::string name, std::vector<std::string>& problems)
        : name_(std::move(name)), problems_(problems) {
        if (doc.is_null()) return;
        if (!doc.is_object()) {
            problems_.push_back(name_ + ": expected an object");
            return;
        }
        node_ = &doc;
    }

    ~Section() {
        if (!node_) return;
        for (const auto& [key, _] : node_->items())
            if (!seen_.count(key)) problems_.push_back(path(key) + ": unknown field");
    }

    template <class T>
    void read(const std::string& key, T& target) {
        seen_.insert(key);
        if (!node_ || !node_->contains(key)) return;
        const json& value = node_->at(key);
        try {
            if constexpr (std::is_same_v<T, json>) {
                target = value;
                return;
            } else if constexpr (std::is_same_v<T, bool>) {
                if (!value.is_boolean()) throw std::invalid_argument("expected true or false");
            } else if constexpr (std::is_integral_v<T>) {
                if (!value.is_number_integer()) throw std::invalid_argument("expected an integer");
                if constexpr (std::is_unsigned_v<T>)
                    if (value.get<std::int64_t>() < 0 && !value.is_number_unsigned())
                        throw std::invalid_argument("expected a nonnegative integer");
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!value.is_number()) throw std::invalid_argument("expected a number");
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!value.is_string()) throw std::invalid_argument("expected a string");
            } else {
                if (!value.is_array()) throw std::invalid_argument("expected a list");
                for (const auto& item : value)
                    if (!item.is_number()) throw std::invalid_argument("expected a list of numbers");
                    else if (std::is_integral_v<typename T::value_type> && !item.is_number_integer())
                        throw std::invalid_argument("expected a list of integers");
            }
            target = value.get<T>();
        } catch (const std::invalid_argument& e) {
            problems_.push_back(path(key) + ": " + e.what());
        } catch (const json::exception& e) {
            problems_.push_back(path(key) + ": " + e.what());
        }
    }

    std::string path(const std::string& key) const { return name_.empty() ? key : name_ + "." + key; }

private:
    std::string name_;
    std::vector<std::string>& problems_;
    const json* node_ = nullptr;
    std::set<std::string> seen_;
};

const json& member(const json& doc, const char* key) {
    static const json null;
    return doc.contains(key) ? doc.at(key) : null;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError({"config: expected a JSON object"});
    std::vector<std::string> problems;
    if (!doc.contains("kind") || !doc.at("kind").is_string())
        throw ConfigError({"kind: required string (available: " + catalog_names() + ")"});
    ExperimentConfig c = defaults_for(kind_from_string(doc.at("kind").get<std::string>()));

    std::string noise = to_string(c.model.noise), mode = mode_name(c.model.mode), solver = solver_name(c.solver);
    json output = c.output ? json(*c.output) : json(nullptr);
    {
        Section top(doc, "", problems);
        std::string kind;
        top.read("kind", kind);
        top.read("version", c.version);
        top.read("seed", c.seed);
        top.read("svg", c.svg);
        // output may be null
        top.read("output", output);
        for (const char* section : {"graph", "prior", "model", "sampler", "regularity", "comparison"}) {
            json ignored;
            top.read(section, ignored);
        }
    }
    if (!output.is_null()) {
        if (output.is_string())
            c.output = output.get<std::string>();
        else
            problems.push_back("output: expected a string or null");
    }
    {
        Section s(member(doc, "graph"), "graph", problems);
        s.read("n", c.n);
        s.read("ns", c.ns);
        s.read("eps_multipliers", c.eps_multipliers);
        s.read("eigenpairs", c.eigenpairs);
        s.read("calibrated", c.calibrated);
        s.read("solver", solver);
    }
    bool eigenpairs_given = doc.contains("graph") && doc.at("graph").is_object() && doc.at("graph").contains("eigenpairs");
    {
        Section s(member(doc, "prior"), "prior", problems);
        s.read("alpha", c.model.alpha);
        s.read("s", c.model.s);
        s.read("modes", c.model.modes);
    }
    {
        Section s(member(doc, "model"), "model", problems);
        s.read("t", c.model.t);
        s.read("sigma", c.model.sigma);
        s.read("noise", noise);
        s.read("observation", mode);
        s.read("delta", c.model.delta);
        s.read("p", c.p);
        s.read("l_max", c.model.l_max);
        s.read("mc_samples", c.model.mc_samples);
    }
    {
        Section s(member(doc, "sampler"), "sampler", problems);
        s.read("beta", c.chain.beta);
        s.read("iterations", c.chain.iterations);
        s.read("burn_in", c.chain.burn_in);
        s.read("thinning", c.chain.thinning);
        s.read("replicates", c.replicates);
    }
    {
        Section s(member(doc, "regularity"), "regularity", problems);
        s.read("s_grid", c.s_grid);
        s.read("draws", c.draws);
    }
    {
        Section s(member(doc, "comparison"), "comparison", problems);
        s.read("interpolation_k", c.interpolation_k);
        s.read("grid_points", c.grid_points);
        s.read("grid_seed", c.grid_seed);
    }

    if (noise == "gaussian")
        c.model.noise = NoiseKind::gaussian;
    else if (noise == "probit")
        c.model.noise = NoiseKind::probit;
    else
        problems.push_back("model.noise: expected 'gaussian' or 'probit', got '" + noise + "'");
    if (mode == "pointwise")
        c.model.mode = ObservationMode::pointwise;
    else if (mode == "ball-average")
        c.model.mode = ObservationMode::ball_average;
    else
        problems.push_back("model.observation: expected 'pointwise' or 'ball-average', got '" + mode + "'");
    if (solver == "dense")
        c.solver = EigenMethod::dense;
    else if (solver == "iterative")
        c.solver = EigenMethod::iterative;
    else
        problems.push_back("graph.solver: expected 'dense' or 'iterative', got '" + solver + "'");
    if (!eigenpairs_given && c.kind != ExperimentKind::spectra) c.eigenpairs = c.model.modes;
    if (!c.eps_multipliers.empty()) c.model.eps_multiplier = c.eps_multipliers.front();

    const auto range = check(c);
    problems.insert(problems.end(), range.begin(), range.end());
    if (!problems.empty()) throw ConfigError(problems);
    return c;
}

std::vector<std::string> check(const ExperimentConfig& c) {
    std::vector<std::string> bad;
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) bad.push_back(msg);
    };
    const int m = 2;  // the runner's experiments live on S^2
    const auto& mdl = c.model;
    const bool sweep = c.kind == ExperimentKind::acceptance_sweep || c.kind == ExperimentKind::supervised_sweep;
    const bool uses_ns = sweep || c.kind == ExperimentKind::oracle_compare;
    const bool uses_chain = sweep || c.kind == ExperimentKind::posterior;
    const bool uses_data = uses_chain || c.kind == ExperimentKind::oracle_compare;

    require(c.version == kSchemaVersion,
            "version: unsupported schema version " + std::to_string(c.version) + " (expected " +
                std::to_string(kSchemaVersion) + ")");
    require(mdl.s > m, "prior.s: must exceed the intrinsic dimension (s > m = 2), got " + std::to_string(mdl.s));
    require(mdl.modes >= 1, "prior.modes: must be >= 1");
    require(mdl.alpha > 0.0 && std::isfinite(mdl.alpha),
            "prior.alpha: must be finite and > 0 (the constant mode is always retained)");

    if (uses_ns) {
        require(!c.ns.empty(), "graph.ns: must list at least one n");
        for (Index n : c.ns) require(n >= 2, "graph.ns: every n must be >= 2, got " + std::to_string(n));
        for (Index n : c.ns)
            require(n >= mdl.modes, "graph.ns: n=" + std::to_string(n) + " is smaller than prior.modes");
    } else {
        require(c.n >= 2, "graph.n: must be >= 2, got " + std::to_string(c.n));
        require(c.eigenpairs <= c.n, "graph.eigenpairs: must be <= graph.n");
    }
    require(!c.eps_multipliers.empty(), "graph.eps_multipliers: must list at least one value");
    for (double e : c.eps_multipliers) require(e > 0.0 && std::isfinite(e), "graph.eps_multipliers: values must be > 0");
    if (c.kind != ExperimentKind::spectra)
        require(c.eps_multipliers.size() == 1, "graph.eps_multipliers: " + to_string(c.kind) + " takes exactly one value");
    require(c.eigenpairs >= 1, "graph.eigenpairs: must be >= 1");
    if (c.kind != ExperimentKind::spectra)
        require(c.eigenpairs >= mdl.modes, "graph.eigenpairs: must be >= prior.modes");
    if (uses_data) {
        require(c.calibrated, "graph.calibrated: " + to_string(c.kind) + " always uses the calibrated Laplacian");
        require(c.solver == EigenMethod::dense, "graph.solver: " + to_string(c.kind) + " always uses the dense solver");
    }

    if (uses_data) {
        require(mdl.t >= 0.0 && std::isfinite(mdl.t), "model.t: must be finite and >= 0");
        require(mdl.sigma > 0.0 && std::isfinite(mdl.sigma), "model.sigma: must be finite and > 0");
        if (mdl.mode == ObservationMode::ball_average)
            require(mdl.delta > 0.0, "model.delta: must be > 0 for ball-average observations");
        require(mdl.l_max >= 2, "model.l_max: must be >= 2 (the ground truth has degree 2)");
        require(mdl.mc_samples >= 1, "model.mc_samples: must be >= 1");
        if (c.kind != ExperimentKind::supervised_sweep) {
            require(c.p >= 1, "model.p: must be >= 1");
            if (uses_ns) {
                for (Index n : c.ns) require(c.p <= n, "model.p: exceeds n=" + std::to_string(n));
            } else {
                require(c.p <= c.n, "model.p: exceeds graph.n");
            }
        }
    }
    if (c.kind == ExperimentKind::oracle_compare)
        require(mdl.noise == NoiseKind::gaussian, "model.noise: oracle-compare needs gaussian noise");

    if (uses_chain) {
        require(c.chain.beta > 0.0 && c.chain.beta <= 1.0,
                "sampler.beta: must lie in (0, 1], got " + std::to_string(c.chain.beta));
        require(c.chain.iterations >= 1, "sampler.iterations: must be >= 1");
        require(c.chain.burn_in >= 0 && c.chain.burn_in < c.chain.iterations,
                "sampler.burn_in: must satisfy 0 <= burn_in < iterations");
        require(c.chain.thinning >= 1, "sampler.thinning: must be >= 1");
        require(c.chain.iterations - c.chain.burn_in >= 2 * c.chain.thinning,
                "sampler: need at least two retained samples");
        require(c.replicates >= 1, "sampler.replicates: must be >= 1");
    }

    if (c.kind == ExperimentKind::regularity) {
        require(!c.s_grid.empty(), "regularity.s_grid: must list at least one s");
        for (double s : c.s_grid) require(s > 0.0, "regularity.s_grid: values must be > 0");
    }
    if (c.kind == ExperimentKind::regularity || c.kind == ExperimentKind::prior_sample)
        require(c.draws >= 1, "regularity.draws: must be >= 1");

    if (c.kind == ExperimentKind::posterior || c.kind == ExperimentKind::oracle_compare) {
        require(c.grid_points >= 1, "comparison.grid_points: must be >= 1");
        require(c.interpolation_k >= 1, "comparison.interpolation_k: must be >= 1");
        if (c.kind == ExperimentKind::posterior)
            require(c.interpolation_k <= c.n, "comparison.interpolation_k: must be <= graph.n");
    }
    if (c.kind == ExperimentKind::oracle_compare) require(c.replicates >= 1, "sampler.replicates: must be >= 1");
    return bad;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"config: cannot open " + path.string()});
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({"config: " + path.string() + " is not valid JSON: " + e.what()});
    }
    return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["version"] = c.version;
    j["kind"] = to_string(c.kind);
    j["seed"] = c.seed;
    j["output"] = c.output ? json(*c.output) : json(nullptr);
    j["svg"] = c.svg;
    j["graph"] = {{"n", c.n},
                  {"ns", c.ns},
                  {"eps_multipliers", c.eps_multipliers},
                  {"eigenpairs", c.eigenpairs},
                  {"calibrated", c.calibrated},
                  {"solver", solver_name(c.solver)}};
    j["prior"] = {{"alpha", c.model.alpha}, {"s", c.model.s}, {"modes", c.model.modes}};
    j["model"] = {{"t", c.model.t},
                  {"sigma", c.model.sigma},
                  {"noise", to_string(c.model.noise)},
                  {"observation", mode_name(c.model.mode)},
                  {"delta", c.model.delta},
                  {"p", c.p},
                  {"l_max", c.model.l_max},
                  {"mc_samples", c.model.mc_samples}};
    j["sampler"] = {{"beta", c.chain.beta},
                    {"iterations", c.chain.iterations},
                    {"burn_in", c.chain.burn_in},
                    {"thinning", c.chain.thinning},
                    {"replicates", c.replicates}};
    j["regularity"] = {{"s_grid", c.s_grid}, {"draws", c.draws}};
    j["comparison"] = {{"interpolation_k", c.interpolation_k},
                       {"grid_points", c.grid_points},
                       {"grid_seed", c.grid_seed}};
    return j;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) { return to_json(a) == to_json(b); }

}  // namespace gbssl::cli
