#include "gbssl/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gbssl {

NoiseModel::NoiseModel(NoiseKind kind_, double sigma_) : kind(kind_), sigma(sigma_) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("noise model: sigma must be positive and finite");
}

std::string to_string(NoiseKind kind) { return kind == NoiseKind::gaussian ? "gaussian" : "probit"; }

NoiseKind noise_kind_from_string(const std::string& name) {
    if (name == "gaussian") return NoiseKind::gaussian;
    if (name == "probit") return NoiseKind::probit;
    throw std::invalid_argument("unknown noise kind '" + name + "' (expected gaussian or probit)");
}

void LabeledData::validate() const {
    if (y.size() != design.size())
        throw std::invalid_argument("labels: " + std::to_string(y.size()) + " values for " +
                                    std::to_string(design.size()) + " labeled points");
    if (model.kind == NoiseKind::probit)
        for (Index i = 0; i < y.size(); ++i)
            if (y[i] != 1.0 && y[i] != -1.0)
                throw std::invalid_argument("probit labels must be exactly +1 or -1");
}

namespace {

// Mills ratio Psi(-x) / phi(x) for x >= 8 by its continued fraction
// 1 / (x + 1 / (x + 2 / (x + 3 / ...))), evaluated backward.
double mills_ratio(double x) {
    double tail = x;
    for (int k = 60; k >= 1; --k) tail = x + k / tail;
    return 1.0 / tail;
}

}  // namespace

double log_normal_cdf(double z) {
    if (std::isnan(z)) return z;
    if (z >= -8.0) {
        const double upper = 0.5 * std::erfc(z / std::numbers::sqrt2);
        if (z > 0.0) return std::log1p(-upper);
        return std::log(0.5 * std::erfc(-z / std::numbers::sqrt2));
    }
    if (std::isinf(z)) return -std::numeric_limits<double>::infinity();
    return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(mills_ratio(-z));
}

double potential(const Vector& w, const Vector& y, const NoiseModel& model) {
    if (w.size() != y.size())
        throw std::invalid_argument("potential: " + std::to_string(w.size()) + " predictions for " +
                                    std::to_string(y.size()) + " labels");
    if (model.kind == NoiseKind::gaussian)
        return (y - w).squaredNorm() / (2.0 * model.sigma * model.sigma);
    double total = 0.0;
    for (Index i = 0; i < y.size(); ++i) total -= log_normal_cdf(y[i] * w[i] / model.sigma);
    return total;
}

LinearPotential::LinearPotential(Matrix forward, Vector y, NoiseModel model)
    : forward_(std::move(forward)), y_(std::move(y)), model_(model) {
    if (forward_.rows() != y_.size()) throw std::invalid_argument("LinearPotential: forward/label mismatch");
}

double LinearPotential::operator()(const Vector& coeffs) const {
    if (coeffs.size() != forward_.cols()) throw std::invalid_argument("LinearPotential: wrong coefficient count");
    return potential(forward_ * coeffs, y_, model_);
}

double full_potential(const CloudFunction& u, const SpectralBasis& basis, const PointCloud& cloud,
                      const LabeledData& data) {
    return potential(forward_observe(u, basis, data.t, data.design, cloud), data.y, data.model);
}

double full_potential_continuum(const Vector& coeffs, const ContinuumBasis& cont, const PointCloud& cloud,
                                const LabeledData& data, int samples, std::uint64_t seed) {
    const auto obs = forward_observe_continuum(coeffs, cont, data.t, data.design, cloud, samples, seed);
    return potential(obs.values, data.y, data.model);
}

LabeledData synthesize_labels(const Vector& clean, const ObservationDesign& design, double t,
                              const NoiseModel& model, std::uint64_t seed) {
    if (clean.size() != design.size()) throw std::invalid_argument("synthesize: observation size mismatch");
    Rng rng(seed);
    const Vector eta = model.sigma * standard_normal(rng, clean.size());
    LabeledData data;
    data.design = design;
    data.t = t;
    data.model = model;
    data.seed = seed;
    data.y = clean + eta;
    if (model.kind == NoiseKind::probit)
        for (Index i = 0; i < data.y.size(); ++i) data.y[i] = data.y[i] >= 0.0 ? 1.0 : -1.0;
    return data;
}

LabeledData synthesize_data(const CloudFunction& truth, const SpectralBasis& basis, const PointCloud& cloud,
                            double t, const ObservationDesign& design, const NoiseModel& model,
                            std::uint64_t seed) {
    return synthesize_labels(forward_observe(truth, basis, t, design, cloud), design, t, model, seed);
}

LabeledData synthesize_data_continuum(const Vector& coeffs, const ContinuumBasis& cont, const PointCloud& cloud,
                                      double t, const ObservationDesign& design, const NoiseModel& model,
                                      std::uint64_t seed, int samples) {
    const auto obs = forward_observe_continuum(coeffs, cont, t, design, cloud, samples, seed);
    return synthesize_labels(obs.values, design, t, model, seed);
}

namespace {

Vector random_direction(Rng& rng, Index p) {
    Vector d;
    do {
        d = standard_normal(rng, p);
    } while (d.norm() == 0.0);
    return d / d.norm();
}

}  // namespace

AssumptionReport check_assumptions(const NoiseModel& model, const Vector& y, double beta,
                                   const std::vector<double>& K_grid, const std::vector<double>& v_grid,
                                   int samples, std::uint64_t seed) {
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("check_assumptions: beta must lie in (0, 1]");
    if (y.size() < 1) throw std::invalid_argument("check_assumptions: need at least one label");
    if (samples < 1) throw std::invalid_argument("check_assumptions: samples must be >= 1");
    const Index p = y.size();
    const double rho = std::sqrt(1.0 - beta * beta);
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    AssumptionReport report;
    report.radii = v_grid;

    for (double K : K_grid) {
        double worst = std::numeric_limits<double>::infinity();
        for (double r : v_grid) {
            for (int s = 0; s < samples; ++s) {
                const Vector v = r * random_direction(rng, p);
                // Uniform radius in the K-ball is enough to probe the boundary and the interior.
                const Vector w = rho * v + K * unit(rng) * random_direction(rng, p);
                worst = std::min(worst, potential(v, y, model) - potential(w, y, model));
            }
        }
        double bound = -std::numeric_limits<double>::infinity();
        if (model.kind == NoiseKind::probit)
            bound = static_cast<double>(p) *
                    log_normal_cdf(-(1.0 / (1.0 - rho) + 1.0) * K / model.sigma);
        report.K.push_back(K);
        report.c.push_back(worst);
        report.c_bound.push_back(bound);
        if (!std::isfinite(worst))
            report.violations.push_back("part 1: no finite lower bound found at K=" + std::to_string(K));
        else if (worst < bound - 1e-9 * (1.0 + std::abs(bound)))
            report.violations.push_back("part 1: difference below the analytic bound at K=" + std::to_string(K));
    }

    for (double r : v_grid) {
        double worst = 0.0;
        for (int s = 0; s < samples; ++s) {
            const Vector v1 = r * random_direction(rng, p);
            const Vector v2 = v1 + (r + 1.0) * unit(rng) * random_direction(rng, p);
            const double gap = (v1 - v2).norm();
            if (gap == 0.0) continue;
            const double scale = std::max({v1.norm(), v2.norm(), 1.0});
            worst = std::max(worst, std::abs(potential(v1, y, model) - potential(v2, y, model)) / (scale * gap));
        }
        report.ratio_by_radius.push_back(worst);
        report.lipschitz = std::max(report.lipschitz, worst);
    }

    report.part1_ok = std::all_of(report.c.begin(), report.c.end(), [](double c) { return std::isfinite(c); });
    report.part2_ok = std::isfinite(report.lipschitz);
    if (report.ratio_by_radius.size() > 1) {
        const auto largest = std::max_element(v_grid.begin(), v_grid.end()) - v_grid.begin();
        double others = 0.0;
        for (std::size_t i = 0; i < report.ratio_by_radius.size(); ++i)
            if (static_cast<std::ptrdiff_t>(i) != largest) others = std::max(others, report.ratio_by_radius[i]);
        if (report.ratio_by_radius[largest] > 2.0 * others) {
            report.part2_ok = false;
            report.violations.push_back("part 2: ratio still growing at the largest radius");
        }
    }
    if (!report.part2_ok && report.violations.empty())
        report.violations.push_back("part 2: non-finite Lipschitz ratio");
    for (std::size_t i = 0; i < report.c.size(); ++i)
        if (report.c[i] < report.c_bound[i] - 1e-9 * (1.0 + std::abs(report.c_bound[i]))) report.part1_ok = false;
    return report;
}

namespace {

std::filesystem::path sidecar(const std::filesystem::path& path) {
    return std::filesystem::path(path.string() + ".json");
}

}  // namespace

void save_labels(const LabeledData& data, const std::filesystem::path& path) {
    data.validate();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "index,y\n" << std::setprecision(17);
    for (Index j = 0; j < data.y.size(); ++j) out << data.design.labeled[j] << ',' << data.y[j] << '\n';
    if (!out) throw std::runtime_error("write failed for " + path.string());

    nlohmann::json meta;
    meta["noise"] = to_string(data.model.kind);
    meta["sigma"] = data.model.sigma;
    meta["t"] = data.t;
    meta["mode"] = data.design.mode == ObservationMode::pointwise ? "pointwise" : "ball_average";
    meta["delta"] = data.design.delta;
    meta["seed"] = data.seed ? nlohmann::json(*data.seed) : nlohmann::json(nullptr);
    std::ofstream side(sidecar(path));
    if (!side) throw std::runtime_error("cannot open " + sidecar(path).string() + " for writing");
    side << meta.dump(2) << '\n';
}

LabeledData load_labels(const std::filesystem::path& path) {
    std::ifstream side(sidecar(path));
    if (!side) throw std::runtime_error("missing label sidecar " + sidecar(path).string());
    const nlohmann::json meta = nlohmann::json::parse(side);

    LabeledData data;
    data.model = NoiseModel(noise_kind_from_string(meta.at("noise").get<std::string>()),
                            meta.at("sigma").get<double>());
    data.t = meta.at("t").get<double>();
    const auto mode = meta.at("mode").get<std::string>();
    if (mode == "pointwise")
        data.design.mode = ObservationMode::pointwise;
    else if (mode == "ball_average")
        data.design.mode = ObservationMode::ball_average;
    else
        throw std::invalid_argument("unknown observation mode '" + mode + "'");
    data.design.delta = meta.at("delta").get<double>();
    if (!meta.at("seed").is_null()) data.seed = meta.at("seed").get<std::uint64_t>();

    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    if (line != "index,y") throw CsvParseError(1, "expected header 'index,y'");
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw CsvParseError(line_no, "expected 'index,y'");
        try {
            std::size_t used = 0;
            const long long index = std::stoll(line.substr(0, comma), &used);
            if (used != comma) throw std::invalid_argument("index");
            data.design.labeled.push_back(static_cast<Index>(index));
            values.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::logic_error&) {
            throw CsvParseError(line_no, "malformed label row '" + line + "'");
        }
    }
    data.y = Eigen::Map<Vector>(values.data(), static_cast<Index>(values.size()));
    data.validate();
    return data;
}

}  // namespace gbssl
