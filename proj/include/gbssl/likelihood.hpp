#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gbssl/forward.hpp"

namespace gbssl {

enum class NoiseKind { gaussian, probit };

/// Observation noise N(0, sigma^2). For probit, sigma is the standard
/// deviation inside the CDF: Psi(r; sigma) = Psi_std(r / sigma).
struct NoiseModel {
    NoiseKind kind = NoiseKind::gaussian;
    double sigma = 0.1;

    NoiseModel(NoiseKind kind, double sigma);
};

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

/// Labels together with how they were produced.
struct LabeledData {
    Vector y;
    ObservationDesign design;
    double t = 0.0;
    NoiseModel model{NoiseKind::gaussian, 0.1};
    std::optional<std::uint64_t> seed;

    /// Throws unless y matches the design and probit labels are exactly +-1.
    void validate() const;
};

/// log of the standard normal CDF. Uses erfc down to z = -8 and the
/// continued fraction for the Mills ratio below, so it stays finite (about
/// -z^2/2) far into the left tail.
double log_normal_cdf(double z);

/// phi^y(w): |y - w|^2 / (2 sigma^2) for gaussian, -sum log Psi(y_i w_i; sigma)
/// for probit.
double potential(const Vector& w, const Vector& y, const NoiseModel& model);

/// phi^y(M a) for a fixed p x k forward matrix; the pCN target in
/// coefficient space.
class LinearPotential {
public:
    LinearPotential(Matrix forward, Vector y, NoiseModel model);

    double operator()(const Vector& coeffs) const;
    const Matrix& forward() const noexcept { return forward_; }

private:
    Matrix forward_;
    Vector y_;
    NoiseModel model_;
};

/// Phi_n(u) = phi^y(G_n u) with G_n = O_n exp(-t L) from the data's design.
double full_potential(const CloudFunction& u, const SpectralBasis& basis, const PointCloud& cloud,
                      const LabeledData& data);

/// Phi(u) for a harmonic expansion. Ball averages use the Monte Carlo cap
/// estimate with the given sample count and seed.
double full_potential_continuum(const Vector& coeffs, const ContinuumBasis& cont,
                                const PointCloud& cloud, const LabeledData& data,
                                int samples = 10'000, std::uint64_t seed = 0);

/// y = G(u) + eta (gaussian) or y = sign(G(u) + eta) (probit, 0 -> +1).
LabeledData synthesize_labels(const Vector& clean, const ObservationDesign& design, double t,
                              const NoiseModel& model, std::uint64_t seed);

LabeledData synthesize_data(const CloudFunction& truth, const SpectralBasis& basis,
                            const PointCloud& cloud, double t, const ObservationDesign& design,
                            const NoiseModel& model, std::uint64_t seed);

LabeledData synthesize_data_continuum(const Vector& coeffs, const ContinuumBasis& cont,
                                      const PointCloud& cloud, double t,
                                      const ObservationDesign& design, const NoiseModel& model,
                                      std::uint64_t seed, int samples = 10'000);

/// Randomized check of the two growth conditions on phi^y.
struct AssumptionReport {
    // Part 1: smallest observed phi(v) - phi(w) with |w - sqrt(1 - beta^2) v| <= K.
    std::vector<double> K;
    std::vector<double> c;
    std::vector<double> c_bound;  // analytic lower bound (probit only, else -inf)
    // Part 2: largest |phi(v1) - phi(v2)| / (max(|v1|, |v2|, 1) |v1 - v2|).
    std::vector<double> radii;
    std::vector<double> ratio_by_radius;
    double lipschitz = 0.0;
    bool part1_ok = false;
    bool part2_ok = false;
    std::vector<std::string> violations;
};

AssumptionReport check_assumptions(const NoiseModel& model, const Vector& y, double beta,
                                   const std::vector<double>& K_grid,
                                   const std::vector<double>& v_grid, int samples = 2000,
                                   std::uint64_t seed = 0);

/// `index,y` rows (cloud index of each label) plus a JSON sidecar at
/// `<path>.json` with noise kind, sigma, t, observation mode, delta and seed.
void save_labels(const LabeledData& data, const std::filesystem::path& path);
LabeledData load_labels(const std::filesystem::path& path);

}  // namespace gbssl
