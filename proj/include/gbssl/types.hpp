#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace gbssl {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Rng = std::mt19937_64;

/// Seed for the i-th independent stream below a root seed.
/// Batches (prior draws, replicate chains, sweep points) use root + i.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t i) { return root + i; }

/// Seed of a named stream (noise, chain, ...) under a root seed, mixed with
/// splitmix64 so that streams of neighbouring roots do not coincide.
constexpr std::uint64_t stream_seed(std::uint64_t root, std::uint64_t stream) {
    std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Vector standard_normal(Rng& rng, Index k) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector z(k);
    for (Index i = 0; i < k; ++i) z[i] = normal(rng);
    return z;
}

}  // namespace gbssl
