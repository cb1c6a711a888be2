#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "gbssl/cloud.hpp"

namespace test {

/// n points uniform in the unit cube of R^d (intrinsic dimension d).
inline gbssl::PointCloud cube_cloud(gbssl::Index n, int d, std::uint64_t seed) {
    gbssl::Rng rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    gbssl::RowMatrix pts(n, d);
    for (gbssl::Index i = 0; i < n; ++i)
        for (int c = 0; c < d; ++c) pts(i, c) = u(rng);
    return gbssl::PointCloud(pts, d);
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("gbssl_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace test
