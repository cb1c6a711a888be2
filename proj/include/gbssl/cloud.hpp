#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gbssl/types.hpp"

namespace gbssl {

/// Raised by load_csv; carries the 1-based line number of the offending row.
class CsvParseError : public std::runtime_error {
public:
    CsvParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// n points in R^d sampled from an m-dimensional manifold. Immutable.
class PointCloud {
public:
    PointCloud(RowMatrix points, int intrinsic_dim, std::optional<std::uint64_t> seed = {});

    Index size() const noexcept { return points_.rows(); }
    Index ambient_dim() const noexcept { return points_.cols(); }
    int intrinsic_dim() const noexcept { return intrinsic_dim_; }
    const RowMatrix& points() const noexcept { return points_; }
    auto point(Index i) const { return points_.row(i); }
    std::optional<std::uint64_t> seed() const noexcept { return seed_; }

    /// Rows reordered so that row r of the result is row order[r] of this cloud.
    PointCloud permuted(const std::vector<Index>& order) const;

private:
    RowMatrix points_;
    int intrinsic_dim_;
    std::optional<std::uint64_t> seed_;
};

/// n i.i.d. uniform points on the unit sphere S^2 in R^3 (normalized Gaussian
/// draws). Rows are generated sequentially, so clouds with the same seed share
/// their leading rows regardless of n.
PointCloud sample_sphere(Index n, std::uint64_t seed);

/// Indices j with |x_i - x_j| <= eps, i included, ascending. Brute force.
std::vector<Index> neighbors_within(const PointCloud& cloud, Index i, double eps);

/// The k cloud points nearest to `query`, nearest first, ties by lower index.
std::vector<Index> knn(const PointCloud& cloud, const Eigen::Ref<const Vector>& query, Index k);

/// CSV form: header `# d=<d> m=<m>`, then one comma-separated point per line.
void save_csv(const PointCloud& cloud, const std::filesystem::path& path);
PointCloud load_csv(const std::filesystem::path& path);

}  // namespace gbssl
