#include "gbssl/cloud.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "gbssl/kernels.hpp"

namespace gbssl {

PointCloud::PointCloud(RowMatrix points, int intrinsic_dim, std::optional<std::uint64_t> seed)
    : points_(std::move(points)), intrinsic_dim_(intrinsic_dim), seed_(seed) {
    if (points_.rows() < 1) throw std::invalid_argument("point cloud must contain at least one point");
    if (points_.cols() < 1) throw std::invalid_argument("point cloud must have ambient dimension >= 1");
    if (intrinsic_dim_ < 1 || intrinsic_dim_ > points_.cols())
        throw std::invalid_argument("intrinsic dimension must satisfy 1 <= m <= d");
    if (!points_.allFinite()) throw std::invalid_argument("point coordinates must be finite");
}

PointCloud PointCloud::permuted(const std::vector<Index>& order) const {
    if (static_cast<Index>(order.size()) != size())
        throw std::invalid_argument("permutation length does not match cloud size");
    RowMatrix out(size(), ambient_dim());
    for (Index r = 0; r < size(); ++r) out.row(r) = points_.row(order[r]);
    return PointCloud(std::move(out), intrinsic_dim_);
}

PointCloud sample_sphere(Index n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_sphere: n must be positive");
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    RowMatrix pts(n, 3);
    for (Index i = 0; i < n; ++i) {
        double norm = 0.0;
        do {
            for (Index c = 0; c < 3; ++c) pts(i, c) = normal(rng);
            norm = pts.row(i).norm();
        } while (norm < 1e-12);
        pts.row(i) /= norm;
    }
    return PointCloud(std::move(pts), 2, seed);
}

std::vector<Index> neighbors_within(const PointCloud& cloud, Index i, double eps) {
    if (i < 0 || i >= cloud.size())
        throw std::out_of_range("neighbors_within: index " + std::to_string(i) + " out of range");
    if (!(eps > 0.0)) throw std::invalid_argument("neighbors_within: eps must be positive");
    const double eps2 = eps * eps;
    std::vector<Index> out;
    for (Index j = 0; j < cloud.size(); ++j)
        if ((cloud.point(i) - cloud.point(j)).squaredNorm() <= eps2) out.push_back(j);
    return out;
}

std::vector<Index> knn(const PointCloud& cloud, const Eigen::Ref<const Vector>& query, Index k) {
    if (query.size() != cloud.ambient_dim())
        throw std::invalid_argument("knn: query dimension does not match cloud");
    RowMatrix q = query.transpose();
    return kernels::knn_batch(cloud.points(), q, k).front();
}

void save_csv(const PointCloud& cloud, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "# d=" << cloud.ambient_dim() << " m=" << cloud.intrinsic_dim() << '\n';
    out << std::setprecision(17);
    for (Index i = 0; i < cloud.size(); ++i) {
        for (Index c = 0; c < cloud.ambient_dim(); ++c) {
            if (c) out << ',';
            out << cloud.points()(i, c);
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

namespace {

double parse_number(const std::string& token, std::size_t line) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        throw CsvParseError(line, "non-numeric token '" + token + "'");
    }
    while (used < token.size() && std::isspace(static_cast<unsigned char>(token[used]))) ++used;
    if (used != token.size()) throw CsvParseError(line, "non-numeric token '" + token + "'");
    return value;
}

}  // namespace

PointCloud load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string header;
    if (!std::getline(in, header)) throw CsvParseError(1, "empty file");
    int d = 0, m = 0;
    if (std::sscanf(header.c_str(), "# d=%d m=%d", &d, &m) != 2 || d < 1 || m < 1)
        throw CsvParseError(1, "expected header '# d=<d> m=<m>'");

    std::vector<double> values;
    std::string line;
    std::size_t lineno = 1;
    Index rows = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::stringstream ss(line);
        std::string token;
        int width = 0;
        while (std::getline(ss, token, ',')) {
            values.push_back(parse_number(token, lineno));
            ++width;
        }
        if (width != d)
            throw CsvParseError(lineno, "expected " + std::to_string(d) + " columns, found " +
                                            std::to_string(width));
        ++rows;
    }
    if (rows == 0) throw CsvParseError(lineno, "no points after header");
    RowMatrix pts = Eigen::Map<RowMatrix>(values.data(), rows, d);
    return PointCloud(std::move(pts), m);
}

}  // namespace gbssl
