#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "gbssl/spectral.hpp"
#include "gbssl/sphere.hpp"
#include "helpers.hpp"

using namespace gbssl;

namespace {

GraphLaplacian sphere_laplacian(Index n, std::uint64_t seed, double multiplier = 2.0) {
    const auto cloud = sample_sphere(n, seed);
    return laplacian(build_eps_graph(cloud, default_eps(n, 2, multiplier)), sphere_calibration(n));
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("connected graph has a constant first eigenvector") {
    const auto lap = sphere_laplacian(300, 1);
    const auto basis = eigendecompose(lap, 5);
    CHECK(std::abs(basis.eigenvalues[0]) <= 1e-8);
    CHECK((basis.eigenvectors.col(0).array() - 1.0).abs().maxCoeff() <= 1e-8);
}

TEST_CASE("two-node graph") {
    RowMatrix pts(2, 2);
    pts << 0.0, 0.0, 0.1, 0.0;
    const auto g = build_eps_graph(PointCloud(pts, 1), 0.2);
    const auto basis = eigendecompose(laplacian(g), 2);
    CHECK(std::abs(basis.eigenvalues[0]) <= 1e-12 * g.weight);
    CHECK(basis.eigenvalues[1] == doctest::Approx(2.0 * g.weight));
    CHECK_THROWS(eigendecompose(laplacian(g), 3));
}

TEST_CASE("eigenvectors are orthonormal in the empirical measure with fixed signs") {
    const auto basis = eigendecompose(sphere_laplacian(400, 2), 12);
    const Matrix gram = basis.eigenvectors.transpose() * basis.eigenvectors / 400.0;
    CHECK((gram - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff() <= 1e-10);
    for (Index c = 0; c < 12; ++c) {
        Index at;
        basis.eigenvectors.col(c).cwiseAbs().maxCoeff(&at);
        CHECK(basis.eigenvectors(at, c) > 0.0);
    }
    for (Index i = 1; i < 12; ++i) CHECK(basis.eigenvalues[i] >= basis.eigenvalues[i - 1]);
}

TEST_CASE("Rayleigh quotients reproduce the eigenvalues") {
    const auto lap = sphere_laplacian(400, 3);
    const auto basis = eigendecompose(lap, 10);
    for (Index i = 1; i < 10; ++i) {
        const Vector psi = basis.eigenvectors.col(i);
        const double rq = psi.dot(lap.matrix * psi) / psi.squaredNorm();
        CHECK(std::abs(rq - basis.eigenvalues[i]) <= 1e-8 * basis.eigenvalues[i]);
    }
    CHECK(max_relative_residual(lap, basis) <= 1e-8);
}

TEST_CASE("iterative solver matches the dense one") {
    for (Index n : {150, 200}) {
        const auto lap = sphere_laplacian(n, 4);
        const auto dense = eigendecompose(lap, 9, EigenMethod::dense);
        const auto iter = eigendecompose(lap, 9, EigenMethod::iterative);
        for (Index i = 0; i < 9; ++i)
            CHECK(std::abs(dense.eigenvalues[i] - iter.eigenvalues[i]) <= 1e-8 * std::max(1.0, dense.eigenvalues[i]));
        // Compare spectral projectors, which do not depend on the basis chosen
        // inside a repeated eigenvalue cluster. Only full clusters are used.
        const Matrix pd = dense.eigenvectors.leftCols(4) * dense.eigenvectors.leftCols(4).transpose() / double(n);
        const Matrix pi = iter.eigenvectors.leftCols(4) * iter.eigenvectors.leftCols(4).transpose() / double(n);
        if (dense.eigenvalues[4] - dense.eigenvalues[3] > 1e-3 * dense.eigenvalues[3])
            CHECK((pd - pi).cwiseAbs().maxCoeff() <= 1e-6);
    }
}

TEST_CASE("dense solver agrees with a full symmetric eigendecomposition") {
    const auto lap = sphere_laplacian(150, 5);
    Eigen::SelfAdjointEigenSolver<Matrix> full(Matrix(lap.matrix));
    const auto basis = eigendecompose(lap, 20);
    for (Index i = 0; i < 20; ++i)
        CHECK(std::abs(basis.eigenvalues[i] - full.eigenvalues()[i]) <= 1e-8 * std::max(1.0, full.eigenvalues()[i]));
}

TEST_CASE("eigenvalues do not depend on the point order") {
    const auto cloud = sample_sphere(300, 6);
    std::vector<Index> order(300);
    std::iota(order.begin(), order.end(), 0);
    std::reverse(order.begin(), order.end());
    std::swap(order[5], order[200]);
    const double eps = default_eps(300, 2, 2.0);
    const auto a = eigendecompose(laplacian(build_eps_graph(cloud, eps)), 10);
    const auto b = eigendecompose(laplacian(build_eps_graph(cloud.permuted(order), eps)), 10);
    for (Index i = 0; i < 10; ++i)
        CHECK(std::abs(a.eigenvalues[i] - b.eigenvalues[i]) <= 1e-9 * std::max(1.0, a.eigenvalues[9]));
}

TEST_CASE("sphere spectrum clusters near l(l+1)") {
    const auto basis = eigendecompose(sphere_laplacian(1000, 0), 9);
    // compared cluster by cluster, never vector by vector
    const double l1 = basis.eigenvalues.segment(1, 3).mean();
    const double l2 = basis.eigenvalues.segment(4, 5).mean();
    CHECK(std::abs(l1 / 2.0 - 1.0) <= 0.15);
    CHECK(std::abs(l2 / 6.0 - 1.0) <= 0.15);
    CHECK(basis.eigenvalues[3] < basis.eigenvalues[4]);
    for (Index i = 1; i < 4; ++i) CHECK(std::abs(basis.eigenvalues[i] / 2.0 - 1.0) <= 0.3);
    for (Index i = 4; i < 9; ++i) CHECK(std::abs(basis.eigenvalues[i] / 6.0 - 1.0) <= 0.3);
}

TEST_CASE("sign normalization breaks ties by lowest index") {
    Matrix v(3, 2);
    v << -1.0, 0.5, 1.0, -2.0, 0.2, 1.0;
    normalize_signs(v);
    CHECK(v(0, 0) == 1.0);
    CHECK(v(1, 0) == -1.0);
    CHECK(v(1, 1) == 2.0);
}

TEST_CASE("spectral errors") {
    Vector ref(4), same(4), scaled(4);
    ref << 0.0, 2.0, 2.0, 6.0;
    same = ref;
    scaled = 1.1 * ref;
    for (double e : spectral_error(same, ref, 4)) CHECK(e == 0.0);
    const auto errs = spectral_error(scaled, ref, 4);
    CHECK(errs.size() == 3);
    for (double e : errs) CHECK(e == doctest::Approx(0.1));
}

TEST_CASE("spectra csv") {
    Vector a(2), b(2);
    a << 0.0, 2.1;
    b << 0.0, 2.0;
    std::ostringstream out;
    write_spectra_csv(out, a, b);
    CHECK(out.str().rfind("index,graph,continuum\n", 0) == 0);
    CHECK(out.str().find("\n2,") != std::string::npos);
}

}
