#include <doctest.h>

#include "gbssl/sphere.hpp"
#include "helpers.hpp"

using namespace gbssl;

TEST_SUITE("sphere") {

TEST_CASE("eigenvalues and multiplicities") {
    CHECK(sphere_eigenvalue(0) == std::pair<double, int>{0.0, 1});
    CHECK(sphere_eigenvalue(1) == std::pair<double, int>{2.0, 3});
    CHECK(sphere_eigenvalue(3) == std::pair<double, int>{12.0, 7});
}

TEST_CASE("degree zero harmonic is one") {
    const auto pts = sample_sphere(20, 1);
    for (Index i = 0; i < 20; ++i) CHECK(sphere_harmonic(0, 0, pts.point(i).transpose()) == doctest::Approx(1.0));
}

TEST_CASE("addition theorem") {
    const auto pts = sample_sphere(30, 2);
    for (int l = 0; l <= 8; ++l)
        for (Index i = 0; i < 30; ++i) {
            double sum = 0.0;
            for (int m = -l; m <= l; ++m) sum += std::pow(sphere_harmonic(l, m, pts.point(i).transpose()), 2);
            CHECK(sum == doctest::Approx(2.0 * l + 1.0).epsilon(1e-10));
        }
}

TEST_CASE("low-order harmonics match closed forms") {
    const Eigen::Vector3d x(0.48, -0.6, 0.64);
    CHECK(sphere_harmonic(1, 0, x) == doctest::Approx(std::sqrt(3.0) * 0.64));
    CHECK(sphere_harmonic(1, 1, x) == doctest::Approx(std::sqrt(3.0) * 0.48));
    CHECK(sphere_harmonic(1, -1, x) == doctest::Approx(std::sqrt(3.0) * -0.6));
    // sqrt(15) x z with the 4 pi scaling
    CHECK(sphere_harmonic(2, 1, x) == doctest::Approx(std::sqrt(15.0) * 0.48 * 0.64));
    CHECK(sphere_harmonic(2, 0, x) == doctest::Approx(std::sqrt(5.0) * 0.5 * (3 * 0.64 * 0.64 - 1)));
}

TEST_CASE("Monte Carlo orthonormality") {
    const Index n = 100'000;
    const auto pts = sample_sphere(n, 3);
    const ContinuumBasis cont(3);
    const Matrix values = cont.evaluate(pts.points());
    for (Index a = 0; a < cont.size(); ++a)
        for (Index b = a; b < cont.size(); ++b) {
            const Eigen::ArrayXd prod = values.col(a).array() * values.col(b).array();
            const double mean = prod.mean();
            const double se = std::sqrt((prod - mean).square().mean() / double(n));
            CHECK(std::abs(mean - (a == b ? 1.0 : 0.0)) <= 5.0 * se);
        }
}

TEST_CASE("off-sphere points and bad orders are rejected") {
    CHECK_THROWS_AS(sphere_harmonic(1, 0, Eigen::Vector3d(1.0, 1.0, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(sphere_harmonic(1, 2, Eigen::Vector3d(0.0, 0.0, 1.0)), std::invalid_argument);
    CHECK_THROWS(sphere_eigenvalue(-1));
}

TEST_CASE("continuum basis layout") {
    const ContinuumBasis cont(3);
    CHECK(cont.size() == 16);
    CHECK(ContinuumBasis::flat_index(2, 1) == 7);
    CHECK(cont.labels()[7].degree == 2);
    CHECK(cont.labels()[7].order == 1);
    CHECK(cont.eigenvalues()[7] == 6.0);
    const Eigen::Vector3d x(0.0, 0.6, 0.8);
    const Vector row = cont.evaluate(x);
    CHECK(row[ContinuumBasis::flat_index(1, 0)] == doctest::Approx(sphere_harmonic(1, 0, x)));
    Vector c = Vector::Zero(16);
    c[0] = 2.0;
    c[2] = 1.0;
    RowMatrix p(1, 3);
    p.row(0) = x.transpose();
    CHECK(cont.synthesize(c, p)[0] == doctest::Approx(2.0 + std::sqrt(3.0) * 0.8));
}

}
