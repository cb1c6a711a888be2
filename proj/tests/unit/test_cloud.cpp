#include <doctest.h>

#include <algorithm>
#include <fstream>

#include "gbssl/cloud.hpp"
#include "helpers.hpp"

using namespace gbssl;

TEST_SUITE("cloud") {

TEST_CASE("sphere samples have unit norm and are reproducible") {
    const auto a = sample_sphere(5, 7);
    CHECK(a.size() == 5);
    CHECK(a.ambient_dim() == 3);
    CHECK(a.intrinsic_dim() == 2);
    for (Index i = 0; i < 5; ++i) CHECK(std::abs(a.point(i).norm() - 1.0) <= 1e-12);
    const auto b = sample_sphere(5, 7);
    CHECK(a.points() == b.points());
    CHECK(a.seed() == std::optional<std::uint64_t>(7));
    CHECK_THROWS_AS(sample_sphere(0, 1), std::invalid_argument);
}

TEST_CASE("sphere samples share leading rows across n") {
    const auto small = sample_sphere(10, 3);
    const auto large = sample_sphere(50, 3);
    CHECK(small.points() == large.points().topRows(10));
}

TEST_CASE("sphere sample moments") {
    const Index n = 100'000;
    const auto c = sample_sphere(n, 1);
    const double nn = static_cast<double>(n);
    for (int d = 0; d < 3; ++d) {
        const auto col = c.points().col(d);
        CHECK(std::abs(col.mean()) <= 4.0 / std::sqrt(nn));
        // x^2 has variance 4/45 under the uniform sphere measure.
        const double second = col.array().square().mean();
        CHECK(std::abs(second - 1.0 / 3.0) <= 5.0 * std::sqrt(4.0 / 45.0 / nn));
    }
}

TEST_CASE("point cloud validation") {
    RowMatrix pts(2, 3);
    pts << 0, 0, 0, 1, 1, 1;
    CHECK_THROWS_AS(PointCloud(pts, 4), std::invalid_argument);
    CHECK_THROWS_AS(PointCloud(RowMatrix(0, 3), 2), std::invalid_argument);
    pts(0, 0) = std::nan("");
    CHECK_THROWS_AS(PointCloud(pts, 2), std::invalid_argument);
}

TEST_CASE("neighbors_within edge cases") {
    const auto c = test::cube_cloud(20, 3, 5);
    auto all = neighbors_within(c, 3, 10.0);
    CHECK(all.size() == 20);
    CHECK(std::is_sorted(all.begin(), all.end()));
    CHECK(neighbors_within(c, 3, 1e-9) == std::vector<Index>{3});
    CHECK_THROWS_AS(neighbors_within(c, 20, 0.5), std::out_of_range);
    CHECK_THROWS_AS(neighbors_within(c, -1, 0.5), std::out_of_range);
    CHECK_THROWS_AS(neighbors_within(c, 0, 0.0), std::invalid_argument);
}

TEST_CASE("neighbors_within matches an exhaustive scan and is symmetric") {
    const auto c = test::cube_cloud(20, 3, 9);
    for (Index i = 0; i < 20; ++i) {
        std::vector<Index> expected;
        for (Index j = 0; j < 20; ++j)
            if ((c.point(i) - c.point(j)).norm() <= 0.5) expected.push_back(j);
        const auto got = neighbors_within(c, i, 0.5);
        CHECK(got == expected);
        CHECK(std::find(got.begin(), got.end(), i) != got.end());
        for (Index j : got) {
            const auto back = neighbors_within(c, j, 0.5);
            CHECK(std::find(back.begin(), back.end(), i) != back.end());
        }
    }
}

TEST_CASE("knn basics") {
    const auto c = test::cube_cloud(30, 3, 2);
    CHECK(knn(c, c.point(4).transpose(), 1) == std::vector<Index>{4});
    auto all = knn(c, c.point(0).transpose(), 30);
    std::sort(all.begin(), all.end());
    for (Index i = 0; i < 30; ++i) CHECK(all[i] == i);
    CHECK_THROWS_AS(knn(c, c.point(0).transpose(), 31), std::invalid_argument);
    CHECK_THROWS_AS(knn(c, c.point(0).transpose(), 0), std::invalid_argument);
}

TEST_CASE("knn matches a full sort of distances") {
    const auto c = test::cube_cloud(30, 3, 8);
    Rng rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const Vector q = standard_normal(rng, 3);
        std::vector<std::pair<double, Index>> d;
        for (Index j = 0; j < 30; ++j) d.emplace_back((c.point(j).transpose() - q).squaredNorm(), j);
        std::sort(d.begin(), d.end());
        const auto got = knn(c, q, 4);
        for (int r = 0; r < 4; ++r) CHECK(got[r] == d[r].second);
        for (int r = 1; r < 4; ++r)
            CHECK((c.point(got[r]).transpose() - q).norm() >= (c.point(got[r - 1]).transpose() - q).norm());
    }
}

TEST_CASE("knn breaks ties by lower index") {
    RowMatrix pts(3, 1);
    pts << 1.0, -1.0, 1.0;
    const PointCloud c(pts, 1);
    Vector q = Vector::Zero(1);
    CHECK(knn(c, q, 2) == std::vector<Index>{0, 1});
}

TEST_CASE("csv round trip") {
    const auto dir = test::scratch_dir("cloud_csv");
    const auto c = sample_sphere(25, 11);
    save_csv(c, dir / "c.csv");
    const auto back = load_csv(dir / "c.csv");
    CHECK(back.points() == c.points());
    CHECK(back.intrinsic_dim() == 2);
}

TEST_CASE("csv errors name the line") {
    const auto dir = test::scratch_dir("cloud_csv_err");
    { std::ofstream(dir / "empty.csv"); }
    CHECK_THROWS_AS(load_csv(dir / "empty.csv"), CsvParseError);
    { std::ofstream(dir / "bad.csv") << "# d=2 m=1\n1.0,2.0\n3.0,abc\n"; }
    try {
        load_csv(dir / "bad.csv");
        FAIL("expected a parse error");
    } catch (const CsvParseError& e) {
        CHECK(e.line() == 3);
    }
    { std::ofstream(dir / "wide.csv") << "# d=2 m=1\n1.0,2.0,3.0\n"; }
    try {
        load_csv(dir / "wide.csv");
        FAIL("expected a parse error");
    } catch (const CsvParseError& e) {
        CHECK(e.line() == 2);
    }
    { std::ofstream(dir / "header_only.csv") << "# d=2 m=1\n"; }
    CHECK_THROWS_AS(load_csv(dir / "header_only.csv"), CsvParseError);
}

TEST_CASE("permuted reorders rows") {
    const auto c = sample_sphere(4, 1);
    const auto p = c.permuted({3, 2, 1, 0});
    CHECK(p.point(0) == c.point(3));
    CHECK_THROWS_AS(c.permuted({0, 1}), std::invalid_argument);
}

}
