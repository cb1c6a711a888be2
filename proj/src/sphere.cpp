#include "gbssl/sphere.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gbssl {

namespace {

void check_on_sphere(const Eigen::Vector3d& p) {
    if (!(std::abs(p.norm() - 1.0) <= 1e-9))
        throw std::invalid_argument("point is not on the unit sphere (|x| = " +
                                    std::to_string(p.norm()) + ")");
}

// Associated Legendre functions scaled by sqrt((2l+1)(l-m)!/(l+m)!), so that
// int_{-1}^{1} P^2 dx = 2. No Condon-Shortley phase. Table index l*(l+1)/2 + m.
void legendre_table(int l_max, double x, double s, std::vector<double>& p) {
    auto at = [](int l, int m) { return static_cast<std::size_t>(l * (l + 1) / 2 + m); };
    p.assign(at(l_max, l_max) + 1, 0.0);
    p[at(0, 0)] = 1.0;
    for (int m = 1; m <= l_max; ++m)
        p[at(m, m)] = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * p[at(m - 1, m - 1)];
    for (int m = 0; m < l_max; ++m) p[at(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * p[at(m, m)];
    for (int m = 0; m <= l_max; ++m) {
        for (int l = m + 2; l <= l_max; ++l) {
            const double lm = (l - m) * 1.0, lp = (l + m) * 1.0;
            const double a = std::sqrt((2.0 * l + 1.0) * (2.0 * l - 1.0) / (lm * lp));
            const double b =
                std::sqrt((2.0 * l + 1.0) * (lp - 1.0) * (lm - 1.0) / ((2.0 * l - 3.0) * lm * lp));
            p[at(l, m)] = a * x * p[at(l - 1, m)] - b * p[at(l - 2, m)];
        }
    }
}

void harmonics_at(int l_max, const Eigen::Vector3d& pt, std::vector<double>& legendre,
                  double* out) {
    const double x = pt.z();
    const double s = std::sqrt(std::max(0.0, pt.x() * pt.x() + pt.y() * pt.y()));
    const double phi = std::atan2(pt.y(), pt.x());
    legendre_table(l_max, x, s, legendre);
    const double root2 = std::sqrt(2.0);
    for (int l = 0; l <= l_max; ++l) {
        const std::size_t base = static_cast<std::size_t>(l * (l + 1) / 2);
        out[ContinuumBasis::flat_index(l, 0)] = legendre[base];
        for (int m = 1; m <= l; ++m) {
            const double pm = root2 * legendre[base + m];
            out[ContinuumBasis::flat_index(l, m)] = pm * std::cos(m * phi);
            out[ContinuumBasis::flat_index(l, -m)] = pm * std::sin(m * phi);
        }
    }
}

}  // namespace

std::pair<double, int> sphere_eigenvalue(int l) {
    if (l < 0) throw std::invalid_argument("sphere_eigenvalue: degree must be nonnegative");
    return {static_cast<double>(l) * (l + 1), 2 * l + 1};
}

double sphere_harmonic(int l, int order, const Eigen::Vector3d& point) {
    if (l < 0 || order < -l || order > l)
        throw std::invalid_argument("sphere_harmonic: need 0 <= |order| <= l");
    check_on_sphere(point);
    std::vector<double> legendre;
    std::vector<double> all(static_cast<std::size_t>((l + 1) * (l + 1)));
    harmonics_at(l, point, legendre, all.data());
    return all[static_cast<std::size_t>(ContinuumBasis::flat_index(l, order))];
}

ContinuumBasis::ContinuumBasis(int l_max) : l_max_(l_max) {
    if (l_max < 0) throw std::invalid_argument("ContinuumBasis: l_max must be nonnegative");
    eigenvalues_.resize((l_max + 1) * (l_max + 1));
    for (int l = 0; l <= l_max; ++l)
        for (int m = -l; m <= l; ++m) {
            labels_.push_back({l, m});
            eigenvalues_[flat_index(l, m)] = sphere_eigenvalue(l).first;
        }
}

Matrix ContinuumBasis::evaluate(const RowMatrix& points) const {
    if (points.cols() != 3) throw std::invalid_argument("ContinuumBasis: points must be in R^3");
    RowMatrix out(points.rows(), size());
    for (Index r = 0; r < points.rows(); ++r) check_on_sphere(points.row(r).transpose());
#pragma omp parallel
    {
        std::vector<double> legendre;
#pragma omp for schedule(static)
        for (Index r = 0; r < points.rows(); ++r)
            harmonics_at(l_max_, points.row(r).transpose(), legendre, out.row(r).data());
    }
    return out;
}

Vector ContinuumBasis::evaluate(const Eigen::Vector3d& point) const {
    check_on_sphere(point);
    std::vector<double> legendre;
    Vector out(size());
    harmonics_at(l_max_, point, legendre, out.data());
    return out;
}

Vector ContinuumBasis::synthesize(const Vector& coeffs, const RowMatrix& points) const {
    if (coeffs.size() != size()) throw std::invalid_argument("coefficient count does not match basis");
    return evaluate(points) * coeffs;
}

}  // namespace gbssl
