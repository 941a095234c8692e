#include "ruledrel/oracle.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "ruledrel/error.hpp"

namespace ruledrel::oracle {

FundamentalForms fd_fundamental_forms(const RuledSurface& surface, double u, double v,
                                      double step) {
    if (!(step > 0.0)) throw DomainError("finite-difference step must be positive");
    const Interval& dom = surface.domain();
    if (u - 2 * step < dom.lo || u + 2 * step > dom.hi) {
        throw DomainError("finite-difference stencil leaves the surface domain");
    }
    const double h = step;
    const FrameState fm = surface.frame_at(u - h);
    const FrameState f0 = surface.frame_at(u);
    const FrameState fp = surface.frame_at(u + h);
    auto x = [](const FrameState& f, double vv) -> Vec3 { return f.s + vv * f.e; };

    const Vec3 x0 = x(f0, v);
    const Vec3 xu = (x(fp, v) - x(fm, v)) / (2 * h);
    const Vec3 xv = (x(f0, v + h) - x(f0, v - h)) / (2 * h);
    const Vec3 xuu = (x(fp, v) - 2.0 * x0 + x(fm, v)) / (h * h);
    const Vec3 xvv = (x(f0, v + h) - 2.0 * x0 + x(f0, v - h)) / (h * h);
    const Vec3 xuv =
        (x(fp, v + h) - x(fp, v - h) - x(fm, v + h) + x(fm, v - h)) / (4 * h * h);
    const Vec3 normal = xu.cross(xv).normalized();

    FundamentalForms ff;
    ff.g11 = xu.dot(xu);
    ff.g12 = xu.dot(xv);
    ff.g22 = xv.dot(xv);
    ff.h11 = normal.dot(xuu);
    ff.h12 = normal.dot(xuv);
    ff.h22 = normal.dot(xvv);
    ff.gauss = (ff.h11 * ff.h22 - ff.h12 * ff.h12) / (ff.g11 * ff.g22 - ff.g12 * ff.g12);
    return ff;
}

double brioschi_curvature(const MetricSampler& metric, double u, double v, double step) {
    if (!(step > 0.0)) throw DomainError("finite-difference step must be positive");
    // m[i][j][c]: component c at (u + (i-2) h, v + (j-2) h).
    std::array<std::array<std::array<double, 3>, 5>, 5> m{};
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const auto c = metric(u + (i - 2) * step, v + (j - 2) * step);
            if (std::abs(c[0] * c[2] - c[1] * c[1]) < 1e-12) {
                throw DomainError("metric is singular near the query point");
            }
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = c;
        }
    }
    const double h = step;
    auto at = [&](int i, int j, int c) {
        return m[static_cast<std::size_t>(i + 2)][static_cast<std::size_t>(j + 2)]
                [static_cast<std::size_t>(c)];
    };
    auto d1 = [&](auto&& f) { return (f(-2) - 8 * f(-1) + 8 * f(1) - f(2)) / (12 * h); };
    auto d2 = [&](auto&& f) {
        return (-f(-2) + 16 * f(-1) - 30 * f(0) + 16 * f(1) - f(2)) / (12 * h * h);
    };
    auto du = [&](int c) { return d1([&](int k) { return at(k, 0, c); }); };
    auto dv = [&](int c) { return d1([&](int k) { return at(0, k, c); }); };
    auto duu = [&](int c) { return d2([&](int k) { return at(k, 0, c); }); };
    auto dvv = [&](int c) { return d2([&](int k) { return at(0, k, c); }); };
    auto duv = [&](int c) {
        return d1([&](int i) { return d1([&](int j) { return at(i, j, c); }); });
    };

    const double E = at(0, 0, 0), F = at(0, 0, 1), G = at(0, 0, 2);
    const double Eu = du(0), Ev = dv(0), Fu = du(1), Fv = dv(1), Gu = du(2), Gv = dv(2);
    const double Evv = dvv(0), Fuv = duv(1), Guu = duu(2);

    Eigen::Matrix3d a;
    a << -0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev,
        Fv - 0.5 * Gu, E, F,
        0.5 * Gv, F, G;
    Eigen::Matrix3d b;
    b << 0.0, 0.5 * Ev, 0.5 * Gu,
        0.5 * Ev, E, F,
        0.5 * Gu, F, G;
    const double det = E * G - F * F;
    return (a.determinant() - b.determinant()) / (det * det);
}

RankResult rank_of_samples(std::span<const Vec3> samples) {
    RankResult result;
    if (samples.empty()) return result;
    Eigen::Matrix3Xd m(3, static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = samples[i];
    Eigen::JacobiSVD<Eigen::Matrix3Xd> svd(m, Eigen::ComputeFullU);
    const Eigen::VectorXd sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size() && i < 3; ++i) {
        result.singular_values[static_cast<std::size_t>(i)] = sv(i);
    }
    const double largest = sv.size() > 0 ? sv(0) : 0.0;
    if (largest > 0.0) {
        for (Eigen::Index i = 0; i < sv.size(); ++i) {
            if (sv(i) > 1e-8 * largest) ++result.rank;
        }
    }
    result.least_direction = svd.matrixU().col(2).normalized();
    if (result.rank <= 2) result.plane_normal = result.least_direction;
    return result;
}

}  // namespace ruledrel::oracle
