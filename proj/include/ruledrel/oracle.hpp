#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>

#include "ruledrel/framecore.hpp"

namespace ruledrel::oracle {

// Independent numerical cross-checks. Nothing here uses the closed-form
// formulas it is meant to check.

struct FundamentalForms {
    double g11 = 0, g12 = 0, g22 = 0;
    double h11 = 0, h12 = 0, h22 = 0;
    double gauss = 0;
};

/// First and second fundamental forms from second-order central differences
/// of the point map x(u,v) = s(u) + v e(u); the normal is the normalized cross
/// product of the differenced partials. Requires u +- 2 step inside the domain.
FundamentalForms fd_fundamental_forms(const RuledSurface& surface, double u, double v,
                                      double step = 1e-4);

/// Coefficients (M11, M12, M22) of a symmetric 2x2 metric field.
using MetricSampler = std::function<std::array<double, 3>(double u, double v)>;

/// Gaussian curvature of a (possibly indefinite) 2D metric by the Brioschi
/// formula, with fourth-order central differences on a 5x5 stencil. Throws
/// DomainError when |det M| < 1e-12 somewhere on the stencil.
double brioschi_curvature(const MetricSampler& metric, double u, double v, double step = 1e-4);

struct RankResult {
    int rank = 0;
    std::array<double, 3> singular_values{};
    /// Unit normal of the plane spanned by the samples when rank <= 2. For
    /// rank 1 this is one of the normals, chosen by the SVD.
    std::optional<Vec3> plane_normal;
    /// Left singular vector of the smallest singular value, always set.
    Vec3 least_direction = Vec3::UnitZ();
};

/// Numerical rank of the 3 x N matrix of samples; singular values below
/// 1e-8 times the largest count as zero.
RankResult rank_of_samples(std::span<const Vec3> samples);

}  // namespace ruledrel::oracle
