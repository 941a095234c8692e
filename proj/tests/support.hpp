#pragma once

// Finite-difference helpers shared by the test suites. They only touch point
// data (frames, positions) so they stay independent of the closed forms.

#include <cmath>
#include <functional>
#include <type_traits>

#include "ruledrel/framecore.hpp"

namespace testsupport {

using ruledrel::Vec3;

template <class F>
auto d1_5pt(F&& f, double x, double h) {
    // Evaluated into the value type so Eigen expressions do not dangle.
    using R = std::decay_t<decltype(f(x))>;
    return R((f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12 * h));
}

template <class F>
auto d2_5pt(F&& f, double x, double h) {
    using R = std::decay_t<decltype(f(x))>;
    return R((-f(x - 2 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2 * h)) /
             (12 * h * h));
}

inline double triple(const Vec3& a, const Vec3& b, const Vec3& c) { return a.dot(b.cross(c)); }

// Every invariant varies; delta stays positive and kappa stays away from 0.
inline ruledrel::RuledSurface generic_surface(int jet_order = 4) {
    auto spec = ruledrel::RuledSurfaceSpec::from_text("1.2+0.3*sin(u)", "0.6+0.25*cos(2*u)",
                                                      "0.3*u-0.8", {0.0, 6.283185307179586}, 0.0);
    spec.jet_order = jet_order;
    return ruledrel::build_surface(spec);
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace testsupport
