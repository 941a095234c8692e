#include "ruledrel/relnorm.hpp"

#include <cmath>

#include "ruledrel/error.hpp"
#include "ruledrel/scalarfun/eval.hpp"

namespace ruledrel::relnorm {

namespace {

constexpr double kSupportZero = 1e-12;

FramedVector framed(const SurfacePointEval& p, const Vec3& comps) {
    return {comps, to_world(p.frame, comps)};
}

}  // namespace

Vec3 to_world(const FrameState& frame, const Vec3& c) {
    return c.x() * frame.e + c.y() * frame.n + c.z() * frame.z;
}

SupportEval support_eval(const RuledSurface& surface, const scalarfun::Node& q, double u,
                         double v) {
    const auto jets = surface.invariant_jets(u, 1);
    const auto env = surface.env();
    const auto b = scalarfun::eval_bijet(q, u, v, jets, env);
    if (!std::isfinite(b.value) || std::abs(b.value) <= kSupportZero) {
        throw DomainError("support function vanishes at u=" + std::to_string(u) +
                          ", v=" + std::to_string(v));
    }
    return {b.value, b.du, b.dv};
}

SupportEval support_over_w(const SurfacePointEval& p, double f, double f_prime) {
    const double w = p.w;
    const double w3 = w * w * w;
    SupportEval s{f / w, f_prime / w - f * p.delta * p.delta_prime / w3, -f * p.v / w3};
    if (std::abs(s.q) <= kSupportZero) throw DomainError("support function vanishes");
    return s;
}

SupportEval equiaffine_support_eval(const SurfacePointEval& p) {
    const double a = std::sqrt(std::abs(p.delta));
    const double w = p.w;
    const double w3 = w * w * w;
    // d|delta|^(1/2)/du = sign(delta) delta' / (2 |delta|^(1/2))
    const double a_prime = std::copysign(1.0, p.delta) * p.delta_prime / (2 * a);
    return {a / w, a_prime / w - a * p.delta * p.delta_prime / w3, -a * p.v / w3};
}

double equiaffine_support(const SurfacePointEval& p) { return std::sqrt(std::abs(p.delta)) / p.w; }

RelMetric relative_metric(const SurfacePointEval& p, const SupportEval& s) {
    RelMetric r;
    r.G11 = p.h11 / s.q;
    r.G12 = p.h12 / s.q;
    r.G22 = p.h22 / s.q;
    const double d = p.delta;
    r.Ginv11 = 0.0;
    r.Ginv12 = p.w * s.q / d;
    r.Ginv22 = p.w * s.q * p.h11_numerator() / (d * d);
    r.X = p.xi / s.q;
    return r;
}

FramedVector relative_normal(const SurfacePointEval& p, const SupportEval& s) {
    const double d = p.delta, w = p.w, v = p.v;
    const double ce = -w * (d * s.q_u + s.q_v * (p.kappa * w * w + p.delta_prime * v)) / (d * d);
    const double cn = (d * d * s.q - w * w * v * s.q_v) / (d * w);
    const double cz = -(v * s.q + w * w * s.q_v) / w;
    return framed(p, {ce, cn, cz});
}

Tchebychev tchebychev(const SurfacePointEval& p, const SupportEval& s) {
    const double d = p.delta, dp = p.delta_prime, w = p.w, v = p.v, k = p.kappa;
    const double m = p.h11_numerator();
    Tchebychev t;
    t.T1 = (w * w * s.q_v + v * s.q) / (d * w);
    t.T2 = (2 * d * w * w * s.q_u + dp * s.q * (d * d - v * v)) / (2 * d * d * w) + t.T1 * m / d;
    const double ce =
        w * (s.q * (2 * k * v + dp) + 2 * d * s.q_u + 2 * s.q_v * (k * w * w + dp * v)) / (2 * d * d);
    const double c = (v * s.q + w * w * s.q_v) / (d * w);
    t.T = framed(p, {ce, c * v, c * d});
    return t;
}

SupportVector support_vector(const SurfacePointEval& p, const SupportEval& s) {
    const double d = p.delta, dp = p.delta_prime, w = p.w, v = p.v, k = p.kappa;
    SupportVector r;
    r.Q1 = -w * s.q_v / (4 * d * s.q);
    r.Q2 = -w * (p.h11_numerator() * s.q_v + d * s.q_u) / (4 * d * d * s.q);
    const double ce = -w * (d * s.q_u + s.q_v * (k * w * w + dp * v)) / (4 * d * d * s.q);
    const double c = -w * s.q_v / (4 * d * s.q);
    r.Q = framed(p, {ce, c * v, c * d});
    return r;
}

IdentityReport verify_vector_identities(const SurfacePointEval& p, const SupportEval& s) {
    const double d = p.delta, w = p.w, v = p.v;
    // Euclidean Tchebychev vector straight from its own closed form.
    const double c = v / (d * w);
    const Vec3 t_euk(w * (2 * p.kappa * v + p.delta_prime) / (2 * d * d), c * v, c * d);
    const Vec3 q_aff = support_vector(p, equiaffine_support_eval(p)).Q.frame;
    const Vec3 t = tchebychev(p, s).T.frame;
    const Vec3 q = support_vector(p, s).Q.frame;
    const Vec3 y = relative_normal(p, s).frame;
    const Vec3 xi_frame(0.0, d / w, -v / w);

    IdentityReport r;
    r.euclid_vs_affine = (t_euk - 4.0 * q_aff).norm();
    r.decomposition = (t - s.q * t_euk + 4.0 * s.q * q).norm();
    r.normal_split = (y - s.q * xi_frame - 4.0 * s.q * q).norm();
    return r;
}

}  // namespace ruledrel::relnorm
