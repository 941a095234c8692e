#pragma once

#include "ruledrel/framecore.hpp"
#include "ruledrel/scalarfun/ast.hpp"

namespace ruledrel::relnorm {

/// Support function q of a relative normalization and its first partials.
struct SupportEval {
    double q = 1.0;
    double q_u = 0.0;
    double q_v = 0.0;
};

/// Relative metric G_ij = h_ij / q, its inverse, and the covector X = xi / q.
struct RelMetric {
    double G11 = 0, G12 = 0, G22 = 0;
    double Ginv11 = 0, Ginv12 = 0, Ginv22 = 0;
    Vec3 X = Vec3::Zero();
};

/// A vector given by its components on {e, n, z} and in world coordinates.
struct FramedVector {
    Vec3 frame = Vec3::Zero();
    Vec3 world = Vec3::Zero();
};

struct Tchebychev {
    double T1 = 0, T2 = 0;  // components on x_u, x_v
    FramedVector T;
};

struct SupportVector {
    double Q1 = 0, Q2 = 0;  // components on x_u, x_v
    FramedVector Q;
};

struct IdentityReport {
    double euclid_vs_affine = 0;  // |T_EUK - 4 Q_AFF|
    double decomposition = 0;     // |T - q T_EUK + 4 q Q|
    double normal_split = 0;      // |y - q xi - 4 q Q|
};

/// Evaluates a bivariate support expression and its partials at (u, v).
/// Throws DomainError when |q| <= 1e-12.
SupportEval support_eval(const RuledSurface& surface, const scalarfun::Node& q, double u,
                         double v);

/// Support of q = f(u) / w from the value and derivative of f.
SupportEval support_over_w(const SurfacePointEval& point, double f, double f_prime);

/// q_AFF = |delta|^(1/2) / w with its partials.
SupportEval equiaffine_support_eval(const SurfacePointEval& point);

double equiaffine_support(const SurfacePointEval& point);

RelMetric relative_metric(const SurfacePointEval& point, const SupportEval& sup);
FramedVector relative_normal(const SurfacePointEval& point, const SupportEval& sup);
Tchebychev tchebychev(const SurfacePointEval& point, const SupportEval& sup);
SupportVector support_vector(const SurfacePointEval& point, const SupportEval& sup);

/// Residual norms of the vector identities linking the Euclidean, equiaffine
/// and given normalizations. Each side is evaluated on its own.
IdentityReport verify_vector_identities(const SurfacePointEval& point, const SupportEval& sup);

/// World coordinates of frame components (a, b, c) -> a e + b n + c z.
Vec3 to_world(const FrameState& frame, const Vec3& components);

}  // namespace ruledrel::relnorm
