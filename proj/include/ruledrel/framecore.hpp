#pragma once

#include <memory>
#include <string_view>

#include <Eigen/Dense>

#include "ruledrel/scalarfun/eval.hpp"

namespace ruledrel {

using Vec3 = Eigen::Vector3d;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const noexcept { return hi - lo; }
    bool contains(double u) const noexcept;
};

/// A skew ruled surface given by its invariants: distribution parameter
/// delta(u) (never zero), conical curvature kappa(u) and lambda(u) = cot of
/// the striction angle. The expressions are functions of u only.
struct RuledSurfaceSpec {
    scalarfun::Expr delta;
    scalarfun::Expr kappa;
    scalarfun::Expr lambda;
    Interval domain;
    double u0 = 0.0;
    scalarfun::Constants constants;
    int jet_order = 4;
    double step = 1e-3;

    /// Parses the three invariant expressions against `constants`.
    static RuledSurfaceSpec from_text(std::string_view delta, std::string_view kappa,
                                      std::string_view lambda, Interval domain, double u0,
                                      scalarfun::Constants constants = {});
};

/// Moving frame {e, n, z} and striction point s at parameter u.
struct FrameState {
    double u = 0.0;
    Vec3 e = Vec3::UnitX();
    Vec3 n = Vec3::UnitY();
    Vec3 z = Vec3::UnitZ();
    Vec3 s = Vec3::Zero();
};

/// Euclidean quantities of the surface x(u,v) = s(u) + v e(u) at one point.
struct SurfacePointEval {
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;  // sqrt(v^2 + delta^2)
    FrameState frame;
    Vec3 x;
    Vec3 x_u;
    Vec3 x_v;
    Vec3 xi;  // Euclidean unit normal (delta n - v z) / w
    double g11 = 0, g12 = 0, g22 = 0;
    double h11 = 0, h12 = 0, h22 = 0;
    double hinv11 = 0, hinv12 = 0, hinv22 = 0;
    double gauss = 0;
    double delta = 0, delta_prime = 0, kappa = 0, lambda = 0;

    /// kappa w^2 + delta' v - delta^2 lambda; recurs in h11 and the inverse metrics.
    double h11_numerator() const noexcept { return kappa * w * w + delta_prime * v - delta * delta * lambda; }
};

namespace detail {

/// Shared, immutable backing of a RuledSurface. Surfaces built from
/// invariant expressions integrate their frame; asymptotic images reuse the
/// frame of the surface they come from.
class SurfaceModel : public scalarfun::InvariantProvider {
public:
    SurfaceModel(Interval domain, double u0, int max_order,
                 std::shared_ptr<const scalarfun::Constants> constants)
        : domain_(domain), u0_(u0), max_order_(max_order), constants_(std::move(constants)) {}

    virtual FrameState frame_at(double u) const = 0;

    const Interval& domain() const noexcept { return domain_; }
    double u0() const noexcept { return u0_; }
    int max_order() const noexcept { return max_order_; }
    const std::shared_ptr<const scalarfun::Constants>& constants() const noexcept { return constants_; }

    /// Throws DomainError if u is outside the domain.
    void require_in_domain(double u) const;

private:
    Interval domain_;
    double u0_;
    int max_order_;
    std::shared_ptr<const scalarfun::Constants> constants_;
};

}  // namespace detail

/// Immutable, cheaply copyable handle to a ruled surface.
class RuledSurface {
public:
    explicit RuledSurface(std::shared_ptr<const detail::SurfaceModel> model);

    scalarfun::InvariantJets invariant_jets(double u, int order) const;
    FrameState frame_at(double u) const;
    SurfacePointEval eval_point(double u, double v) const;

    const Interval& domain() const noexcept { return model_->domain(); }
    double u0() const noexcept { return model_->u0(); }
    /// Highest derivative order available for the invariants.
    int jet_order() const noexcept { return model_->max_order(); }

    /// Environment for evaluating normalization expressions on this surface;
    /// delta/kappa/lambda resolve to this surface's invariants. Valid while
    /// any copy of this handle is alive.
    scalarfun::EvalEnv env() const;

    const std::shared_ptr<const detail::SurfaceModel>& model() const noexcept { return model_; }

private:
    std::shared_ptr<const detail::SurfaceModel> model_;
};

/// Validates the spec and integrates the moving frame and striction curve over
/// the whole domain, starting from the identity frame at u0 with s(u0) = 0.
///
/// Throws SpecError when delta vanishes (or changes sign) on the 101-point
/// validation grid, and DomainError when an invariant cannot be evaluated.
RuledSurface build_surface(const RuledSurfaceSpec& spec);

}  // namespace ruledrel
