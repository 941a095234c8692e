#include "ruledrel/framecore.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "ruledrel/error.hpp"

namespace ruledrel {

namespace {

constexpr int kValidationSamples = 101;
constexpr double kDeltaZeroTolerance = 1e-12;

using scalarfun::InvariantJets;
using scalarfun::Jet;

// e, n, z, s packed as four 3-vectors.
struct State {
    Vec3 e, n, z, s;
};

State operator+(const State& a, const State& b) { return {a.e + b.e, a.n + b.n, a.z + b.z, a.s + b.s}; }
State operator*(double k, const State& a) { return {k * a.e, k * a.n, k * a.z, k * a.s}; }

void orthonormalize(State& x) {
    x.e.normalize();
    x.n -= x.n.dot(x.e) * x.e;
    x.n.normalize();
    x.z -= x.z.dot(x.e) * x.e;
    x.z -= x.z.dot(x.n) * x.n;
    x.z.normalize();
}

class ExpressionModel final : public detail::SurfaceModel {
public:
    explicit ExpressionModel(const RuledSurfaceSpec& spec)
        : SurfaceModel(spec.domain, spec.u0, spec.jet_order,
                       std::make_shared<const scalarfun::Constants>(spec.constants)),
          delta_(spec.delta),
          kappa_(spec.kappa),
          lambda_(spec.lambda) {
        env_.constants = constants();
        env_.u0 = u0();
        env_.max_order = max_order();
        validate();
        integrate(spec.step);
    }

    InvariantJets invariant_jets(double u, int order) const override {
        return {scalarfun::eval_jet(*delta_, u, order, env_),
                scalarfun::eval_jet(*kappa_, u, order, env_),
                scalarfun::eval_jet(*lambda_, u, order, env_)};
    }

    FrameState frame_at(double u) const override {
        require_in_domain(u);
        const std::size_t i = interval_index(u);
        const Node& a = nodes_[i];
        const Node& b = nodes_[i + 1];
        const double h = b.u - a.u;
        const double t = std::clamp((u - a.u) / h, 0.0, 1.0);
        const double t2 = t * t;
        const double t3 = t2 * t;
        const double t4 = t3 * t;
        const double t5 = t4 * t;
        // Quintic Hermite basis: values, first and second derivatives at both ends.
        const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
        const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
        const double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
        const double h3 = 0.5 * (t3 - 2 * t4 + t5);
        const double h4 = -4 * t3 + 7 * t4 - 3 * t5;
        const double h5 = 10 * t3 - 15 * t4 + 6 * t5;
        auto blend = [&](const Vec3 State::*m) -> Vec3 {
            return h0 * (a.x.*m) + h1 * h * (a.dx.*m) + h2 * h * h * (a.ddx.*m) +
                   h3 * h * h * (b.ddx.*m) + h4 * h * (b.dx.*m) + h5 * (b.x.*m);
        };
        return {u, blend(&State::e), blend(&State::n), blend(&State::z), blend(&State::s)};
    }

private:
    struct Node {
        double u;
        State x, dx, ddx;
    };

    struct Coefficients {
        double delta, kappa, lambda;
    };

    Coefficients coefficients(double u) const {
        const InvariantJets j = invariant_jets(u, 0);
        return {j.delta.value(), j.kappa.value(), j.lambda.value()};
    }

    static State rhs(const State& x, const Coefficients& c) {
        return {x.n, -x.e + c.kappa * x.z, -c.kappa * x.n, c.delta * c.lambda * x.e + c.delta * x.z};
    }

    Node make_node(double u, const State& x) const {
        const InvariantJets j = invariant_jets(u, 1);
        const double d = j.delta[0], dp = j.delta[1];
        const double k = j.kappa[0], kp = j.kappa[1];
        const double l = j.lambda[0], lp = j.lambda[1];
        Node node{u, x, rhs(x, {d, k, l}), {}};
        node.ddx.e = -x.e + k * x.z;
        node.ddx.n = -(1 + k * k) * x.n + kp * x.z;
        node.ddx.z = k * x.e - kp * x.n - k * k * x.z;
        node.ddx.s = (dp * l + d * lp) * x.e + d * (l - k) * x.n + dp * x.z;
        return node;
    }

    void validate() const {
        const Interval& dom = domain();
        if (!(dom.lo < dom.hi)) throw SpecError("domain must satisfy a < b");
        if (!(u0() >= dom.lo && u0() <= dom.hi)) throw SpecError("u0 must lie in the domain");
        if (max_order() < 1 || max_order() > Jet::kMaxOrder) {
            throw SpecError("jet order must lie in [1, " + std::to_string(Jet::kMaxOrder) + "]");
        }
        double previous = 0.0;
        for (int i = 0; i < kValidationSamples; ++i) {
            const double u = dom.lo + dom.length() * i / (kValidationSamples - 1);
            const double d = scalarfun::eval_jet(*delta_, u, 0, env_).value();
            if (!(std::abs(d) > kDeltaZeroTolerance)) {
                throw SpecError("delta vanishes at u = " + std::to_string(u) +
                                "; the surface is not skew");
            }
            if (i > 0 && (d > 0) != (previous > 0)) {
                throw SpecError("delta changes sign before u = " + std::to_string(u) +
                                "; the surface is not skew");
            }
            previous = d;
        }
    }

    State rk4_step(double u, const State& x, double h) const {
        const Coefficients c0 = coefficients(u);
        const Coefficients cm = coefficients(u + 0.5 * h);
        const Coefficients c1 = coefficients(u + h);
        const State k1 = rhs(x, c0);
        const State k2 = rhs(x + (0.5 * h) * k1, cm);
        const State k3 = rhs(x + (0.5 * h) * k2, cm);
        const State k4 = rhs(x + h * k3, c1);
        State next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        orthonormalize(next);
        return next;
    }

    // March from u0 towards `end`, returning nodes ordered away from u0
    // (u0 itself excluded).
    std::vector<Node> march(const State& start, double end, double max_step) const {
        std::vector<Node> out;
        const double span = end - u0();
        if (span == 0.0) return out;
        const auto steps = static_cast<std::size_t>(std::ceil(std::abs(span) / max_step));
        const double h = span / static_cast<double>(steps);
        State x = start;
        out.reserve(steps);
        for (std::size_t i = 0; i < steps; ++i) {
            const double u = u0() + h * static_cast<double>(i);
            x = rk4_step(u, x, h);
            const double next_u = i + 1 == steps ? end : u0() + h * static_cast<double>(i + 1);
            out.push_back(make_node(next_u, x));
        }
        return out;
    }

    void integrate(double max_step) {
        if (!(max_step > 0.0)) throw SpecError("integration step must be positive");
        const State start{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ(), Vec3::Zero()};
        std::vector<Node> below = march(start, domain().lo, max_step);
        std::vector<Node> above = march(start, domain().hi, max_step);
        nodes_.reserve(below.size() + above.size() + 1);
        nodes_.insert(nodes_.end(), below.rbegin(), below.rend());
        nodes_.push_back(make_node(u0(), start));
        nodes_.insert(nodes_.end(), above.begin(), above.end());
        lower_count_ = below.size();
        lower_step_ = below.empty() ? 0.0 : (u0() - domain().lo) / static_cast<double>(below.size());
        upper_step_ = above.empty() ? 0.0 : (domain().hi - u0()) / static_cast<double>(above.size());
    }

    std::size_t interval_index(double u) const {
        const std::size_t last = nodes_.size() - 2;
        std::size_t i;
        if (u >= u0() && upper_step_ > 0.0) {
            i = lower_count_ + static_cast<std::size_t>(std::max(0.0, std::floor((u - u0()) / upper_step_)));
        } else if (lower_step_ > 0.0) {
            const double from_lo = (u - domain().lo) / lower_step_;
            i = static_cast<std::size_t>(std::max(0.0, std::floor(from_lo)));
            i = std::min(i, lower_count_ == 0 ? 0 : lower_count_ - 1);
        } else {
            i = 0;
        }
        i = std::min(i, last);
        while (i > 0 && u < nodes_[i].u) --i;
        while (i < last && u > nodes_[i + 1].u) ++i;
        return i;
    }

    scalarfun::Expr delta_, kappa_, lambda_;
    scalarfun::EvalEnv env_;
    std::vector<Node> nodes_;
    std::size_t lower_count_ = 0;
    double lower_step_ = 0.0;
    double upper_step_ = 0.0;
};

}  // namespace

bool Interval::contains(double u) const noexcept {
    const double slack = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    return u >= lo - slack && u <= hi + slack;
}

RuledSurfaceSpec RuledSurfaceSpec::from_text(std::string_view delta, std::string_view kappa,
                                             std::string_view lambda, Interval domain, double u0,
                                             scalarfun::Constants constants) {
    using scalarfun::Context;
    RuledSurfaceSpec spec;
    spec.delta = scalarfun::parse_scalar_expr(delta, Context::univariate, constants);
    spec.kappa = scalarfun::parse_scalar_expr(kappa, Context::univariate, constants);
    spec.lambda = scalarfun::parse_scalar_expr(lambda, Context::univariate, constants);
    spec.domain = domain;
    spec.u0 = u0;
    spec.constants = std::move(constants);
    return spec;
}

void detail::SurfaceModel::require_in_domain(double u) const {
    if (!domain_.contains(u)) {
        throw DomainError("u = " + std::to_string(u) + " lies outside the surface domain [" +
                          std::to_string(domain_.lo) + ", " + std::to_string(domain_.hi) + "]");
    }
}

RuledSurface::RuledSurface(std::shared_ptr<const detail::SurfaceModel> model)
    : model_(std::move(model)) {}

scalarfun::InvariantJets RuledSurface::invariant_jets(double u, int order) const {
    if (order > model_->max_order()) {
        throw JetOrderError("invariants of this surface are available through order " +
                            std::to_string(model_->max_order()) + ", order " +
                            std::to_string(order) + " requested");
    }
    return model_->invariant_jets(u, order);
}

FrameState RuledSurface::frame_at(double u) const { return model_->frame_at(u); }

SurfacePointEval RuledSurface::eval_point(double u, double v) const {
    SurfacePointEval p;
    p.u = u;
    p.v = v;
    p.frame = frame_at(u);
    const auto j = invariant_jets(u, 1);
    p.delta = j.delta[0];
    p.delta_prime = j.delta[1];
    p.kappa = j.kappa[0];
    p.lambda = j.lambda[0];

    const double d = p.delta;
    const FrameState& f = p.frame;
    p.w = std::sqrt(v * v + d * d);
    const double w = p.w;
    p.x = f.s + v * f.e;
    p.x_u = d * p.lambda * f.e + v * f.n + d * f.z;
    p.x_v = f.e;
    p.xi = (d * f.n - v * f.z) / w;

    p.g11 = w * w + d * d * p.lambda * p.lambda;
    p.g12 = d * p.lambda;
    p.g22 = 1.0;

    const double m = p.h11_numerator();
    p.h11 = -m / w;
    p.h12 = d / w;
    p.h22 = 0.0;
    p.hinv11 = 0.0;
    p.hinv12 = w / d;
    p.hinv22 = w * m / (d * d);

    p.gauss = -(d * d) / (w * w * w * w);
    return p;
}

scalarfun::EvalEnv RuledSurface::env() const {
    scalarfun::EvalEnv env;
    env.constants = model_->constants();
    env.u0 = model_->u0();
    env.max_order = model_->max_order();
    env.invariants = model_.get();
    return env;
}

RuledSurface build_surface(const RuledSurfaceSpec& spec) {
    if (!spec.delta || !spec.kappa || !spec.lambda) {
        throw SpecError("delta, kappa and lambda are all required");
    }
    return RuledSurface(std::make_shared<const ExpressionModel>(spec));
}

}  // namespace ruledrel
