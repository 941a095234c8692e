#include "ruledrel/scalarfun/eval.hpp"

#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ruledrel/error.hpp"

namespace ruledrel::scalarfun {

namespace {

constexpr double kQuadratureTolerance = 1e-10;
constexpr unsigned kQuadratureMaxDepth = 15;

double lookup_constant(const Node& node, const EvalEnv& env) {
    auto it = env.constants->find(node.name);
    if (it == env.constants->end()) {
        throw SpecError("constant '" + node.name + "' has no bound value");
    }
    return it->second;
}

// Shared tree walk; `leaf` resolves symbol and antideriv nodes and `lift`
// turns a real number into a T at the evaluation point.
template <class T, class Leaf, class Lift>
T walk(const Node& node, const EvalEnv& env, Leaf& leaf, Lift& lift) {
    switch (node.kind) {
        case NodeKind::number:
            return lift(node.value);
        case NodeKind::constant:
            return lift(lookup_constant(node, env));
        case NodeKind::symbol:
        case NodeKind::antideriv:
            return leaf(node);
        case NodeKind::negate:
            return -walk<T>(*node.children[0], env, leaf, lift);
        case NodeKind::binary: {
            const T a = walk<T>(*node.children[0], env, leaf, lift);
            const T b = walk<T>(*node.children[1], env, leaf, lift);
            switch (node.op) {
                case BinaryOp::add: return a + b;
                case BinaryOp::sub: return a - b;
                case BinaryOp::mul: return a * b;
                case BinaryOp::div: return a / b;
                case BinaryOp::pow: return pow(a, b);
            }
            break;
        }
        case NodeKind::call: {
            const T a = walk<T>(*node.children[0], env, leaf, lift);
            switch (node.function) {
                case Function::sin: return sin(a);
                case Function::cos: return cos(a);
                case Function::tan: return tan(a);
                case Function::exp: return exp(a);
                case Function::ln: return log(a);
                case Function::sqrt: return sqrt(a);
                case Function::abs: return abs(a);
            }
            break;
        }
    }
    throw std::logic_error("malformed expression node");
}

const InvariantProvider& require_invariants(const EvalEnv& env, Symbol symbol) {
    if (env.invariants == nullptr) {
        throw SpecError(std::string("symbol '") + symbol_name(symbol) +
                        "' needs a surface to evaluate against");
    }
    return *env.invariants;
}

}  // namespace

Jet eval_jet(const Node& expr, double u, int order, const EvalEnv& env) {
    if (order > env.max_order) {
        throw JetOrderError("jet order " + std::to_string(order) + " exceeds configured maximum " +
                            std::to_string(env.max_order));
    }
    auto lift = [&](double value) { return Jet::constant(value, u, order); };
    auto leaf = [&](const Node& node) -> Jet {
        if (node.kind == NodeKind::antideriv) {
            const Node& integrand = *node.children[0];
            std::array<double, Jet::kMaxOrder + 1> c{};
            c[0] = antiderivative_value(integrand, env.u0, u, env);
            if (order >= 1) {
                const Jet g = eval_jet(integrand, u, order - 1, env);
                for (int k = 1; k <= order; ++k) {
                    c[static_cast<std::size_t>(k)] = g.taylor(k - 1) / k;
                }
            }
            return Jet::from_taylor(u, std::span(c.data(), static_cast<std::size_t>(order + 1)));
        }
        switch (node.symbol) {
            case Symbol::u:
                return Jet::variable(u, order);
            case Symbol::delta:
                return require_invariants(env, node.symbol).invariant_jets(u, order).delta;
            case Symbol::kappa:
                return require_invariants(env, node.symbol).invariant_jets(u, order).kappa;
            case Symbol::lambda:
                return require_invariants(env, node.symbol).invariant_jets(u, order).lambda;
            case Symbol::v:
            case Symbol::w:
                break;
        }
        throw SpecError(std::string("symbol '") + symbol_name(node.symbol) +
                        "' is not defined for a function of u alone");
    };
    return walk<Jet>(expr, env, leaf, lift);
}

BiJet eval_bijet(const Node& expr, double u, double v, const InvariantJets& invariants,
                 const EvalEnv& env) {
    auto lift = [&](double value) { return BiJet::constant(value, u, v); };
    auto from_jet = [&](const Jet& j, const char* name) {
        if (j.order() < 1) {
            throw JetOrderError(std::string(name) + " needs a jet of order >= 1 here");
        }
        return BiJet{u, v, j[0], j[1], 0.0};
    };
    auto leaf = [&](const Node& node) -> BiJet {
        if (node.kind == NodeKind::antideriv) {
            throw SpecError("antideriv is not allowed in a bivariate expression");
        }
        switch (node.symbol) {
            case Symbol::u:
                return {u, v, u, 1.0, 0.0};
            case Symbol::v:
                return {u, v, v, 0.0, 1.0};
            case Symbol::w: {
                const Jet& d = invariants.delta;
                if (d.order() < 1) throw JetOrderError("w needs delta' (jet order >= 1)");
                const double w = std::sqrt(v * v + d[0] * d[0]);
                return {u, v, w, d[0] * d[1] / w, v / w};
            }
            case Symbol::delta:
                return from_jet(invariants.delta, "delta");
            case Symbol::kappa:
                return from_jet(invariants.kappa, "kappa");
            case Symbol::lambda:
                return from_jet(invariants.lambda, "lambda");
        }
        throw std::logic_error("unknown symbol");
    };
    return walk<BiJet>(expr, env, leaf, lift);
}

double antiderivative_value(const Node& integrand, double u0, double u, const EvalEnv& env) {
    if (u == u0) return 0.0;
    auto g = [&](double t) { return eval_jet(integrand, t, 0, env).value(); };
    const double lo = std::min(u0, u);
    const double hi = std::max(u0, u);
    double error = 0.0;
    const double integral = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        g, lo, hi, kQuadratureMaxDepth, 1e-13, &error);
    if (!(error <= kQuadratureTolerance) || !std::isfinite(integral)) {
        throw QuadratureError("quadrature did not reach tolerance 1e-10 (achieved " +
                                  std::to_string(error) + ")",
                              error);
    }
    return u >= u0 ? integral : -integral;
}

}  // namespace ruledrel::scalarfun
