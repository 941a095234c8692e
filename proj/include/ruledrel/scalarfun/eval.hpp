#pragma once

#include <memory>

#include "ruledrel/scalarfun/ast.hpp"
#include "ruledrel/scalarfun/bijet.hpp"
#include "ruledrel/scalarfun/jet.hpp"
#include "ruledrel/scalarfun/parser.hpp"

namespace ruledrel::scalarfun {

struct InvariantJets {
    Jet delta;
    Jet kappa;
    Jet lambda;
};

/// Source of the invariant functions delta, kappa, lambda of a surface, used
/// to resolve those symbols inside normalization expressions.
class InvariantProvider {
public:
    virtual ~InvariantProvider() = default;
    virtual InvariantJets invariant_jets(double u, int order) const = 0;
};

/// Everything an expression needs besides its own tree.
///
/// `invariants` is non-owning and may be null when the expression does not
/// reference delta/kappa/lambda.
struct EvalEnv {
    std::shared_ptr<const Constants> constants = std::make_shared<const Constants>();
    double u0 = 0.0;
    int max_order = 4;
    const InvariantProvider* invariants = nullptr;
};

/// Derivatives of a univariate expression at u through `order`.
/// Throws JetOrderError when order exceeds env.max_order and DomainError for
/// evaluation outside a function's domain.
Jet eval_jet(const Node& expr, double u, int order, const EvalEnv& env);

/// Value and first partials of a bivariate expression. `w` expands to
/// sqrt(v^2 + delta^2); invariants.delta must have order >= 1, and
/// kappa/lambda must have order >= 1 when the expression references them.
BiJet eval_bijet(const Node& expr, double u, double v, const InvariantJets& invariants,
                 const EvalEnv& env);

/// Integral of `integrand` over [u0, u] by adaptive Gauss-Kronrod quadrature to
/// an absolute tolerance of 1e-10. Throws QuadratureError when the tolerance is
/// not reached.
double antiderivative_value(const Node& integrand, double u0, double u, const EvalEnv& env);

}  // namespace ruledrel::scalarfun
