#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace ruledrel::scalarfun {

/// Which free symbols an expression may reference.
///
///   univariate     u only (the invariant functions delta, kappa, lambda)
///   normalization  u plus the invariants of the surface being normalized,
///                  used for f(u) and the image-sequence functions f1, f2, ...
///   bivariate      u, v, w, delta, kappa, lambda (support functions q(u,v))
///
/// antideriv(...) is rejected in the bivariate context.
enum class Context { univariate, normalization, bivariate };

enum class NodeKind { number, constant, symbol, negate, binary, call, antideriv };

enum class Symbol { u, v, w, delta, kappa, lambda };

enum class BinaryOp { add, sub, mul, div, pow };

enum class Function { sin, cos, tan, exp, ln, sqrt, abs };

struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
};

struct Node;
using Expr = std::shared_ptr<const Node>;

/// Immutable expression tree node. `name` is set for bound constants and for
/// the named literals pi and e so that printing reproduces the source.
struct Node {
    NodeKind kind = NodeKind::number;
    double value = 0.0;
    std::string name;
    Symbol symbol = Symbol::u;
    BinaryOp op = BinaryOp::add;
    Function function = Function::sin;
    std::vector<Expr> children;
    Span span;
};

Expr make_number(double value, Span span = {});
Expr make_constant(std::string name, Span span = {});
Expr make_symbol(Symbol symbol, Span span = {});
Expr make_negate(Expr operand, Span span = {});
Expr make_binary(BinaryOp op, Expr lhs, Expr rhs, Span span = {});
Expr make_call(Function function, Expr argument, Span span = {});
Expr make_antideriv(Expr integrand, Span span = {});

/// Structural equality; source spans are ignored.
bool equal(const Node& a, const Node& b);

std::size_t node_count(const Node& node);

/// Fully parenthesized text that parses back to an equal tree.
std::string to_string(const Node& node);

bool references(const Node& node, Symbol symbol);
bool contains_antideriv(const Node& node);

const char* symbol_name(Symbol symbol);
const char* function_name(Function function);

}  // namespace ruledrel::scalarfun
