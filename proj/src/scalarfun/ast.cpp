#include "ruledrel/scalarfun/ast.hpp"

#include <charconv>
#include <utility>

namespace ruledrel::scalarfun {

namespace {

Expr make(Node node) { return std::make_shared<const Node>(std::move(node)); }

std::string format_number(double value) {
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, end);
}

char op_char(BinaryOp op) {
    switch (op) {
        case BinaryOp::add: return '+';
        case BinaryOp::sub: return '-';
        case BinaryOp::mul: return '*';
        case BinaryOp::div: return '/';
        case BinaryOp::pow: return '^';
    }
    return '?';
}

}  // namespace

Expr make_number(double value, Span span) {
    Node n;
    n.kind = NodeKind::number;
    n.value = value;
    n.span = span;
    return make(std::move(n));
}

Expr make_constant(std::string name, Span span) {
    Node n;
    n.kind = NodeKind::constant;
    n.name = std::move(name);
    n.span = span;
    return make(std::move(n));
}

Expr make_symbol(Symbol symbol, Span span) {
    Node n;
    n.kind = NodeKind::symbol;
    n.symbol = symbol;
    n.span = span;
    return make(std::move(n));
}

Expr make_negate(Expr operand, Span span) {
    Node n;
    n.kind = NodeKind::negate;
    n.children = {std::move(operand)};
    n.span = span;
    return make(std::move(n));
}

Expr make_binary(BinaryOp op, Expr lhs, Expr rhs, Span span) {
    Node n;
    n.kind = NodeKind::binary;
    n.op = op;
    n.children = {std::move(lhs), std::move(rhs)};
    n.span = span;
    return make(std::move(n));
}

Expr make_call(Function function, Expr argument, Span span) {
    Node n;
    n.kind = NodeKind::call;
    n.function = function;
    n.children = {std::move(argument)};
    n.span = span;
    return make(std::move(n));
}

Expr make_antideriv(Expr integrand, Span span) {
    Node n;
    n.kind = NodeKind::antideriv;
    n.children = {std::move(integrand)};
    n.span = span;
    return make(std::move(n));
}

bool equal(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
    switch (a.kind) {
        case NodeKind::number:
            if (a.value != b.value || a.name != b.name) return false;
            break;
        case NodeKind::constant:
            if (a.name != b.name) return false;
            break;
        case NodeKind::symbol:
            if (a.symbol != b.symbol) return false;
            break;
        case NodeKind::binary:
            if (a.op != b.op) return false;
            break;
        case NodeKind::call:
            if (a.function != b.function) return false;
            break;
        case NodeKind::negate:
        case NodeKind::antideriv:
            break;
    }
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!equal(*a.children[i], *b.children[i])) return false;
    }
    return true;
}

std::size_t node_count(const Node& node) {
    std::size_t count = 1;
    for (const auto& child : node.children) count += node_count(*child);
    return count;
}

std::string to_string(const Node& node) {
    switch (node.kind) {
        case NodeKind::number:
            return node.name.empty() ? format_number(node.value) : node.name;
        case NodeKind::constant:
            return node.name;
        case NodeKind::symbol:
            return symbol_name(node.symbol);
        case NodeKind::negate:
            return "(-" + to_string(*node.children[0]) + ")";
        case NodeKind::binary:
            return "(" + to_string(*node.children[0]) + op_char(node.op) +
                   to_string(*node.children[1]) + ")";
        case NodeKind::call:
            return std::string(function_name(node.function)) + "(" +
                   to_string(*node.children[0]) + ")";
        case NodeKind::antideriv:
            return "antideriv(" + to_string(*node.children[0]) + ")";
    }
    return {};
}

bool references(const Node& node, Symbol symbol) {
    if (node.kind == NodeKind::symbol && node.symbol == symbol) return true;
    for (const auto& child : node.children) {
        if (references(*child, symbol)) return true;
    }
    return false;
}

bool contains_antideriv(const Node& node) {
    if (node.kind == NodeKind::antideriv) return true;
    for (const auto& child : node.children) {
        if (contains_antideriv(*child)) return true;
    }
    return false;
}

const char* symbol_name(Symbol symbol) {
    switch (symbol) {
        case Symbol::u: return "u";
        case Symbol::v: return "v";
        case Symbol::w: return "w";
        case Symbol::delta: return "delta";
        case Symbol::kappa: return "kappa";
        case Symbol::lambda: return "lambda";
    }
    return "?";
}

const char* function_name(Function function) {
    switch (function) {
        case Function::sin: return "sin";
        case Function::cos: return "cos";
        case Function::tan: return "tan";
        case Function::exp: return "exp";
        case Function::ln: return "ln";
        case Function::sqrt: return "sqrt";
        case Function::abs: return "abs";
    }
    return "?";
}

}  // namespace ruledrel::scalarfun
