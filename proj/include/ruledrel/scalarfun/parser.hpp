#pragma once

#include <map>
#include <string>
#include <string_view>

#include "ruledrel/scalarfun/ast.hpp"

namespace ruledrel::scalarfun {

using Constants = std::map<std::string, double>;

/// Parses an expression over the symbols allowed by `context`.
///
/// Grammar: numbers (with optional exponent), pi, e, the context's symbols,
/// names bound in `constants`, + - * / ^, unary minus, sin cos tan exp ln
/// sqrt abs, and antideriv(expr). ^ binds tighter than unary minus and is
/// right-associative; everything else is left-associative.
///
/// Throws ParseError carrying the byte offset of the offending token.
Expr parse_scalar_expr(std::string_view text, Context context, const Constants& constants = {});

/// True for identifiers the grammar reserves (functions, symbols, pi, e).
bool is_reserved_name(std::string_view name);

}  // namespace ruledrel::scalarfun
