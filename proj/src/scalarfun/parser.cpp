#include "ruledrel/scalarfun/parser.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <numbers>
#include <optional>
#include <utility>

#include "ruledrel/error.hpp"

namespace ruledrel::scalarfun {

namespace {

constexpr std::array<std::pair<std::string_view, Function>, 7> kFunctions{{
    {"sin", Function::sin},
    {"cos", Function::cos},
    {"tan", Function::tan},
    {"exp", Function::exp},
    {"ln", Function::ln},
    {"sqrt", Function::sqrt},
    {"abs", Function::abs},
}};

constexpr std::array<std::pair<std::string_view, Symbol>, 6> kSymbols{{
    {"u", Symbol::u},
    {"v", Symbol::v},
    {"w", Symbol::w},
    {"delta", Symbol::delta},
    {"kappa", Symbol::kappa},
    {"lambda", Symbol::lambda},
}};

std::optional<Function> lookup_function(std::string_view name) {
    for (const auto& [key, fn] : kFunctions) {
        if (key == name) return fn;
    }
    return std::nullopt;
}

std::optional<Symbol> lookup_symbol(std::string_view name) {
    for (const auto& [key, sym] : kSymbols) {
        if (key == name) return sym;
    }
    return std::nullopt;
}

bool allowed(Symbol symbol, Context context) {
    switch (context) {
        case Context::univariate:
            return symbol == Symbol::u;
        case Context::normalization:
            return symbol != Symbol::v && symbol != Symbol::w;
        case Context::bivariate:
            return true;
    }
    return false;
}

enum class Tok { end, number, ident, plus, minus, star, slash, caret, lparen, rparen };

struct Token {
    Tok kind = Tok::end;
    std::size_t begin = 0;
    std::size_t end = 0;
    double number = 0.0;
    std::string_view text;
};

class Parser {
public:
    Parser(std::string_view text, Context context, const Constants& constants)
        : text_(text), context_(context), constants_(constants) {
        advance();
    }

    Expr parse() {
        if (current_.kind == Tok::end) throw ParseError("empty expression", current_.begin);
        Expr result = expression();
        if (current_.kind != Tok::end) throw ParseError("unexpected token", current_.begin);
        return result;
    }

private:
    void advance() {
        std::size_t i = pos_;
        while (i < text_.size() && std::isspace(static_cast<unsigned char>(text_[i]))) ++i;
        Token t;
        t.begin = i;
        if (i >= text_.size()) {
            t.kind = Tok::end;
            t.end = i;
            current_ = t;
            pos_ = i;
            return;
        }
        const char c = text_[i];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lex_number(t, i);
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_')) {
                ++j;
            }
            t.kind = Tok::ident;
            t.end = j;
            t.text = text_.substr(i, j - i);
        } else {
            t.end = i + 1;
            switch (c) {
                case '+': t.kind = Tok::plus; break;
                case '-': t.kind = Tok::minus; break;
                case '*': t.kind = Tok::star; break;
                case '/': t.kind = Tok::slash; break;
                case '^': t.kind = Tok::caret; break;
                case '(': t.kind = Tok::lparen; break;
                case ')': t.kind = Tok::rparen; break;
                default: throw ParseError(std::string("unexpected character '") + c + "'", i);
            }
        }
        current_ = t;
        pos_ = t.end;
    }

    void lex_number(Token& t, std::size_t i) {
        std::size_t j = i;
        auto digits = [&] {
            while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
        };
        digits();
        if (j < text_.size() && text_[j] == '.') {
            ++j;
            digits();
        }
        if (j < text_.size() && (text_[j] == 'e' || text_[j] == 'E')) {
            std::size_t k = j + 1;
            if (k < text_.size() && (text_[k] == '+' || text_[k] == '-')) ++k;
            if (k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]))) {
                j = k;
                digits();
            }
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + i, text_.data() + j, value);
        if (ec != std::errc() || ptr != text_.data() + j) {
            throw ParseError("malformed number", i);
        }
        t.kind = Tok::number;
        t.end = j;
        t.number = value;
    }

    Expr expression() {
        const std::size_t begin = current_.begin;
        Expr lhs = term();
        while (current_.kind == Tok::plus || current_.kind == Tok::minus) {
            const BinaryOp op = current_.kind == Tok::plus ? BinaryOp::add : BinaryOp::sub;
            advance();
            Expr rhs = term();
            lhs = make_binary(op, std::move(lhs), std::move(rhs), {begin, last_end_});
        }
        return lhs;
    }

    Expr term() {
        const std::size_t begin = current_.begin;
        Expr lhs = unary();
        while (current_.kind == Tok::star || current_.kind == Tok::slash) {
            const BinaryOp op = current_.kind == Tok::star ? BinaryOp::mul : BinaryOp::div;
            advance();
            Expr rhs = unary();
            lhs = make_binary(op, std::move(lhs), std::move(rhs), {begin, last_end_});
        }
        return lhs;
    }

    Expr unary() {
        const std::size_t begin = current_.begin;
        if (current_.kind == Tok::minus) {
            advance();
            Expr operand = unary();
            return make_negate(std::move(operand), {begin, last_end_});
        }
        if (current_.kind == Tok::plus) {
            advance();
            return unary();
        }
        return power();
    }

    Expr power() {
        const std::size_t begin = current_.begin;
        Expr base = primary();
        if (current_.kind == Tok::caret) {
            advance();
            Expr exponent = unary();
            return make_binary(BinaryOp::pow, std::move(base), std::move(exponent),
                               {begin, last_end_});
        }
        return base;
    }

    Expr primary() {
        const Token t = current_;
        switch (t.kind) {
            case Tok::number:
                consume();
                return make_number(t.number, {t.begin, t.end});
            case Tok::lparen: {
                consume();
                Expr inner = expression();
                expect(Tok::rparen, "expected ')'");
                return inner;
            }
            case Tok::ident:
                return identifier(t);
            case Tok::end:
                throw ParseError("unexpected end of expression", t.begin);
            default:
                throw ParseError("expected operand", t.begin);
        }
    }

    Expr identifier(const Token& t) {
        consume();
        const std::string_view name = t.text;
        if (current_.kind == Tok::lparen) {
            if (name == "antideriv") {
                if (context_ == Context::bivariate) {
                    throw ParseError("antideriv is not allowed in a bivariate expression", t.begin);
                }
                consume();
                Expr inner = expression();
                expect(Tok::rparen, "expected ')'");
                return make_antideriv(std::move(inner), {t.begin, last_end_});
            }
            if (auto fn = lookup_function(name)) {
                consume();
                Expr inner = expression();
                expect(Tok::rparen, "expected ')'");
                return make_call(*fn, std::move(inner), {t.begin, last_end_});
            }
            throw ParseError("unknown function '" + std::string(name) + "'", t.begin);
        }
        if (name == "pi" || name == "e") {
            auto literal = std::make_shared<Node>(
                *make_number(name == "pi" ? std::numbers::pi : std::numbers::e, {t.begin, t.end}));
            literal->name = std::string(name);
            return literal;
        }
        if (auto sym = lookup_symbol(name)) {
            if (!allowed(*sym, context_)) {
                throw ParseError("symbol '" + std::string(name) + "' is not available here",
                                 t.begin);
            }
            return make_symbol(*sym, {t.begin, t.end});
        }
        if (constants_.count(std::string(name)) != 0) {
            return make_constant(std::string(name), {t.begin, t.end});
        }
        throw ParseError("unknown identifier '" + std::string(name) + "'", t.begin);
    }

    void consume() {
        last_end_ = current_.end;
        advance();
    }

    void expect(Tok kind, const char* message) {
        if (current_.kind != kind) throw ParseError(message, current_.begin);
        consume();
    }

    std::string_view text_;
    Context context_;
    const Constants& constants_;
    std::size_t pos_ = 0;
    std::size_t last_end_ = 0;
    Token current_;
};

}  // namespace

Expr parse_scalar_expr(std::string_view text, Context context, const Constants& constants) {
    return Parser(text, context, constants).parse();
}

bool is_reserved_name(std::string_view name) {
    return name == "pi" || name == "e" || name == "antideriv" || lookup_function(name) ||
           lookup_symbol(name);
}

}  // namespace ruledrel::scalarfun
