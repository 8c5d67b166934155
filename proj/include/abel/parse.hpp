// Recursive-descent parser for the expression grammar and "y' = rhs" form.
#pragma once

#include "abel/expr.hpp"

#include <variant>

namespace abel {

struct SyntaxError : Error {
    std::size_t pos;
    SyntaxError(const std::string& msg, std::size_t p)
        : Error(msg + " (at position " + std::to_string(p) + ")"), pos(p) {}
};

struct ParseOptions {
    bool strict = false;   // reject unknown symbols instead of registering them
};

struct OdeText {
    SymId var;    // dependent variable (left of the prime)
    Expr rhs;
};

Expr parse_expression(const std::string& text, const ParseOptions& opts = {});
std::variant<Expr, OdeText> parse_any(const std::string& text, const ParseOptions& opts = {});

} // namespace abel
