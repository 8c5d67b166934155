#include "abel/parse.hpp"

#include <cctype>

namespace abel {

namespace {

enum class Tok { Number, Name, Imag, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, Prime, Equals, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        std::size_t start = i_;
        if (i_ >= s_.size()) {
            tok_ = {Tok::End, "", start};
            return;
        }
        char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i_;
            while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
            tok_ = {Tok::Number, s_.substr(i_, j - i_), start};
            i_ = j;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '%') {
            std::size_t j = i_;
            while (j < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_' || s_[j] == '%'))
                ++j;
            std::string name = s_.substr(i_, j - i_);
            i_ = j;
            if (name == "I") {
                tok_ = {Tok::Imag, name, start};
            } else {
                tok_ = {Tok::Name, name, start};
            }
            return;
        }
        ++i_;
        switch (c) {
        case '+': tok_ = {Tok::Plus, "+", start}; return;
        case '-': tok_ = {Tok::Minus, "-", start}; return;
        case '*': tok_ = {Tok::Star, "*", start}; return;
        case '/': tok_ = {Tok::Slash, "/", start}; return;
        case '^': tok_ = {Tok::Caret, "^", start}; return;
        case '(': tok_ = {Tok::LParen, "(", start}; return;
        case ')': tok_ = {Tok::RParen, ")", start}; return;
        case ',': tok_ = {Tok::Comma, ",", start}; return;
        case '\'': tok_ = {Tok::Prime, "'", start}; return;
        case '=': tok_ = {Tok::Equals, "=", start}; return;
        default: throw SyntaxError(std::string("unexpected character '") + c + "'", start);
        }
    }

    const std::string& s_;
    std::size_t i_ = 0;
    Token tok_{Tok::End, "", 0};
};

class Parser {
public:
    Parser(const std::string& text, const ParseOptions& opts) : lex_(text), opts_(opts) {}

    Expr expression() {
        Expr acc = term();
        while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            Tok op = lex_.take().kind;
            Expr rhs = term();
            acc = (op == Tok::Plus) ? acc + rhs : acc - rhs;
        }
        return acc;
    }

    void expect(Tok k, const char* what) {
        if (lex_.peek().kind != k) throw SyntaxError(std::string("expected ") + what, lex_.peek().pos);
        lex_.take();
    }

    bool at_end() const { return lex_.peek().kind == Tok::End; }
    const Token& peek() const { return lex_.peek(); }
    Token take() { return lex_.take(); }

private:
    Expr term() {
        Expr acc = factor();
        while (lex_.peek().kind == Tok::Star || lex_.peek().kind == Tok::Slash) {
            Tok op = lex_.take().kind;
            Expr rhs = factor();
            if (op == Tok::Star) {
                acc = acc * rhs;
            } else {
                if (rhs.is_zero()) throw SyntaxError("division by zero", lex_.peek().pos);
                acc = acc / rhs;
            }
        }
        return acc;
    }

    Expr factor() {
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            return -factor();
        }
        Expr base = atom();
        if (lex_.peek().kind == Tok::Caret) {
            lex_.take();
            Expr e = atom();
            if (e.is_constant()) {
                Scalar c = e.as_scalar();
                if (!c.is_real()) throw SyntaxError("complex exponent", lex_.peek().pos);
                return base.pow(c.re());
            }
            return exp_of(e * log_of(base));
        }
        return base;
    }

    Expr atom() {
        Token tk = lex_.peek();
        switch (tk.kind) {
        case Tok::Number: {
            lex_.take();
            return Expr(Scalar(rat_from_string(tk.text)));
        }
        case Tok::Imag:
            lex_.take();
            return Expr(Scalar::i());
        case Tok::LParen: {
            lex_.take();
            Expr e = expression();
            expect(Tok::RParen, "')'");
            return e;
        }
        case Tok::Name: {
            lex_.take();
            if (lex_.peek().kind == Tok::LParen &&
                (tk.text == "exp" || tk.text == "log" || tk.text == "atan" || tk.text == "sqrt" ||
                 tk.text == "Int" || tk.text == "IntAt")) {
                return call(tk.text);
            }
            return Expr::variable(registry().intern(tk.text, opts_.strict));
        }
        default:
            throw SyntaxError("expected a value", tk.pos);
        }
    }

    Expr call(const std::string& fn) {
        expect(Tok::LParen, "'('");
        Expr first = expression();
        if (fn == "exp" || fn == "log" || fn == "atan" || fn == "sqrt") {
            expect(Tok::RParen, "')'");
            if (fn == "exp") return exp_of(first);
            if (fn == "log") return log_of(first);
            if (fn == "atan") return atan_of(first);
            return sqrt_of(first);
        }
        if (fn == "Int") {
            expect(Tok::Comma, "','");
            Token var = lex_.peek();
            if (var.kind != Tok::Name) throw SyntaxError("expected integration variable", var.pos);
            lex_.take();
            SymId v = registry().intern(var.text, opts_.strict);
            std::optional<Scalar> basepoint;
            if (lex_.peek().kind == Tok::Comma) {
                lex_.take();
                Expr b = expression();
                if (!b.is_constant()) throw SyntaxError("basepoint must be constant", lex_.peek().pos);
                basepoint = b.as_scalar();
            }
            expect(Tok::RParen, "')'");
            return int_of(first, v, basepoint);
        }
        // IntAt(integrand, boundname, argument)
        expect(Tok::Comma, "','");
        Token var = lex_.peek();
        if (var.kind != Tok::Name) throw SyntaxError("expected bound variable", var.pos);
        lex_.take();
        SymId v = registry().intern(var.text, opts_.strict);
        expect(Tok::Comma, "','");
        Expr arg = expression();
        expect(Tok::RParen, "')'");
        SymId s = v;
        Expr g = first;
        if (registry().kind(v) != SymbolKind::BoundVar) {
            s = registry().bound_for(v);
            g = substitute(first, SubstMap{{v, Expr::variable(s)}});
        }
        SymId theta = registry().ensure_int(g.rf(), s, arg.rf(), std::nullopt);
        return Expr(RationalFunction::variable(theta));
    }

    Lexer lex_;
    ParseOptions opts_;
};

} // namespace

Expr parse_expression(const std::string& text, const ParseOptions& opts) {
    Parser p(text, opts);
    Expr e = p.expression();
    if (!p.at_end()) throw SyntaxError("trailing input", p.peek().pos);
    return e;
}

std::variant<Expr, OdeText> parse_any(const std::string& text, const ParseOptions& opts) {
    // lookahead for "<name>' ="
    Parser probe(text, opts);
    if (probe.peek().kind == Tok::Name) {
        Lexer lx(text);
        Token n = lx.take();
        if (lx.peek().kind == Tok::Prime) {
            lx.take();
            if (lx.peek().kind != Tok::Equals)
                throw SyntaxError("expected '=' after the prime", lx.peek().pos);
            std::size_t eq = lx.peek().pos;
            OdeText ode;
            ode.var = registry().intern(n.text, opts.strict);
            ode.rhs = parse_expression(text.substr(eq + 1), opts);
            return ode;
        }
    }
    return parse_expression(text, opts);
}

} // namespace abel
