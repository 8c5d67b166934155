// Normalized expressions: every value is a rational function over the main
// variables, parameters and tower indeterminates. Transcendental structure
// (exp, log, atan, radicals, formal integrals) lives in the registry tower;
// building an expression normalizes eagerly, so structural equality of the
// underlying rational functions is semantic equality.
#pragma once

#include "abel/ratfunc.hpp"
#include "abel/symbols.hpp"

#include <map>
#include <string>

namespace abel {

class Expr {
public:
    Expr() = default;
    explicit Expr(RationalFunction rf) : rf_(std::move(rf)) {}
    explicit Expr(const Scalar& c) : rf_(c) {}
    explicit Expr(long n) : rf_(Scalar(n)) {}

    static Expr variable(SymId v) { return Expr(RationalFunction::variable(v)); }
    static Expr symbol(const std::string& name) { return variable(registry().intern(name)); }

    const RationalFunction& rf() const { return rf_; }

    bool is_zero() const { return rf_.is_zero(); }
    bool is_constant() const { return rf_.is_constant(); }
    Scalar as_scalar() const { return rf_.as_scalar(); }

    Expr operator-() const { return Expr(-rf_); }
    Expr operator+(const Expr& o) const { return Expr(rf_ + o.rf_); }
    Expr operator-(const Expr& o) const { return Expr(rf_ - o.rf_); }
    Expr operator*(const Expr& o) const { return Expr(rf_ * o.rf_); }
    Expr operator/(const Expr& o) const { return Expr(rf_ / o.rf_); }
    Expr& operator+=(const Expr& o) { rf_ += o.rf_; return *this; }
    Expr& operator-=(const Expr& o) { rf_ -= o.rf_; return *this; }
    Expr& operator*=(const Expr& o) { rf_ *= o.rf_; return *this; }
    Expr& operator/=(const Expr& o) { rf_ /= o.rf_; return *this; }

    bool operator==(const Expr& o) const { return rf_ == o.rf_; }
    bool operator!=(const Expr& o) const { return rf_ != o.rf_; }

    /// Integer or half-integer exponents (quadratic radicals only).
    Expr pow(const Rat& e) const;

    std::string str() const;

private:
    RationalFunction rf_;
};

Expr exp_of(const Expr& arg);
Expr log_of(const Expr& arg);
Expr atan_of(const Expr& arg);
Expr sqrt_of(const Expr& arg);
/// Formal antiderivative of `integrand` with respect to `var`, evaluated at `var`.
Expr int_of(const Expr& integrand, SymId var, std::optional<Scalar> basepoint = std::nullopt);

using SubstMap = std::map<SymId, Expr>;

Expr differentiate(const Expr& e, SymId v);
Expr substitute(const Expr& e, const SubstMap& bindings);

/// Dependence including through tower definitions.
bool depends_on(const Expr& e, SymId v);
/// Non-tower symbols the expression depends on, transitively.
std::set<SymId> free_symbols(const Expr& e);

/// Exact zero test: sound under algebraic independence of tower entries.
inline bool is_zero_exact(const Expr& e) { return e.is_zero(); }

// Canonical grammar-compatible printing.
std::string to_string(const RationalFunction& rf);
std::string to_string(const Polynomial& p);

} // namespace abel
