// Rational functions in canonical reduced form (coprime, monic denominator).
#pragma once

#include "abel/polynomial.hpp"

namespace abel {

class RationalFunction {
public:
    RationalFunction() : num_(Polynomial::zero()), den_(Polynomial::one()) {}
    explicit RationalFunction(const Scalar& c) : num_(Polynomial::constant(c)), den_(Polynomial::one()) {}
    explicit RationalFunction(const Polynomial& p) : num_(p), den_(Polynomial::one()) {}

    /// Canonicalizing constructor: reduces quadratic tower symbols, clears them
    /// from the denominator, divides by the gcd and makes the denominator monic.
    static RationalFunction make(Polynomial num, Polynomial den);
    static RationalFunction variable(SymId v) { return RationalFunction(Polynomial::variable(v)); }
    /// Trusted constructor for already-coprime, monic-denominator pairs.
    static RationalFunction from_coprime(Polynomial num, Polynomial den);

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    bool is_polynomial() const { return den_.is_constant(); }
    Scalar as_scalar() const;    // pre: is_constant()

    RationalFunction operator-() const;
    RationalFunction operator+(const RationalFunction& o) const;
    RationalFunction operator-(const RationalFunction& o) const;
    RationalFunction operator*(const RationalFunction& o) const;
    RationalFunction operator/(const RationalFunction& o) const;
    RationalFunction inverse() const;
    RationalFunction pow(long e) const;

    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

    bool operator==(const RationalFunction& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RationalFunction& o) const { return !(*this == o); }

    std::uint32_t degree_num(SymId v) const { return num_.degree(v); }
    std::uint32_t degree_den(SymId v) const { return den_.degree(v); }
    bool contains(SymId v) const { return num_.contains(v) || den_.contains(v); }
    std::set<SymId> symbols() const;

    std::string key() const { return num_.key() + "/" + den_.key(); }

private:
    Polynomial num_, den_;
};

/// Rewrites powers >= 2 of quadratic tower symbols via their defining relations.
Polynomial reduce_quadratics(const Polynomial& p);

} // namespace abel
