#include "abel/ratfunc.hpp"

#include "abel/symbols.hpp"

namespace abel {

Polynomial reduce_quadratics(const Polynomial& p) {
    auto syms = p.symbols();
    std::vector<SymId> quads;
    for (SymId s : syms)
        if (registry().is_quadratic(s) && p.degree(s) >= 2) quads.push_back(s);
    if (quads.empty()) return p;
    Polynomial r = p;
    for (SymId q : quads) {
        Polynomial rhs = registry().quadratic_rhs(q);
        Polynomial out;
        for (auto& [m, c] : r.terms()) {
            std::uint32_t e = m.degree(q);
            if (e < 2) {
                out.add_term(m, c);
                continue;
            }
            Monomial base = m.without(q);
            if (e % 2 == 1) base = Monomial::mul(base, Monomial::var(q, 1));
            out += Polynomial::term(c, base) * rhs.pow(e / 2);
        }
        r = out;
    }
    // defining relations may cascade (rhs can mention earlier radicals)
    for (SymId s : r.symbols())
        if (registry().is_quadratic(s) && r.degree(s) >= 2) return reduce_quadratics(r);
    return r;
}

namespace {

// Clears quadratic tower symbols out of the denominator by conjugation.
void rationalize(Polynomial& num, Polynomial& den) {
    while (true) {
        SymId theta = UINT32_MAX;
        for (SymId s : den.symbols()) {
            if (registry().is_quadratic(s)) {
                theta = s;
                break;
            }
        }
        if (theta == UINT32_MAX) return;
        Polynomial a = den.coeff_of(theta, 0);
        Polynomial b = den.coeff_of(theta, 1);
        // den = a + b*theta; conjugate is a - b*theta
        Polynomial conj = a - b * Polynomial::variable(theta);
        num = reduce_quadratics(num * conj);
        den = reduce_quadratics(den * conj);
        if (den.contains(theta)) throw Error("rationalize: radical did not cancel");
    }
}

} // namespace

RationalFunction RationalFunction::make(Polynomial num, Polynomial den) {
    num = reduce_quadratics(num);
    den = reduce_quadratics(den);
    if (den.is_zero()) throw DivisionByZero("zero denominator");
    RationalFunction r;
    if (num.is_zero()) {
        r.num_ = Polynomial::zero();
        r.den_ = Polynomial::one();
        return r;
    }
    rationalize(num, den);
    Polynomial g = poly_gcd(num, den);
    if (!g.is_constant() || !g.as_scalar().is_one()) {
        num = divexact(num, g);
        den = divexact(den, g);
    }
    Scalar lc = den.leading_coeff();
    if (!lc.is_one()) {
        Scalar inv = lc.inverse();
        num = num.mul_scalar(inv);
        den = den.mul_scalar(inv);
    }
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    return r;
}

Scalar RationalFunction::as_scalar() const {
    if (!is_constant()) throw Error("not a constant");
    if (num_.is_zero()) return Scalar(0);
    return num_.as_scalar() / den_.as_scalar();
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

namespace {

bool has_quadratic(const Polynomial& p) {
    for (SymId s : p.symbols())
        if (registry().is_quadratic(s)) return true;
    return false;
}

RationalFunction finish_coprime(Polynomial num, Polynomial den) {
    // inputs already coprime; normalize the denominator to monic
    if (num.is_zero()) return RationalFunction();
    Scalar lc = den.leading_coeff();
    if (!lc.is_one()) {
        Scalar inv = lc.inverse();
        num = num.mul_scalar(inv);
        den = den.mul_scalar(inv);
    }
    return RationalFunction::from_coprime(std::move(num), std::move(den));
}

} // namespace

RationalFunction RationalFunction::from_coprime(Polynomial num, Polynomial den) {
    RationalFunction r;
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    return r;
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
    if (den_ == o.den_) return make(num_ + o.num_, den_);
    if (has_quadratic(num_) || has_quadratic(den_) || has_quadratic(o.num_) || has_quadratic(o.den_))
        return make(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    Polynomial d0 = poly_gcd(den_, o.den_);
    if (d0.is_constant())
        return finish_coprime(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    Polynomial b = divexact(den_, d0), d = divexact(o.den_, d0);
    Polynomial t = num_ * d + o.num_ * b;
    if (t.is_zero()) return RationalFunction();
    Polynomial g2 = poly_gcd(t, d0);
    if (!g2.is_constant()) {
        t = divexact(t, g2);
        d0 = divexact(d0, g2);
    }
    return finish_coprime(std::move(t), b * d * d0);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
    return *this + (-o);
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
    if (has_quadratic(num_) || has_quadratic(den_) || has_quadratic(o.num_) || has_quadratic(o.den_))
        return make(num_ * o.num_, den_ * o.den_);
    if (is_zero() || o.is_zero()) return RationalFunction();
    Polynomial g1 = poly_gcd(num_, o.den_), g2 = poly_gcd(o.num_, den_);
    Polynomial n1 = g1.is_constant() ? num_ : divexact(num_, g1);
    Polynomial d2 = g1.is_constant() ? o.den_ : divexact(o.den_, g1);
    Polynomial n2 = g2.is_constant() ? o.num_ : divexact(o.num_, g2);
    Polynomial d1 = g2.is_constant() ? den_ : divexact(den_, g2);
    return finish_coprime(n1 * n2, d1 * d2);
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
    return *this * o.inverse();
}

RationalFunction RationalFunction::inverse() const {
    if (is_zero()) throw DivisionByZero();
    if (has_quadratic(num_) || has_quadratic(den_)) return make(den_, num_);
    return finish_coprime(den_, num_);
}

RationalFunction RationalFunction::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    RationalFunction acc(Scalar(1)), base = *this;
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

std::set<SymId> RationalFunction::symbols() const {
    std::set<SymId> s = num_.symbols();
    for (SymId v : den_.symbols()) s.insert(v);
    return s;
}

} // namespace abel
