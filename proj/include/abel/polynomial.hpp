// Sparse multivariate polynomials over Gaussian rationals, graded-lex order.
#pragma once

#include "abel/scalar.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace abel {

using SymId = std::uint32_t;

/// Sparse exponent vector, factors sorted by symbol id, exponents > 0.
struct Monomial {
    std::vector<std::pair<SymId, std::uint32_t>> factors;

    std::uint64_t total_degree() const {
        std::uint64_t d = 0;
        for (auto& f : factors) d += f.second;
        return d;
    }
    std::uint32_t degree(SymId v) const {
        for (auto& f : factors)
            if (f.first == v) return f.second;
        return 0;
    }
    bool is_unit() const { return factors.empty(); }
    bool operator==(const Monomial& o) const { return factors == o.factors; }

    static Monomial var(SymId v, std::uint32_t e = 1) {
        Monomial m;
        if (e > 0) m.factors.push_back({v, e});
        return m;
    }
    static Monomial mul(const Monomial& a, const Monomial& b);
    static std::optional<Monomial> div(const Monomial& a, const Monomial& b);
    static Monomial gcd(const Monomial& a, const Monomial& b);
    /// Monomial with v's exponent removed.
    Monomial without(SymId v) const;
};

int grlex_cmp(const Monomial& a, const Monomial& b);

struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const { return grlex_cmp(a, b) < 0; }
};

class Polynomial {
public:
    using TermMap = std::map<Monomial, Scalar, GrlexLess>;

    Polynomial() = default;

    static Polynomial zero() { return Polynomial(); }
    static Polynomial constant(const Scalar& c);
    static Polynomial one() { return constant(Scalar(1)); }
    static Polynomial variable(SymId v, std::uint32_t e = 1);
    static Polynomial term(const Scalar& c, const Monomial& m);

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit()); }
    Scalar as_scalar() const;     // pre: is_constant()
    std::size_t term_count() const { return terms_.size(); }

    void add_term(const Monomial& m, const Scalar& c);   // accumulates, drops zeros

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
    Polynomial mul_scalar(const Scalar& c) const;
    Polynomial mul_monomial(const Monomial& m, const Scalar& c) const;
    Polynomial pow(std::uint32_t e) const;

    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    std::uint32_t degree(SymId v) const;
    std::uint64_t total_degree() const;
    bool contains(SymId v) const { return degree(v) > 0; }
    std::set<SymId> symbols() const;

    /// Coefficient of v^k as a polynomial in the remaining symbols.
    Polynomial coeff_of(SymId v, std::uint32_t k) const;
    /// Formal partial derivative (all symbols treated as independent).
    Polynomial partial(SymId v) const;

    /// Leading term under graded-lex.
    const std::pair<const Monomial, Scalar>& leading() const { return *terms_.rbegin(); }
    Scalar leading_coeff() const { return is_zero() ? Scalar(0) : terms_.rbegin()->second; }
    /// gcd of all monomials (the common monomial factor).
    Monomial monomial_content() const;

    /// Deterministic structural key, used for tower deduplication.
    std::string key() const;

    /// Positive rational c such that (1/c)*this has coprime Gaussian-integer
    /// coefficients; 1 for the zero polynomial.
    Rat rational_content() const;
    Polynomial primitive_scaled() const { return mul_scalar(Scalar(Rat(1) / rational_content())); }

    template <class T, class FromScalar>
    T eval(const std::function<T(SymId)>& value_of, FromScalar&& from_scalar) const {
        T acc = T(0);
        for (auto& [m, c] : terms_) {
            T term = from_scalar(c);
            for (auto& f : m.factors) {
                T v = value_of(f.first);
                T p = T(1);
                std::uint32_t e = f.second;
                while (e > 0) {
                    if (e & 1) p = p * v;
                    v = v * v;
                    e >>= 1;
                }
                term = term * p;
            }
            acc = acc + term;
        }
        return acc;
    }

private:
    TermMap terms_;
};

// Univariate views (coefficients indexed by v-degree).
std::vector<Polynomial> to_univariate(const Polynomial& p, SymId v);
Polynomial from_univariate(const std::vector<Polynomial>& coeffs, SymId v);

/// Exact division; throws Error if b does not divide a.
Polynomial divexact(const Polynomial& a, const Polynomial& b);
bool try_divexact(const Polynomial& a, const Polynomial& b, Polynomial& quot);

/// Pseudo-remainder of a by b with respect to v: lc(b)^(deg a - deg b + 1) * a mod b.
Polynomial pseudo_rem(const Polynomial& a, const Polynomial& b, SymId v);

/// Multivariate gcd (subresultant PRS), unit-normalized (leading coefficient 1).
Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

/// Exact polynomial square root, if the polynomial is a perfect square.
std::optional<Polynomial> poly_sqrt(const Polynomial& p);

} // namespace abel
