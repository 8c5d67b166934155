// Closed-form machinery: the AIL quadrature solution Psi = x*E(y) + J(y),
// first-integral verification by exact differentiation, and the AIR -> Riccati
// reduction.
#pragma once

#include "abel/reduce.hpp"

namespace abel {

/// Thrown when the residual of a constructed solution fails to normalize to
/// zero; that is an implementation bug, never a result.
struct InternalError : Error {
    using Error::Error;
};

struct FirstIntegral {
    Expr psi;
    bool verified = false;
    std::string method;                     // "partial-fractions" or "formal"
    FamilyParams source;
    std::vector<ChangeOfVariables> chain;   // transports applied after solving
};

/// General solution of the AIL_8 family member as a first integral
/// Psi = x*exp(Int g dy) + Int exp(Int g dy) f dy with g, f from the family
/// parameters. Closed forms when the cubic splits over Q(i); formal integrals
/// otherwise. The residual check must pass, or InternalError is thrown.
FirstIntegral solve_ail(const FamilyParams& p);

/// d(Psi)/dx + d(Psi)/dy * rhs normalizes to zero.
bool verify_first_integral(const RationalODE& e, const Expr& psi);
/// The residual itself (for sampled cross-checks in tests).
Expr first_integral_residual(const RationalODE& e, const Expr& psi);

/// Substituting into radicals fixes square-root branches independently on the
/// two sides of a transported integral, so the pulled-back object can mix
/// branches. Every global sign assignment of the radicals is a first integral
/// when any is; this searches the (small) assignment space for the coherent
/// one and returns it, or nullopt when none verifies.
std::optional<Expr> repair_first_integral(const RationalODE& e, const Expr& psi);

struct RiccatiForm {
    Expr f, g, h;      // dx/dy = -(h(y)*x^2 + g(y)*x + f(y))
    bool linear;       // h == 0: degenerates to the inverse-linear (AIL) case
    RationalODE inverted;   // the x<->y image, for cross-checking
};

RiccatiForm air_to_riccati(const FamilyParams& p);

/// Structured exact integration of a univariate rational function over Q(i):
/// rational part plus log/atan terms. closed == false when the denominator
/// does not split far enough (the caller then keeps a formal integral).
struct IntegrationResult {
    bool closed = false;
    RationalFunction rational_part;
    std::vector<std::pair<Scalar, RationalFunction>> log_terms;
    std::vector<std::pair<Scalar, RationalFunction>> atan_terms;
};

IntegrationResult integrate_rational(const RationalFunction& f, SymId var);
/// Assembles the structured result as an expression in `var`.
Expr integration_as_expr(const IntegrationResult& r, SymId var);

} // namespace abel
