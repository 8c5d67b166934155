// Change-of-variables engine for the two class groups, the x<->y inversion,
// kind conversion, composition, and first-integral transport.
//
// A transform maps an equation in (x, y) to one in (t, u) via x = F(t) and
// y = Y(t, u); the result is renamed back to (x, y). Slots may live in the
// quadratic extension tower (radicals, the Gaussian unit).
#pragma once

#include "abel/ode.hpp"

#include <optional>

namespace abel {

struct SingularTransform : Error {
    using Error::Error;
};

struct ChangeOfVariables {
    enum class Kind { Point, RationalLinear, Inversion, KindShift, Composition };

    Kind kind = Kind::Inversion;
    Expr F;                  // new independent variable map x = F(t)
    Expr P, Q;               // Point: y = P(t)*u + Q(t)
    Expr P1, Q1, P2, Q2;     // RationalLinear: y = (P1*u + Q1)/(P2*u + Q2)
    Expr g1, g0;             // KindShift: y = 1/(g1(t)*u + g0(t))
    std::vector<ChangeOfVariables> steps;

    static ChangeOfVariables point(Expr F, Expr P, Expr Q);
    static ChangeOfVariables rational_linear(Expr F, Expr P1, Expr Q1, Expr P2, Expr Q2);
    static ChangeOfVariables inversion();
    static ChangeOfVariables kind_shift(Expr g1, Expr g0);
    static ChangeOfVariables composition(std::vector<ChangeOfVariables> steps);

    /// y as a function of (t, u); not defined for Inversion/Composition.
    Expr dependent_map() const;
    void validate() const;
    std::string str() const;
};

RationalODE apply(const ChangeOfVariables& T, const RationalODE& e);

/// x<->y exchange: rhs(x,y) -> 1/rhs(y,x). Involution.
RationalODE invert_xy(const RationalODE& e);

/// First kind -> second kind via y = 1/(g1*u + g0); returns the equation and
/// the recorded transform.
std::pair<AbelSecondKindEq, ChangeOfVariables> first_to_second(const AbelFirstKindEq& e,
                                                               const Expr& g1, const Expr& g0);
/// Second kind -> first kind via the canonical map y = 1/u - g0/g1.
std::pair<AbelFirstKindEq, ChangeOfVariables> second_to_first(const AbelSecondKindEq& e);
/// Inverse direction of first_to_second with the same slots: exact round trip.
std::pair<AbelFirstKindEq, ChangeOfVariables> second_to_first_given(const AbelSecondKindEq& e,
                                                                    const Expr& g1, const Expr& g0);

/// Transport of a first integral: if Psi is a first integral of e, the result
/// is a first integral of apply(T, e).
Expr pull_back(const ChangeOfVariables& T, const Expr& psi);

ChangeOfVariables compose(const std::vector<ChangeOfVariables>& ts);
/// Closed-form inverse; requires degree-<=1 rational F (Mobius) slots.
ChangeOfVariables inverse(const ChangeOfVariables& T);

struct GtibReduction {
    FamilyParams ail8;          // image family parameters
    ChangeOfVariables chain;    // the monomial substitution used
    std::string note;           // records how the constant redefinition was read
};

/// Reduction of GTIB at rational lambda to AIL_8 via x = t^(1/(1-lambda)).
/// Supports integer lambda and integer 1/(1-lambda).
GtibReduction reduce_gtib(const FamilyParams& gtib_params);

/// GTIB right-hand side for rational lambda = p/q, expressed over w = x^(1/q).
RationalODE construct_gtib_rational(const FamilyParams& p, long lam_num, long lam_den, SymId& w_out);

} // namespace abel
