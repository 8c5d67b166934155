// Abel equation representations, parametric families, shape recognition and
// the constant-invariant predicate.
#pragma once

#include "abel/expr.hpp"

#include <memory>
#include <vector>

namespace abel {

struct ChangeOfVariables;

/// First-order ODE y' = rhs(x, y) with rational right-hand side.
struct RationalODE {
    Expr rhs;
    std::vector<std::shared_ptr<const ChangeOfVariables>> provenance;

    RationalODE() = default;
    explicit RationalODE(Expr r) : rhs(std::move(r)) {}
};

struct AbelFirstKindEq {
    Expr f3, f2, f1, f0;   // rhs = f3*y^3 + f2*y^2 + f1*y + f0, coefficients in x
};

struct AbelSecondKindEq {
    Expr tf3, tf2, tf1, tf0;   // numerator cubic
    Expr g1, g0;               // denominator g1*y + g0
};

enum class FamilyTag { AIL8, GTIB, AIR10, AIA16, AIL4, AILFirstKind, AIL2, AIL1 };

std::string family_name(FamilyTag tag);
FamilyTag family_from_name(const std::string& name);
/// Parameter slot names of a family, in display order.
const std::vector<std::string>& family_params(FamilyTag tag);

struct FamilyParams {
    FamilyTag tag;
    std::map<std::string, Expr> bind;   // unbound names stay symbolic

    Expr get(const std::string& name) const {
        auto it = bind.find(name);
        return it != bind.end() ? it->second : Expr::symbol(name);
    }
};

/// Exact right-hand side of the family display with parameters substituted.
RationalODE construct_family(const FamilyParams& p);

struct ShapeReport {
    bool linear = false;
    bool riccati = false;
    bool abel_first_kind = false;
    bool abel_second_kind = false;
    bool aia_form = false;
    bool air_form = false;
    bool ail_form = false;
    /// Coefficient slots of the most specific matching shape.
    std::map<std::string, Expr> slots;
};

ShapeReport shape_classify(const RationalODE& e);

AbelFirstKindEq extract_first_kind(const RationalODE& e);
AbelSecondKindEq extract_second_kind(const RationalODE& e);
RationalODE ode_of(const AbelFirstKindEq& e);
RationalODE ode_of(const AbelSecondKindEq& e);

/// True iff the classical relative-invariant ratio of the first-kind normal
/// form does not depend on x. Accepts first- or second-kind equations.
bool is_constant_invariant(const RationalODE& e);
bool is_constant_invariant(const AbelFirstKindEq& e);
bool is_constant_invariant(const AbelSecondKindEq& e);

} // namespace abel
