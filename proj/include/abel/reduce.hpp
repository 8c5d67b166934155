// Parameter-count reduction: the root-profile Mobius reductions and the
// complete AIL splitting pipeline into the AIL_4 / AIL_2 / AIL_1 normal forms.
#pragma once

#include "abel/transform.hpp"

namespace abel {

enum class RootPattern { Triple, DoubleSimple, ThreeDistinct };

struct RootProfile {
    Expr alpha0, alpha1, alpha2;   // numerator cubic roots
    RootPattern pattern;
    Expr delta10() const { return alpha1 - alpha0; }
    Expr delta20() const { return alpha2 - alpha0; }
};

/// Roots of a cubic (or lower-degree) polynomial over Q(i), with multiplicity,
/// by rational-candidate deflation plus the quadratic formula. Empty result
/// means the polynomial does not split over Q(i) within the search budget.
std::vector<std::pair<Scalar, int>> gaussian_roots(const Polynomial& univariate, SymId var);

struct RootReduction {
    RationalODE reduced;
    ChangeOfVariables chain;
    RootProfile profile;
    RootPattern pattern;
};

/// Reduction of y' = c3*(y-a0)(y-a1)(y-a2)/(G1(x) y + G0(x)) by the shift and
/// the case-specific Mobius map; the result has four fewer parameters.
RootReduction reduce_by_roots(const RationalODE& e, std::optional<RootProfile> roots = std::nullopt);

enum class NormalFormTag { AIL4, AIL2, AIL1, ConstantInvariant };

struct SplitResult {
    NormalFormTag tag = NormalFormTag::AIL4;
    std::map<std::string, Expr> k;        // k0..k3 for AIL4 results
    std::map<std::string, Expr> derived;  // alpha/beta/gamma (AIL2) or alpha (AIL1)
    std::vector<ChangeOfVariables> chain; // recorded transforms, applied left to right
    RationalODE normal_form;
};

/// AIL_8 -> AIL_4 via the classical transform and k-formulas (omega != 0);
/// the s1 = 0 fallback uses {x = t/r1, y = (u - r0)/s0}.
SplitResult ail_split(const FamilyParams& p, bool verify = true);

/// AIL_4 -> AIL_2 (k3 != 0, via k4^2 = -k3) or AIL_1 (k3 = 0, k2 != 0);
/// k3 = k2 = 0 is constant-invariant. `strict` refuses the quadratic
/// extension when -k3 is not a perfect square.
SplitResult ail_branch(const std::map<std::string, Expr>& k, bool strict = false, bool verify = true);

/// Full pipeline AIL_8 -> AIL_4 -> branch.
SplitResult ail_reduce(const FamilyParams& p, bool strict = false);

} // namespace abel
