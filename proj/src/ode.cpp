#include "abel/ode.hpp"

#include "abel/transform.hpp"

#include <algorithm>

namespace abel {

namespace {

SymId xs() { return registry().x(); }
SymId ys() { return registry().y(); }

Expr X() { return Expr::variable(xs()); }
Expr Y() { return Expr::variable(ys()); }

bool is_rational_in_xy(const Expr& e) {
    for (SymId s : e.rf().symbols())
        if (registry().is_tower(s) || registry().kind(s) == SymbolKind::BoundVar) return false;
    return true;
}

} // namespace

std::string family_name(FamilyTag tag) {
    switch (tag) {
    case FamilyTag::AIL8: return "AIL8";
    case FamilyTag::GTIB: return "GTIB";
    case FamilyTag::AIR10: return "AIR10";
    case FamilyTag::AIA16: return "AIA16";
    case FamilyTag::AIL4: return "AIL4";
    case FamilyTag::AILFirstKind: return "AIL_FirstKind";
    case FamilyTag::AIL2: return "AIL2";
    case FamilyTag::AIL1: return "AIL1";
    }
    return "?";
}

FamilyTag family_from_name(const std::string& name) {
    for (FamilyTag t : {FamilyTag::AIL8, FamilyTag::GTIB, FamilyTag::AIR10, FamilyTag::AIA16,
                        FamilyTag::AIL4, FamilyTag::AILFirstKind, FamilyTag::AIL2, FamilyTag::AIL1})
        if (family_name(t) == name) return t;
    throw Error("unknown family: " + name);
}

const std::vector<std::string>& family_params(FamilyTag tag) {
    static const std::vector<std::string> ail8 = {"s1", "s0", "r1", "r0", "a3", "a2", "a1", "a0"};
    static const std::vector<std::string> gtib = {"s1", "s0", "r1", "r0", "a3", "a2", "a1", "a0", "lambda"};
    static const std::vector<std::string> air10 = {"s2", "s1", "s0", "r2", "r1", "r0", "a3", "a2", "a1", "a0"};
    static const std::vector<std::string> aia16 = {"a3", "a2", "a1", "a0", "b3", "b2", "b1", "b0",
                                                   "s3", "s2", "s1", "s0", "r3", "r2", "r1", "r0"};
    static const std::vector<std::string> ail4 = {"k3", "k2", "k1", "k0"};
    static const std::vector<std::string> ail2 = {"alpha", "beta"};
    static const std::vector<std::string> ail1 = {"alpha"};
    switch (tag) {
    case FamilyTag::AIL8: return ail8;
    case FamilyTag::GTIB: return gtib;
    case FamilyTag::AIR10: return air10;
    case FamilyTag::AIA16: return aia16;
    case FamilyTag::AIL4:
    case FamilyTag::AILFirstKind: return ail4;
    case FamilyTag::AIL2: return ail2;
    case FamilyTag::AIL1: return ail1;
    }
    return ail8;
}

RationalODE construct_family(const FamilyParams& p) {
    const auto& allowed = family_params(p.tag);
    for (auto& [k, v] : p.bind)
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw Error("parameter '" + k + "' does not belong to family " + family_name(p.tag));

    Expr x = X(), y = Y();
    auto cubic = [&](const char* c3, const char* c2, const char* c1, const char* c0) {
        return p.get(c3) * y.pow(Rat(3)) + p.get(c2) * y * y + p.get(c1) * y + p.get(c0);
    };

    switch (p.tag) {
    case FamilyTag::AIL8: {
        Expr den = (p.get("s1") * x + p.get("s0")) * y + p.get("r1") * x + p.get("r0");
        return RationalODE(-cubic("a3", "a2", "a1", "a0") / den);
    }
    case FamilyTag::GTIB: {
        Expr lam = p.get("lambda");
        if (!lam.is_constant() || !lam.as_scalar().is_integer())
            throw Unsupported("construct_family(GTIB) requires an integer lambda; "
                              "rational lambda goes through reduce_gtib");
        long l = lam.as_scalar().re().get_num().get_si();
        Expr xl = x.pow(Rat(l));
        Expr den = (p.get("s1") * x + p.get("s0") * xl) * y + p.get("r1") * x + p.get("r0") * xl;
        return RationalODE(-cubic("a3", "a2", "a1", "a0") / den);
    }
    case FamilyTag::AIR10: {
        Expr x2 = x * x;
        Expr den = (p.get("s2") * x2 + p.get("s1") * x + p.get("s0")) * y +
                   p.get("r2") * x2 + p.get("r1") * x + p.get("r0");
        return RationalODE(-cubic("a3", "a2", "a1", "a0") / den);
    }
    case FamilyTag::AIA16: {
        Expr num = (p.get("a3") * x + p.get("b3")) * y.pow(Rat(3)) +
                   (p.get("a2") * x + p.get("b2")) * y * y +
                   (p.get("a1") * x + p.get("b1")) * y + p.get("a0") * x + p.get("b0");
        Expr den = (p.get("s3") * x.pow(Rat(3)) + p.get("s2") * x * x + p.get("s1") * x + p.get("s0")) * y +
                   p.get("r3") * x.pow(Rat(3)) + p.get("r2") * x * x + p.get("r1") * x + p.get("r0");
        return RationalODE(-num / den);
    }
    case FamilyTag::AIL4:
        return RationalODE(cubic("k3", "k2", "k1", "k0") / (y + x));
    case FamilyTag::AILFirstKind: {
        Expr k3 = p.get("k3"), k2 = p.get("k2"), k1 = p.get("k1"), k0 = p.get("k0");
        Expr rhs = (k3 * x.pow(Rat(3)) - k2 * x * x + k1 * x - k0) * y.pow(Rat(3)) -
                   (Expr(3) * k3 * x * x - Expr(2) * k2 * x + k1 + Expr(1)) * y * y +
                   (Expr(3) * k3 * x - k2) * y - k3;
        return RationalODE(rhs);
    }
    case FamilyTag::AIL2: {
        Expr a = p.get("alpha"), b = p.get("beta");
        Expr rhs = (x * a - b - x.pow(Rat(3))) * y.pow(Rat(3)) +
                   (Expr(3) * x * x - Expr(1) - a) * y * y - Expr(3) * x * y + Expr(1);
        return RationalODE(rhs);
    }
    case FamilyTag::AIL1: {
        Expr a = p.get("alpha");
        Expr rhs = (a + x * x) * y.pow(Rat(3)) - (Expr(2) * x + Expr(1)) * y * y + y;
        return RationalODE(rhs);
    }
    }
    throw Error("unreachable family tag");
}

ShapeReport shape_classify(const RationalODE& e) {
    if (!is_rational_in_xy(e.rhs))
        throw Error("shape_classify: right-hand side is not rational");
    ShapeReport r;
    const Polynomial& num = e.rhs.rf().num();
    const Polynomial& den = e.rhs.rf().den();
    std::uint32_t ny = num.degree(ys()), nx = num.degree(xs());
    std::uint32_t dy = den.degree(ys()), dx = den.degree(xs());

    r.linear = dy == 0 && ny <= 1;
    r.riccati = dy == 0 && ny == 2;
    r.abel_first_kind = dy == 0 && ny == 3;
    r.abel_second_kind = dy == 1 && ny <= 3 && !num.is_zero();
    r.aia_form = ny <= 3 && nx <= 1 && dy <= 1 && dx <= 3;
    r.air_form = r.aia_form && dx <= 2 && nx == 0;
    r.ail_form = r.air_form && dx <= 1;

    Expr den_e{RationalFunction(den)};
    if (r.abel_first_kind || r.riccati || r.linear) {
        const char* names[4] = {"f0", "f1", "f2", "f3"};
        for (std::uint32_t i = 0; i <= 3; ++i)
            r.slots[names[i]] = Expr(RationalFunction(num.coeff_of(ys(), i))) / den_e;
    } else if (dy == 1) {
        const char* names[4] = {"tf0", "tf1", "tf2", "tf3"};
        for (std::uint32_t i = 0; i <= 3 && i <= ny; ++i)
            r.slots[names[i]] = Expr(RationalFunction(num.coeff_of(ys(), i)));
        r.slots["g1"] = Expr(RationalFunction(den.coeff_of(ys(), 1)));
        r.slots["g0"] = Expr(RationalFunction(den.coeff_of(ys(), 0)));
    }
    return r;
}

AbelFirstKindEq extract_first_kind(const RationalODE& e) {
    const Polynomial& num = e.rhs.rf().num();
    const Polynomial& den = e.rhs.rf().den();
    if (den.degree(ys()) != 0) throw Error("not in first-kind form (denominator depends on y)");
    if (num.degree(ys()) > 3) throw Error("not in first-kind form (degree > 3)");
    Expr d{RationalFunction(den)};
    AbelFirstKindEq r;
    r.f3 = Expr(RationalFunction(num.coeff_of(ys(), 3))) / d;
    r.f2 = Expr(RationalFunction(num.coeff_of(ys(), 2))) / d;
    r.f1 = Expr(RationalFunction(num.coeff_of(ys(), 1))) / d;
    r.f0 = Expr(RationalFunction(num.coeff_of(ys(), 0))) / d;
    return r;
}

AbelSecondKindEq extract_second_kind(const RationalODE& e) {
    const Polynomial& num = e.rhs.rf().num();
    const Polynomial& den = e.rhs.rf().den();
    if (den.degree(ys()) != 1) throw Error("not in second-kind form (denominator not linear in y)");
    if (num.degree(ys()) > 3) throw Error("not in second-kind form (numerator degree > 3)");
    AbelSecondKindEq r;
    r.tf3 = Expr(RationalFunction(num.coeff_of(ys(), 3)));
    r.tf2 = Expr(RationalFunction(num.coeff_of(ys(), 2)));
    r.tf1 = Expr(RationalFunction(num.coeff_of(ys(), 1)));
    r.tf0 = Expr(RationalFunction(num.coeff_of(ys(), 0)));
    r.g1 = Expr(RationalFunction(den.coeff_of(ys(), 1)));
    r.g0 = Expr(RationalFunction(den.coeff_of(ys(), 0)));
    return r;
}

RationalODE ode_of(const AbelFirstKindEq& e) {
    Expr y = Y();
    return RationalODE(e.f3 * y.pow(Rat(3)) + e.f2 * y * y + e.f1 * y + e.f0);
}

RationalODE ode_of(const AbelSecondKindEq& e) {
    Expr y = Y();
    return RationalODE((e.tf3 * y.pow(Rat(3)) + e.tf2 * y * y + e.tf1 * y + e.tf0) /
                       (e.g1 * y + e.g0));
}

bool is_constant_invariant(const AbelFirstKindEq& e) {
    if (e.f3.is_zero()) throw Error("is_constant_invariant: degenerate equation (f3 = 0)");
    SymId ts = registry().t();
    // shift y -> u - f2/(3 f3) to kill the quadratic term
    Expr m = -e.f2 / (Expr(3) * e.f3);
    ChangeOfVariables shift =
        ChangeOfVariables::point(Expr::variable(ts), Expr(1), substitute(m, {{xs(), Expr::variable(ts)}}));
    RationalODE normal = apply(shift, ode_of(e));

    const Polynomial& num = normal.rhs.rf().num();
    const Polynomial& den = normal.rhs.rf().den();
    if (den.degree(ys()) != 0) throw Error("normal form extraction failed");
    Expr d{RationalFunction(den)};
    Expr g3 = Expr(RationalFunction(num.coeff_of(ys(), 3))) / d;
    Expr g2 = Expr(RationalFunction(num.coeff_of(ys(), 2))) / d;
    Expr g1 = Expr(RationalFunction(num.coeff_of(ys(), 1))) / d;
    Expr g0 = Expr(RationalFunction(num.coeff_of(ys(), 0))) / d;
    if (!g2.is_zero()) throw Error("normal form still has a quadratic term");

    Expr s3 = g0 * g0 * g3;
    if (s3.is_zero()) return true;   // reducible to a Bernoulli equation
    Expr g0p = differentiate(g0, xs());
    Expr g3p = differentiate(g3, xs());
    Expr s4 = g0 * (g3 * g0p - g0 * g3p - Expr(3) * g0 * g1 * g3);
    Expr ratio = s4.pow(Rat(3)) / s3.pow(Rat(4));
    return !depends_on(ratio, xs());
}

bool is_constant_invariant(const AbelSecondKindEq& e) {
    auto [first, chain] = second_to_first(e);
    return is_constant_invariant(first);
}

bool is_constant_invariant(const RationalODE& e) {
    const Polynomial& den = e.rhs.rf().den();
    std::uint32_t dy = den.degree(ys());
    if (dy == 0) return is_constant_invariant(extract_first_kind(e));
    if (dy == 1) return is_constant_invariant(extract_second_kind(e));
    throw Error("is_constant_invariant: equation is not convertible to first kind");
}

} // namespace abel
