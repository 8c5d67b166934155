#include "abel/transform.hpp"

#include <sstream>

namespace abel {

namespace {

SymId xs() { return registry().x(); }
SymId ys() { return registry().y(); }
SymId ts() { return registry().t(); }
SymId us() { return registry().u(); }

Expr T() { return Expr::variable(ts()); }
Expr U() { return Expr::variable(us()); }

Expr x_to_t(const Expr& e) { return substitute(e, {{xs(), T()}}); }

} // namespace

ChangeOfVariables ChangeOfVariables::point(Expr F, Expr P, Expr Q) {
    ChangeOfVariables c;
    c.kind = Kind::Point;
    c.F = std::move(F);
    c.P = std::move(P);
    c.Q = std::move(Q);
    c.validate();
    return c;
}

ChangeOfVariables ChangeOfVariables::rational_linear(Expr F, Expr P1, Expr Q1, Expr P2, Expr Q2) {
    ChangeOfVariables c;
    c.kind = Kind::RationalLinear;
    c.F = std::move(F);
    c.P1 = std::move(P1);
    c.Q1 = std::move(Q1);
    c.P2 = std::move(P2);
    c.Q2 = std::move(Q2);
    c.validate();
    return c;
}

ChangeOfVariables ChangeOfVariables::inversion() {
    ChangeOfVariables c;
    c.kind = Kind::Inversion;
    return c;
}

ChangeOfVariables ChangeOfVariables::kind_shift(Expr g1, Expr g0) {
    ChangeOfVariables c;
    c.kind = Kind::KindShift;
    c.F = Expr::variable(registry().t());
    c.g1 = std::move(g1);
    c.g0 = std::move(g0);
    c.validate();
    return c;
}

ChangeOfVariables ChangeOfVariables::composition(std::vector<ChangeOfVariables> steps) {
    ChangeOfVariables c;
    c.kind = Kind::Composition;
    c.steps = std::move(steps);
    c.validate();
    return c;
}

Expr ChangeOfVariables::dependent_map() const {
    switch (kind) {
    case Kind::Point: return P * U() + Q;
    case Kind::RationalLinear: return (P1 * U() + Q1) / (P2 * U() + Q2);
    case Kind::KindShift: return Expr(1) / (g1 * U() + g0);
    default: throw Error("no dependent map for this transform kind");
    }
}

void ChangeOfVariables::validate() const {
    switch (kind) {
    case Kind::Point:
        if (P.is_zero()) throw SingularTransform("point transform requires P != 0");
        break;
    case Kind::RationalLinear:
        if ((P1 * Q2 - P2 * Q1).is_zero())
            throw SingularTransform("rational-linear transform requires P1*Q2 - P2*Q1 != 0");
        break;
    case Kind::KindShift:
        if (g1.is_zero()) throw SingularTransform("kind shift requires g1 != 0");
        break;
    case Kind::Composition:
        if (steps.empty()) throw Error("empty composition");
        break;
    case Kind::Inversion:
        break;
    }
}

std::string ChangeOfVariables::str() const {
    std::ostringstream os;
    switch (kind) {
    case Kind::Point:
        os << "{x = " << F.str() << ", y = (" << P.str() << ")*u + " << Q.str() << "}";
        break;
    case Kind::RationalLinear:
        os << "{x = " << F.str() << ", y = ((" << P1.str() << ")*u + " << Q1.str() << ")/(("
           << P2.str() << ")*u + " << Q2.str() << ")}";
        break;
    case Kind::Inversion:
        os << "{x <-> y}";
        break;
    case Kind::KindShift:
        os << "{x = t, y = 1/((" << g1.str() << ")*u + " << g0.str() << ")}";
        break;
    case Kind::Composition: {
        os << "[";
        for (std::size_t i = 0; i < steps.size(); ++i) os << (i ? "; " : "") << steps[i].str();
        os << "]";
        break;
    }
    }
    return os.str();
}

RationalODE invert_xy(const RationalODE& e) {
    if (e.rhs.is_zero()) throw Error("invert_xy: right-hand side is identically zero");
    Expr swapped = substitute(e.rhs, {{xs(), Expr::variable(ys())}, {ys(), Expr::variable(xs())}});
    RationalODE out(Expr(1) / swapped);
    out.provenance = e.provenance;
    out.provenance.push_back(std::make_shared<ChangeOfVariables>(ChangeOfVariables::inversion()));
    return out;
}

RationalODE apply(const ChangeOfVariables& T_, const RationalODE& e) {
    T_.validate();
    switch (T_.kind) {
    case ChangeOfVariables::Kind::Inversion:
        return invert_xy(e);
    case ChangeOfVariables::Kind::Composition: {
        RationalODE cur = e;
        for (const auto& s : T_.steps) cur = apply(s, cur);
        return cur;
    }
    default:
        break;
    }
    Expr Fp = differentiate(T_.F, ts());
    if (Fp.is_zero()) throw SingularTransform("independent-variable map requires F' != 0");
    Expr Ym = T_.dependent_map();
    Expr Yt = differentiate(Ym, ts());
    Expr Yu = differentiate(Ym, us());
    if (Yu.is_zero()) throw SingularTransform("dependent-variable map does not depend on u");

    Expr phi = substitute(e.rhs, {{xs(), T_.F}, {ys(), Ym}});
    Expr rhs_tu = (Fp * phi - Yt) / Yu;
    Expr renamed = substitute(rhs_tu, {{ts(), Expr::variable(xs())}, {us(), Expr::variable(ys())}});

    RationalODE out(renamed);
    out.provenance = e.provenance;
    out.provenance.push_back(std::make_shared<ChangeOfVariables>(T_));
    return out;
}

std::pair<AbelSecondKindEq, ChangeOfVariables> first_to_second(const AbelFirstKindEq& e,
                                                               const Expr& g1, const Expr& g0) {
    if (g1.is_zero()) throw SingularTransform("first_to_second requires g1 != 0");
    ChangeOfVariables T_ = ChangeOfVariables::kind_shift(x_to_t(g1), x_to_t(g0));
    RationalODE image = apply(T_, ode_of(e));
    return {extract_second_kind(image), T_};
}

std::pair<AbelFirstKindEq, ChangeOfVariables> second_to_first_given(const AbelSecondKindEq& e,
                                                                    const Expr& g1, const Expr& g0) {
    ChangeOfVariables T_ = inverse(ChangeOfVariables::kind_shift(x_to_t(g1), x_to_t(g0)));
    RationalODE image = apply(T_, ode_of(e));
    return {extract_first_kind(image), T_};
}

std::pair<AbelFirstKindEq, ChangeOfVariables> second_to_first(const AbelSecondKindEq& e) {
    if (e.g1.is_zero()) throw SingularTransform("second kind requires g1 != 0");
    Expr w = x_to_t(e.g0 / e.g1);
    // y = 1/u - g0/g1
    ChangeOfVariables T_ = ChangeOfVariables::rational_linear(T(), -w, Expr(1), Expr(1), Expr(0));
    RationalODE image = apply(T_, ode_of(e));
    return {extract_first_kind(image), T_};
}

Expr pull_back(const ChangeOfVariables& T_, const Expr& psi) {
    switch (T_.kind) {
    case ChangeOfVariables::Kind::Inversion:
        return substitute(psi, {{xs(), Expr::variable(ys())}, {ys(), Expr::variable(xs())}});
    case ChangeOfVariables::Kind::Composition: {
        Expr cur = psi;
        for (const auto& s : T_.steps) cur = pull_back(s, cur);
        return cur;
    }
    default: {
        Expr in_tu = substitute(psi, {{xs(), T_.F}, {ys(), T_.dependent_map()}});
        return substitute(in_tu, {{ts(), Expr::variable(xs())}, {us(), Expr::variable(ys())}});
    }
    }
}

namespace {

// slot composition helper: s(F2(t))
Expr compose_slot(const Expr& slot, const Expr& F2) { return substitute(slot, {{ts(), F2}}); }

} // namespace

ChangeOfVariables compose(const std::vector<ChangeOfVariables>& ts_list) {
    if (ts_list.empty()) throw Error("empty composition");
    std::vector<ChangeOfVariables> merged;
    for (const auto& T_ : ts_list) {
        if (!merged.empty() && merged.back().kind == ChangeOfVariables::Kind::Point &&
            T_.kind == ChangeOfVariables::Kind::Point) {
            // point(F1,P1,Q1) then point(F2,P2,Q2) is point(F1(F2), P1(F2)*P2, P1(F2)*Q2 + Q1(F2))
            const ChangeOfVariables& A = merged.back();
            Expr F = compose_slot(A.F, T_.F);
            Expr Pc = compose_slot(A.P, T_.F) * T_.P;
            Expr Qc = compose_slot(A.P, T_.F) * T_.Q + compose_slot(A.Q, T_.F);
            merged.back() = ChangeOfVariables::point(F, Pc, Qc);
            continue;
        }
        merged.push_back(T_);
    }
    if (merged.size() == 1) return merged.front();
    return ChangeOfVariables::composition(std::move(merged));
}

namespace {

// F as a Mobius map (a*t + b)/(c*t + d); throws if the degree exceeds 1.
void mobius_slots(const Expr& F, Expr& a, Expr& b, Expr& c, Expr& d) {
    const RationalFunction& rf = F.rf();
    for (SymId s : rf.symbols())
        if (registry().is_tower(s)) throw Error("inverse requires rational Mobius slots");
    if (rf.num().degree(ts()) > 1 || rf.den().degree(ts()) > 1)
        throw Error("inverse exists in closed rational form only for Mobius maps");
    a = Expr(RationalFunction(rf.num().coeff_of(ts(), 1)));
    b = Expr(RationalFunction(rf.num().coeff_of(ts(), 0)));
    c = Expr(RationalFunction(rf.den().coeff_of(ts(), 1)));
    d = Expr(RationalFunction(rf.den().coeff_of(ts(), 0)));
    if ((a * d - b * c).is_zero()) throw SingularTransform("independent map is not invertible");
}

} // namespace

ChangeOfVariables inverse(const ChangeOfVariables& T_) {
    switch (T_.kind) {
    case ChangeOfVariables::Kind::Inversion:
        return ChangeOfVariables::inversion();
    case ChangeOfVariables::Kind::Composition: {
        std::vector<ChangeOfVariables> rev;
        for (auto it = T_.steps.rbegin(); it != T_.steps.rend(); ++it) rev.push_back(inverse(*it));
        return ChangeOfVariables::composition(std::move(rev));
    }
    case ChangeOfVariables::Kind::Point: {
        Expr a, b, c, d;
        mobius_slots(T_.F, a, b, c, d);
        Expr Finv = (d * T() - b) / (a - c * T());
        Expr Pi = compose_slot(T_.P, Finv);
        Expr Qi = compose_slot(T_.Q, Finv);
        return ChangeOfVariables::point(Finv, Expr(1) / Pi, -Qi / Pi);
    }
    case ChangeOfVariables::Kind::KindShift:
        // y = 1/(g1*u + g0)  =>  u = (1 - g0*y)/(g1*y)
        return ChangeOfVariables::rational_linear(T(), -T_.g0, Expr(1), T_.g1, Expr(0));
    case ChangeOfVariables::Kind::RationalLinear: {
        Expr a, b, c, d;
        mobius_slots(T_.F, a, b, c, d);
        Expr Finv = (d * T() - b) / (a - c * T());
        // y = (P1*u + Q1)/(P2*u + Q2)  =>  u = (Q1 - Q2*y)/(P2*y - P1)
        Expr p1 = -compose_slot(T_.Q2, Finv);
        Expr q1 = compose_slot(T_.Q1, Finv);
        Expr p2 = compose_slot(T_.P2, Finv);
        Expr q2 = -compose_slot(T_.P1, Finv);
        return ChangeOfVariables::rational_linear(Finv, p1, q1, p2, q2);
    }
    }
    throw Error("unreachable");
}

GtibReduction reduce_gtib(const FamilyParams& gtib_params) {
    if (gtib_params.tag != FamilyTag::GTIB) throw Error("reduce_gtib expects GTIB parameters");
    Expr lam = gtib_params.get("lambda");
    if (!lam.is_constant() || !lam.as_scalar().is_real())
        throw Unsupported("reduce_gtib requires a rational numeric lambda");
    Rat l = lam.as_scalar().re();
    if (l == 1) throw Error("lambda = 1 makes the substitution exponent undefined");
    long p = static_cast<long>(l.get_num().get_si());
    long q = static_cast<long>(l.get_den().get_si());
    if (q - p != 1 && q - p != -1)
        throw Unsupported("reduce_gtib supports exponents 1/(1-lambda) with |den-num| = 1");
    long s = q - p;           // +1 or -1
    long m = s * q;           // x = t^m

    SymId w = 0;
    FamilyParams wp = gtib_params;
    RationalODE over_w = construct_gtib_rational(wp, p, q, w);

    // dy/dt = m*t^(m-1) * Phi with w -> t^s
    Expr tpow = T().pow(Rat(s));
    Expr phi = substitute(over_w.rhs, {{w, tpow}, {ys(), U()}});
    Expr new_rhs = Expr(m) * T().pow(Rat(m - 1)) * phi;
    Expr renamed = substitute(new_rhs, {{ts(), Expr::variable(xs())}, {us(), Expr::variable(ys())}});

    GtibReduction out;
    out.ail8.tag = FamilyTag::AIL8;
    for (const char* nm : {"s1", "s0", "r1", "r0"}) out.ail8.bind[nm] = gtib_params.get(nm);
    for (const char* nm : {"a3", "a2", "a1", "a0"})
        out.ail8.bind[nm] = gtib_params.get(nm) * Expr(m);
    out.chain = ChangeOfVariables::point(T().pow(Rat(m)), Expr(1), Expr(0));
    out.note = "constant redefinition read on the input coefficients: starting from "
               "a_i -> (1-lambda)*a_i, the image carries the original a_i";

    // exactness check: the image must be the AIL_8 display with the scaled coefficients
    RationalODE expect = construct_family(out.ail8);
    if (!(renamed - expect.rhs).is_zero())
        throw Error("reduce_gtib: identity check failed");
    return out;
}

RationalODE construct_gtib_rational(const FamilyParams& pr, long lam_num, long lam_den, SymId& w_out) {
    if (lam_den < 1) throw Error("lambda denominator must be positive");
    Expr y = Expr::variable(ys());
    Expr w = lam_den == 1 ? Expr::variable(xs()) : Expr::symbol("w");
    w_out = lam_den == 1 ? xs() : registry().intern("w");
    Expr xq = w.pow(Rat(lam_den));    // x
    Expr xl = w.pow(Rat(lam_num));    // x^lambda
    Expr num = pr.get("a3") * y.pow(Rat(3)) + pr.get("a2") * y * y + pr.get("a1") * y + pr.get("a0");
    Expr den = (pr.get("s1") * xq + pr.get("s0") * xl) * y + pr.get("r1") * xq + pr.get("r0") * xl;
    return RationalODE(-num / den);
}

} // namespace abel
