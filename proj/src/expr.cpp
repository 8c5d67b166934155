#include "abel/expr.hpp"

#include <sstream>

namespace abel {

namespace {

Rat trial_square_part(Rat n) {
    // square part of a positive integer by bounded trial division
    Rat s(1);
    mpz_class m = n.get_num();
    for (long p = 2; p <= 1000; ++p) {
        mpz_class p2 = mpz_class(p) * p;
        while (mpz_divisible_p(m.get_mpz_t(), p2.get_mpz_t())) {
            m /= p2;
            s *= p;
        }
        if (m < p2) break;
    }
    return s;
}

Expr sqrt_scalar(const Scalar& c) {
    if (auto r = c.sqrt()) return Expr(*r);
    if (c.is_real()) {
        Scalar unit(1);
        Rat m = c.re();
        if (sgn(m) < 0) {
            unit = Scalar::i();
            m = -m;
        }
        // sqrt(a/b) = sqrt(a*b)/b, then peel the square part of a*b
        Rat n(m.get_num() * m.get_den());
        Rat sq = trial_square_part(n);
        Rat rest(n / (sq * sq));
        SymId theta = registry().ensure_sqrt(Polynomial::constant(Scalar(rest)));
        Rat scale(sq / m.get_den());
        return Expr(RationalFunction(Polynomial::variable(theta)).operator*(
                   RationalFunction(Scalar(scale)))) * Expr(unit);
    }
    SymId theta = registry().ensure_sqrt(Polynomial::constant(c));
    return Expr(RationalFunction(Polynomial::variable(theta)));
}

} // namespace

namespace {

// A = B^2 * A1 with A1 free of square factors (derivative-gcd extraction)
std::pair<Polynomial, Polynomial> square_free_split(const Polynomial& a) {
    for (SymId v : a.symbols()) {
        Polynomial da = a.partial(v);
        if (da.is_zero()) continue;
        Polynomial g = poly_gcd(a, da);
        if (g.is_constant()) continue;
        Polynomial h = divexact(a, g);
        Polynomial s = poly_gcd(g, h);
        if (s.is_constant()) continue;
        auto [b2, rest] = square_free_split(divexact(a, s * s));
        return {s * b2, rest};
    }
    return {Polynomial::one(), a};
}

// canonical square root of a polynomial: peels square scalar/monomial/polynomial
// factors, splits per-variable factors, and reuses registered radicands so that
// products of radicals stay algebraically visible to the zero test
Expr sqrt_of_poly(const Polynomial& s0) {
    if (s0.is_zero()) return Expr(0);
    if (s0.is_constant()) return sqrt_scalar(s0.as_scalar());
    if (auto root = poly_sqrt(s0)) return Expr(RationalFunction(*root));

    Polynomial s = s0;
    Expr outside(1);

    // monomial part: even exponents leave, odd ones contribute sqrt(var)
    Monomial mono = s.monomial_content();
    if (!mono.is_unit()) {
        Polynomial inner;
        for (auto& [m, c] : s.terms()) inner.add_term(*Monomial::div(m, mono), c);
        for (auto& [var, e] : mono.factors) {
            if (e / 2 > 0) outside = outside * Expr(RationalFunction(Polynomial::variable(var, e / 2)));
            if (e % 2 == 1) {
                SymId th = registry().ensure_sqrt(Polynomial::variable(var));
                outside = outside * Expr::variable(th);
            }
        }
        s = inner;
        if (s.is_constant()) return outside * sqrt_scalar(s.as_scalar());
    }

    // scalar part: monic radicand, square roots of the content when exact
    Scalar lc = s.leading_coeff();
    if (!lc.is_one()) {
        s = s.mul_scalar(lc.inverse());
        outside = outside * sqrt_scalar(lc);
    }
    if (auto root = poly_sqrt(s)) return outside * Expr(RationalFunction(*root));

    // polynomial square factors
    auto [sq, rad] = square_free_split(s);
    if (!sq.is_constant()) outside = outside * Expr(RationalFunction(sq));
    s = rad;
    if (s.is_constant()) return outside * sqrt_scalar(s.as_scalar());

    // refine against registered radicands so sqrt(R*C) = sqrt(R)*sqrt(C)
    for (auto& [id, r] : registry().sqrt_radicands()) {
        if (r.is_constant() || r.total_degree() >= s.total_degree()) continue;
        Polynomial q;
        if (try_divexact(s, r, q)) return outside * Expr::variable(id) * sqrt_of_poly(q);
    }
    SymId theta = registry().ensure_sqrt(s);
    return outside * Expr::variable(theta);
}

} // namespace

Expr sqrt_of(const Expr& arg) {
    const RationalFunction& v = arg.rf();
    if (v.is_zero()) return Expr(0);
    if (v.is_constant()) return sqrt_scalar(v.as_scalar());
    // sqrt(p/q) = sqrt(p*q)/q with q monic
    Polynomial s = v.num() * v.den();
    return sqrt_of_poly(s) / Expr(RationalFunction(v.den()));
}

Expr Expr::pow(const Rat& e) const {
    if (e.get_den() == 1) {
        if (!e.get_num().fits_slong_p()) throw Unsupported("exponent too large");
        return Expr(rf_.pow(e.get_num().get_si()));
    }
    if (e.get_den() == 2) {
        mpz_class n = e.get_num();
        Expr base = *this;
        if (sgn(n) < 0) {
            base = Expr(rf_.inverse());
            n = -n;
        }
        if (!n.fits_slong_p()) throw Unsupported("exponent too large");
        long p = n.get_si();
        // base^(p/2) = base^((p-1)/2) * sqrt(base)
        Expr whole = Expr(base.rf().pow((p - 1) / 2));
        return whole * sqrt_of(base);
    }
    throw Unsupported("only integer and half-integer exponents are supported");
}

Expr exp_of(const Expr& arg) {
    if (arg.is_zero()) return Expr(1);
    const RationalFunction& v = arg.rf();
    // exp(log(E)) = E
    if (v.is_polynomial() && v.num().term_count() == 1) {
        const auto& [m, c] = *v.num().terms().begin();
        if (m.factors.size() == 1 && m.factors[0].second == 1 && c.is_one()) {
            SymId s = m.factors[0].first;
            if (registry().kind(s) == SymbolKind::TowerLog) return Expr(registry().info(s).arg);
        }
    }
    auto [id, n] = registry().ensure_exp(v);
    return Expr(RationalFunction::variable(id)).pow(Rat(n));
}

Expr log_of(const Expr& arg) {
    const RationalFunction& v = arg.rf();
    if (v.is_zero()) throw Error("log of zero");
    if (v.is_constant() && v.as_scalar().is_one()) return Expr(0);
    // log(exp(E)) = E
    if (v.is_polynomial() && v.num().term_count() == 1) {
        const auto& [m, c] = *v.num().terms().begin();
        if (m.factors.size() == 1 && m.factors[0].second == 1 && c.is_one()) {
            SymId s = m.factors[0].first;
            if (registry().kind(s) == SymbolKind::TowerExp) return Expr(registry().info(s).arg);
        }
    }
    return Expr(RationalFunction::variable(registry().ensure_log(v)));
}

Expr atan_of(const Expr& arg) {
    if (arg.is_zero()) return Expr(0);
    return Expr(RationalFunction::variable(registry().ensure_atan(arg.rf())));
}

Expr int_of(const Expr& integrand, SymId var, std::optional<Scalar> basepoint) {
    if (integrand.is_zero()) return Expr(0);
    if (!depends_on(integrand, var)) return integrand * Expr::variable(var);
    SymId s = registry().bound_for(var);
    Expr g = substitute(integrand, SubstMap{{var, Expr::variable(s)}});
    SymId theta = registry().ensure_int(g.rf(), s, RationalFunction::variable(var), basepoint);
    return Expr(RationalFunction::variable(theta));
}

// ---------------------------------------------------------------------------
// differentiation

namespace {

RationalFunction diff_rf(const RationalFunction& f, SymId v, std::map<SymId, RationalFunction>& memo);

// derivative of a single symbol
RationalFunction diff_symbol(SymId s, SymId v, std::map<SymId, RationalFunction>& memo) {
    if (s == v) return RationalFunction(Scalar(1));
    auto it = memo.find(s);
    if (it != memo.end()) return it->second;
    RationalFunction result;
    SymbolKind k = registry().kind(s);
    switch (k) {
    case SymbolKind::MainVar:
    case SymbolKind::Param:
    case SymbolKind::BoundVar:
        result = RationalFunction();
        break;
    case SymbolKind::TowerExp: {
        SymbolInfo inf = registry().info(s);
        RationalFunction da = diff_rf(inf.arg, v, memo);
        result = da * RationalFunction::variable(s);
        break;
    }
    case SymbolKind::TowerLog: {
        SymbolInfo inf = registry().info(s);
        RationalFunction da = diff_rf(inf.arg, v, memo);
        result = da.is_zero() ? RationalFunction() : da / inf.arg;
        break;
    }
    case SymbolKind::TowerAtan: {
        SymbolInfo inf = registry().info(s);
        RationalFunction da = diff_rf(inf.arg, v, memo);
        if (da.is_zero()) {
            result = RationalFunction();
        } else {
            RationalFunction one(Scalar(1));
            result = da / (one + inf.arg * inf.arg);
        }
        break;
    }
    case SymbolKind::TowerSqrt: {
        SymbolInfo inf = registry().info(s);
        RationalFunction R(inf.sqrt_arg);
        RationalFunction dR = diff_rf(R, v, memo);
        if (dR.is_zero()) {
            result = RationalFunction();
        } else {
            // theta' = R' * theta / (2R)
            result = dR * RationalFunction::variable(s) / (RationalFunction(Scalar(2)) * R);
        }
        break;
    }
    case SymbolKind::TowerInt: {
        SymbolInfo inf = registry().info(s);
        RationalFunction total;
        RationalFunction darg = diff_rf(inf.int_arg, v, memo);
        if (!darg.is_zero()) {
            Expr at = substitute(Expr(inf.integrand), SubstMap{{inf.bound_var, Expr(inf.int_arg)}});
            total += at.rf() * darg;
        }
        if (v != inf.bound_var) {   // bound occurrences are shadowed
            RationalFunction dint = diff_rf(inf.integrand, v, memo);
            if (!dint.is_zero()) {
                SymId inner = registry().ensure_int(dint, inf.bound_var, inf.int_arg, inf.basepoint);
                total += RationalFunction::variable(inner);
            }
        }
        result = total;
        break;
    }
    }
    memo.emplace(s, result);
    return result;
}

RationalFunction diff_poly(const Polynomial& p, SymId v, std::map<SymId, RationalFunction>& memo) {
    RationalFunction acc;
    for (SymId s : p.symbols()) {
        RationalFunction ds = diff_symbol(s, v, memo);
        if (ds.is_zero()) continue;
        acc += RationalFunction(p.partial(s)) * ds;
    }
    return acc;
}

RationalFunction diff_rf(const RationalFunction& f, SymId v, std::map<SymId, RationalFunction>& memo) {
    RationalFunction dn = diff_poly(f.num(), v, memo);
    if (f.is_polynomial()) return dn;
    RationalFunction dd = diff_poly(f.den(), v, memo);
    RationalFunction den(f.den());
    return dn / den - RationalFunction(f.num()) * dd / (den * den);
}

} // namespace

Expr differentiate(const Expr& e, SymId v) {
    std::map<SymId, RationalFunction> memo;
    return Expr(diff_rf(e.rf(), v, memo));
}

// ---------------------------------------------------------------------------
// substitution

namespace {

struct SubstCtx {
    const SubstMap& bindings;
    std::map<SymId, Expr> memo;
};

Expr subst_rf(const RationalFunction& f, SubstCtx& ctx);

Expr subst_symbol(SymId s, SubstCtx& ctx) {
    auto bound = ctx.bindings.find(s);
    if (bound != ctx.bindings.end()) return bound->second;
    auto it = ctx.memo.find(s);
    if (it != ctx.memo.end()) return it->second;
    Expr result = Expr::variable(s);
    SymbolKind k = registry().kind(s);
    switch (k) {
    case SymbolKind::MainVar:
    case SymbolKind::Param:
    case SymbolKind::BoundVar:
        break;
    case SymbolKind::TowerExp: {
        SymbolInfo inf = registry().info(s);
        Expr a = subst_rf(inf.arg, ctx);
        if (a.rf() != inf.arg) result = exp_of(a);
        break;
    }
    case SymbolKind::TowerLog: {
        SymbolInfo inf = registry().info(s);
        Expr a = subst_rf(inf.arg, ctx);
        if (a.rf() != inf.arg) result = log_of(a);
        break;
    }
    case SymbolKind::TowerAtan: {
        SymbolInfo inf = registry().info(s);
        Expr a = subst_rf(inf.arg, ctx);
        if (a.rf() != inf.arg) result = atan_of(a);
        break;
    }
    case SymbolKind::TowerSqrt: {
        SymbolInfo inf = registry().info(s);
        Expr a = subst_rf(RationalFunction(inf.sqrt_arg), ctx);
        if (a.rf() != RationalFunction(inf.sqrt_arg)) result = sqrt_of(a);
        break;
    }
    case SymbolKind::TowerInt: {
        SymbolInfo inf = registry().info(s);
        Expr g;
        if (ctx.bindings.count(inf.bound_var)) {
            // bound occurrences are shadowed
            SubstMap masked = ctx.bindings;
            masked.erase(inf.bound_var);
            g = substitute(Expr(inf.integrand), masked);
        } else {
            g = subst_rf(inf.integrand, ctx);
        }
        Expr a = subst_rf(inf.int_arg, ctx);
        if (g.rf() != inf.integrand || a.rf() != inf.int_arg) {
            SymId id = registry().ensure_int(g.rf(), inf.bound_var, a.rf(), inf.basepoint);
            result = Expr::variable(id);
        }
        break;
    }
    }
    ctx.memo.emplace(s, result);
    return result;
}

// pure renaming (plain variable -> plain variable) relabels monomials directly
std::optional<Polynomial> try_relabel(const Polynomial& p, const SubstMap& bindings) {
    std::map<SymId, SymId> ren;
    for (auto& [from, to] : bindings) {
        const RationalFunction& rf = to.rf();
        if (!rf.is_polynomial() || rf.num().term_count() != 1) return std::nullopt;
        auto& [m, c] = *rf.num().terms().begin();
        if (!c.is_one() || m.factors.size() != 1 || m.factors[0].second != 1) return std::nullopt;
        ren[from] = m.factors[0].first;
    }
    for (SymId s : p.symbols())
        if (registry().is_tower(s)) return std::nullopt;
    Polynomial out;
    for (auto& [m, c] : p.terms()) {
        Monomial m2;
        for (auto f : m.factors) {
            auto it = ren.find(f.first);
            if (it != ren.end()) f.first = it->second;
            m2.factors.push_back(f);
        }
        std::sort(m2.factors.begin(), m2.factors.end(),
                  [](auto& a, auto& b) { return a.first < b.first; });
        out.add_term(m2, c);
    }
    return out;
}

Expr subst_poly(const Polynomial& p, SubstCtx& ctx) {
    if (auto fast = try_relabel(p, ctx.bindings)) return Expr(RationalFunction(*fast));
    // symbols whose value actually changes, with their maximal degree in p
    std::map<SymId, std::uint32_t> maxdeg;
    for (auto& [m, c] : p.terms())
        for (auto& f : m.factors) {
            auto& d = maxdeg[f.first];
            d = std::max(d, f.second);
        }
    std::map<SymId, RationalFunction> rep;
    for (auto& [s, d] : maxdeg) {
        Expr v = subst_symbol(s, ctx);
        if (v.rf() != RationalFunction::variable(s)) rep.emplace(s, v.rf());
    }
    if (rep.empty()) return Expr(RationalFunction(p));

    // single common denominator: prod rep[s].den ^ maxdeg[s]; numerators via power tables
    std::map<SymId, std::vector<Polynomial>> npow, dpow;
    Polynomial D = Polynomial::one();
    for (auto& [s, rf] : rep) {
        std::uint32_t md = maxdeg[s];
        auto& np = npow[s];
        auto& dp = dpow[s];
        np.resize(md + 1);
        dp.resize(md + 1);
        np[0] = Polynomial::one();
        dp[0] = Polynomial::one();
        for (std::uint32_t i = 1; i <= md; ++i) {
            np[i] = reduce_quadratics(np[i - 1] * rf.num());
            dp[i] = reduce_quadratics(dp[i - 1] * rf.den());
        }
        D = reduce_quadratics(D * dp[md]);
    }
    Polynomial N;
    for (auto& [m, c] : p.terms()) {
        Polynomial term = Polynomial::constant(c);
        for (auto& [s, md] : maxdeg) {
            std::uint32_t e = m.degree(s);
            auto it = rep.find(s);
            if (it == rep.end()) {
                if (e > 0) term = term.mul_monomial(Monomial::var(s, e), Scalar(1));
            } else {
                if (e > 0) term = reduce_quadratics(term * npow[s][e]);
                if (md > e) term = reduce_quadratics(term * dpow[s][md - e]);
            }
        }
        N += term;
    }
    return Expr(RationalFunction::make(std::move(N), D));
}

Expr subst_rf(const RationalFunction& f, SubstCtx& ctx) {
    Expr n = subst_poly(f.num(), ctx);
    if (f.is_polynomial()) {
        Scalar d = f.den().as_scalar();
        return d.is_one() ? n : n / Expr(d);
    }
    Expr d = subst_poly(f.den(), ctx);
    return n / d;
}

} // namespace

Expr substitute(const Expr& e, const SubstMap& bindings) {
    if (bindings.empty()) return e;
    SubstCtx ctx{bindings, {}};
    return subst_rf(e.rf(), ctx);
}

// ---------------------------------------------------------------------------
// dependence analysis

namespace {

bool sym_depends(SymId s, SymId v, std::map<SymId, bool>& memo);

bool rf_depends(const RationalFunction& f, SymId v, std::map<SymId, bool>& memo) {
    for (SymId s : f.symbols())
        if (sym_depends(s, v, memo)) return true;
    return false;
}

bool sym_depends(SymId s, SymId v, std::map<SymId, bool>& memo) {
    if (s == v) return true;
    auto it = memo.find(s);
    if (it != memo.end()) return it->second;
    bool r = false;
    if (registry().is_tower(s)) {
        SymbolInfo inf = registry().info(s);
        switch (inf.kind) {
        case SymbolKind::TowerExp:
        case SymbolKind::TowerLog:
        case SymbolKind::TowerAtan:
            r = rf_depends(inf.arg, v, memo);
            break;
        case SymbolKind::TowerSqrt:
            r = rf_depends(RationalFunction(inf.sqrt_arg), v, memo);
            break;
        case SymbolKind::TowerInt:
            r = rf_depends(inf.int_arg, v, memo) ||
                (v != inf.bound_var && rf_depends(inf.integrand, v, memo));
            break;
        default:
            break;
        }
    }
    memo.emplace(s, r);
    return r;
}

void collect_free(const RationalFunction& f, std::set<SymId>& out, std::set<SymId>& seen);

void collect_sym(SymId s, std::set<SymId>& out, std::set<SymId>& seen) {
    if (seen.count(s)) return;
    seen.insert(s);
    SymbolKind k = registry().kind(s);
    switch (k) {
    case SymbolKind::MainVar:
    case SymbolKind::Param:
        out.insert(s);
        break;
    case SymbolKind::BoundVar:
        break;
    case SymbolKind::TowerExp:
    case SymbolKind::TowerLog:
    case SymbolKind::TowerAtan:
        collect_free(registry().info(s).arg, out, seen);
        break;
    case SymbolKind::TowerSqrt:
        collect_free(RationalFunction(registry().info(s).sqrt_arg), out, seen);
        break;
    case SymbolKind::TowerInt: {
        SymbolInfo inf = registry().info(s);
        std::set<SymId> inner;
        std::set<SymId> seen2;
        collect_free(inf.integrand, inner, seen2);
        inner.erase(inf.bound_var);
        out.insert(inner.begin(), inner.end());
        collect_free(inf.int_arg, out, seen);
        break;
    }
    }
}

void collect_free(const RationalFunction& f, std::set<SymId>& out, std::set<SymId>& seen) {
    for (SymId s : f.symbols()) collect_sym(s, out, seen);
}

} // namespace

bool depends_on(const Expr& e, SymId v) {
    std::map<SymId, bool> memo;
    return rf_depends(e.rf(), v, memo);
}

std::set<SymId> free_symbols(const Expr& e) {
    std::set<SymId> out, seen;
    collect_free(e.rf(), out, seen);
    return out;
}

// ---------------------------------------------------------------------------
// printing

namespace {

using NameMap = std::map<SymId, std::string>;

std::string rf_str(const RationalFunction& f, const NameMap& names);

std::string symbol_str(SymId s, const NameMap& names) {
    auto ov = names.find(s);
    if (ov != names.end()) return ov->second;
    SymbolKind k = registry().kind(s);
    switch (k) {
    case SymbolKind::MainVar:
    case SymbolKind::Param:
    case SymbolKind::BoundVar:
        return registry().name(s);
    case SymbolKind::TowerExp:
        return "exp(" + rf_str(registry().info(s).arg, names) + ")";
    case SymbolKind::TowerLog:
        return "log(" + rf_str(registry().info(s).arg, names) + ")";
    case SymbolKind::TowerAtan:
        return "atan(" + rf_str(registry().info(s).arg, names) + ")";
    case SymbolKind::TowerSqrt:
        return "sqrt(" + rf_str(RationalFunction(registry().info(s).sqrt_arg), names) + ")";
    case SymbolKind::TowerInt: {
        SymbolInfo inf = registry().info(s);
        // plain-variable evaluation point prints as Int(f, v)
        const RationalFunction& a = inf.int_arg;
        bool plain = a.is_polynomial() && a.num().term_count() == 1 &&
                     a.num().terms().begin()->first.factors.size() == 1 &&
                     a.num().terms().begin()->first.factors[0].second == 1 &&
                     a.num().terms().begin()->second.is_one() &&
                     !registry().is_tower(a.num().terms().begin()->first.factors[0].first);
        NameMap inner = names;
        if (plain) {
            SymId av = a.num().terms().begin()->first.factors[0].first;
            std::map<SymId, bool> memo;
            if (!rf_depends(inf.integrand, av, memo)) {
                inner[inf.bound_var] = symbol_str(av, names);
                return "Int(" + rf_str(inf.integrand, inner) + ", " + symbol_str(av, names) + ")";
            }
        }
        std::string bn = registry().name(inf.bound_var);
        return "IntAt(" + rf_str(inf.integrand, inner) + ", " + bn + ", " + rf_str(a, names) + ")";
    }
    }
    return "?";
}

std::string mono_str(const Monomial& m, const NameMap& names) {
    std::string s;
    bool first = true;
    for (auto& f : m.factors) {
        if (!first) s += "*";
        first = false;
        s += symbol_str(f.first, names);
        if (f.second != 1) s += "^" + std::to_string(f.second);
    }
    return s;
}

std::string poly_str(const Polynomial& p, const NameMap& names) {
    if (p.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const Monomial& m = it->first;
        Scalar c = it->second;
        bool neg = c.is_real() && sgn(c.re()) < 0;
        if (first) {
            if (neg) {
                s += "-";
                c = -c;
            }
        } else {
            s += neg ? " - " : " + ";
            if (neg) c = -c;
        }
        first = false;
        if (m.is_unit()) {
            s += c.str(false);
        } else if (c.is_one()) {
            s += mono_str(m, names);
        } else {
            s += c.str(true) + "*" + mono_str(m, names);
        }
    }
    return s;
}

std::string rf_str(const RationalFunction& f, const NameMap& names) {
    std::string n = poly_str(f.num(), names);
    if (f.is_polynomial()) {
        Scalar d = f.den().as_scalar();
        if (d.is_one()) return n;
        if (f.num().term_count() > 1) n = "(" + n + ")";
        return n + "/" + Scalar(d).str(true);
    }
    if (f.num().term_count() > 1) n = "(" + n + ")";
    std::string d = poly_str(f.den(), names);
    const Polynomial& den = f.den();
    bool bare = den.term_count() == 1 && den.terms().begin()->first.factors.size() == 1 &&
                den.terms().begin()->second.is_one();
    if (!bare) d = "(" + d + ")";
    return n + "/" + d;
}

} // namespace

std::string to_string(const Polynomial& p) { return poly_str(p, {}); }
std::string to_string(const RationalFunction& rf) { return rf_str(rf, {}); }
std::string Expr::str() const { return to_string(rf_); }

} // namespace abel
