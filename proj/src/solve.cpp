#include "abel/solve.hpp"

#include <algorithm>

namespace abel {

namespace {

SymId xs() { return registry().x(); }
SymId ys() { return registry().y(); }

bool univariate_constant_coeffs(const RationalFunction& f, SymId var) {
    for (SymId s : f.symbols())
        if (s != var) return false;
    return true;
}

Scalar eval_rf_at(const RationalFunction& f, SymId var, const Scalar& z) {
    auto value = [&](SymId s) -> Scalar {
        if (s == var) return z;
        throw Error("unexpected symbol in univariate evaluation");
    };
    auto ident = [](const Scalar& c) { return c; };
    Scalar n = f.num().eval<Scalar>(value, ident);
    Scalar d = f.den().eval<Scalar>(value, ident);
    return n / d;
}

// univariate quotient rule without tower machinery
RationalFunction diff_univ(const RationalFunction& f, SymId var) {
    RationalFunction dn(f.num().partial(var));
    RationalFunction dd(f.den().partial(var));
    RationalFunction den(f.den());
    return dn / den - RationalFunction(f.num()) * dd / (den * den);
}

// division with remainder for univariate numerator/denominator
void poly_divmod_univ(const Polynomial& a, const Polynomial& b, SymId var, Polynomial& q,
                      Polynomial& r) {
    q = Polynomial::zero();
    r = a;
    std::uint32_t db = b.degree(var);
    Polynomial lcb = b.coeff_of(var, db);
    Scalar lc = lcb.as_scalar();
    while (!r.is_zero() && r.degree(var) >= db) {
        std::uint32_t dr = r.degree(var);
        Scalar c = r.coeff_of(var, dr).as_scalar() / lc;
        Polynomial term = Polynomial::variable(var, dr - db).mul_scalar(c);
        q += term;
        r -= term * b;
    }
}

} // namespace

IntegrationResult integrate_rational(const RationalFunction& f, SymId var) {
    IntegrationResult out;
    if (!univariate_constant_coeffs(f, var)) return out;

    // polynomial part
    Polynomial q, rem;
    poly_divmod_univ(f.num(), f.den(), var, q, rem);
    RationalFunction rat_accum;
    if (!q.is_zero()) {
        Polynomial anti;
        for (auto& [m, c] : q.terms()) {
            std::uint32_t e = m.degree(var);
            anti.add_term(Monomial::var(var, e + 1), c / Scalar(static_cast<long>(e + 1)));
        }
        rat_accum += RationalFunction(anti);
    }
    if (rem.is_zero()) {
        out.closed = true;
        out.rational_part = rat_accum;
        return out;
    }

    const Polynomial& den = f.den();
    auto roots = gaussian_roots(den, var);
    int split = 0;
    for (auto& [r, m] : roots) split += m;
    std::uint32_t dd = den.degree(var);

    RationalFunction proper = RationalFunction::make(rem, den);
    RationalFunction remaining = proper;

    for (auto& [rho, mult] : roots) {
        // H(y) = proper * (y - rho)^mult, regular at rho
        Polynomial lin = Polynomial::variable(var) - Polynomial::constant(rho);
        RationalFunction H = proper * RationalFunction(lin.pow(static_cast<std::uint32_t>(mult)));
        Scalar fact(1);
        RationalFunction Hj = H;
        for (int j = 0; j < mult; ++j) {
            if (j > 0) {
                Hj = diff_univ(Hj, var);
                fact = fact * Scalar(j);
            }
            int k = mult - j;   // coefficient of 1/(y-rho)^k
            Scalar c = eval_rf_at(Hj, var, rho) / fact;
            if (c.is_zero()) continue;
            if (k == 1) {
                out.log_terms.push_back({c, RationalFunction(lin)});
            } else {
                // int c/(y-rho)^k = -c/((k-1) (y-rho)^(k-1))
                Scalar coef = -(c / Scalar(k - 1));
                rat_accum += RationalFunction::make(Polynomial::constant(coef),
                                                    lin.pow(static_cast<std::uint32_t>(k - 1)));
            }
            RationalFunction piece = RationalFunction::make(
                Polynomial::constant(c), lin.pow(static_cast<std::uint32_t>(k)));
            remaining -= piece;
        }
    }

    if (split != static_cast<int>(dd)) return IntegrationResult{};   // formal fallback
    if (!remaining.is_zero()) throw InternalError("partial fractions did not exhaust the integrand");

    // over Q(i) complex roots of real integrands come in conjugate pairs; fold
    // them back into real log/atan terms
    bool real_input = true;
    for (auto& [m, c] : f.num().terms()) real_input = real_input && c.is_real();
    for (auto& [m, c] : f.den().terms()) real_input = real_input && c.is_real();
    if (real_input) {
        std::vector<std::pair<Scalar, RationalFunction>> logs, atans;
        std::vector<bool> used(out.log_terms.size(), false);
        for (std::size_t i = 0; i < out.log_terms.size(); ++i) {
            if (used[i]) continue;
            auto& [c, arg] = out.log_terms[i];
            Scalar rho = -arg.num().coeff_of(var, 0).as_scalar();
            if (rho.is_real()) {
                logs.push_back(out.log_terms[i]);
                continue;
            }
            Scalar rho_conj = rho.conj(), c_conj = c.conj();
            bool paired = false;
            for (std::size_t j = i + 1; j < out.log_terms.size() && !paired; ++j) {
                if (used[j]) continue;
                auto& [c2, arg2] = out.log_terms[j];
                Scalar rho2 = -arg2.num().coeff_of(var, 0).as_scalar();
                if (rho2 == rho_conj && c2 == c_conj) {
                    used[j] = true;
                    paired = true;
                    // c*log(y-rho) + conj = p*log((y-a)^2 + b^2) - 2q*atan((y-a)/b)
                    Scalar a(rho.re()), b(rho.im()), p(c.re()), q(c.im());
                    Polynomial ym_a = Polynomial::variable(var) - Polynomial::constant(a);
                    if (!p.is_zero())
                        logs.push_back({p, RationalFunction(ym_a * ym_a + Polynomial::constant(b * b))});
                    if (!q.is_zero())
                        atans.push_back({-(q * Scalar(2)),
                                         RationalFunction(ym_a) * RationalFunction(b.inverse())});
                }
            }
            if (!paired) logs.push_back(out.log_terms[i]);
        }
        out.log_terms = std::move(logs);
        for (auto& t2 : atans) out.atan_terms.push_back(t2);
    }
    out.closed = true;
    out.rational_part = rat_accum;
    return out;
}

Expr integration_as_expr(const IntegrationResult& r, SymId /*var*/) {
    if (!r.closed) throw Error("integration result is not closed-form");
    Expr acc(r.rational_part);
    for (auto& [c, arg] : r.log_terms) acc += Expr(c) * log_of(Expr(arg));
    for (auto& [c, arg] : r.atan_terms) acc += Expr(c) * atan_of(Expr(arg));
    return acc;
}

Expr first_integral_residual(const RationalODE& e, const Expr& psi) {
    return differentiate(psi, xs()) + differentiate(psi, ys()) * e.rhs;
}

bool verify_first_integral(const RationalODE& e, const Expr& psi) {
    return first_integral_residual(e, psi).is_zero();
}

namespace {

void collect_sqrt_syms(const RationalFunction& f, std::set<SymId>& out, std::set<SymId>& seen) {
    for (SymId s : f.symbols()) {
        if (seen.count(s)) continue;
        seen.insert(s);
        if (!registry().is_tower(s)) continue;
        SymbolInfo inf = registry().info(s);
        switch (inf.kind) {
        case SymbolKind::TowerSqrt:
            out.insert(s);
            collect_sqrt_syms(RationalFunction(inf.sqrt_arg), out, seen);
            break;
        case SymbolKind::TowerExp:
        case SymbolKind::TowerLog:
        case SymbolKind::TowerAtan:
            collect_sqrt_syms(inf.arg, out, seen);
            break;
        case SymbolKind::TowerInt:
            collect_sqrt_syms(inf.integrand, out, seen);
            collect_sqrt_syms(inf.int_arg, out, seen);
            break;
        default:
            break;
        }
    }
}

} // namespace

std::optional<Expr> repair_first_integral(const RationalODE& e, const Expr& psi) {
    if (verify_first_integral(e, psi)) return psi;
    std::set<SymId> sq, seen;
    collect_sqrt_syms(psi.rf(), sq, seen);
    // formal integrals over radical integrands are branch-sensitive too: the
    // stored integrand may be the sign-opposite branch of the explicit factors
    std::set<SymId> flippable = sq;
    for (SymId s : psi.rf().symbols()) {
        if (registry().kind(s) != SymbolKind::TowerInt) continue;
        std::set<SymId> inner, seen2;
        collect_sqrt_syms(registry().info(s).integrand, inner, seen2);
        if (!inner.empty()) flippable.insert(s);
    }
    std::vector<SymId> ids(flippable.begin(), flippable.end());
    if (ids.empty() || ids.size() > 5) return std::nullopt;
    for (unsigned long mask = 1; mask < (1ul << ids.size()); ++mask) {
        SubstMap flips;
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (mask & (1ul << i)) flips[ids[i]] = -Expr::variable(ids[i]);
        Expr candidate = substitute(psi, flips);
        if (verify_first_integral(e, candidate)) return candidate;
    }
    return std::nullopt;
}

namespace {

// int P(y) * exp(V(y)) dy = R(y) * exp(V(y)) with R' + R V' = P, solved by
// undetermined coefficients; nullopt when no polynomial solution exists.
std::optional<Polynomial> risch_poly_exp(const Polynomial& P, const Polynomial& V, SymId var) {
    Polynomial v = V.partial(var);
    if (v.is_zero()) return std::nullopt;
    for (SymId s : P.symbols())
        if (s != var) return std::nullopt;
    for (SymId s : v.symbols())
        if (s != var) return std::nullopt;
    int dv = static_cast<int>(v.degree(var));
    int dp = static_cast<int>(P.degree(var));
    int n = dp - dv;
    if (P.is_zero()) return Polynomial::zero();
    if (n < 0) return std::nullopt;

    // unknowns r_0..r_n; equations for y^0..y^(n+dv)
    int rows = n + dv + 1, cols = n + 1;
    std::vector<std::vector<Scalar>> M(rows, std::vector<Scalar>(cols + 1, Scalar(0)));
    for (int i = 0; i <= n; ++i) {
        if (i >= 1) M[i - 1][i] += Scalar(i);    // from R'
        for (int j = 0; j <= dv; ++j) {
            Scalar vc = v.coeff_of(var, static_cast<std::uint32_t>(j)).as_scalar();
            if (!vc.is_zero()) M[i + j][i] += vc;
        }
    }
    for (int i = 0; i < rows; ++i)
        M[i][cols] = P.coeff_of(var, static_cast<std::uint32_t>(i)).as_scalar();

    // Gaussian elimination
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (!M[r][col].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(M[rank], M[piv]);
        Scalar inv = M[rank][col].inverse();
        for (int c = col; c <= cols; ++c) M[rank][c] *= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == rank || M[r][col].is_zero()) continue;
            Scalar f = M[r][col];
            for (int c = col; c <= cols; ++c) M[r][c] -= f * M[rank][c];
        }
        ++rank;
    }
    // consistency and extraction
    std::vector<Scalar> sol(cols, Scalar(0));
    int row = 0;
    for (int col = 0; col < cols; ++col) {
        if (row < rows && M[row][col].is_one()) {
            sol[col] = M[row][cols];
            ++row;
        }
    }
    for (int r = row; r < rows; ++r)
        if (!M[r][cols].is_zero()) return std::nullopt;
    Polynomial R;
    for (int i = 0; i < cols; ++i)
        if (!sol[i].is_zero()) R.add_term(Monomial::var(var, static_cast<std::uint32_t>(i)), sol[i]);
    // check
    if (!(R.partial(var) + R * v - P).is_zero()) return std::nullopt;
    return R;
}

struct ExpSplit {
    bool ok = false;
    RationalFunction W;   // rational cofactor
    Polynomial V;         // exponent argument (polynomial)
};

// recognizes W(y) * exp(V(y)) with V polynomial
ExpSplit split_exp_product(const Expr& e, SymId var) {
    ExpSplit out;
    const RationalFunction& rf = e.rf();
    SymId theta = UINT32_MAX;
    for (SymId s : rf.symbols()) {
        if (s == var) continue;
        if (registry().kind(s) == SymbolKind::TowerExp) {
            if (theta != UINT32_MAX) return out;
            theta = s;
        } else {
            return out;
        }
    }
    if (theta == UINT32_MAX) return out;
    SymbolInfo inf = registry().info(theta);
    if (!inf.arg.is_polynomial()) return out;
    for (SymId s : inf.arg.symbols())
        if (s != var) return out;
    // e must be theta-linear: e = W * theta
    if (rf.num().degree(theta) != 1 || rf.den().degree(theta) != 0) return out;
    if (!rf.num().coeff_of(theta, 0).is_zero()) return out;
    out.ok = true;
    out.W = RationalFunction::make(rf.num().coeff_of(theta, 1), rf.den());
    out.V = inf.arg.num();
    return out;
}

} // namespace

FirstIntegral solve_ail(const FamilyParams& p) {
    if (p.tag != FamilyTag::AIL8) throw Error("solve_ail expects AIL8 parameters");
    Expr y = Expr::variable(ys());
    Expr A = p.get("a3") * y.pow(Rat(3)) + p.get("a2") * y * y + p.get("a1") * y + p.get("a0");
    Expr s1y = p.get("s1") * y + p.get("r1");
    Expr s0y = p.get("s0") * y + p.get("r0");

    FirstIntegral out;
    out.source = p;
    if (A.is_zero()) throw Error("solve_ail: the cubic A(y) is identically zero");

    if (s1y.is_zero() && s0y.is_zero()) {
        // inverse-linear source degenerates to x' = 0; x itself is the integral
        out.psi = Expr::variable(xs());
        out.method = "partial-fractions";
        out.verified = true;
        return out;
    }

    Expr g = s1y / A;
    Expr f = s0y / A;

    // E = exp(int g dy)
    Expr E;
    bool closed_E = false;
    IntegrationResult ig;
    if (g.is_zero()) {
        E = Expr(1);
        closed_E = true;
    } else if (univariate_constant_coeffs(g.rf(), ys())) {
        ig = integrate_rational(g.rf(), ys());
        closed_E = ig.closed;
    }
    if (closed_E && !g.is_zero()) {
        // small integer log coefficients become an exact power product;
        // fractional ones stay inside the exp node (radical factors would pin
        // square-root branches and break transports through later changes of
        // variables), and clustered roots can make the exponents huge, in
        // which case the power product is exact but astronomically large
        RationalFunction prod(Scalar(1));
        Expr residual_arg{ig.rational_part};
        for (auto& [c, arg] : ig.log_terms) {
            bool small_int = c.is_integer() && c.re().get_num().fits_slong_p() &&
                             std::abs(c.re().get_num().get_si()) *
                                     static_cast<long>(arg.num().total_degree()) <= 24;
            if (small_int) {
                prod *= RationalFunction(arg).pow(c.re().get_num().get_si());
            } else {
                residual_arg += Expr(c) * log_of(Expr(arg));
            }
        }
        for (auto& [c, arg] : ig.atan_terms) residual_arg += Expr(c) * atan_of(Expr(arg));
        E = Expr(prod);
        if (!residual_arg.is_zero()) E = E * exp_of(residual_arg);
        out.method = "partial-fractions";
    } else if (!g.is_zero()) {
        E = exp_of(int_of(g, ys()));
        out.method = "formal";
    } else {
        out.method = "partial-fractions";
    }

    // J = int E*f dy
    Expr integrand = E * f;
    Expr J;
    if (integrand.is_zero()) {
        J = Expr(0);
    } else if (univariate_constant_coeffs(integrand.rf(), ys())) {
        IntegrationResult ij = integrate_rational(integrand.rf(), ys());
        if (ij.closed) {
            J = integration_as_expr(ij, ys());
        } else {
            J = int_of(integrand, ys());
            out.method = "formal";
        }
    } else {
        ExpSplit sp = split_exp_product(integrand, ys());
        bool done = false;
        if (sp.ok && sp.W.is_polynomial()) {
            if (auto R = risch_poly_exp(sp.W.num(), sp.V, ys())) {
                J = Expr(RationalFunction(*R)) * exp_of(Expr(RationalFunction(sp.V)));
                done = true;
            }
        }
        if (!done) {
            J = int_of(integrand, ys());
            out.method = "formal";
        }
    }

    out.psi = Expr::variable(xs()) * E + J;

    RationalODE eq = construct_family(p);
    if (!verify_first_integral(eq, out.psi))
        throw InternalError("solve_ail: residual of the constructed first integral is nonzero");
    out.verified = true;
    return out;
}

RiccatiForm air_to_riccati(const FamilyParams& p) {
    if (p.tag != FamilyTag::AIR10) throw Error("air_to_riccati expects AIR10 parameters");
    Expr y = Expr::variable(ys());
    Expr A = p.get("a3") * y.pow(Rat(3)) + p.get("a2") * y * y + p.get("a1") * y + p.get("a0");
    if (A.is_zero()) throw Error("air_to_riccati: the cubic A(y) is identically zero");
    RiccatiForm out;
    out.h = (p.get("s2") * y + p.get("r2")) / A;
    out.g = (p.get("s1") * y + p.get("r1")) / A;
    out.f = (p.get("s0") * y + p.get("r0")) / A;
    out.linear = out.h.is_zero();
    out.inverted = invert_xy(construct_family(p));

    // cross-check: the x<->y image reads y' = -(h(x) y^2 + g(x) y + f(x))
    SubstMap swap{{ys(), Expr::variable(xs())}};
    Expr expect = -(substitute(out.h, swap) * y * y + substitute(out.g, swap) * y +
                    substitute(out.f, swap));
    if (!(out.inverted.rhs - expect).is_zero())
        throw InternalError("air_to_riccati: slot extraction does not match the inverted equation");
    return out;
}

} // namespace abel
