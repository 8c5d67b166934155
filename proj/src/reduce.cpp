#include "abel/reduce.hpp"

#include <algorithm>

namespace abel {

namespace {

SymId xs() { return registry().x(); }
SymId ys() { return registry().y(); }
SymId ts() { return registry().t(); }

Expr T() { return Expr::variable(ts()); }

// bounded trial factorization; returns divisors of |n| (possibly incomplete
// when n has a large prime factor)
std::vector<mpz_class> bounded_divisors(mpz_class n) {
    if (sgn(n) < 0) n = -n;
    std::vector<std::pair<mpz_class, int>> factors;
    if (n == 0) return {};
    for (long p = 2; p <= 100000 && mpz_class(p) * p <= n; ++p) {
        if (!mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) continue;
        int e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) {
            n /= static_cast<unsigned long>(p);
            ++e;
        }
        factors.push_back({mpz_class(p), e});
    }
    if (n > 1 && n < 1000000000) factors.push_back({n, 1});
    std::vector<mpz_class> divs{1};
    for (auto& [p, e] : factors) {
        std::size_t base = divs.size();
        mpz_class pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) {
                divs.push_back(divs[j] * pk);
                if (divs.size() > 4096) return divs;
            }
        }
    }
    return divs;
}

Scalar eval_at(const std::vector<Scalar>& coeffs, const Scalar& z) {
    Scalar acc(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
}

std::vector<Scalar> deflate(const std::vector<Scalar>& coeffs, const Scalar& root) {
    // synthetic division by (y - root); remainder assumed zero
    std::vector<Scalar> q(coeffs.size() - 1);
    Scalar carry = coeffs.back();
    for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
        q[i] = carry;
        carry = coeffs[i] + carry * root;
    }
    return q;
}

std::optional<Scalar> find_rational_root(const std::vector<Scalar>& coeffs) {
    // constant root 0
    if (coeffs.front().is_zero()) return Scalar(0);
    for (const Scalar& c : coeffs)
        if (!c.is_real()) return std::nullopt;
    // integer-clear: candidates p/q, p | c0, q | cn
    mpz_class lcm_den = 1;
    for (const Scalar& c : coeffs)
        mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.re().get_den().get_mpz_t());
    std::vector<mpz_class> ic;
    for (const Scalar& c : coeffs) ic.push_back(c.re().get_num() * (lcm_den / c.re().get_den()));
    auto p_divs = bounded_divisors(ic.front());
    auto q_divs = bounded_divisors(ic.back());
    for (const mpz_class& p : p_divs) {
        for (const mpz_class& q : q_divs) {
            for (int sign : {1, -1}) {
                Rat cand(sign * p, q);
                cand.canonicalize();
                Scalar z{cand};
                if (eval_at(coeffs, z).is_zero()) return z;
            }
        }
    }
    return std::nullopt;
}

} // namespace

std::vector<std::pair<Scalar, int>> gaussian_roots(const Polynomial& p, SymId var) {
    for (auto& [m, c] : p.terms())
        for (auto& f : m.factors)
            if (f.first != var) throw Error("gaussian_roots: polynomial is not univariate");
    std::uint32_t deg = p.degree(var);
    std::vector<Scalar> coeffs(deg + 1, Scalar(0));
    for (auto& [m, c] : p.terms()) coeffs[m.degree(var)] = c;

    std::vector<Scalar> found;
    while (coeffs.size() > 3) {
        auto r = find_rational_root(coeffs);
        if (!r) break;
        found.push_back(*r);
        coeffs = deflate(coeffs, *r);
    }
    if (coeffs.size() == 3) {
        // quadratic formula over Q(i)
        Scalar a = coeffs[2], b = coeffs[1], c = coeffs[0];
        Scalar disc = b * b - Scalar(4) * a * c;
        if (auto sq = disc.sqrt()) {
            Scalar two_a_inv = (Scalar(2) * a).inverse();
            found.push_back((-b + *sq) * two_a_inv);
            found.push_back((-b - *sq) * two_a_inv);
            coeffs = {Scalar(1)};
        }
    }
    if (coeffs.size() == 2) {
        found.push_back(-coeffs[0] / coeffs[1]);
        coeffs = {Scalar(1)};
    }
    // collate multiplicities
    std::vector<std::pair<Scalar, int>> out;
    for (const Scalar& r : found) {
        bool hit = false;
        for (auto& [root, mult] : out)
            if (root == r) {
                ++mult;
                hit = true;
                break;
            }
        if (!hit) out.push_back({r, 1});
    }
    return out;
}

RootReduction reduce_by_roots(const RationalODE& e, std::optional<RootProfile> roots) {
    const Polynomial& num = e.rhs.rf().num();
    const Polynomial& den = e.rhs.rf().den();
    if (num.degree(ys()) != 3) throw Error("reduce_by_roots: numerator is not cubic in y");
    if (den.degree(ys()) > 1) throw Error("reduce_by_roots: denominator is not linear in y");
    for (std::uint32_t i = 0; i <= 3; ++i)
        if (num.coeff_of(ys(), i).contains(xs()))
            throw Error("reduce_by_roots: numerator coefficients must be free of x");

    RootProfile prof;
    if (roots) {
        prof = *roots;
    } else {
        Polynomial cubic;
        for (std::uint32_t i = 0; i <= 3; ++i) {
            Polynomial ci = num.coeff_of(ys(), i);
            if (!ci.is_constant())
                throw Error("reduce_by_roots: symbolic coefficients require a caller-supplied root profile");
            cubic += Polynomial::variable(ys(), i).mul_scalar(ci.as_scalar());
        }
        auto rs = gaussian_roots(cubic, ys());
        int total = 0;
        for (auto& [r, m] : rs) total += m;
        if (total != 3) throw Error("reduce_by_roots: cubic does not split over Q(i)");
        std::sort(rs.begin(), rs.end(), [](auto& a, auto& b) { return a.second > b.second; });
        if (rs.size() == 1) {
            prof = {Expr(rs[0].first), Expr(rs[0].first), Expr(rs[0].first), RootPattern::Triple};
        } else if (rs.size() == 2) {
            prof = {Expr(rs[0].first), Expr(rs[0].first), Expr(rs[1].first), RootPattern::DoubleSimple};
        } else {
            prof = {Expr(rs[0].first), Expr(rs[1].first), Expr(rs[2].first), RootPattern::ThreeDistinct};
        }
    }

    Expr a0 = prof.alpha0;
    ChangeOfVariables Tm = ChangeOfVariables::inversion();   // placeholder
    switch (prof.pattern) {
    case RootPattern::Triple:
        // y = 1/u + alpha0
        Tm = ChangeOfVariables::rational_linear(T(), a0, Expr(1), Expr(1), Expr(0));
        break;
    case RootPattern::DoubleSimple: {
        Expr d20 = prof.delta20();
        if (d20.is_zero()) throw Error("root profile inconsistent with double+simple pattern");
        Expr inv = Expr(1) / d20;
        // y = 1/(u + 1/Delta20) + alpha0
        Tm = ChangeOfVariables::rational_linear(T(), a0, a0 * inv + Expr(1), Expr(1), inv);
        break;
    }
    case RootPattern::ThreeDistinct: {
        Expr d10 = prof.delta10(), d20 = prof.delta20();
        if (d10.is_zero() || d20.is_zero() || (d10 - d20).is_zero())
            throw Error("root profile inconsistent with three-distinct pattern");
        Expr c = Expr(1) / d20 - Expr(1) / d10;
        Expr q = Expr(1) / d10;
        // y = 1/(c*u + 1/Delta10) + alpha0
        Tm = ChangeOfVariables::rational_linear(T(), a0 * c, a0 * q + Expr(1), c, q);
        break;
    }
    }

    RootReduction out;
    out.profile = prof;
    out.pattern = prof.pattern;
    out.chain = Tm;
    out.reduced = apply(Tm, e);

    // target pattern checks
    const Polynomial& rn = out.reduced.rhs.rf().num();
    const Polynomial& rd = out.reduced.rhs.rf().den();
    bool ok = true;
    switch (prof.pattern) {
    case RootPattern::Triple:
        ok = rn.degree(ys()) == 0;
        break;
    case RootPattern::DoubleSimple:
        ok = rn.degree(ys()) == 1 && rn.coeff_of(ys(), 0).is_zero();
        break;
    case RootPattern::ThreeDistinct: {
        // numerator proportional to y*(y-1)
        ok = rn.degree(ys()) == 2;
        if (ok) {
            Polynomial c2 = rn.coeff_of(ys(), 2);
            Polynomial target = (Polynomial::variable(ys(), 2) - Polynomial::variable(ys())) * c2;
            ok = target == rn;
        }
        break;
    }
    }
    if (!ok || rd.degree(ys()) > 1) throw Error("reduce_by_roots: reduced equation missed its target pattern");
    if (rd.degree(xs()) != den.degree(xs()))
        throw Error("reduce_by_roots: denominator x-degree changed");
    return out;
}

namespace {

std::map<std::string, Expr> extract_ail4_k(const RationalODE& e) {
    const Polynomial& num = e.rhs.rf().num();
    const Polynomial& den = e.rhs.rf().den();
    Polynomial yx = Polynomial::variable(ys()) + Polynomial::variable(xs());
    if (!(den == yx)) throw Error("equation is not in AIL_4 shape (denominator is not y + x)");
    std::map<std::string, Expr> k;
    for (std::uint32_t i = 0; i <= 3; ++i)
        k["k" + std::to_string(i)] = Expr(RationalFunction(num.coeff_of(ys(), i)));
    return k;
}

} // namespace

SplitResult ail_split(const FamilyParams& p, bool verify) {
    if (p.tag != FamilyTag::AIL8) throw Error("ail_split expects AIL8 parameters");
    Expr s1 = p.get("s1"), s0 = p.get("s0"), r1 = p.get("r1"), r0 = p.get("r0");
    Expr a3 = p.get("a3"), a2 = p.get("a2"), a1 = p.get("a1"), a0 = p.get("a0");
    Expr omega = r1 * s0 - r0 * s1;
    if (s1.is_zero() && s0.is_zero())
        throw Error("ail_split: denominator independent of y is not a second-kind Abel equation");

    SplitResult out;
    if (omega.is_zero()) {
        out.tag = NormalFormTag::ConstantInvariant;
        out.normal_form = construct_family(p);
        return out;
    }

    RationalODE source = construct_family(p);
    if (!s1.is_zero()) {
        Expr w2 = omega * omega;
        Expr s1_2 = s1 * s1;
        out.k["k0"] = ((a2 * r0 * r0 + (s0 * a0 - a1 * r0) * s0) * s0 - a3 * r0.pow(Rat(3))) * s1_2 / w2;
        out.k["k1"] = ((a2 * s1 - Expr(3) * a3 * r1) * r0 * r0 +
                       ((Expr(2) * r1 * a2 - Expr(2) * a1 * s1) * r0 +
                        (Expr(3) * a0 * s1 - a1 * r1) * s0) * s0) / w2;
        out.k["k2"] = (((Expr(2) * a2 * s1 - Expr(3) * a3 * r1) * r1 - a1 * s1_2) * r0 +
                       (Expr(3) * s1_2 * a0 + (r1 * a2 - Expr(2) * a1 * s1) * r1) * s0) /
                      (s1_2 * w2);
        out.k["k3"] = (a0 * s1 * s1_2 + ((a2 * s1 - a3 * r1) * r1 - a1 * s1_2) * r1) /
                      (s1_2 * s1_2 * w2);
        // {x = -t/s1^2, y = -(r0*s1^2 + r1*u)/((s1*s0 + u)*s1)}
        Expr F = -T() / s1_2;
        ChangeOfVariables Tm = ChangeOfVariables::rational_linear(F, -r1, -r0 * s1_2, s1, s1_2 * s0);
        out.chain.push_back(Tm);
    } else {
        if (r1.is_zero() || s0.is_zero())
            throw Error("ail_split: degenerate parameters (s1 = 0 with r1 = 0 or s0 = 0)");
        // footnote fallback {x = t/r1, y = (u - r0)/s0}
        ChangeOfVariables Tm =
            ChangeOfVariables::point(T() / r1, Expr(1) / s0, -r0 / s0);
        out.chain.push_back(Tm);
        RationalODE image = apply(out.chain.back(), source);
        out.k = extract_ail4_k(image);
    }
    out.tag = NormalFormTag::AIL4;
    FamilyParams k4{FamilyTag::AIL4, out.k};
    out.normal_form = construct_family(k4);
    if (verify) {
        RationalODE image = apply(out.chain.back(), source);
        if (!(image.rhs - out.normal_form.rhs).is_zero())
            throw Error("ail_split: recorded transform does not reproduce AIL_4");
    }
    return out;
}

SplitResult ail_branch(const std::map<std::string, Expr>& kmap, bool strict, bool verify) {
    auto get = [&](const char* n) {
        auto it = kmap.find(n);
        return it == kmap.end() ? Expr(0) : it->second;
    };
    Expr k3 = get("k3"), k2 = get("k2"), k1 = get("k1"), k0 = get("k0");
    FamilyParams ail4{FamilyTag::AIL4, {{"k3", k3}, {"k2", k2}, {"k1", k1}, {"k0", k0}}};
    RationalODE source = construct_family(ail4);

    SplitResult out;
    out.k = {{"k3", k3}, {"k2", k2}, {"k1", k1}, {"k0", k0}};
    if (k3.is_zero() && k2.is_zero()) {
        out.tag = NormalFormTag::ConstantInvariant;
        out.normal_form = source;
        return out;
    }

    if (!k3.is_zero()) {
        // k3 = -k4^2
        Expr mk3 = -k3;
        Expr k4;
        if (mk3.is_constant()) {
            if (auto sq = mk3.as_scalar().sqrt()) {
                k4 = Expr(*sq);
            } else if (strict) {
                throw Unsupported("ail_branch: -k3 is not a perfect square (strict mode)");
            } else {
                k4 = sqrt_of(mk3);
            }
        } else {
            if (strict) throw Unsupported("ail_branch: symbolic k3 requires a quadratic extension");
            k4 = sqrt_of(mk3);
        }
        Expr alpha = k1 - k2 * k2 / (Expr(3) * k3);
        Expr gamma = k0 - k1 * k2 / (Expr(3) * k3) + Expr(2) * k2.pow(Rat(3)) / (Expr(27) * k3 * k3);
        Expr beta = -k4 * gamma;
        // {x = -(k2 + 3*t*k4)/(3*k4^2), y = -1/(k4*u) + (k2 + 3*t*k4)/(3*k4^2)};
        // with k4^2 = -k3 the shared slot is F = (k2 + 3*t*k4)/(3*k3) and y = -F - 1/(k4*u)
        Expr F = (k2 + Expr(3) * T() * k4) / (Expr(3) * k3);
        ChangeOfVariables Tm = ChangeOfVariables::rational_linear(F, -(k4 * F), Expr(-1), k4, Expr(0));
        out.chain.push_back(Tm);
        out.tag = NormalFormTag::AIL2;
        out.derived = {{"alpha", alpha}, {"beta", beta}, {"gamma", gamma}, {"k4", k4}};
        out.normal_form = construct_family(FamilyParams{FamilyTag::AIL2, {{"alpha", alpha}, {"beta", beta}}});
    } else {
        Expr alpha = k2 * k0 - k1 * k1 / Expr(4);
        // {x = (k1 - 2t)/(2 k2), y = (2t - k1)/(2 k2) - 1/(k2 u)}
        Expr F = (k1 - Expr(2) * T()) / (Expr(2) * k2);
        ChangeOfVariables Tm = ChangeOfVariables::rational_linear(
            F, (Expr(2) * T() - k1) / Expr(2), Expr(-1), k2, Expr(0));
        out.chain.push_back(Tm);
        out.tag = NormalFormTag::AIL1;
        out.derived = {{"alpha", alpha}};
        out.normal_form = construct_family(FamilyParams{FamilyTag::AIL1, {{"alpha", alpha}}});
    }
    if (verify) {
        RationalODE image = apply(out.chain.back(), source);
        if (!(image.rhs - out.normal_form.rhs).is_zero())
            throw Error("ail_branch: recorded transform does not reproduce the normal form");
    }
    return out;
}

SplitResult ail_reduce(const FamilyParams& p, bool strict) {
    SplitResult split = ail_split(p);
    if (split.tag == NormalFormTag::ConstantInvariant) return split;
    SplitResult branch = ail_branch(split.k, strict);
    branch.chain.insert(branch.chain.begin(), split.chain.begin(), split.chain.end());
    branch.k = split.k;
    return branch;
}

} // namespace abel
