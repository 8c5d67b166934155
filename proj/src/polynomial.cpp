#include "abel/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace abel {

Monomial Monomial::mul(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.factors.reserve(a.factors.size() + b.factors.size());
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        if (j == b.factors.size() || (i < a.factors.size() && a.factors[i].first < b.factors[j].first))
            r.factors.push_back(a.factors[i++]);
        else if (i == a.factors.size() || b.factors[j].first < a.factors[i].first)
            r.factors.push_back(b.factors[j++]);
        else {
            r.factors.push_back({a.factors[i].first, a.factors[i].second + b.factors[j].second});
            ++i, ++j;
        }
    }
    return r;
}

std::optional<Monomial> Monomial::div(const Monomial& a, const Monomial& b) {
    Monomial r;
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        if (j == b.factors.size()) {
            r.factors.push_back(a.factors[i++]);
        } else if (i == a.factors.size() || b.factors[j].first < a.factors[i].first) {
            return std::nullopt;   // b has a symbol a lacks
        } else if (a.factors[i].first < b.factors[j].first) {
            r.factors.push_back(a.factors[i++]);
        } else {
            if (a.factors[i].second < b.factors[j].second) return std::nullopt;
            if (a.factors[i].second > b.factors[j].second)
                r.factors.push_back({a.factors[i].first, a.factors[i].second - b.factors[j].second});
            ++i, ++j;
        }
    }
    return r;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
    Monomial r;
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() && j < b.factors.size()) {
        if (a.factors[i].first < b.factors[j].first) ++i;
        else if (b.factors[j].first < a.factors[i].first) ++j;
        else {
            r.factors.push_back({a.factors[i].first, std::min(a.factors[i].second, b.factors[j].second)});
            ++i, ++j;
        }
    }
    return r;
}

Monomial Monomial::without(SymId v) const {
    Monomial r;
    for (auto& f : factors)
        if (f.first != v) r.factors.push_back(f);
    return r;
}

int grlex_cmp(const Monomial& a, const Monomial& b) {
    std::uint64_t da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db ? -1 : 1;
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        SymId ia = i < a.factors.size() ? a.factors[i].first : UINT32_MAX;
        SymId ib = j < b.factors.size() ? b.factors[j].first : UINT32_MAX;
        if (ia < ib) return 1;    // a has positive exponent on the more significant symbol
        if (ib < ia) return -1;
        if (a.factors[i].second != b.factors[j].second)
            return a.factors[i].second > b.factors[j].second ? 1 : -1;
        ++i, ++j;
    }
    return 0;
}

Polynomial Polynomial::constant(const Scalar& c) {
    Polynomial p;
    if (!c.is_zero()) p.terms_.emplace(Monomial{}, c);
    return p;
}

Polynomial Polynomial::variable(SymId v, std::uint32_t e) {
    Polynomial p;
    p.terms_.emplace(Monomial::var(v, e), Scalar(1));
    return p;
}

Polynomial Polynomial::term(const Scalar& c, const Monomial& m) {
    Polynomial p;
    if (!c.is_zero()) p.terms_.emplace(m, c);
    return p;
}

Scalar Polynomial::as_scalar() const {
    if (is_zero()) return Scalar(0);
    return terms_.begin()->second;
}

void Polynomial::add_term(const Monomial& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Polynomial Polynomial::operator-() const {
    Polynomial r;
    for (auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial r = *this;
    for (auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    Polynomial r = *this;
    for (auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    Polynomial r;
    if (is_zero() || o.is_zero()) return r;
    for (auto& [ma, ca] : terms_)
        for (auto& [mb, cb] : o.terms_)
            r.add_term(Monomial::mul(ma, mb), ca * cb);
    return r;
}

Polynomial Polynomial::mul_scalar(const Scalar& c) const {
    Polynomial r;
    if (c.is_zero()) return r;
    for (auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
    return r;
}

Polynomial Polynomial::mul_monomial(const Monomial& m, const Scalar& c) const {
    Polynomial r;
    if (c.is_zero()) return r;
    for (auto& [mm, v] : terms_) r.terms_.emplace(Monomial::mul(mm, m), v * c);
    return r;
}

Polynomial Polynomial::pow(std::uint32_t e) const {
    Polynomial acc = one(), base = *this;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

std::uint32_t Polynomial::degree(SymId v) const {
    std::uint32_t d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, m.degree(v));
    return d;
}

std::uint64_t Polynomial::total_degree() const {
    std::uint64_t d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, m.total_degree());
    return d;
}

std::set<SymId> Polynomial::symbols() const {
    std::set<SymId> s;
    for (auto& [m, c] : terms_)
        for (auto& f : m.factors) s.insert(f.first);
    return s;
}

Polynomial Polynomial::coeff_of(SymId v, std::uint32_t k) const {
    Polynomial r;
    for (auto& [m, c] : terms_)
        if (m.degree(v) == k) r.terms_.emplace(m.without(v), c);
    return r;
}

Polynomial Polynomial::partial(SymId v) const {
    Polynomial r;
    for (auto& [m, c] : terms_) {
        std::uint32_t e = m.degree(v);
        if (e == 0) continue;
        Monomial m2 = m.without(v);
        if (e > 1) m2 = Monomial::mul(m2, Monomial::var(v, e - 1));
        r.add_term(m2, c * Scalar(static_cast<long>(e)));
    }
    return r;
}

Monomial Polynomial::monomial_content() const {
    Monomial g;
    bool first = true;
    for (auto& [m, c] : terms_) {
        if (first) {
            g = m;
            first = false;
        } else {
            g = Monomial::gcd(g, m);
        }
        if (g.is_unit()) break;
    }
    return g;
}

Rat Polynomial::rational_content() const {
    if (is_zero()) return Rat(1);
    mpz_class num_gcd(0), den_lcm(1);
    auto feed = [&](const Rat& q) {
        if (sgn(q) == 0) return;
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), q.get_den().get_mpz_t());
    };
    for (auto& [m, c] : terms_) {
        feed(c.re());
        feed(c.im());
    }
    for (auto& [m, c] : terms_) {
        auto feed2 = [&](const Rat& q) {
            if (sgn(q) == 0) return;
            mpz_class scaled = q.get_num() * (den_lcm / q.get_den());
            mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled.get_mpz_t());
        };
        feed2(c.re());
        feed2(c.im());
    }
    if (num_gcd == 0) return Rat(1);
    Rat r(num_gcd, den_lcm);
    r.canonicalize();
    return r;
}

std::string Polynomial::key() const {
    std::ostringstream os;
    for (auto& [m, c] : terms_) {
        for (auto& f : m.factors) os << f.first << '^' << f.second << '.';
        os << '|' << c.re().get_str() << ',' << c.im().get_str() << ';';
    }
    return os.str();
}

std::vector<Polynomial> to_univariate(const Polynomial& p, SymId v) {
    std::vector<Polynomial> c(p.degree(v) + 1);
    for (auto& [m, s] : p.terms()) {
        std::uint32_t d = m.degree(v);
        c[d].add_term(m.without(v), s);
    }
    return c;
}

Polynomial from_univariate(const std::vector<Polynomial>& coeffs, SymId v) {
    Polynomial r;
    for (std::size_t d = 0; d < coeffs.size(); ++d) {
        Monomial vm = Monomial::var(v, static_cast<std::uint32_t>(d));
        for (auto& [m, s] : coeffs[d].terms())
            r.add_term(Monomial::mul(m, vm), s);
    }
    return r;
}

bool try_divexact(const Polynomial& a, const Polynomial& b, Polynomial& quot) {
    if (b.is_zero()) return false;
    Polynomial r = a, q;
    if (b.is_constant()) {
        quot = a.mul_scalar(b.as_scalar().inverse());
        return true;
    }
    const auto& ltb = b.leading();
    while (!r.is_zero()) {
        const auto& ltr = r.leading();
        auto m = Monomial::div(ltr.first, ltb.first);
        if (!m) return false;
        Scalar c = ltr.second / ltb.second;
        q.add_term(*m, c);
        r -= b.mul_monomial(*m, c);
    }
    quot = std::move(q);
    return true;
}

Polynomial divexact(const Polynomial& a, const Polynomial& b) {
    Polynomial q;
    if (!try_divexact(a, b, q)) throw Error("divexact: not divisible");
    return q;
}

namespace {

int univ_deg(const std::vector<Polynomial>& c) {
    for (int d = static_cast<int>(c.size()) - 1; d >= 0; --d)
        if (!c[d].is_zero()) return d;
    return -1;
}

// lc(b)^(da-db+1) * a mod b, computed coefficient-wise.
std::vector<Polynomial> prem_univ(std::vector<Polynomial> a, const std::vector<Polynomial>& b) {
    int da = univ_deg(a), db = univ_deg(b);
    const Polynomial& lcb = b[db];
    int e = da - db + 1;
    while (true) {
        int d = univ_deg(a);
        if (d < db) break;
        Polynomial lca = a[d];
        for (int i = 0; i < d; ++i)
            if (!a[i].is_zero()) a[i] = a[i] * lcb;
        for (int i = 0; i < db; ++i)
            if (!b[i].is_zero()) a[d - db + i] -= lca * b[i];
        a[d] = Polynomial::zero();
        --e;
    }
    if (e > 0) {
        Polynomial f = lcb.pow(static_cast<std::uint32_t>(e));
        for (auto& c : a)
            if (!c.is_zero()) c = c * f;
    }
    return a;
}

Polynomial unit_normalize(const Polynomial& p) {
    if (p.is_zero()) return p;
    Scalar lc = p.leading_coeff();
    if (lc.is_one()) return p;
    return p.mul_scalar(lc.inverse());
}

Polynomial content_in(const Polynomial& p, SymId v);

// all coefficients constant, at most the single symbol v present
bool is_univariate_constant(const Polynomial& p, SymId v) {
    for (auto& [m, c] : p.terms()) {
        for (auto& f : m.factors)
            if (f.first != v) return false;
    }
    return true;
}

// monic Euclid for univariate polynomials over the scalar field
Polynomial euclid_univ(const Polynomial& a, const Polynomial& b, SymId v) {
    auto vec = [&](const Polynomial& p) {
        std::vector<Scalar> c(p.degree(v) + 1, Scalar(0));
        for (auto& [m, s] : p.terms()) c[m.degree(v)] = s;
        return c;
    };
    auto deg = [](const std::vector<Scalar>& c) {
        for (int d = static_cast<int>(c.size()) - 1; d >= 0; --d)
            if (!c[d].is_zero()) return d;
        return -1;
    };
    std::vector<Scalar> r0 = vec(a), r1 = vec(b);
    if (deg(r0) < deg(r1)) std::swap(r0, r1);
    while (true) {
        int d1 = deg(r1);
        if (d1 < 0) break;
        // make r1 monic, then reduce r0 mod r1
        Scalar lc = r1[d1].inverse();
        for (auto& s : r1) s *= lc;
        int d0 = deg(r0);
        while (d0 >= d1) {
            Scalar c = r0[d0];
            if (!c.is_zero()) {
                for (int i = 0; i <= d1; ++i) r0[d0 - d1 + i] -= c * r1[i];
                r0[d0] = Scalar(0);
            }
            --d0;
            while (d0 >= 0 && r0[d0].is_zero()) --d0;
        }
        std::swap(r0, r1);
    }
    int d = deg(r0);
    if (d <= 0) return Polynomial::one();
    Polynomial g;
    Scalar lc = r0[d].inverse();
    for (int i = 0; i <= d; ++i)
        if (!r0[i].is_zero()) g.add_term(Monomial::var(v, static_cast<std::uint32_t>(i)), r0[i] * lc);
    return g;
}

// gcd of primitive parts via the subresultant PRS in v; intermediate results
// are scaled to integer-primitive (safe: rational constants are units here).
Polynomial prs_gcd(Polynomial a, Polynomial b, SymId v) {
    if (is_univariate_constant(a, v) && is_univariate_constant(b, v)) return euclid_univ(a, b, v);
    if (a.degree(v) < b.degree(v)) std::swap(a, b);
    a = a.primitive_scaled();
    b = b.primitive_scaled();
    std::vector<Polynomial> r0 = to_univariate(a, v), r1 = to_univariate(b, v);
    Polynomial g = Polynomial::one(), h = Polynomial::one();
    while (true) {
        int d0 = univ_deg(r0), d1 = univ_deg(r1);
        int delta = d0 - d1;
        std::vector<Polynomial> rem = prem_univ(r0, r1);
        if (univ_deg(rem) < 0) break;
        Polynomial divisor = g * h.pow(static_cast<std::uint32_t>(delta));
        Rat cont(0);
        for (auto& c : rem) {
            if (c.is_zero()) continue;
            c = divexact(c, divisor);
            Rat rc = c.rational_content();
            if (cont == 0) cont = rc;
            else {
                // gcd of rationals: gcd of numerators over lcm of denominators
                mpz_class n, d;
                mpz_gcd(n.get_mpz_t(), cont.get_num().get_mpz_t(), rc.get_num().get_mpz_t());
                mpz_lcm(d.get_mpz_t(), cont.get_den().get_mpz_t(), rc.get_den().get_mpz_t());
                cont = Rat(n, d);
                cont.canonicalize();
            }
        }
        if (cont != 0 && cont != 1) {
            Scalar inv = Scalar(Rat(1) / cont);
            for (auto& c : rem)
                if (!c.is_zero()) c = c.mul_scalar(inv);
        }
        g = r1[static_cast<std::size_t>(d1)];
        if (delta == 0) {
            // h unchanged
        } else if (delta == 1) {
            h = g;
        } else {
            h = divexact(g.pow(static_cast<std::uint32_t>(delta)), h.pow(static_cast<std::uint32_t>(delta - 1)));
        }
        g = g.primitive_scaled();
        h = h.primitive_scaled();
        r0 = std::move(r1);
        r1 = std::move(rem);
    }
    Polynomial last = from_univariate(r1, v);
    if (univ_deg(r1) == 0) return Polynomial::one();    // coprime in v
    Polynomial cont = content_in(last, v);
    return divexact(last, cont);
}

Polynomial content_in(const Polynomial& p, SymId v) {
    auto coeffs = to_univariate(p, v);
    Polynomial c;
    for (auto& q : coeffs) {
        if (q.is_zero()) continue;
        c = c.is_zero() ? unit_normalize(q) : poly_gcd(c, q);
        if (c.is_constant()) return Polynomial::one();
    }
    return c;
}

} // namespace

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return unit_normalize(b);
    if (b.is_zero()) return unit_normalize(a);

    Monomial ma = a.monomial_content(), mb = b.monomial_content();
    Monomial mg = Monomial::gcd(ma, mb);
    Polynomial pa = a, pb = b;
    if (!ma.is_unit()) {
        Polynomial r;
        for (auto& [m, c] : a.terms()) r.add_term(*Monomial::div(m, ma), c);
        pa = r;
    }
    if (!mb.is_unit()) {
        Polynomial r;
        for (auto& [m, c] : b.terms()) r.add_term(*Monomial::div(m, mb), c);
        pb = r;
    }

    Polynomial core;
    if (pa.is_constant() || pb.is_constant()) {
        core = Polynomial::one();
    } else if (pa == pb) {
        core = unit_normalize(pa);
    } else {
        // main variable: prefer one present in both with the smallest degree bound
        std::set<SymId> sa = pa.symbols(), sb = pb.symbols();
        SymId v = UINT32_MAX;
        std::uint64_t best = UINT64_MAX;
        for (SymId s : sa) {
            if (!sb.count(s)) continue;
            std::uint64_t cost = std::max(pa.degree(s), pb.degree(s));
            if (cost < best || (cost == best && s < v)) {
                best = cost;
                v = s;
            }
        }
        if (v == UINT32_MAX) {
            if (!sa.empty()) v = std::min(v, *sa.begin());
            if (!sb.empty()) v = std::min(v, *sb.begin());
        }
        bool in_a = sa.count(v) > 0, in_b = sb.count(v) > 0;
        if (in_a && !in_b) {
            core = poly_gcd(content_in(pa, v), pb);
        } else if (in_b && !in_a) {
            core = poly_gcd(pa, content_in(pb, v));
        } else {
            Polynomial ca = content_in(pa, v), cb = content_in(pb, v);
            Polynomial ppa = ca.is_constant() ? pa : divexact(pa, ca);
            Polynomial ppb = cb.is_constant() ? pb : divexact(pb, cb);
            Polynomial gp = prs_gcd(ppa, ppb, v);
            core = poly_gcd(ca, cb) * gp;
        }
    }
    Polynomial r = core.mul_monomial(mg, Scalar(1));
    return unit_normalize(r);
}

Polynomial pseudo_rem(const Polynomial& a, const Polynomial& b, SymId v) {
    if (b.is_zero()) throw DivisionByZero("pseudo_rem by zero");
    if (a.degree(v) < b.degree(v)) return a;
    auto av = to_univariate(a, v), bv = to_univariate(b, v);
    return from_univariate(prem_univ(std::move(av), bv), v);
}

std::optional<Polynomial> poly_sqrt(const Polynomial& p) {
    if (p.is_zero()) return Polynomial::zero();
    if (p.is_constant()) {
        auto s = p.as_scalar().sqrt();
        if (!s) return std::nullopt;
        return Polynomial::constant(*s);
    }
    // digit-by-digit extraction under the monomial order
    const auto& lt = p.leading();
    Monomial lm = lt.first;
    for (auto& f : lm.factors)
        if (f.second % 2 != 0) return std::nullopt;
    Monomial half;
    for (auto& f : lm.factors) half.factors.push_back({f.first, f.second / 2});
    auto lc = lt.second.sqrt();
    if (!lc) return std::nullopt;

    Polynomial root = Polynomial::term(*lc, half);
    Polynomial rem = p - root * root;
    Scalar two_lc_inv = (Scalar(2) * *lc).inverse();
    std::size_t guard = 4 * p.term_count() + 16;
    while (!rem.is_zero()) {
        if (guard-- == 0) return std::nullopt;
        const auto& r_lt = rem.leading();
        auto m = Monomial::div(r_lt.first, half);
        if (!m) return std::nullopt;
        Scalar c = r_lt.second * two_lc_inv;
        Polynomial termp = Polynomial::term(c, *m);
        // (root + n)^2 = root^2 + 2*root*n + n^2
        rem = rem - (root * termp).mul_scalar(Scalar(2)) - termp * termp;
        root += termp;
        if (grlex_cmp(rem.is_zero() ? Monomial{} : rem.leading().first, r_lt.first) >= 0 && !rem.is_zero())
            return std::nullopt;
    }
    return root;
}

} // namespace abel
