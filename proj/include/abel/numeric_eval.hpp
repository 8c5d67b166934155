// Numeric evaluation of tower-rational expressions over an arbitrary complex
// field (std::complex<double> or MpComplex). Formal integrals evaluate by
// adaptive Simpson quadrature along a real path from a basepoint.
#pragma once

#include "abel/expr.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <memory>

namespace abel {

struct PoleOnPath : Error {
    using Error::Error;
};
struct NonNumericSymbol : Error {
    using Error::Error;
};

template <class C>
struct FieldOps;   // abs_double, exp, log, atan, sqrt, from_scalar, from_double

template <>
struct FieldOps<std::complex<double>> {
    using C = std::complex<double>;
    static double abs_double(const C& z) { return std::abs(z); }
    static C exp(const C& z) { return std::exp(z); }
    static C log(const C& z) { return std::log(z); }
    static C atan(const C& z) {
        C iz(-z.imag(), z.real());
        C d = std::log(C(1) - iz) - std::log(C(1) + iz);
        return C(-d.imag() / 2.0, d.real() / 2.0);
    }
    static C sqrt(const C& z) { return std::sqrt(z); }
    static C from_scalar(const Scalar& s) { return C(s.re().get_d(), s.im().get_d()); }
    static C from_double(double d) { return C(d); }
    static double real_part(const C& z) { return z.real(); }
    static double imag_part(const C& z) { return z.imag(); }
};

template <class C>
class Evaluator {
public:
    using Ops = FieldOps<C>;
    /// Cache of antiderivative values, keyed by integrand and basepoint, so
    /// repeated evaluations integrate incrementally from the nearest point.
    using IntCache = std::map<std::string, std::map<double, C>>;

    Evaluator(std::map<SymId, C> env, double quad_tol = 1e-10, double pole_eps = 1e-13)
        : env_(std::move(env)), quad_tol_(quad_tol), pole_eps_(pole_eps),
          cache_(std::make_shared<IntCache>()) {}

    void share_cache(const std::shared_ptr<IntCache>& c) { cache_ = c; }
    const std::shared_ptr<IntCache>& cache() const { return cache_; }

    /// Default basepoints for formal integrals without a stored one. Entries
    /// sharing an integrand share the basepoint (the same antiderivative
    /// constant must be used wherever the integral appears).
    static std::string integrand_key(const SymbolInfo& inf) {
        return std::to_string(inf.bound_var) + ":" + inf.integrand.key();
    }
    void set_auto_basepoint(SymId int_symbol, double b) {
        auto_base_[integrand_key(registry().info(int_symbol))] = b;
    }
    const std::map<std::string, double>& auto_basepoints() const { return auto_base_; }

    C eval(const RationalFunction& f) {
        C n = eval_poly(f.num());
        if (f.is_polynomial()) {
            Scalar d = f.den().as_scalar();
            return d.is_one() ? n : n / Ops::from_scalar(d);
        }
        C d = eval_poly(f.den());
        if (Ops::abs_double(d) < pole_eps_) throw PoleOnPath("evaluation at a pole");
        return n / d;
    }

    C eval(const Expr& e) { return eval(e.rf()); }

private:
    C eval_poly(const Polynomial& p) {
        return p.eval<C>([this](SymId s) { return value_of(s); },
                         [](const Scalar& c) { return Ops::from_scalar(c); });
    }

    C value_of(SymId s) {
        auto env_it = env_.find(s);
        if (env_it != env_.end()) return env_it->second;
        auto memo_it = memo_.find(s);
        if (memo_it != memo_.end()) return memo_it->second;
        SymbolInfo inf = registry().info(s);
        C val;
        switch (inf.kind) {
        case SymbolKind::MainVar:
        case SymbolKind::Param:
        case SymbolKind::BoundVar:
            throw NonNumericSymbol("no numeric value for symbol " + inf.name);
        case SymbolKind::TowerExp:
            val = Ops::exp(eval(inf.arg));
            break;
        case SymbolKind::TowerLog:
            val = Ops::log(eval(inf.arg));
            break;
        case SymbolKind::TowerAtan:
            val = Ops::atan(eval(inf.arg));
            break;
        case SymbolKind::TowerSqrt:
            val = Ops::sqrt(eval_poly(inf.sqrt_arg));
            break;
        case SymbolKind::TowerInt:
            val = eval_int(s, inf);
            break;
        }
        memo_.emplace(s, val);
        return val;
    }

    C eval_int(SymId /*unused*/, const SymbolInfo& inf) {
        C arg = eval(inf.int_arg);
        if (std::abs(Ops::imag_part(arg)) > 1e-9)
            throw PoleOnPath("formal integral evaluated at a non-real point");
        double b;
        if (inf.basepoint) {
            if (!inf.basepoint->is_real())
                throw PoleOnPath("complex basepoint for a formal integral");
            b = inf.basepoint->re().get_d();
        } else {
            auto it = auto_base_.find(integrand_key(inf));
            b = it != auto_base_.end() ? it->second : 0.0;
        }
        double a2 = Ops::real_part(arg);
        if (a2 == b) return C(0);
        Evaluator<C> inner(env_, quad_tol_, pole_eps_);
        inner.auto_base_ = auto_base_;
        inner.cache_ = cache_;
        auto f = [&](double yv) {
            inner.env_[inf.bound_var] = Ops::from_double(yv);
            inner.memo_.clear();
            return inner.eval(inf.integrand);
        };
        // integrate from the nearest cached point of the same antiderivative
        std::string ck = integrand_key(inf) + "@" + std::to_string(b);
        auto& values = (*cache_)[ck];
        if (values.empty()) values.emplace(b, C(0));
        auto it = values.lower_bound(a2);
        double s0 = b;
        C v0 = C(0);
        double best = std::abs(a2 - b);
        if (it != values.end() && std::abs(it->first - a2) < best) {
            s0 = it->first;
            v0 = it->second;
            best = std::abs(it->first - a2);
        }
        if (it != values.begin()) {
            auto prev = std::prev(it);
            if (std::abs(prev->first - a2) < best) {
                s0 = prev->first;
                v0 = prev->second;
            }
        }
        if (s0 == a2) return v0;
        C val = v0 + adaptive_simpson(f, s0, a2, quad_tol_, 24);
        if (values.size() < 4096) values.emplace(a2, val);
        return val;
    }

    template <class F>
    C adaptive_simpson(F&& f, double a, double b, double tol, int depth) {
        C fa = f(a), fb = f(b), fm = f((a + b) / 2);
        return simpson_rec(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, depth);
    }

    static C simpson(double a, double b, const C& fa, const C& fm, const C& fb) {
        return (fa + fm * C(4) + fb) * Ops::from_double((b - a) / 6.0);
    }

    template <class F>
    C simpson_rec(F&& f, double a, double b, const C& fa, const C& fm, const C& fb, const C& whole,
                  double tol, int depth) {
        double m = (a + b) / 2;
        double lm = (a + m) / 2, rm = (m + b) / 2;
        C flm = f(lm), frm = f(rm);
        C left = simpson(a, m, fa, flm, fm);
        C right = simpson(m, b, fm, frm, fb);
        C delta = left + right - whole;
        if (depth <= 0) {
            if (Ops::abs_double(delta) > 1000 * tol)
                throw PoleOnPath("quadrature failed to converge (pole on path?)");
            return left + right + delta / C(15);
        }
        if (Ops::abs_double(delta) <= 15 * tol) return left + right + delta / C(15);
        return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
               simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
    }

    std::map<SymId, C> env_;
    std::map<SymId, C> memo_;
    std::map<std::string, double> auto_base_;
    double quad_tol_;
    double pole_eps_;
    std::shared_ptr<IntCache> cache_;
};

} // namespace abel
