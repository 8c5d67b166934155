#include "abel/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace abel {

namespace {

SymId xs() { return registry().x(); }
SymId ys() { return registry().y(); }

struct Rhs {
    const Polynomial* num;
    const Polynomial* den;
    const NumericConfig* cfg;

    double operator()(double x, double y, bool& pole) const {
        auto value = [&](SymId s) -> double {
            if (s == xs()) return x;
            if (s == ys()) return y;
            auto it = cfg->params.find(s);
            if (it != cfg->params.end()) return it->second;
            throw NonNumericSymbol("unbound symbol in right-hand side: " + registry().name(s));
        };
        auto from_scalar = [](const Scalar& c) { return c.re().get_d(); };
        double n = num->eval<double>(value, from_scalar);
        double d = den->eval<double>(value, from_scalar);
        if (std::abs(d) < cfg->pole_radius * std::max(1.0, std::abs(n))) {
            pole = true;
            return 0.0;
        }
        pole = false;
        return n / d;
    }
};

Rhs make_rhs(const RationalODE& e, const NumericConfig& cfg) {
    for (auto& [m, c] : e.rhs.rf().num().terms())
        if (!c.is_real()) throw Error("numeric integration requires real coefficients");
    for (auto& [m, c] : e.rhs.rf().den().terms())
        if (!c.is_real()) throw Error("numeric integration requires real coefficients");
    for (SymId s : e.rhs.rf().symbols())
        if (registry().is_tower(s)) throw Error("numeric integration requires a rational right-hand side");
    return Rhs{&e.rhs.rf().num(), &e.rhs.rf().den(), &cfg};
}

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 5179.0 / 57600, E3 = 7571.0 / 16695, E4 = 393.0 / 640,
                 E5 = -92097.0 / 339200, E6 = 187.0 / 2100, E7 = 1.0 / 40;

struct StepResult {
    double y5, y4;
    bool pole;
};

StepResult dp_step(const Rhs& f, double x, double y, double h) {
    StepResult r{0, 0, false};
    bool p = false;
    double k1 = f(x, y, p);
    if (p) { r.pole = true; return r; }
    double k2 = f(x + h / 5, y + h * A21 * k1, p);
    if (p) { r.pole = true; return r; }
    double k3 = f(x + 3 * h / 10, y + h * (A31 * k1 + A32 * k2), p);
    if (p) { r.pole = true; return r; }
    double k4 = f(x + 4 * h / 5, y + h * (A41 * k1 + A42 * k2 + A43 * k3), p);
    if (p) { r.pole = true; return r; }
    double k5 = f(x + 8 * h / 9, y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4), p);
    if (p) { r.pole = true; return r; }
    double k6 = f(x + h, y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5), p);
    if (p) { r.pole = true; return r; }
    double y5 = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
    double k7 = f(x + h, y5, p);
    if (p) { r.pole = true; return r; }
    double y4 = y + h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
    r.y5 = y5;
    r.y4 = y4;
    return r;
}

} // namespace

Trajectory integrate_ode(const RationalODE& e, double x0, double y0, double x1,
                         const NumericConfig& cfg) {
    Rhs f = make_rhs(e, cfg);
    Trajectory out;
    bool pole = false;
    f(x0, y0, pole);
    if (pole) throw PoleOnPath("starting point is a pole of the right-hand side");

    double dir = x1 >= x0 ? 1.0 : -1.0;
    double x = x0, y = y0;
    double h = dir * std::max(1e-8, std::abs(x1 - x0) / 100);
    out.samples.push_back({x, y});
    while (dir * (x1 - x) > 1e-14 * std::max(1.0, std::abs(x1))) {
        if (out.steps + out.rejected > cfg.max_steps) throw Error("integrator exceeded max_steps");
        if (dir * (x + h - x1) > 0) h = x1 - x;
        StepResult s = dp_step(f, x, y, h);
        if (s.pole) {
            if (std::abs(h) < 1e-13 * std::max(1.0, std::abs(x))) {
                out.pole_stop = true;
                return out;
            }
            h /= 2;
            ++out.rejected;
            continue;
        }
        double scale = cfg.atol + cfg.rtol * std::max(std::abs(y), std::abs(s.y5));
        double err = std::abs(s.y5 - s.y4) / scale;
        if (err <= 1.0 || std::abs(h) < 1e-13 * std::max(1.0, std::abs(x))) {
            x += h;
            y = s.y5;
            out.samples.push_back({x, y});
            ++out.steps;
            out.max_error_estimate = std::max(out.max_error_estimate, std::abs(s.y5 - s.y4));
        } else {
            ++out.rejected;
        }
        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::clamp(fac, 0.2, 5.0);
    }
    return out;
}

double rk4_fixed_final(const RationalODE& e, double x0, double y0, double x1, long nsteps,
                       const NumericConfig& cfg) {
    Rhs f = make_rhs(e, cfg);
    double h = (x1 - x0) / static_cast<double>(nsteps);
    double x = x0, y = y0;
    for (long i = 0; i < nsteps; ++i) {
        StepResult s = dp_step(f, x, y, h);
        if (s.pole) throw PoleOnPath("pole hit during fixed-step integration");
        y = s.y4;   // propagate the order-4 member
        x = x0 + h * static_cast<double>(i + 1);
    }
    return y;
}

namespace {

void collect_int_symbols(const RationalFunction& f, std::set<SymId>& out, std::set<SymId>& seen) {
    for (SymId s : f.symbols()) {
        if (seen.count(s)) continue;
        seen.insert(s);
        if (!registry().is_tower(s)) continue;
        SymbolInfo inf = registry().info(s);
        switch (inf.kind) {
        case SymbolKind::TowerExp:
        case SymbolKind::TowerLog:
        case SymbolKind::TowerAtan:
            collect_int_symbols(inf.arg, out, seen);
            break;
        case SymbolKind::TowerSqrt:
            collect_int_symbols(RationalFunction(inf.sqrt_arg), out, seen);
            break;
        case SymbolKind::TowerInt:
            out.insert(s);
            collect_int_symbols(inf.integrand, out, seen);
            collect_int_symbols(inf.int_arg, out, seen);
            break;
        default:
            break;
        }
    }
}

Evaluator<std::complex<double>> make_evaluator(const Expr& /*psi*/, double x, double y,
                                               const NumericConfig& cfg,
                                               const std::map<SymId, double>& auto_base = {}) {
    std::map<SymId, std::complex<double>> env;
    env[xs()] = x;
    env[ys()] = y;
    for (auto& [s, v] : cfg.params) env[s] = v;
    Evaluator<std::complex<double>> ev(std::move(env), cfg.quad_tol);
    for (auto& [s, b] : cfg.basepoints) ev.set_auto_basepoint(s, b);
    for (auto& [s, b] : auto_base)
        if (!cfg.basepoints.count(s)) ev.set_auto_basepoint(s, b);
    return ev;
}

// pick basepoints for formal integrals at the first sample: the evaluation
// argument itself, so quadrature paths stay inside the visited range
std::map<SymId, double> auto_basepoints(const Expr& psi, double x0, double y0,
                                        const NumericConfig& cfg) {
    std::set<SymId> ints, seen;
    collect_int_symbols(psi.rf(), ints, seen);
    std::map<SymId, double> base;
    for (SymId s : ints) {
        SymbolInfo inf = registry().info(s);
        if (inf.basepoint || cfg.basepoints.count(s)) continue;
        std::map<SymId, std::complex<double>> env;
        env[xs()] = x0;
        env[ys()] = y0;
        for (auto& [ps, v] : cfg.params) env[ps] = v;
        Evaluator<std::complex<double>> ev(std::move(env), cfg.quad_tol);
        try {
            std::complex<double> a = ev.eval(inf.int_arg);
            base[s] = a.real();
        } catch (const Error&) {
            // nested entries (argument involves a bound variable) inherit the
            // basepoint through the shared integrand key
        }
    }
    return base;
}

} // namespace

std::complex<double> eval_expression(const Expr& psi, double x, double y, const NumericConfig& cfg) {
    Evaluator<std::complex<double>> ev = make_evaluator(psi, x, y, cfg, {});
    return ev.eval(psi);
}

DriftReport constancy_check(const RationalODE& e, const Expr& psi, double x0, double y0, double x1,
                            const NumericConfig& cfg) {
    DriftReport rep;
    rep.trajectory = integrate_ode(e, x0, y0, x1, cfg);
    std::map<SymId, double> base = auto_basepoints(psi, x0, y0, cfg);
    bool first = true;
    double floor = 1e-8;
    auto cache = std::make_shared<Evaluator<std::complex<double>>::IntCache>();
    for (auto& [x, y] : rep.trajectory.samples) {
        Evaluator<std::complex<double>> ev = make_evaluator(psi, x, y, cfg, base);
        ev.share_cache(cache);
        std::complex<double> v = ev.eval(psi);
        if (first) {
            rep.psi0 = v;
            first = false;
            continue;
        }
        double drift = std::abs(v - rep.psi0) / std::max(std::abs(rep.psi0), floor);
        rep.max_drift = std::max(rep.max_drift, drift);
    }
    return rep;
}

std::string trajectory_csv(const RationalODE& e, const Expr& psi, const Trajectory& t,
                           const NumericConfig& cfg) {
    (void)e;
    std::ostringstream os;
    os << "x,y,psi\n";
    std::map<SymId, double> base;
    if (!t.samples.empty())
        base = auto_basepoints(psi, t.samples.front().first, t.samples.front().second, cfg);
    os.precision(15);
    for (auto& [x, y] : t.samples) {
        Evaluator<std::complex<double>> ev = make_evaluator(psi, x, y, cfg, base);
        std::complex<double> v = ev.eval(psi);
        os << x << "," << y << ",";
        if (std::abs(v.imag()) > 1e-9 * std::max(1.0, std::abs(v.real())))
            os << v.real() << "+" << v.imag() << "i";
        else
            os << v.real();
        os << "\n";
    }
    return os.str();
}

} // namespace abel
