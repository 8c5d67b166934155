#include "abel/sampled.hpp"

#include "abel/mp_float.hpp"
#include "abel/numeric_eval.hpp"

#include <cmath>
#include <random>

namespace abel {

std::atomic<long> MpFloat::default_prec_{256};

template <>
struct FieldOps<MpComplex> {
    using C = MpComplex;
    static double abs_double(const C& z) { return z.abs().to_double(); }
    static C exp(const C& z) { return z.exp(); }
    static C log(const C& z) { return z.log(); }
    static C atan(const C& z) { return z.atan(); }
    static C sqrt(const C& z) { return z.sqrt(); }
    static C from_scalar(const Scalar& s) { return C(s); }
    static C from_double(double d) { return C(MpFloat(d)); }
    static double real_part(const C& z) { return z.re.to_double(); }
    static double imag_part(const C& z) { return z.im.to_double(); }
};

namespace {

Rat random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-19, 19), den(2, 9);
    Rat q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

std::map<SymId, MpComplex> random_env(const Expr& e, std::mt19937_64& rng) {
    std::map<SymId, MpComplex> env;
    for (SymId s : free_symbols(e)) env[s] = MpComplex(MpFloat(random_rational(rng)));
    return env;
}

} // namespace

SampleVerdict is_zero_sampled(const Expr& e, const SampleConfig& cfg) {
    MpFloat::set_default_digits(cfg.digits);
    std::mt19937_64 rng(cfg.seed);
    double threshold = std::pow(10.0, -cfg.digits / 2.0);
    double quad_tol = std::min(1e-12, threshold * 1e-4);

    SampleVerdict v;
    int retries = 0;
    while (v.samples_used < cfg.points) {
        std::map<SymId, MpComplex> env = random_env(e, rng);
        try {
            Evaluator<MpComplex> ev(std::move(env), quad_tol, threshold * 1e-6);
            MpComplex val = ev.eval(e);
            if (!val.is_finite()) throw PoleOnPath("non-finite value");
            double mag = val.abs().to_double();
            v.max_abs = std::max(v.max_abs, mag);
            if (mag >= threshold) {
                v.zero = false;
                v.samples_used++;
                return v;
            }
            v.samples_used++;
        } catch (const Error&) {
            if (++retries > cfg.max_retries) throw Error("is_zero_sampled: resampling budget exhausted");
        }
    }
    v.zero = true;
    return v;
}

FdiffReport check_derivative_fd(const Expr& e, SymId v, int points, unsigned long seed, double step,
                                double rel_tol, int digits) {
    MpFloat::set_default_digits(digits);
    std::mt19937_64 rng(seed);
    Expr de = differentiate(e, v);

    FdiffReport rep;
    int retries = 0;
    MpFloat h(step);
    while (rep.checked < points) {
        std::map<SymId, MpComplex> env = random_env(e, rng);
        if (!env.count(v)) env[v] = MpComplex(MpFloat(random_rational(rng)));
        try {
            std::map<SymId, MpComplex> env_p = env, env_m = env;
            env_p[v] = MpComplex(env[v].re + h, env[v].im);
            env_m[v] = MpComplex(env[v].re - h, env[v].im);
            Evaluator<MpComplex> evp(std::move(env_p));
            Evaluator<MpComplex> evm(std::move(env_m));
            MpComplex fd = (evp.eval(e) - evm.eval(e)) / MpComplex(MpFloat(2 * step));
            Evaluator<MpComplex> evd(std::move(env));
            MpComplex exact = evd.eval(de);
            if (!fd.is_finite() || !exact.is_finite()) throw PoleOnPath("non-finite");
            double scale = std::max(exact.abs().to_double(), 1.0);
            double err = (fd - exact).abs().to_double() / scale;
            rep.max_rel_error = std::max(rep.max_rel_error, err);
            rep.checked++;
        } catch (const Error&) {
            if (++retries > 16 * points) {
                rep.ok = false;
                return rep;
            }
        }
    }
    rep.ok = rep.max_rel_error < rel_tol;
    return rep;
}

} // namespace abel
