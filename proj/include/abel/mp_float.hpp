// Thin RAII wrapper over MPFR plus a complex pair, used by the sampled
// zero test and the finite-difference property checks.
#pragma once

#include "abel/scalar.hpp"

#include <mpfr.h>

#include <atomic>
#include <string>

namespace abel {

class MpFloat {
public:
    static void set_default_digits(long digits) {
        long bits = static_cast<long>(digits * 3.33) + 32;
        default_prec_.store(bits);
    }
    static mpfr_prec_t default_prec() { return static_cast<mpfr_prec_t>(default_prec_.load()); }

    MpFloat() { mpfr_init2(v_, default_prec()); mpfr_set_zero(v_, 1); }
    MpFloat(double d) : MpFloat() { mpfr_set_d(v_, d, MPFR_RNDN); }
    MpFloat(long n) : MpFloat() { mpfr_set_si(v_, n, MPFR_RNDN); }
    explicit MpFloat(const Rat& q) : MpFloat() { mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }
    MpFloat(const MpFloat& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    MpFloat(MpFloat&& o) noexcept { mpfr_init2(v_, default_prec()); mpfr_swap(v_, o.v_); }
    MpFloat& operator=(const MpFloat& o) {
        if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
        return *this;
    }
    MpFloat& operator=(MpFloat&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~MpFloat() { mpfr_clear(v_); }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    friend MpFloat operator+(const MpFloat& a, const MpFloat& b) {
        MpFloat r;
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend MpFloat operator-(const MpFloat& a, const MpFloat& b) {
        MpFloat r;
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend MpFloat operator*(const MpFloat& a, const MpFloat& b) {
        MpFloat r;
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend MpFloat operator/(const MpFloat& a, const MpFloat& b) {
        MpFloat r;
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    MpFloat operator-() const {
        MpFloat r;
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }

    MpFloat abs() const {
        MpFloat r;
        mpfr_abs(r.v_, v_, MPFR_RNDN);
        return r;
    }
    MpFloat sqrt() const {
        MpFloat r;
        mpfr_sqrt(r.v_, v_, MPFR_RNDN);
        return r;
    }
    MpFloat exp() const {
        MpFloat r;
        mpfr_exp(r.v_, v_, MPFR_RNDN);
        return r;
    }
    MpFloat log() const {
        MpFloat r;
        mpfr_log(r.v_, v_, MPFR_RNDN);
        return r;
    }
    MpFloat atan() const {
        MpFloat r;
        mpfr_atan(r.v_, v_, MPFR_RNDN);
        return r;
    }
    MpFloat sin() const {
        MpFloat r;
        mpfr_sin(r.v_, v_, MPFR_RNDN);
        return r;
    }
    MpFloat cos() const {
        MpFloat r;
        mpfr_cos(r.v_, v_, MPFR_RNDN);
        return r;
    }
    static MpFloat atan2(const MpFloat& y, const MpFloat& x) {
        MpFloat r;
        mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
        return r;
    }

    int sgn() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_); }
    bool is_finite() const { return mpfr_number_p(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool operator<(const MpFloat& o) const { return mpfr_less_p(v_, o.v_); }
    bool operator>(const MpFloat& o) const { return mpfr_greater_p(v_, o.v_); }

private:
    mpfr_t v_;
    static std::atomic<long> default_prec_;
};

struct MpComplex {
    MpFloat re, im;

    MpComplex() = default;
    MpComplex(MpFloat r) : re(std::move(r)) {}
    MpComplex(MpFloat r, MpFloat i) : re(std::move(r)), im(std::move(i)) {}
    MpComplex(long n) : re(n) {}
    explicit MpComplex(const Scalar& s) : re(MpFloat(s.re())), im(MpFloat(s.im())) {}

    friend MpComplex operator+(const MpComplex& a, const MpComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend MpComplex operator-(const MpComplex& a, const MpComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend MpComplex operator*(const MpComplex& a, const MpComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend MpComplex operator/(const MpComplex& a, const MpComplex& b) {
        MpFloat n = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    MpComplex operator-() const { return {-re, -im}; }

    MpFloat abs() const { return (re * re + im * im).sqrt(); }
    bool is_finite() const { return re.is_finite() && im.is_finite(); }

    MpComplex exp() const {
        MpFloat e = re.exp();
        return {e * im.cos(), e * im.sin()};
    }
    MpComplex log() const { return {abs().log(), MpFloat::atan2(im, re)}; }
    MpComplex sqrt() const {
        MpFloat r = abs();
        MpFloat theta = MpFloat::atan2(im, re);
        MpFloat half(0.5);
        MpFloat sr = r.sqrt();
        return {sr * (theta * half).cos(), sr * (theta * half).sin()};
    }
    MpComplex atan() const {
        // atan z = (i/2) (log(1 - iz) - log(1 + iz))
        MpComplex iz{-im, re};
        MpComplex one(1);
        MpComplex l1 = (one - iz).log(), l2 = (one + iz).log();
        MpComplex d = l1 - l2;
        return MpComplex{-d.im, d.re} / MpComplex(2);
    }
};

} // namespace abel
