// Exact scalars: arbitrary-precision rationals and Gaussian rationals.
#pragma once

#include <gmpxx.h>
#include <optional>
#include <stdexcept>
#include <string>

namespace abel {

using Rat = mpq_class;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero") {}
    explicit DivisionByZero(const std::string& what) : Error(what) {}
};
struct Unsupported : Error {
    using Error::Error;
};

inline Rat make_rat(long num, long den = 1) {
    if (den == 0) throw DivisionByZero();
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat rat_from_string(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw Error("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

bool rat_is_square(const Rat& q);     // q >= 0 and both num and den are perfect squares
Rat rat_sqrt(const Rat& q);           // pre: rat_is_square(q)

/// Gaussian rational a + b*I with exact rational components.
class Scalar {
public:
    Scalar() : re_(0), im_(0) {}
    Scalar(long n) : re_(n), im_(0) {}
    Scalar(const Rat& re) : re_(re), im_(0) {}
    Scalar(Rat re, Rat im) : re_(std::move(re)), im_(std::move(im)) {}

    static Scalar i() { return Scalar(Rat(0), Rat(1)); }

    const Rat& re() const { return re_; }
    const Rat& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    bool is_integer() const { return is_real() && re_.get_den() == 1; }

    Scalar conj() const { return Scalar(re_, Rat(-im_)); }
    Rat norm() const { return Rat(re_ * re_ + im_ * im_); }

    Scalar operator-() const { return Scalar(Rat(-re_), Rat(-im_)); }
    Scalar operator+(const Scalar& o) const { return Scalar(Rat(re_ + o.re_), Rat(im_ + o.im_)); }
    Scalar operator-(const Scalar& o) const { return Scalar(Rat(re_ - o.re_), Rat(im_ - o.im_)); }
    Scalar operator*(const Scalar& o) const {
        return Scalar(Rat(re_ * o.re_ - im_ * o.im_), Rat(re_ * o.im_ + im_ * o.re_));
    }
    Scalar inverse() const {
        if (is_zero()) throw DivisionByZero();
        Rat n = norm();
        return Scalar(Rat(re_ / n), Rat(-im_ / n));
    }
    Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const { return re_ == o.re_ && im_ == o.im_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    Scalar pow(long e) const;
    /// Square root in Q(i) if one exists.
    std::optional<Scalar> sqrt() const;

    /// Grammar-compatible rendering; `factor_context` adds parens around sums.
    std::string str(bool factor_context = false) const;

private:
    Rat re_, im_;
};

} // namespace abel
