#include "abel/scalar.hpp"

namespace abel {

bool rat_is_square(const Rat& q) {
    if (sgn(q) < 0) return false;
    return mpz_perfect_square_p(q.get_num().get_mpz_t()) &&
           mpz_perfect_square_p(q.get_den().get_mpz_t());
}

Rat rat_sqrt(const Rat& q) {
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), q.get_num().get_mpz_t());
    mpz_sqrt(d.get_mpz_t(), q.get_den().get_mpz_t());
    Rat r(n, d);
    r.canonicalize();
    return r;
}

Scalar Scalar::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Scalar acc(1), base = *this;
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

std::optional<Scalar> Scalar::sqrt() const {
    if (is_zero()) return Scalar(0);
    if (is_real()) {
        if (sgn(re_) > 0) {
            if (rat_is_square(re_)) return Scalar(rat_sqrt(re_));
            return std::nullopt;
        }
        Rat m(-re_);
        if (rat_is_square(m)) return Scalar(Rat(0), rat_sqrt(m));
        return std::nullopt;
    }
    // (a+bi)^2 = re + im*i  =>  a^2 = (|z|+re)/2, b = im/(2a)
    Rat n = norm();
    if (!rat_is_square(n)) return std::nullopt;
    Rat mod = rat_sqrt(n);
    Rat a2((mod + re_) / 2);
    if (!rat_is_square(a2)) return std::nullopt;
    Rat a = rat_sqrt(a2);
    if (sgn(a) == 0) return std::nullopt;
    Rat b(im_ / (2 * a));
    Scalar r(a, b);
    if (r * r == *this) return r;
    return std::nullopt;
}

namespace {
std::string rat_str(const Rat& q) {
    return q.get_str();
}
} // namespace

std::string Scalar::str(bool factor_context) const {
    if (is_real()) {
        std::string s = rat_str(re_);
        bool needs = factor_context && (sgn(re_) < 0 || re_.get_den() != 1);
        return needs ? "(" + s + ")" : s;
    }
    if (sgn(re_) == 0) {
        std::string s;
        if (im_ == 1) s = "I";
        else if (im_ == -1) s = "-I";
        else s = rat_str(im_) + "*I";
        bool needs = factor_context && !(im_ == 1);
        return needs ? "(" + s + ")" : s;
    }
    std::string s = rat_str(re_);
    if (sgn(im_) > 0) s += " + ";
    else s += " - ";
    Rat mag(abs(im_));
    if (mag != 1) s += rat_str(mag) + "*";
    s += "I";
    return "(" + s + ")";
}

} // namespace abel
