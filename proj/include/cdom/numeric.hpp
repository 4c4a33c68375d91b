#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace cdom {

class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Sign : int { minus = -1, zero = 0, plus = 1 };

inline Sign sign_of(int s) {
    return s < 0 ? Sign::minus : (s > 0 ? Sign::plus : Sign::zero);
}

inline int sign_int(Sign s) { return static_cast<int>(s); }

/// Natural log of a positive big integer, exact to double rounding for any size.
inline double ln_mpz(const mpz_class& z) {
    if (sgn(z) <= 0) throw numeric_error("ln_mpz: argument must be positive");
    signed long exp2 = 0;
    double d = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(d) + static_cast<double>(exp2) * M_LN2;
}

inline double ln_mpq_abs(const mpq_class& q) {
    if (sgn(q) == 0) return -std::numeric_limits<double>::infinity();
    mpz_class n = abs(q.get_num());
    return ln_mpz(n) - ln_mpz(q.get_den());
}

// Scalar that is either an exact rational or a signed log-scale magnitude.
// Log-scale additions that drop a term beyond double range set `absorbed`.
class NumericValue {
public:
    // Gap (in nats) beyond which the smaller log-scale addend is absorbed.
    static constexpr double kAbsorbGap = 700.0;
    // Opposite-sign log-scale operands closer than this in log magnitude
    // cannot be subtracted without catastrophic cancellation.
    static constexpr double kCancelGap = 1e-9;

    NumericValue() = default;  // exact rational zero

    static NumericValue rational(mpq_class q) {
        q.canonicalize();
        NumericValue v;
        v.is_rat_ = true;
        v.rat_ = std::move(q);
        v.sign_ = sign_of(sgn(v.rat_));
        v.lnmag_ = 0.0;
        v.absorbed_ = false;
        return v;
    }
    static NumericValue rational(long num, long den = 1) {
        if (den == 0) throw numeric_error("rational: zero denominator");
        return rational(mpq_class(num, den));
    }
    static NumericValue rational(const mpz_class& num, const mpz_class& den = 1) {
        if (sgn(den) == 0) throw numeric_error("rational: zero denominator");
        return rational(mpq_class(num, den));
    }

    static NumericValue log_scale(Sign s, double ln_mag, bool absorbed = false) {
        NumericValue v;
        v.is_rat_ = false;
        v.sign_ = s;
        v.lnmag_ = (s == Sign::zero) ? -std::numeric_limits<double>::infinity() : ln_mag;
        v.absorbed_ = absorbed;
        if (s != Sign::zero && !std::isfinite(ln_mag))
            throw numeric_error("log_scale: non-finite log magnitude");
        return v;
    }

    static NumericValue zero() { return rational(0); }

    bool is_rational() const { return is_rat_; }
    bool is_log() const { return !is_rat_; }

    const mpq_class& rat() const {
        if (!is_rat_) throw numeric_error("log-scale value has no exact rational form");
        return rat_;
    }

    Sign sign() const { return sign_; }
    bool absorbed() const { return absorbed_; }

    /// ln |value|; -inf for zero. Exact-to-rounding for rationals of any size.
    double ln_abs() const {
        if (is_rat_) return ln_mpq_abs(rat_);
        return sign_ == Sign::zero ? -std::numeric_limits<double>::infinity() : lnmag_;
    }

    NumericValue promoted() const {
        if (!is_rat_) return *this;
        if (sign_ == Sign::zero) return log_scale(Sign::zero, 0.0);
        return log_scale(sign_, ln_mpq_abs(rat_), absorbed_);
    }

    /// Best-effort double conversion; throws when the magnitude is out of range.
    double to_double() const {
        if (is_rat_) return rat_.get_d();
        if (sign_ == Sign::zero) return 0.0;
        if (lnmag_ > 700.0) throw numeric_error("to_double: log-scale magnitude overflows binary64");
        return sign_int(sign_) * std::exp(lnmag_);
    }

    friend NumericValue nv_neg(const NumericValue& x) {
        if (x.is_rat_) {
            NumericValue v = rational(mpq_class(-x.rat_));
            v.absorbed_ = x.absorbed_;
            return v;
        }
        return log_scale(sign_of(-sign_int(x.sign_)), x.lnmag_, x.absorbed_);
    }

    friend NumericValue nv_mul(const NumericValue& x, const NumericValue& y) {
        if (x.is_rat_ && y.is_rat_) {
            NumericValue v = rational(mpq_class(x.rat_ * y.rat_));
            v.absorbed_ = x.absorbed_ || y.absorbed_;
            return v;
        }
        NumericValue a = x.promoted(), b = y.promoted();
        Sign s = sign_of(sign_int(a.sign_) * sign_int(b.sign_));
        if (s == Sign::zero) return log_scale(Sign::zero, 0.0, a.absorbed_ || b.absorbed_);
        return log_scale(s, a.lnmag_ + b.lnmag_, a.absorbed_ || b.absorbed_);
    }

    friend NumericValue nv_div(const NumericValue& x, const NumericValue& y) {
        if (y.sign_ == Sign::zero) throw numeric_error("nv_div: division by zero");
        if (x.is_rat_ && y.is_rat_) {
            NumericValue v = rational(mpq_class(x.rat_ / y.rat_));
            v.absorbed_ = x.absorbed_ || y.absorbed_;
            return v;
        }
        NumericValue a = x.promoted(), b = y.promoted();
        Sign s = sign_of(sign_int(a.sign_) * sign_int(b.sign_));
        if (s == Sign::zero) return log_scale(Sign::zero, 0.0, a.absorbed_ || b.absorbed_);
        return log_scale(s, a.lnmag_ - b.lnmag_, a.absorbed_ || b.absorbed_);
    }

    friend NumericValue nv_add(const NumericValue& x, const NumericValue& y) {
        if (x.is_rat_ && y.is_rat_) {
            NumericValue v = rational(mpq_class(x.rat_ + y.rat_));
            v.absorbed_ = x.absorbed_ || y.absorbed_;
            return v;
        }
        NumericValue a = x.promoted(), b = y.promoted();
        bool flag = a.absorbed_ || b.absorbed_;
        if (a.sign_ == Sign::zero) return log_scale(b.sign_, b.lnmag_, flag);
        if (b.sign_ == Sign::zero) return log_scale(a.sign_, a.lnmag_, flag);
        if (a.lnmag_ < b.lnmag_) std::swap(a, b);
        double gap = a.lnmag_ - b.lnmag_;
        if (a.sign_ == b.sign_) {
            if (gap > kAbsorbGap) return log_scale(a.sign_, a.lnmag_, true);
            return log_scale(a.sign_, a.lnmag_ + std::log1p(std::exp(-gap)), flag);
        }
        // Opposite signs: subtraction in log scale.
        if (gap < kCancelGap)
            throw numeric_error("nv_add: catastrophic cancellation of near-equal log-scale values");
        if (gap > kAbsorbGap) return log_scale(a.sign_, a.lnmag_, true);
        return log_scale(a.sign_, a.lnmag_ + std::log1p(-std::exp(-gap)), flag);
    }

    friend NumericValue nv_sub(const NumericValue& x, const NumericValue& y) {
        return nv_add(x, nv_neg(y));
    }

    /// Trichotomy: -1, 0, +1. Exact for rational pairs; sign-then-log otherwise.
    friend int nv_compare(const NumericValue& x, const NumericValue& y) {
        if (x.is_rat_ && y.is_rat_) {
            int c = cmp(x.rat_, y.rat_);
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        NumericValue a = x.promoted(), b = y.promoted();
        int sa = sign_int(a.sign_), sb = sign_int(b.sign_);
        if (sa != sb) return sa < sb ? -1 : 1;
        if (sa == 0) return 0;
        if (a.lnmag_ == b.lnmag_) return 0;
        bool larger_mag_a = a.lnmag_ > b.lnmag_;
        // For positives the larger magnitude is larger; for negatives smaller.
        return (larger_mag_a == (sa > 0)) ? 1 : -1;
    }

    std::string str() const {
        if (is_rat_) return rat_.get_str();
        if (sign_ == Sign::zero) return "0(log)";
        std::string s = sign_ == Sign::minus ? "-" : "+";
        return s + "exp(" + std::to_string(lnmag_) + ")";
    }

private:
    bool is_rat_ = true;
    mpq_class rat_ = 0;
    Sign sign_ = Sign::zero;
    double lnmag_ = 0.0;
    bool absorbed_ = false;
};

inline bool nv_less(const NumericValue& x, const NumericValue& y) { return nv_compare(x, y) < 0; }
inline bool nv_leq(const NumericValue& x, const NumericValue& y) { return nv_compare(x, y) <= 0; }
inline bool nv_eq(const NumericValue& x, const NumericValue& y) { return nv_compare(x, y) == 0; }

/// Ceiling of a positive rational as a big integer.
inline mpz_class ceil_mpq(const mpq_class& q) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r;
}

}  // namespace cdom
