#ifndef FRACSUM_REAL_HPP
#define FRACSUM_REAL_HPP

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "fracsum/rational.hpp"

namespace fracsum {

using Prec = mpfr_prec_t;

inline constexpr Prec kDefaultPrec = 128;

/// Working precision for results that must resolve an absolute error of eps
/// on values up to 2^mag_bits.
inline Prec prec_for(double eps, long mag_bits = 24) {
    long bits = 64 + std::max<long>(mag_bits, 0);
    if (eps > 0 && eps < 1) bits += static_cast<long>(std::ceil(-std::log2(eps))) + 1;
    return std::max<Prec>(static_cast<Prec>(bits), kDefaultPrec);
}

/// Binary float of explicit precision.  Mutating operations state their
/// rounding mode; the default arithmetic operators round to nearest at the
/// wider operand precision.
class Real {
  public:
    explicit Real(Prec prec = kDefaultPrec) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    static Real of(const Rational& q, Prec prec, mpfr_rnd_t rnd = MPFR_RNDN) {
        Real r(prec);
        mpfr_set_q(r.v_, q.get_mpq_t(), rnd);
        return r;
    }
    static Real of(const Integer& z, Prec prec, mpfr_rnd_t rnd = MPFR_RNDN) {
        Real r(prec);
        mpfr_set_z(r.v_, z.get_mpz_t(), rnd);
        return r;
    }
    static Real of(double d, Prec prec) {
        Real r(prec);
        mpfr_set_d(r.v_, d, MPFR_RNDN);
        return r;
    }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }
    Prec prec() const { return mpfr_get_prec(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    int cmp(const Real& o) const { return mpfr_cmp(v_, o.v_); }
    bool operator<(const Real& o) const { return cmp(o) < 0; }
    bool operator<=(const Real& o) const { return cmp(o) <= 0; }
    bool operator>(const Real& o) const { return cmp(o) > 0; }
    bool operator>=(const Real& o) const { return cmp(o) >= 0; }

    /// Upper bound on one rounding error of this value: 2^(exp - prec + 1).
    /// Exact zeros contribute nothing (no underflow in our exponent range).
    Real ulp_bound() const {
        Real r(32);
        if (mpfr_zero_p(v_)) {
            mpfr_set_zero(r.v_, 1);
        } else {
            mpfr_set_ui_2exp(r.v_, 1, mpfr_get_exp(v_) - mpfr_get_prec(v_) + 1, MPFR_RNDU);
        }
        return r;
    }

    std::string str(int digits = 20, const char* fmt = "Re") const {
        std::string spec = "%." + std::to_string(digits) + fmt;
        char* out = nullptr;
        mpfr_asprintf(&out, spec.c_str(), v_);
        std::string s(out);
        mpfr_free_str(out);
        return s;
    }

    friend Real bin_op(const Real& a, const Real& b, mpfr_rnd_t rnd,
                       int (*op)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t)) {
        Real r(std::max(a.prec(), b.prec()));
        op(r.v_, a.v_, b.v_, rnd);
        return r;
    }
    friend Real operator+(const Real& a, const Real& b) { return bin_op(a, b, MPFR_RNDN, mpfr_add); }
    friend Real operator-(const Real& a, const Real& b) { return bin_op(a, b, MPFR_RNDN, mpfr_sub); }
    friend Real operator*(const Real& a, const Real& b) { return bin_op(a, b, MPFR_RNDN, mpfr_mul); }
    friend Real operator/(const Real& a, const Real& b) { return bin_op(a, b, MPFR_RNDN, mpfr_div); }

    friend Real add_up(const Real& a, const Real& b) { return bin_op(a, b, MPFR_RNDU, mpfr_add); }
    friend Real sub_down(const Real& a, const Real& b) { return bin_op(a, b, MPFR_RNDD, mpfr_sub); }
    friend Real mul_up(const Real& a, const Real& b) { return bin_op(a, b, MPFR_RNDU, mpfr_mul); }
    friend Real mul_down(const Real& a, const Real& b) { return bin_op(a, b, MPFR_RNDD, mpfr_mul); }
    friend Real div_up(const Real& a, const Real& b) { return bin_op(a, b, MPFR_RNDU, mpfr_div); }

    friend Real abs(const Real& a) {
        Real r(a.prec());
        mpfr_abs(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend Real neg(const Real& a) {
        Real r(a.prec());
        mpfr_neg(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

  private:
    mpfr_t v_;
};

inline Real sqrt_up(const Rational& q, Prec prec) {
    Real r = Real::of(q, prec, MPFR_RNDU);
    mpfr_sqrt(r.raw(), r.raw(), MPFR_RNDU);
    return r;
}

/// Value with a guaranteed absolute error radius: the represented exact
/// quantity lies in [value - err, value + err].  Radius arithmetic rounds up
/// and absorbs the rounding of the value itself, so composition never loses
/// the enclosure.
class BoundedReal {
  public:
    Real value;
    Real err;

    explicit BoundedReal(Prec prec = kDefaultPrec) : value(prec), err(64) {}
    BoundedReal(Real v, Real e) : value(std::move(v)), err(std::move(e)) {
        if (err.sign() < 0) throw DomainError("negative error radius");
    }

    static BoundedReal exact(const Rational& q, Prec prec) {
        BoundedReal r(prec);
        int t = mpfr_set_q(r.value.raw(), q.get_mpq_t(), MPFR_RNDN);
        if (t != 0) r.err = r.value.ulp_bound();
        return r;
    }
    static BoundedReal exact(const Integer& z, Prec prec) {
        BoundedReal r(prec);
        int t = mpfr_set_z(r.value.raw(), z.get_mpz_t(), MPFR_RNDN);
        if (t != 0) r.err = r.value.ulp_bound();
        return r;
    }
    static BoundedReal zero(Prec prec = kDefaultPrec) { return BoundedReal(prec); }

    /// sqrt of a nonnegative rational, enclosed to the working precision.
    static BoundedReal sqrt_of(const Rational& q, Prec prec) {
        if (q < 0) throw DomainError("sqrt of negative rational");
        BoundedReal r(prec);
        mpfr_set_q(r.value.raw(), q.get_mpq_t(), MPFR_RNDN);
        mpfr_sqrt(r.value.raw(), r.value.raw(), MPFR_RNDN);
        // two roundings, each <= 0.5 ulp of the result scale
        r.err = add_up(r.value.ulp_bound(), r.value.ulp_bound());
        return r;
    }

    friend BoundedReal operator+(const BoundedReal& a, const BoundedReal& b) {
        Real v = a.value + b.value;
        Real e = add_up(add_up(a.err, b.err), v.ulp_bound());
        return BoundedReal(std::move(v), std::move(e));
    }
    friend BoundedReal operator-(const BoundedReal& a, const BoundedReal& b) {
        Real v = a.value - b.value;
        Real e = add_up(add_up(a.err, b.err), v.ulp_bound());
        return BoundedReal(std::move(v), std::move(e));
    }
    friend BoundedReal operator-(const BoundedReal& a) {
        return BoundedReal(neg(a.value), a.err);
    }
    friend BoundedReal operator*(const BoundedReal& a, const BoundedReal& b) {
        Real v = a.value * b.value;
        Real e = add_up(mul_up(abs(a.value), b.err), mul_up(abs(b.value), a.err));
        e = add_up(e, mul_up(a.err, b.err));
        e = add_up(e, v.ulp_bound());
        return BoundedReal(std::move(v), std::move(e));
    }

    BoundedReal mul_exact(const Rational& q) const {
        BoundedReal r(value.prec());
        mpfr_mul_q(r.value.raw(), value.raw(), q.get_mpq_t(), MPFR_RNDN);
        Real qa(64);
        mpfr_set_q(qa.raw(), q.get_mpq_t(), MPFR_RNDU);
        mpfr_abs(qa.raw(), qa.raw(), MPFR_RNDU);
        r.err = add_up(mul_up(qa, err), r.value.ulp_bound());
        return r;
    }

    BoundedReal div_exact(const Rational& q) const {
        if (q == 0) throw DomainError("division by zero");
        BoundedReal r(value.prec());
        mpfr_div_q(r.value.raw(), value.raw(), q.get_mpq_t(), MPFR_RNDN);
        Real inv(64);
        Rational iq = Rational(1) / q;
        mpfr_set_q(inv.raw(), iq.get_mpq_t(), MPFR_RNDU);
        mpfr_abs(inv.raw(), inv.raw(), MPFR_RNDU);
        r.err = add_up(mul_up(inv, err), r.value.ulp_bound());
        return r;
    }

    /// Interval division; requires the divisor interval to exclude zero.
    friend BoundedReal operator/(const BoundedReal& a, const BoundedReal& b) {
        Real babs = abs(b.value);
        Real margin = sub_down(babs, b.err);
        if (margin.sign() <= 0) throw DomainError("division by interval containing zero");
        Real v = a.value / b.value;
        // |a/b - a'/b'| <= (|a'| e_b + |b'| e_a) / (|b'| (|b'| - e_b))
        Real num = add_up(mul_up(abs(a.value), b.err), mul_up(babs, a.err));
        Real e = div_up(num, mul_down(babs, margin));
        e = add_up(e, v.ulp_bound());
        return BoundedReal(std::move(v), std::move(e));
    }

    BoundedReal widened(const Real& extra) const {
        return BoundedReal(value, add_up(err, extra));
    }

    Real upper() const { return add_up(value, err); }
    Real lower() const { return sub_down(value, err); }
    /// Upper bound for |represented quantity|.
    Real abs_upper() const { return add_up(abs(value), err); }

    bool overlaps(const BoundedReal& o) const {
        Real d = abs(value - o.value);
        Real s = add_up(add_up(err, o.err), d.ulp_bound());
        return d <= s;
    }
    bool contains(const Rational& q) const {
        Real d(std::max<Prec>(value.prec(), 64));
        mpfr_sub_q(d.raw(), value.raw(), q.get_mpq_t(), MPFR_RNDN);
        mpfr_abs(d.raw(), d.raw(), MPFR_RNDN);
        return d <= add_up(err, d.ulp_bound());
    }

    double err_double() const {
        return mpfr_get_d(err.raw(), MPFR_RNDU);
    }

    std::string str(int digits = 20) const {
        return value.str(digits) + " +/- " + err.str(3);
    }
};

/// Running sum with deferred rounding accounting: each add costs one nearest
/// rounding, bounded at the end by ops * 2^(max_exp - prec + 1).
class BoundedSum {
  public:
    explicit BoundedSum(Prec prec) : acc_(prec), err_(64), prec_(prec) {}

    void add_exact(const Rational& q) {
        mpfr_add_q(acc_.raw(), acc_.raw(), q.get_mpq_t(), MPFR_RNDN);
        note_op();
    }
    void add_exact(const Integer& z) {
        mpfr_add_z(acc_.raw(), acc_.raw(), z.get_mpz_t(), MPFR_RNDN);
        note_op();
    }
    void add(const BoundedReal& b) {
        mpfr_add(acc_.raw(), acc_.raw(), b.value.raw(), MPFR_RNDN);
        err_ = add_up(err_, b.err);
        note_op();
    }
    void sub(const BoundedReal& b) {
        mpfr_sub(acc_.raw(), acc_.raw(), b.value.raw(), MPFR_RNDN);
        err_ = add_up(err_, b.err);
        note_op();
    }

    BoundedReal result() const {
        Real slop(64);
        if (ops_ > 0 && has_exp_) {
            mpfr_set_ui_2exp(slop.raw(), ops_, max_exp_ - prec_ + 1, MPFR_RNDU);
        } else {
            mpfr_set_zero(slop.raw(), 1);
        }
        return BoundedReal(acc_, add_up(err_, slop));
    }

    double err_upper_double() const { return result().err_double(); }

  private:
    void note_op() {
        ++ops_;
        if (!acc_.is_zero()) {
            mpfr_exp_t e = mpfr_get_exp(acc_.raw());
            if (!has_exp_ || e > max_exp_) max_exp_ = e;
            has_exp_ = true;
        }
    }

    Real acc_;
    Real err_;
    Prec prec_;
    unsigned long ops_ = 0;
    bool has_exp_ = false;
    mpfr_exp_t max_exp_ = 0;
};

}  // namespace fracsum

#endif
