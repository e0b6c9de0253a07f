#pragma once

// Complex ball arithmetic in midpoint-radius form, built directly on MPFR.
// Midpoints are a pair of mpfr_t at the working precision; the radius is a
// single low-precision mpfr_t that bounds the complex distance |z - mid| and
// is always rounded outward.  Propagation rules are deliberately generous
// (factor-of-two slack in places) -- the point is honest error tracking, not
// the tightest possible enclosures.

#include "q41/rational.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>

namespace q41 {

inline constexpr mpfr_prec_t RAD_PREC = 32;

// ---------------------------------------------------------------------------
// RF: RAII wrapper around a single mpfr_t with value semantics.
// ---------------------------------------------------------------------------

class RF {
    mpfr_t x_;

public:
    explicit RF(mpfr_prec_t p = 64) {
        mpfr_init2(x_, p);
        mpfr_set_zero(x_, 1);
    }
    RF(const RF& o) {
        mpfr_init2(x_, mpfr_get_prec(o.x_));
        mpfr_set(x_, o.x_, MPFR_RNDN);
    }
    RF(RF&& o) noexcept {
        mpfr_init2(x_, MPFR_PREC_MIN);
        mpfr_swap(x_, o.x_);
    }
    RF& operator=(const RF& o) {
        if (this != &o) {
            mpfr_set_prec(x_, mpfr_get_prec(o.x_));
            mpfr_set(x_, o.x_, MPFR_RNDN);
        }
        return *this;
    }
    RF& operator=(RF&& o) noexcept {
        if (this != &o) mpfr_swap(x_, o.x_);
        return *this;
    }
    ~RF() { mpfr_clear(x_); }

    mpfr_ptr get() { return x_; }
    mpfr_srcptr get() const { return x_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(x_); }

    static RF from(long v, mpfr_prec_t p) {
        RF r(p);
        mpfr_set_si(r.x_, v, MPFR_RNDN);
        return r;
    }
    static RF from(double v, mpfr_prec_t p) {
        RF r(p);
        mpfr_set_d(r.x_, v, MPFR_RNDN);
        return r;
    }
    static RF from(const Rat& v, mpfr_prec_t p) {
        RF r(p);
        mpfr_set_q(r.x_, v.get_mpq_t(), MPFR_RNDN);
        return r;
    }
    static RF from_str(const std::string& s, mpfr_prec_t p) {
        RF r(p);
        if (mpfr_set_str(r.x_, s.c_str(), 10, MPFR_RNDN) != 0)
            throw std::invalid_argument("bad decimal: " + s);
        return r;
    }
    static RF pi(mpfr_prec_t p) {
        RF r(p);
        mpfr_const_pi(r.x_, MPFR_RNDN);
        return r;
    }

    double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(x_) != 0; }
    bool is_number() const { return mpfr_number_p(x_) != 0; }
    int sgn() const { return mpfr_sgn(x_); }
    // exponent such that |x| < 2^exp2 (MPFR convention: 0.5 <= mantissa < 1)
    mpfr_exp_t exp2() const { return mpfr_get_exp(x_); }
    mpfr_exp_t exp2_or(mpfr_exp_t ifzero) const { return is_zero() ? ifzero : mpfr_get_exp(x_); }

    friend RF operator-(const RF& a) {
        RF r(a.prec());
        mpfr_neg(r.x_, a.x_, MPFR_RNDN);
        return r;
    }

#define Q41_RF_BINOP(op, fn)                                              \
    friend RF operator op(const RF& a, const RF& b) {                    \
        RF r(std::max(a.prec(), b.prec()));                              \
        fn(r.x_, a.x_, b.x_, MPFR_RNDN);                                 \
        return r;                                                        \
    }                                                                    \
    RF& operator op##=(const RF& b) {                                    \
        fn(x_, x_, b.x_, MPFR_RNDN);                                     \
        return *this;                                                    \
    }
    Q41_RF_BINOP(+, mpfr_add)
    Q41_RF_BINOP(-, mpfr_sub)
    Q41_RF_BINOP(*, mpfr_mul)
    Q41_RF_BINOP(/, mpfr_div)
#undef Q41_RF_BINOP

    friend RF operator*(const RF& a, long b) {
        RF r(a.prec());
        mpfr_mul_si(r.x_, a.x_, b, MPFR_RNDN);
        return r;
    }
    friend RF operator/(const RF& a, long b) {
        RF r(a.prec());
        mpfr_div_si(r.x_, a.x_, b, MPFR_RNDN);
        return r;
    }
    friend RF operator+(const RF& a, long b) {
        RF r(a.prec());
        mpfr_add_si(r.x_, a.x_, b, MPFR_RNDN);
        return r;
    }
    friend RF operator-(const RF& a, long b) {
        RF r(a.prec());
        mpfr_sub_si(r.x_, a.x_, b, MPFR_RNDN);
        return r;
    }

    friend bool operator<(const RF& a, const RF& b) { return mpfr_cmp(a.x_, b.x_) < 0; }
    friend bool operator>(const RF& a, const RF& b) { return mpfr_cmp(a.x_, b.x_) > 0; }
    friend bool operator<=(const RF& a, const RF& b) { return mpfr_cmp(a.x_, b.x_) <= 0; }
    friend bool operator>=(const RF& a, const RF& b) { return mpfr_cmp(a.x_, b.x_) >= 0; }
    friend bool operator==(const RF& a, const RF& b) { return mpfr_cmp(a.x_, b.x_) == 0; }

    std::string str(int digits = 17) const {
        char buf[256];
        mpfr_snprintf(buf, sizeof buf, "%.*Rg", digits, x_);
        return std::string(buf);
    }
};

#define Q41_RF_FUN1(name, fn)                 \
    inline RF name(const RF& a) {             \
        RF r(a.prec());                       \
        fn(r.get(), a.get(), MPFR_RNDN);      \
        return r;                             \
    }
Q41_RF_FUN1(sqrt, mpfr_sqrt)
Q41_RF_FUN1(exp, mpfr_exp)
Q41_RF_FUN1(expm1, mpfr_expm1)
Q41_RF_FUN1(log, mpfr_log)
Q41_RF_FUN1(log1p, mpfr_log1p)
Q41_RF_FUN1(sin, mpfr_sin)
Q41_RF_FUN1(cos, mpfr_cos)
Q41_RF_FUN1(tanh, mpfr_tanh)
Q41_RF_FUN1(cosh, mpfr_cosh)
Q41_RF_FUN1(sinh, mpfr_sinh)
Q41_RF_FUN1(abs, mpfr_abs)
#undef Q41_RF_FUN1

inline RF floor(const RF& a) {
    RF r(a.prec());
    mpfr_rint(r.get(), a.get(), MPFR_RNDD);
    return r;
}

inline RF atan2(const RF& y, const RF& x) {
    RF r(std::max(y.prec(), x.prec()));
    mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
    return r;
}
inline RF pow(const RF& a, const RF& b) {
    RF r(std::max(a.prec(), b.prec()));
    mpfr_pow(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}
inline RF pow(const RF& a, long b) {
    RF r(a.prec());
    mpfr_pow_si(r.get(), a.get(), b, MPFR_RNDN);
    return r;
}
inline RF max(const RF& a, const RF& b) {
    RF r(std::max(a.prec(), b.prec()));
    mpfr_max(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}
inline RF min(const RF& a, const RF& b) {
    RF r(std::max(a.prec(), b.prec()));
    mpfr_min(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}

// ---------------------------------------------------------------------------
// CBall: complex midpoint + outward-rounded radius.
// ---------------------------------------------------------------------------

class CBall {
    RF re_, im_; // midpoint, working precision
    RF rad_;     // bound on |z - mid|, RAD_PREC bits, rounded up

    // one-ulp bound for the rounding error committed on a midpoint component
    void add_component_ulps() {
        mpfr_t t;
        mpfr_init2(t, RAD_PREC);
        for (const RF* c : {&re_, &im_}) {
            if (mpfr_zero_p(c->get())) continue;
            mpfr_set_ui_2exp(t, 1, mpfr_get_exp(c->get()) - c->prec(), MPFR_RNDU);
            mpfr_add(rad_.get(), rad_.get(), t, MPFR_RNDU);
        }
        mpfr_clear(t);
    }

public:
    explicit CBall(mpfr_prec_t p = 64) : re_(p), im_(p), rad_(RAD_PREC) {}
    CBall(RF re, RF im, RF rad) : re_(std::move(re)), im_(std::move(im)), rad_(std::move(rad)) {}

    static CBall from(long v, mpfr_prec_t p) {
        CBall z(p);
        mpfr_set_si(z.re_.get(), v, MPFR_RNDN);
        return z;
    }
    static CBall from(const Rat& x, mpfr_prec_t p) { return from(x, Rat(0), p); }
    static CBall from(const Rat& x, const Rat& y, mpfr_prec_t p) {
        CBall z(p);
        mpfr_set_q(z.re_.get(), x.get_mpq_t(), MPFR_RNDN);
        mpfr_set_q(z.im_.get(), y.get_mpq_t(), MPFR_RNDN);
        z.add_component_ulps();
        return z;
    }
    static CBall from(const RF& x, mpfr_prec_t p) {
        CBall z(p);
        mpfr_set(z.re_.get(), x.get(), MPFR_RNDN);
        if (p < x.prec()) z.add_component_ulps();
        return z;
    }
    static CBall from(const RF& x, const RF& y, mpfr_prec_t p) {
        CBall z(p);
        mpfr_set(z.re_.get(), x.get(), MPFR_RNDN);
        mpfr_set(z.im_.get(), y.get(), MPFR_RNDN);
        if (p < x.prec() || p < y.prec()) z.add_component_ulps();
        return z;
    }
    static CBall from(double x, double y, mpfr_prec_t p) {
        CBall z(p);
        mpfr_set_d(z.re_.get(), x, MPFR_RNDN);
        mpfr_set_d(z.im_.get(), y, MPFR_RNDN);
        return z;
    }
    // decimal midpoint with an uncertainty of `ulps_last` units in the last
    // decimal place of whichever component has digits after the point
    static CBall from_decimal(const std::string& re, const std::string& im, mpfr_prec_t p,
                              double ulps_last = 1.0) {
        CBall z(p);
        if (mpfr_set_str(z.re_.get(), re.c_str(), 10, MPFR_RNDN) != 0 ||
            mpfr_set_str(z.im_.get(), im.c_str(), 10, MPFR_RNDN) != 0)
            throw std::invalid_argument("from_decimal: unparseable number \"" + re + "\", \"" + im + "\"");
        z.add_component_ulps();
        auto last_place = [](const std::string& s) -> double {
            auto dot = s.find('.');
            if (dot == std::string::npos) return 0.0;
            std::size_t frac = 0;
            for (std::size_t i = dot + 1; i < s.size() && std::isdigit((unsigned char)s[i]); ++i)
                ++frac;
            double e = 1.0;
            for (std::size_t i = 0; i < frac; ++i) e /= 10.0;
            return e;
        };
        double u = std::max(last_place(re), last_place(im)) * ulps_last;
        if (u > 0) {
            mpfr_t t;
            mpfr_init2(t, RAD_PREC);
            mpfr_set_d(t, 2.0 * u, MPFR_RNDU); // both components may be off
            mpfr_add(z.rad_.get(), z.rad_.get(), t, MPFR_RNDU);
            mpfr_clear(t);
        }
        return z;
    }
    static CBall pi(mpfr_prec_t p) {
        CBall z(p);
        mpfr_const_pi(z.re_.get(), MPFR_RNDN);
        z.add_component_ulps();
        return z;
    }
    static CBall i_unit(mpfr_prec_t p) {
        CBall z(p);
        mpfr_set_si(z.im_.get(), 1, MPFR_RNDN);
        return z;
    }

    const RF& real() const { return re_; }
    const RF& imag() const { return im_; }
    const RF& rad() const { return rad_; }
    RF& get_re() { return re_; }
    RF& get_im() { return im_; }
    void set_rad(const RF& r) { mpfr_set(rad_.get(), r.get(), MPFR_RNDU); }
    void bump() { add_component_ulps(); }
    mpfr_prec_t prec() const { return re_.prec(); }
    bool is_exact() const { return rad_.is_zero(); }
    bool is_finite() const {
        return re_.is_number() && im_.is_number() && rad_.is_number();
    }

    CBall& inflate(const RF& extra) {
        mpfr_add(rad_.get(), rad_.get(), extra.get(), MPFR_RNDU);
        return *this;
    }
    CBall& inflate_2exp(mpfr_exp_t e) { // rad += 2^e
        mpfr_t t;
        mpfr_init2(t, RAD_PREC);
        mpfr_set_ui_2exp(t, 1, e, MPFR_RNDU);
        mpfr_add(rad_.get(), rad_.get(), t, MPFR_RNDU);
        mpfr_clear(t);
        return *this;
    }

    // |mid| <= abs_ub() and abs_lb_mid() <= |mid|, both at RAD_PREC
    RF abs_ub_mid() const {
        RF u(RAD_PREC), t(RAD_PREC);
        mpfr_abs(u.get(), re_.get(), MPFR_RNDU);
        mpfr_abs(t.get(), im_.get(), MPFR_RNDU);
        mpfr_add(u.get(), u.get(), t.get(), MPFR_RNDU);
        return u;
    }
    RF abs_lb_mid() const {
        RF u(RAD_PREC), t(RAD_PREC);
        mpfr_abs(u.get(), re_.get(), MPFR_RNDD);
        mpfr_abs(t.get(), im_.get(), MPFR_RNDD);
        mpfr_max(u.get(), u.get(), t.get(), MPFR_RNDD);
        return u;
    }
    // bounds over the whole disk
    RF abs_ub() const {
        RF u = abs_ub_mid();
        mpfr_add(u.get(), u.get(), rad_.get(), MPFR_RNDU);
        return u;
    }
    RF abs_lb() const {
        RF u = abs_lb_mid();
        mpfr_sub(u.get(), u.get(), rad_.get(), MPFR_RNDD);
        if (mpfr_sgn(u.get()) < 0) mpfr_set_zero(u.get(), 1);
        return u;
    }
    bool contains_zero() const { return abs_lb().is_zero(); }

    // accurate |mid| at working precision (not a directed bound)
    RF abs_mid() const {
        RF r(prec());
        mpfr_hypot(r.get(), re_.get(), im_.get(), MPFR_RNDN);
        return r;
    }
    RF arg_mid() const { return atan2(im_, re_); }

    friend CBall operator-(const CBall& a) {
        CBall z(a.prec());
        mpfr_neg(z.re_.get(), a.re_.get(), MPFR_RNDN);
        mpfr_neg(z.im_.get(), a.im_.get(), MPFR_RNDN);
        mpfr_set(z.rad_.get(), a.rad_.get(), MPFR_RNDU);
        return z;
    }
    CBall conj() const {
        CBall z(prec());
        mpfr_set(z.re_.get(), re_.get(), MPFR_RNDN);
        mpfr_neg(z.im_.get(), im_.get(), MPFR_RNDN);
        mpfr_set(z.rad_.get(), rad_.get(), MPFR_RNDU);
        return z;
    }

    friend CBall operator+(const CBall& a, const CBall& b) {
        CBall z(std::max(a.prec(), b.prec()));
        mpfr_add(z.re_.get(), a.re_.get(), b.re_.get(), MPFR_RNDN);
        mpfr_add(z.im_.get(), a.im_.get(), b.im_.get(), MPFR_RNDN);
        mpfr_add(z.rad_.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
        z.add_component_ulps();
        return z;
    }
    friend CBall operator-(const CBall& a, const CBall& b) {
        CBall z(std::max(a.prec(), b.prec()));
        mpfr_sub(z.re_.get(), a.re_.get(), b.re_.get(), MPFR_RNDN);
        mpfr_sub(z.im_.get(), a.im_.get(), b.im_.get(), MPFR_RNDN);
        mpfr_add(z.rad_.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
        z.add_component_ulps();
        return z;
    }
    friend CBall operator*(const CBall& a, const CBall& b) {
        CBall z(std::max(a.prec(), b.prec()));
        // one correctly-rounded fused op per component
        mpfr_fmms(z.re_.get(), a.re_.get(), b.re_.get(), a.im_.get(), b.im_.get(), MPFR_RNDN);
        mpfr_fmma(z.im_.get(), a.re_.get(), b.im_.get(), a.im_.get(), b.re_.get(), MPFR_RNDN);
        // |a| rb + |b| ra + ra rb, all upward
        RF ua = a.abs_ub_mid(), ub = b.abs_ub_mid(), t(RAD_PREC);
        mpfr_mul(t.get(), ua.get(), b.rad_.get(), MPFR_RNDU);
        mpfr_set(z.rad_.get(), t.get(), MPFR_RNDU);
        mpfr_mul(t.get(), ub.get(), a.rad_.get(), MPFR_RNDU);
        mpfr_add(z.rad_.get(), z.rad_.get(), t.get(), MPFR_RNDU);
        mpfr_mul(t.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
        mpfr_add(z.rad_.get(), z.rad_.get(), t.get(), MPFR_RNDU);
        z.add_component_ulps();
        return z;
    }
    CBall inv() const {
        // 1/(w+d) - 1/w = -d / (w (w+d));  |.| <= r / (L (L - r)),  L <= |w|
        RF L(RAD_PREC);
        mpfr_set(L.get(), abs_lb_mid().get(), MPFR_RNDD);
        RF Lr(RAD_PREC);
        mpfr_sub(Lr.get(), L.get(), rad_.get(), MPFR_RNDD);
        if (mpfr_sgn(Lr.get()) <= 0) throw std::domain_error("inv of ball containing 0");
        CBall z(prec());
        RF d(prec());
        mpfr_fmma(d.get(), re_.get(), re_.get(), im_.get(), im_.get(), MPFR_RNDN);
        mpfr_div(z.re_.get(), re_.get(), d.get(), MPFR_RNDN);
        mpfr_div(z.im_.get(), im_.get(), d.get(), MPFR_RNDN);
        mpfr_neg(z.im_.get(), z.im_.get(), MPFR_RNDN);
        RF den(RAD_PREC);
        mpfr_mul(den.get(), L.get(), Lr.get(), MPFR_RNDD);
        mpfr_div(z.rad_.get(), rad_.get(), den.get(), MPFR_RNDU);
        z.add_component_ulps();
        z.add_component_ulps(); // two roundings per component above
        return z;
    }
    friend CBall operator/(const CBall& a, const CBall& b) { return a * b.inv(); }

    friend CBall operator*(const CBall& a, long k) {
        CBall z(a.prec());
        mpfr_mul_si(z.re_.get(), a.re_.get(), k, MPFR_RNDN);
        mpfr_mul_si(z.im_.get(), a.im_.get(), k, MPFR_RNDN);
        mpfr_mul_si(z.rad_.get(), a.rad_.get(), k, MPFR_RNDU);
        mpfr_abs(z.rad_.get(), z.rad_.get(), MPFR_RNDU);
        z.add_component_ulps();
        return z;
    }
    friend CBall operator*(long k, const CBall& a) { return a * k; }
    friend CBall operator*(const CBall& a, const Rat& q) {
        return a * CBall::from(q, a.prec());
    }
    friend CBall operator+(const CBall& a, long k) { return a + CBall::from(k, a.prec()); }
    friend CBall operator-(const CBall& a, long k) { return a - CBall::from(k, a.prec()); }
    friend CBall operator-(long k, const CBall& a) { return CBall::from(k, a.prec()) - a; }
    CBall& operator+=(const CBall& b) { return *this = *this + b; }
    CBall& operator-=(const CBall& b) { return *this = *this - b; }
    CBall& operator*=(const CBall& b) { return *this = *this * b; }
    CBall& operator/=(const CBall& b) { return *this = *this / b; }

    CBall mul_2exp(long e) const {
        CBall z(*this);
        mpfr_mul_2si(z.re_.get(), z.re_.get(), e, MPFR_RNDN);
        mpfr_mul_2si(z.im_.get(), z.im_.get(), e, MPFR_RNDN);
        mpfr_mul_2si(z.rad_.get(), z.rad_.get(), e, MPFR_RNDU);
        return z;
    }

    // true if the disk b is contained in the disk *this
    bool contains(const CBall& b) const {
        CBall d = *this - b; // rad combines; only midpoint distance wanted
        RF dist(RAD_PREC), t(RAD_PREC);
        mpfr_hypot(dist.get(), d.re_.get(), d.im_.get(), MPFR_RNDU);
        mpfr_add(t.get(), dist.get(), b.rad_.get(), MPFR_RNDU);
        return mpfr_cmp(t.get(), rad_.get()) <= 0;
    }
    // the two disks intersect (the weak "consistent with" test)
    bool agrees(const CBall& b) const {
        CBall d = *this - b;
        RF dist(RAD_PREC), t(RAD_PREC);
        mpfr_hypot(dist.get(), d.re_.get(), d.im_.get(), MPFR_RNDD);
        mpfr_add(t.get(), rad_.get(), b.rad_.get(), MPFR_RNDU);
        mpfr_add(t.get(), t.get(), d.rad_.get(), MPFR_RNDU);
        return mpfr_cmp(dist.get(), t.get()) <= 0;
    }

    double to_double_re() const { return re_.to_double(); }
    double to_double_im() const { return im_.to_double(); }

    // decimal digits of the midpoint that the radius still justifies
    long good_digits() const {
        if (rad_.is_zero()) return 1000000L;
        if (mpfr_zero_p(re_.get()) && mpfr_zero_p(im_.get())) return 0;
        mpfr_exp_t em = std::max(
            mpfr_zero_p(re_.get()) ? mpfr_get_exp(im_.get()) : mpfr_get_exp(re_.get()),
            mpfr_zero_p(im_.get()) ? mpfr_get_exp(re_.get()) : mpfr_get_exp(im_.get()));
        mpfr_exp_t er = mpfr_get_exp(rad_.get());
        if (er >= em) return 0;
        return (long)((double)(em - er) * 0.30103);
    }

    std::string str(int digits = 0) const {
        long gd = good_digits();
        if (digits <= 0) digits = (int)std::min<long>(gd, (long)(prec() * 0.30103));
        if (digits < 1) digits = 1;
        char buf[512];
        if (rad_.is_zero())
            mpfr_snprintf(buf, sizeof buf, "%.*Rg %+.*Rg*i", digits, re_.get(), digits,
                          im_.get());
        else
            mpfr_snprintf(buf, sizeof buf, "%.*Rg %+.*Rg*i (+/- %.2Rg)", digits, re_.get(),
                          digits, im_.get(), rad_.get());
        return std::string(buf);
    }
};

// ---------------------------------------------------------------------------
// elementary functions on balls
// ---------------------------------------------------------------------------

inline CBall sqrt(const CBall& a) {
    // principal branch; refuse balls that straddle the cut (-inf, 0]
    RF L = a.abs_lb();
    bool touches_cut = mpfr_sgn(a.real().get()) < 0 && [&] {
        RF ai(RAD_PREC);
        mpfr_abs(ai.get(), a.imag().get(), MPFR_RNDD);
        return mpfr_cmp(ai.get(), a.rad().get()) <= 0;
    }();
    if (touches_cut) throw std::domain_error("sqrt: ball crosses branch cut");
    mpfr_prec_t p = a.prec();
    CBall z(p);
    // midpoint sqrt via polar form
    RF r = a.abs_mid(), th = a.arg_mid();
    RF sr = q41::sqrt(r), h = th / 2;
    RF c(p), s(p);
    mpfr_sin_cos(s.get(), c.get(), h.get(), MPFR_RNDN);
    mpfr_mul(z.get_re().get(), sr.get(), c.get(), MPFR_RNDN);
    mpfr_mul(z.get_im().get(), sr.get(), s.get(), MPFR_RNDN);
    RF rad(RAD_PREC);
    if (L.is_zero()) {
        // 0 in the disk: |sqrt(u)-sqrt(v)| <= sqrt(2 |u-v|) on the slit plane
        mpfr_mul_ui(rad.get(), a.rad().get(), 2, MPFR_RNDU);
        mpfr_sqrt(rad.get(), rad.get(), MPFR_RNDU);
        mpfr_mul_d(rad.get(), rad.get(), 1.5, MPFR_RNDU);
    } else {
        RF sL(RAD_PREC);
        mpfr_sqrt(sL.get(), L.get(), MPFR_RNDD);
        mpfr_mul_ui(sL.get(), sL.get(), 2, MPFR_RNDD);
        mpfr_div(rad.get(), a.rad().get(), sL.get(), MPFR_RNDU);
    }
    z.set_rad(rad);
    z.bump();
    z.bump();
    z.bump(); // several midpoint roundings above
    return z;
}

inline CBall exp(const CBall& a) {
    mpfr_prec_t p = a.prec();
    CBall z(p);
    RF ex(p), s(p), c(p);
    mpfr_exp(ex.get(), a.real().get(), MPFR_RNDN);
    mpfr_sin_cos(s.get(), c.get(), a.imag().get(), MPFR_RNDN);
    mpfr_mul(z.get_re().get(), ex.get(), c.get(), MPFR_RNDN);
    mpfr_mul(z.get_im().get(), ex.get(), s.get(), MPFR_RNDN);
    // |exp(mid)| (e^r - 1), outward
    RF mag(RAD_PREC), t(RAD_PREC);
    mpfr_exp(mag.get(), a.real().get(), MPFR_RNDU);
    mpfr_expm1(t.get(), a.rad().get(), MPFR_RNDU);
    mpfr_mul(t.get(), t.get(), mag.get(), MPFR_RNDU);
    z.set_rad(t);
    z.bump();
    z.bump();
    return z;
}

inline CBall log(const CBall& a) {
    RF L = a.abs_lb();
    if (L.is_zero()) throw std::domain_error("log of ball containing 0");
    bool touches_cut = mpfr_sgn(a.real().get()) < 0 && [&] {
        RF ai(RAD_PREC);
        mpfr_abs(ai.get(), a.imag().get(), MPFR_RNDD);
        return mpfr_cmp(ai.get(), a.rad().get()) <= 0;
    }();
    if (touches_cut) throw std::domain_error("log: ball crosses branch cut");
    mpfr_prec_t p = a.prec();
    CBall z(p);
    RF r = a.abs_mid();
    mpfr_log(z.get_re().get(), r.get(), MPFR_RNDN);
    RF th = a.arg_mid();
    mpfr_set(z.get_im().get(), th.get(), MPFR_RNDN);
    // -log(1 - r/L) <= r / (L - r)
    RF t(RAD_PREC);
    mpfr_sub(t.get(), L.get(), a.rad().get(), MPFR_RNDD);
    if (mpfr_sgn(t.get()) <= 0) throw std::domain_error("log: radius too large");
    RF rad(RAD_PREC);
    mpfr_div(rad.get(), a.rad().get(), t.get(), MPFR_RNDU);
    z.set_rad(rad);
    z.bump();
    z.bump();
    return z;
}

inline CBall pow(const CBall& a, long n) {
    mpfr_prec_t p = a.prec();
    if (n == 0) return CBall::from(1L, p);
    if (n < 0) return pow(a.inv(), -n);
    CBall acc = CBall::from(1L, p), base = a;
    unsigned long e = (unsigned long)n;
    while (e) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return acc;
}

// a^(num/den) via exp((num/den) log a); principal determination
inline CBall pow(const CBall& a, const Rat& e) {
    if (e.get_den() == 1 && mpz_fits_slong_p(e.get_num().get_mpz_t()))
        return pow(a, e.get_num().get_si());
    return exp(log(a) * e);
}

inline CBall sin(const CBall& a) {
    mpfr_prec_t p = a.prec();
    CBall z(p);
    RF s(p), c(p), ch(p), sh(p);
    mpfr_sin_cos(s.get(), c.get(), a.real().get(), MPFR_RNDN);
    mpfr_cosh(ch.get(), a.imag().get(), MPFR_RNDN);
    mpfr_sinh(sh.get(), a.imag().get(), MPFR_RNDN);
    mpfr_mul(z.get_re().get(), s.get(), ch.get(), MPFR_RNDN);
    mpfr_mul(z.get_im().get(), c.get(), sh.get(), MPFR_RNDN);
    // |sin'| = |cos z| <= e^{|Im z| + r}
    RF b(RAD_PREC);
    mpfr_abs(b.get(), a.imag().get(), MPFR_RNDU);
    mpfr_add(b.get(), b.get(), a.rad().get(), MPFR_RNDU);
    mpfr_exp(b.get(), b.get(), MPFR_RNDU);
    mpfr_mul(b.get(), b.get(), a.rad().get(), MPFR_RNDU);
    z.set_rad(b);
    z.bump();
    z.bump();
    return z;
}

inline CBall cos(const CBall& a) {
    mpfr_prec_t p = a.prec();
    CBall z(p);
    RF s(p), c(p), ch(p), sh(p);
    mpfr_sin_cos(s.get(), c.get(), a.real().get(), MPFR_RNDN);
    mpfr_cosh(ch.get(), a.imag().get(), MPFR_RNDN);
    mpfr_sinh(sh.get(), a.imag().get(), MPFR_RNDN);
    mpfr_mul(z.get_re().get(), c.get(), ch.get(), MPFR_RNDN);
    mpfr_mul(z.get_im().get(), s.get(), sh.get(), MPFR_RNDN);
    mpfr_neg(z.get_im().get(), z.get_im().get(), MPFR_RNDN);
    RF b(RAD_PREC);
    mpfr_abs(b.get(), a.imag().get(), MPFR_RNDU);
    mpfr_add(b.get(), b.get(), a.rad().get(), MPFR_RNDU);
    mpfr_exp(b.get(), b.get(), MPFR_RNDU);
    mpfr_mul(b.get(), b.get(), a.rad().get(), MPFR_RNDU);
    z.set_rad(b);
    z.bump();
    z.bump();
    return z;
}

// e(x) = exp(2 pi i x) with x rational, reduced mod 1 exactly first
inline CBall e_of(const Rat& x, mpfr_prec_t p) {
    Rat f = x;
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), f.get_num().get_mpz_t(), f.get_den().get_mpz_t());
    f -= Rat(fl);
    if (f == 0) return CBall::from(1L, p);
    if (f == Rat(1, 2)) return CBall::from(-1L, p);
    if (f == Rat(1, 4)) return CBall::i_unit(p);
    if (f == Rat(3, 4)) return -CBall::i_unit(p);
    CBall z(p);
    RF th = RF::pi(p + 8) * 2 * RF::from(f, p + 8);
    RF s(p), c(p);
    mpfr_sin_cos(s.get(), c.get(), th.get(), MPFR_RNDN);
    mpfr_set(z.get_re().get(), c.get(), MPFR_RNDN);
    mpfr_set(z.get_im().get(), s.get(), MPFR_RNDN);
    z.bump();
    z.bump(); // theta rounding + sin/cos rounding
    return z;
}

inline CBall e_of(const CBall& z) {
    CBall t = z * CBall::pi(z.prec()) * 2;
    return exp(CBall(-t.imag(), t.real(), t.rad()));
}

} // namespace q41
