#pragma once

// Special functions on complex balls: finite/infinite q-Pochhammer symbols,
// the dilogarithm (principal branch, full argument reduction), polylogarithms
// of non-positive integer order (exact rational functions), Eisenstein-type
// weighted sums, the cyclic dilogarithm, the enhanced Rogers function with
// integer flattenings, and the two-variable quantum dilogarithm built from
// Pochhammer ratios.

#include "q41/ball.hpp"
#include "q41/poly.hpp"

#include <map>

namespace q41 {

// (x;q)_n = prod_{j=0}^{n-1} (1 - q^j x); negative n via
// (x;q)_{-n} = 1 / prod_{j=1}^{n} (1 - q^{-j} x)
inline CBall pochhammer(const CBall& x, const CBall& q, long n) {
    mpfr_prec_t p = std::max(x.prec(), q.prec());
    CBall r = CBall::from(1L, p);
    if (n >= 0) {
        CBall qj = CBall::from(1L, p);
        for (long j = 0; j < n; ++j) {
            r = r * (CBall::from(1L, p) - qj * x);
            qj = qj * q;
        }
    } else {
        CBall qi = q.inv(), qj = qi;
        for (long j = 1; j <= -n; ++j) {
            r = r * (CBall::from(1L, p) - qj * x);
            qj = qj * qi;
        }
        r = r.inv();
    }
    return r;
}

// (x;q)_infty for |q| < 1, with a certified tail
inline CBall pochhammer_inf(const CBall& x, const CBall& q) {
    mpfr_prec_t p = std::max(x.prec(), q.prec());
    RF qa = q.abs_ub();
    if (!(qa < RF::from(1L, RAD_PREC))) throw std::domain_error("pochhammer_inf needs |q|<1");
    CBall r = CBall::from(1L, p);
    CBall qk = CBall::from(1L, p);
    RF xa = x.abs_ub();
    // choose N with |x| |q|^N / ((1-|q|)(1 - |x||q|^N)) < 2^-(p+8)
    RF qkn(RAD_PREC);
    mpfr_set(qkn.get(), xa.get(), MPFR_RNDU);
    RF one = RF::from(1L, RAD_PREC);
    RF thr(RAD_PREC);
    mpfr_set_ui_2exp(thr.get(), 1, -(long)p - 8, MPFR_RNDU);
    long N = 0;
    while (true) {
        // qkn = |x| |q|^N
        if (qkn < thr || N > 64 + 4 * (long)p) break;
        mpfr_mul(qkn.get(), qkn.get(), qa.get(), MPFR_RNDU);
        ++N;
    }
    for (long k = 0; k < N; ++k) {
        r = r * (CBall::from(1L, p) - qk * x);
        qk = qk * q;
    }
    // tail: |log prod_{k>=N} (1-q^k x)| <= T
    RF T(RAD_PREC);
    RF om(RAD_PREC);
    mpfr_sub(om.get(), one.get(), qa.get(), MPFR_RNDD);
    mpfr_div(T.get(), qkn.get(), om.get(), MPFR_RNDU);
    // guard 1 - |x||q|^N >= 1/2 given thr tiny; just double
    mpfr_mul_ui(T.get(), T.get(), 2, MPFR_RNDU);
    RF grow(RAD_PREC);
    mpfr_expm1(grow.get(), T.get(), MPFR_RNDU);
    CBall fudge = CBall::from(1L, p);
    fudge.inflate(grow);
    return r * fudge;
}

// Li_{-n} for n >= 0 as an exact rational function N_n(x) / (1-x)^{n+1};
// numerator cached.  Li_0(x) = x/(1-x), Li_{-n} = (x d/dx) Li_{-n+1}.
inline const QPoly& polylog_neg_numerator(unsigned n) {
    static std::vector<QPoly> cache;
    if (cache.empty()) cache.push_back(QPoly::from_ints({0, 1})); // N_0 = x
    while (cache.size() <= n) {
        const QPoly& N = cache.back();
        unsigned m = (unsigned)cache.size() - 1;
        // N_{m+1} = x (1-x) N_m' + (m+1) x N_m
        QPoly x = QPoly::from_ints({0, 1});
        QPoly one_minus_x = QPoly::from_ints({1, -1});
        QPoly nxt = x * one_minus_x * N.derivative() + x * N * Rat((long)m + 1);
        cache.push_back(std::move(nxt));
    }
    return cache[n];
}

inline Rat polylog_neg(unsigned n, const Rat& x) {
    Rat den = rat_pow(Rat(1) - x, (long)n + 1);
    return polylog_neg_numerator(n).eval(x) / den;
}

inline CBall polylog_neg(unsigned n, const CBall& x) {
    CBall one = CBall::from(1L, x.prec());
    return polylog_neg_numerator(n).eval(x) * pow(one - x, -(long)(n + 1));
}

namespace detail {
// dilogarithm by power series, |z| <= 0.6 assumed
inline CBall li2_series(const CBall& z) {
    mpfr_prec_t p = z.prec();
    RF za = z.abs_ub();
    CBall sum = CBall::from(0L, p), zk = z;
    long N = 8 + (long)(p / 0.7); // generous; loop breaks earlier
    for (long k = 1; k <= N; ++k) {
        sum += zk * Rat(1, (long)k * k);
        zk = zk * z;
        if (zk.abs_ub().exp2_or(-(mpfr_exp_t)p - 99) < -(mpfr_exp_t)p - 8) break;
    }
    // geometric tail
    RF t(RAD_PREC), om(RAD_PREC);
    mpfr_ui_sub(om.get(), 1, za.get(), MPFR_RNDD);
    mpfr_div(t.get(), zk.abs_ub().get(), om.get(), MPFR_RNDU);
    sum.inflate(t);
    return sum;
}

// dilogarithm via the Bernoulli series in u = -log(1-z), |u| < 2 pi
inline CBall li2_bernoulli(const CBall& z) {
    mpfr_prec_t p = z.prec();
    CBall u = -log(CBall::from(1L, p) - z);
    RF ua = u.abs_ub();
    RF rho(RAD_PREC);
    {
        RF twopi(RAD_PREC);
        mpfr_const_pi(twopi.get(), MPFR_RNDD);
        mpfr_mul_ui(twopi.get(), twopi.get(), 2, MPFR_RNDD);
        mpfr_div(rho.get(), ua.get(), twopi.get(), MPFR_RNDU);
    }
    if (!(rho < RF::from(Rat(99, 100), RAD_PREC)))
        throw std::domain_error("li2_bernoulli: |log(1-z)| too large");
    CBall sum = CBall::from(0L, p);
    CBall uk = u;       // u^{n+1} built incrementally
    RF bound = ua;      // |u| rho^n, an upper bound on term n+1 divided by 4
    long N = 16 + (long)(p * 1.2);
    const auto& B = bernoulli_table((std::size_t)N + 2);
    long n = 0;
    for (; n <= N; ++n) {
        if (n < 2 || n % 2 == 0) {
            Rat coef = B[(std::size_t)n] / Rat(factorial((unsigned long)n + 1));
            sum += uk * coef;
        }
        uk = uk * u;
        mpfr_mul(bound.get(), bound.get(), rho.get(), MPFR_RNDU);
        if (n >= 2 && !bound.is_zero() && bound.exp2() < -(mpfr_exp_t)p - 8) break;
    }
    // |B_n/(n+1)!| <= 4 (2 pi)^{-n}, so the tail past n is <= 4 bound / (1-rho)
    RF t(RAD_PREC), om(RAD_PREC);
    mpfr_ui_sub(om.get(), 1, rho.get(), MPFR_RNDD);
    mpfr_div(t.get(), bound.get(), om.get(), MPFR_RNDU);
    mpfr_mul_ui(t.get(), t.get(), 4, MPFR_RNDU);
    sum.inflate(t);
    return sum;
}
} // namespace detail

// principal dilogarithm; the ball must stay off the cut [1, infinity)
inline CBall li2(const CBall& z) {
    mpfr_prec_t p = z.prec();
    CBall one = CBall::from(1L, p);
    CBall pi = CBall::pi(p);
    CBall pi2_6 = pi * pi * Rat(1, 6);
    RF za = z.abs_ub();
    RF oza = (one - z).abs_ub();
    if (za < RF::from(Rat(3, 5), RAD_PREC)) return detail::li2_series(z);
    if (oza < RF::from(Rat(1, 4), RAD_PREC)) {
        // Li2(z) = pi^2/6 - log(z) log(1-z) - Li2(1-z)
        CBall w = one - z;
        CBall corr = w.contains_zero() ? CBall::from(0L, p) : log(z) * log(w);
        if (w.contains_zero()) {
            // log(1-z) -> 0 limit handled by continuity: |log z| |w log w| small
            CBall lw = CBall::from(0L, p);
            RF wb = w.abs_ub();
            if (!wb.is_zero()) {
                RF b(RAD_PREC);
                mpfr_log(b.get(), wb.get(), MPFR_RNDD); // negative
                mpfr_neg(b.get(), b.get(), MPFR_RNDU);
                mpfr_mul(b.get(), b.get(), wb.get(), MPFR_RNDU);
                mpfr_mul_ui(b.get(), b.get(), 4, MPFR_RNDU);
                lw.inflate(b);
            }
            corr = lw;
        }
        return pi2_6 - corr - detail::li2_series(w);
    }
    if (RF::from(Rat(5, 2), RAD_PREC) < za) {
        // Li2(z) = -Li2(1/z) - pi^2/6 - log(-z)^2 / 2
        CBall lz = log(-z);
        return -li2(z.inv()) - pi2_6 - lz * lz * Rat(1, 2);
    }
    return detail::li2_bernoulli(z);
}

// enhanced Rogers function R(z,p,q) = Li2(z) + (log z + 2 pi i p)(log(1-z) - 2 pi i q)/2
inline CBall rogers(const CBall& z, long pw, long qw) {
    mpfr_prec_t p = z.prec();
    CBall one = CBall::from(1L, p);
    CBall twopii = CBall::pi(p) * 2 * CBall::i_unit(p);
    CBall a = log(z) + twopii * pw;
    CBall b = log(one - z) - twopii * qw;
    return li2(z) + a * b * Rat(1, 2);
}

// E_l(q) = zeta(1-l)/2 + sum_{s>=1} s^{l-1} q^s / (1 - q^s),  |q| < 1
inline CBall eisenstein(unsigned l, const CBall& q) {
    if (l == 0) throw std::domain_error("eisenstein: l >= 1");
    mpfr_prec_t p = q.prec();
    RF qa = q.abs_ub();
    if (!(qa < RF::from(1L, RAD_PREC))) throw std::domain_error("eisenstein needs |q|<1");
    CBall sum = CBall::from(zeta_one_minus(l) * Rat(1, 2), p);
    CBall qs = CBall::from(1L, p);
    long s = 0;
    RF thr(RAD_PREC);
    mpfr_set_ui_2exp(thr.get(), 1, -(long)p - 8, MPFR_RNDU);
    while (true) {
        ++s;
        qs = qs * q;
        CBall term = qs / (CBall::from(1L, p) - qs);
        if (l >= 2) {
            Int sp = int_pow(Int(s), l - 1);
            term = term * Rat(sp);
        }
        sum += term;
        // crude but safe stopping rule: s^{l-1} |q|^s decays geometrically
        RF ta = term.abs_ub();
        if (ta < thr && s > 4) {
            // tail <= sum_{t>s} t^{l-1}|q|^t/(1-|q|) <= term * C; bound by
            // geometric series with ratio sqrt(|q|) once s is large enough
            RF sq(RAD_PREC), om(RAD_PREC), tail(RAD_PREC);
            mpfr_sqrt(sq.get(), qa.get(), MPFR_RNDU);
            mpfr_ui_sub(om.get(), 1, sq.get(), MPFR_RNDD);
            mpfr_div(tail.get(), ta.get(), om.get(), MPFR_RNDU);
            mpfr_mul_ui(tail.get(), tail.get(), 4, MPFR_RNDU);
            sum.inflate(tail);
            break;
        }
        if (s > 64 + 64 * (long)l + 8 * (long)p) throw std::runtime_error("eisenstein: no convergence");
    }
    return sum;
}

// cyclic dilogarithm D_M(x;q) = prod_{j=1}^{M-1} (1 - q^j x)^{j/M}
inline CBall cyclic_dilog(long M, const CBall& x, const CBall& q) {
    mpfr_prec_t p = std::max(x.prec(), q.prec());
    CBall r = CBall::from(1L, p);
    CBall qj = CBall::from(1L, p);
    for (long j = 1; j <= M - 1; ++j) {
        qj = qj * q;
        r = r * pow(CBall::from(1L, p) - qj * x, Rat(j, M));
    }
    return r;
}

// Phi(z;tau) = (q e(z); q)_inf / (e(z/tau); qt)_inf with q = e(tau),
// qt = e(-1/tau); valid for tau in the upper half plane
inline CBall quantum_dilog(const CBall& z, const CBall& tau) {
    mpfr_prec_t p = std::max(z.prec(), tau.prec());
    CBall q = e_of(tau);
    CBall qt = e_of(-(tau.inv()));
    CBall num = pochhammer_inf(q * e_of(z), q);
    CBall den = pochhammer_inf(e_of(z / tau), qt);
    return num / den;
}

} // namespace q41
