#pragma once

// Exact arithmetic in the cyclotomic field Q[x]/Phi_M(x).  Elements are
// polynomials of degree < phi(M); x represents a primitive M-th root of
// unity, so monomial exponents reduce mod M before reduction mod Phi_M.
// Division is available for any nonzero element (it is a field), which is
// what lets q-factorials be divided out exactly at roots of unity.

#include "q41/poly.hpp"

#include <memory>

namespace q41 {

namespace detail {
struct CycloCtx {
    long M;
    QPoly phi;
    std::size_t deg;
    std::vector<QPoly> xpow; // x^j mod Phi_M for 0 <= j <= max(M-1, 2 deg-2)

    explicit CycloCtx(long M_) : M(M_), phi(cyclotomic_poly(M_)) {
        deg = (std::size_t)phi.deg();
        std::size_t top = std::max<std::size_t>((std::size_t)M - 1, 2 * deg >= 2 ? 2 * deg - 2 : 0);
        xpow.resize(top + 1);
        for (std::size_t j = 0; j <= top; ++j) {
            if (j < deg) {
                xpow[j] = QPoly::monomial(j);
            } else {
                // x * xpow[j-1] mod phi
                QPoly t = xpow[j - 1] * QPoly::monomial(1);
                if ((std::size_t)t.deg() >= deg) {
                    Rat f = t.coeff(deg);
                    for (std::size_t i = 0; i < deg; ++i) t.c[i] -= f * phi.c[i];
                    t.c.resize(deg);
                    t.trim();
                }
                xpow[j] = std::move(t);
            }
        }
    }
};

inline std::shared_ptr<const CycloCtx> cyclo_ctx(long M) {
    static std::map<long, std::shared_ptr<const CycloCtx>> cache;
    auto it = cache.find(M);
    if (it != cache.end()) return it->second;
    auto p = std::make_shared<const CycloCtx>(M);
    cache.emplace(M, p);
    return p;
}
} // namespace detail

class Cyclo {
    std::shared_ptr<const detail::CycloCtx> F_;
    std::vector<Rat> c_; // degree < deg(Phi_M)

    void reduce_from(const QPoly& p) {
        c_.assign(F_->deg, Rat(0));
        for (std::size_t j = 0; j < p.c.size(); ++j) {
            if (p.c[j] == 0) continue;
            const QPoly& xj = F_->xpow[j];
            for (std::size_t i = 0; i < xj.c.size(); ++i) c_[i] += p.c[j] * xj.c[i];
        }
    }

public:
    explicit Cyclo(long M = 1) : F_(detail::cyclo_ctx(M)), c_(F_->deg, Rat(0)) {}

    long order() const { return F_->M; }
    const std::vector<Rat>& coeffs() const { return c_; }

    static Cyclo from_rat(long M, const Rat& a) {
        Cyclo z(M);
        z.c_[0] = a;
        return z;
    }
    // zeta^k, exponent reduced mod M
    static Cyclo root_power(long M, long k) {
        Cyclo z(M);
        long j = mod_pos(k, M);
        const QPoly& xj = z.F_->xpow[(std::size_t)j];
        for (std::size_t i = 0; i < xj.c.size(); ++i) z.c_[i] = xj.c[i];
        return z;
    }

    bool is_zero() const {
        for (auto& a : c_)
            if (a != 0) return false;
        return true;
    }
    friend bool operator==(const Cyclo& a, const Cyclo& b) {
        return a.order() == b.order() && a.c_ == b.c_;
    }

    friend Cyclo operator+(const Cyclo& a, const Cyclo& b) {
        Cyclo r = a;
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
        return r;
    }
    friend Cyclo operator-(const Cyclo& a, const Cyclo& b) {
        Cyclo r = a;
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
        return r;
    }
    friend Cyclo operator-(const Cyclo& a) {
        Cyclo r = a;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend Cyclo operator*(const Cyclo& a, const Rat& s) {
        Cyclo r = a;
        for (auto& x : r.c_) x *= s;
        return r;
    }
    friend Cyclo operator*(const Cyclo& a, const Cyclo& b) {
        Cyclo r(a.order());
        QPoly prod;
        prod.c.assign(2 * a.F_->deg - 1, Rat(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                if (b.c_[j] != 0) prod.c[i + j] += a.c_[i] * b.c_[j];
        }
        prod.trim();
        r.reduce_from(prod);
        return r;
    }
    Cyclo inv() const {
        QPoly self;
        self.c = c_;
        self.trim();
        if (self.is_zero()) throw std::domain_error("cyclotomic inverse of 0");
        QPoly u, v;
        QPoly g = ext_gcd(self, F_->phi, u, v);
        if (g.deg() != 0) throw std::logic_error("Phi_M not coprime to element");
        // u * self = g (constant); scale
        Cyclo r(order());
        Rat s = Rat(1) / g.c[0];
        QPoly us = u * s;
        r.reduce_from(us);
        return r;
    }
    friend Cyclo operator/(const Cyclo& a, const Cyclo& b) { return a * b.inv(); }

    Cyclo pow(long e) const {
        Cyclo base = *this, acc = from_rat(order(), Rat(1));
        if (e < 0) {
            base = base.inv();
            e = -e;
        }
        while (e) {
            if (e & 1) acc = acc * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return acc;
    }

    // Galois action x -> x^t for gcd(t, M) = 1
    Cyclo galois(long t) const {
        Cyclo r(order());
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            r = r + root_power(order(), (long)i * t) * c_[i];
        }
        return r;
    }

    // numeric image under x -> e(a/M)
    CBall eval(long a, mpfr_prec_t p) const {
        CBall x = e_of(Rat(a, order()), p);
        CBall r = CBall::from(0L, p);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            r = r * x + CBall::from(*it, p);
        return r;
    }

    // exact rational value when the element is in Q
    bool rational_value(Rat& out) const {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        out = c_[0];
        return true;
    }
};

} // namespace q41
