#pragma once

// Dense univariate polynomials with exact rational coefficients, plus the
// handful of algorithms the algebraic layers need: division, extended
// Euclid (for inverses mod a defining polynomial), cyclotomic polynomials,
// and ball evaluation.

#include "q41/ball.hpp"
#include "q41/rational.hpp"

#include <map>
#include <vector>

namespace q41 {

struct QPoly {
    std::vector<Rat> c; // c[i] x^i

    QPoly() = default;
    explicit QPoly(std::vector<Rat> coeffs) : c(std::move(coeffs)) { trim(); }
    static QPoly from_ints(std::initializer_list<long> v) {
        std::vector<Rat> w;
        for (long x : v) w.emplace_back(x);
        return QPoly(std::move(w));
    }
    static QPoly monomial(std::size_t k, Rat a = Rat(1)) {
        std::vector<Rat> w(k + 1);
        w[k] = std::move(a);
        return QPoly(std::move(w));
    }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    long deg() const { return (long)c.size() - 1; } // -1 for zero
    bool is_zero() const { return c.empty(); }
    Rat coeff(std::size_t i) const { return i < c.size() ? c[i] : Rat(0); }
    Rat lead() const { return c.back(); }

    friend QPoly operator+(const QPoly& a, const QPoly& b) {
        QPoly r;
        r.c.resize(std::max(a.c.size(), b.c.size()));
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.coeff(i) + b.coeff(i);
        r.trim();
        return r;
    }
    friend QPoly operator-(const QPoly& a, const QPoly& b) {
        QPoly r;
        r.c.resize(std::max(a.c.size(), b.c.size()));
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.coeff(i) - b.coeff(i);
        r.trim();
        return r;
    }
    friend QPoly operator*(const QPoly& a, const QPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        QPoly r;
        r.c.assign(a.c.size() + b.c.size() - 1, Rat(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) {
            if (a.c[i] == 0) continue;
            for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
        }
        r.trim();
        return r;
    }
    friend QPoly operator*(const QPoly& a, const Rat& s) {
        QPoly r = a;
        for (auto& x : r.c) x *= s;
        r.trim();
        return r;
    }
    friend bool operator==(const QPoly& a, const QPoly& b) { return a.c == b.c; }

    QPoly derivative() const {
        if (c.size() <= 1) return {};
        QPoly r;
        r.c.resize(c.size() - 1);
        for (std::size_t i = 1; i < c.size(); ++i) r.c[i - 1] = c[i] * Rat((long)i);
        return r;
    }

    // quotient and remainder; b must be nonzero
    static std::pair<QPoly, QPoly> divrem(QPoly a, const QPoly& b) {
        if (b.is_zero()) throw std::domain_error("poly division by zero");
        QPoly q;
        if (a.deg() >= b.deg()) q.c.assign(a.deg() - b.deg() + 1, Rat(0));
        while (!a.is_zero() && a.deg() >= b.deg()) {
            Rat f = a.lead() / b.lead();
            long sh = a.deg() - b.deg();
            q.c[sh] = f;
            for (long i = 0; i <= b.deg(); ++i) a.c[i + sh] -= f * b.c[i];
            a.trim();
        }
        q.trim();
        return {q, a};
    }

    Rat eval(const Rat& x) const {
        Rat r(0);
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
        return r;
    }
    CBall eval(const CBall& x) const {
        CBall r = CBall::from(0L, x.prec());
        for (auto it = c.rbegin(); it != c.rend(); ++it)
            r = r * x + CBall::from(*it, x.prec());
        return r;
    }
    RF eval(const RF& x) const {
        RF r(x.prec());
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + RF::from(*it, x.prec());
        return r;
    }
    double eval(double x) const {
        double r = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + it->get_d();
        return r;
    }
};

// g = gcd(a,b) monic, with u a + v b = g
inline QPoly ext_gcd(QPoly a, QPoly b, QPoly& u, QPoly& v) {
    QPoly u0 = QPoly::from_ints({1}), v0, u1, v1 = QPoly::from_ints({1});
    while (!b.is_zero()) {
        auto [q, r] = QPoly::divrem(a, b);
        a = std::move(b);
        b = std::move(r);
        QPoly u2 = u0 - q * u1, v2 = v0 - q * v1;
        u0 = std::move(u1);
        v0 = std::move(v1);
        u1 = std::move(u2);
        v1 = std::move(v2);
    }
    if (!a.is_zero()) {
        Rat inv_lead = Rat(1) / a.lead();
        a = a * inv_lead;
        u0 = u0 * inv_lead;
        v0 = v0 * inv_lead;
    }
    u = std::move(u0);
    v = std::move(v0);
    return a;
}

// Phi_M(x), cached; computed as (x^M - 1) / prod_{d | M, d < M} Phi_d(x)
inline const QPoly& cyclotomic_poly(long M) {
    static std::map<long, QPoly> cache;
    auto it = cache.find(M);
    if (it != cache.end()) return it->second;
    QPoly xm1 = QPoly::monomial((std::size_t)M) - QPoly::from_ints({1});
    QPoly den = QPoly::from_ints({1});
    for (long d = 1; d < M; ++d)
        if (M % d == 0) den = den * cyclotomic_poly(d);
    auto [q, r] = QPoly::divrem(xm1, den);
    if (!r.is_zero()) throw std::logic_error("cyclotomic division not exact");
    return cache.emplace(M, std::move(q)).first->second;
}

} // namespace q41
