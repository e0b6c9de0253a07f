#pragma once

// Exact rational helpers on top of gmpxx: parsing, powers, binomials,
// Bernoulli numbers and the zeta values at non-positive integers that
// feed the Eisenstein-series constant terms.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace q41 {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat rat_from_string(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    r.canonicalize();
    return r;
}

inline Int int_pow(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline Rat rat_pow(const Rat& b, long e) {
    if (e == 0) return Rat(1);
    Rat r;
    unsigned long a = e > 0 ? e : -e;
    mpz_pow_ui(r.get_num_mpz_t(), b.get_num().get_mpz_t(), a);
    mpz_pow_ui(r.get_den_mpz_t(), b.get_den().get_mpz_t(), a);
    if (e < 0) {
        if (r == 0) throw std::domain_error("0^negative");
        mpz_swap(r.get_num_mpz_t(), r.get_den_mpz_t());
    }
    r.canonicalize();
    return r;
}

inline Int binomial(unsigned long n, unsigned long k) {
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline Int factorial(unsigned long n) {
    Int r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

// B_0 = 1, B_1 = -1/2 (so that zeta(0) = -1/2 comes out right), B_2 = 1/6, ...
inline const std::vector<Rat>& bernoulli_table(std::size_t upto) {
    static std::vector<Rat> tab;
    if (tab.size() > upto) return tab;
    std::size_t old = tab.size();
    tab.resize(upto + 1);
    for (std::size_t n = old; n <= upto; ++n) {
        if (n == 0) {
            tab[0] = 1;
            continue;
        }
        // B_n = -1/(n+1) * sum_{k=0}^{n-1} C(n+1,k) B_k
        Rat s = 0;
        for (std::size_t k = 0; k < n; ++k) s += Rat(binomial(n + 1, k)) * tab[k];
        tab[n] = -s / Rat(Int(n) + 1);
    }
    return tab;
}

inline Rat bernoulli(unsigned n) { return bernoulli_table(n)[n]; }

// zeta(1-l) for l >= 1:  zeta(0) = -1/2, zeta(-n) = -B_{n+1}/(n+1).
// (the table uses B_1 = -1/2, so l = 1 is special-cased)
inline Rat zeta_one_minus(unsigned l) {
    if (l == 0) throw std::domain_error("zeta(1) pole");
    if (l == 1) return Rat(-1, 2);
    return -bernoulli(l) / Rat(l);
}

inline long floor_div(long a, long b) {
    long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

inline long mod_pos(long a, long b) {
    long r = a % b;
    return r < 0 ? r + (b < 0 ? -b : b) : r;
}

} // namespace q41
