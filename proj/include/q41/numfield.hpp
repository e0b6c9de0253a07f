#pragma once

// Number fields Q[x]/p(x) with exact element arithmetic and certified
// numeric embeddings.  Root seeds come from the companion matrix in double
// precision (Eigen); each seed is polished by Newton iteration at stepwise
// doubled MPFR precision and then certified by an interval Newton
// contraction, which guarantees a unique root inside the returned ball.

#include "q41/poly.hpp"

#include <Eigen/Eigenvalues>

#include <complex>
#include <memory>
#include <mutex>

namespace q41 {

namespace detail {

inline CBall poly_eval_exact_mid(const QPoly& p, const CBall& z) {
    // evaluation where z is treated as exact (radius ignored); used for the
    // Newton midpoint update only
    CBall m = CBall::from(z.real(), z.imag(), z.prec());
    return p.eval(m);
}

inline CBall newton_polish(const QPoly& p, const QPoly& dp, std::complex<double> seed,
                           mpfr_prec_t target, bool force_real) {
    mpfr_prec_t stage = 64;
    CBall z = CBall::from(seed.real(), force_real ? 0.0 : seed.imag(), stage);
    while (true) {
        for (int it = 0; it < 64; ++it) {
            CBall num = poly_eval_exact_mid(p, z);
            CBall den = poly_eval_exact_mid(dp, z);
            CBall step = num / den;
            z = CBall::from(z.real(), z.imag(), stage) - step;
            if (force_real) z = CBall::from(z.real(), RF::from(0L, stage), stage);
            RF tol(RAD_PREC);
            mpfr_set_ui_2exp(tol.get(), 1, -(long)stage + 8, MPFR_RNDU);
            RF rel = step.abs_ub();
            RF scale = z.abs_lb_mid();
            if (!scale.is_zero()) {
                mpfr_div(rel.get(), rel.get(), scale.get(), MPFR_RNDU);
            }
            if (rel < tol) break;
        }
        if (stage >= target + 32) break;
        stage = std::min<mpfr_prec_t>(stage * 2, target + 32);
        z = CBall::from(z.real(), z.imag(), stage);
    }
    return CBall::from(z.real(), z.imag(), target + 32);
}

inline bool interval_newton_certify(const QPoly& p, const QPoly& dp, CBall& z) {
    // candidate disk B around the polished midpoint; contraction N(B) in B
    // proves existence and uniqueness of a root in B, and the root lies in N
    mpfr_exp_t base = -(mpfr_exp_t)z.prec() + 16;
    for (int attempt = 0; attempt < 6; ++attempt) {
        CBall B = z;
        RF scale = B.abs_ub_mid();
        mpfr_exp_t e = base + 6 * attempt;
        if (!scale.is_zero()) e += scale.exp2();
        B.inflate_2exp(e);
        CBall mid = CBall::from(B.real(), B.imag(), B.prec());
        CBall num = p.eval(mid);
        CBall den = dp.eval(B);
        if (den.contains_zero()) continue;
        CBall N = mid - num / den;
        if (B.contains(N)) {
            z = N;
            return true;
        }
    }
    return false;
}

struct NFCtx {
    QPoly p, dp;
    std::size_t deg;
    std::vector<QPoly> xpow; // x^j mod p for j <= 2 deg - 2
    std::vector<std::complex<double>> seeds;
    std::vector<bool> is_real;
    mutable std::map<mpfr_prec_t, std::vector<CBall>> root_cache;
    mutable std::mutex mtx;

    explicit NFCtx(const QPoly& poly) : p(poly), dp(poly.derivative()) {
        if (p.lead() != 1) throw std::invalid_argument("defining polynomial must be monic");
        deg = (std::size_t)p.deg();
        xpow.resize(2 * deg - 1);
        for (std::size_t j = 0; j < xpow.size(); ++j) {
            if (j < deg) {
                xpow[j] = QPoly::monomial(j);
            } else {
                QPoly t = xpow[j - 1] * QPoly::monomial(1);
                if ((std::size_t)t.deg() >= deg) {
                    Rat f = t.coeff(deg);
                    for (std::size_t i = 0; i < deg; ++i) t.c[i] -= f * p.c[i];
                    t.c.resize(deg);
                    t.trim();
                }
                xpow[j] = std::move(t);
            }
        }
        // companion-matrix seeds
        Eigen::MatrixXd C = Eigen::MatrixXd::Zero((int)deg, (int)deg);
        for (std::size_t i = 1; i < deg; ++i) C((int)i, (int)i - 1) = 1.0;
        for (std::size_t i = 0; i < deg; ++i) C((int)i, (int)deg - 1) = -p.c[i].get_d();
        Eigen::EigenSolver<Eigen::MatrixXd> es(C);
        for (int i = 0; i < (int)deg; ++i)
            seeds.push_back({es.eigenvalues()[i].real(), es.eigenvalues()[i].imag()});
        // heuristic classification, confirmed during certification: a seed is
        // real iff a real Newton run converges to a certified real root
        std::sort(seeds.begin(), seeds.end(), [](auto a, auto b) {
            if (std::abs(a.imag() - b.imag()) > 1e-7) return a.imag() < b.imag();
            return a.real() < b.real();
        });
        for (auto& s : seeds) is_real.push_back(std::abs(s.imag()) < 1e-7);
    }

    const std::vector<CBall>& roots(mpfr_prec_t prec) const {
        std::lock_guard<std::mutex> lk(mtx);
        auto it = root_cache.find(prec);
        if (it != root_cache.end()) return it->second;
        std::vector<CBall> rs;
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            CBall z = newton_polish(p, dp, seeds[i], prec, is_real[i]);
            if (!interval_newton_certify(p, dp, z))
                throw std::runtime_error("root certification failed");
            rs.push_back(CBall::from(z.real(), z.imag(), prec).inflate(z.rad()));
        }
        return root_cache.emplace(prec, std::move(rs)).first->second;
    }
};

inline std::shared_ptr<const NFCtx> nf_ctx(const QPoly& p) {
    static std::vector<std::pair<QPoly, std::shared_ptr<const NFCtx>>> cache;
    static std::mutex m;
    std::lock_guard<std::mutex> lk(m);
    for (auto& [poly, ctx] : cache)
        if (poly == p) return ctx;
    auto ctx = std::make_shared<const NFCtx>(p);
    cache.emplace_back(p, ctx);
    return ctx;
}

} // namespace detail

class NFElem {
    std::shared_ptr<const detail::NFCtx> F_;
    std::vector<Rat> c_;

    void reduce_from(const QPoly& p) {
        c_.assign(F_->deg, Rat(0));
        for (std::size_t j = 0; j < p.c.size(); ++j) {
            if (p.c[j] == 0) continue;
            const QPoly& xj = F_->xpow[j];
            for (std::size_t i = 0; i < xj.c.size(); ++i) c_[i] += p.c[j] * xj.c[i];
        }
    }

public:
    explicit NFElem(std::shared_ptr<const detail::NFCtx> F)
        : F_(std::move(F)), c_(F_->deg, Rat(0)) {}

    static NFElem from_coords(std::shared_ptr<const detail::NFCtx> F, std::vector<Rat> v) {
        NFElem z(std::move(F));
        if (v.size() > z.c_.size()) {
            QPoly p{std::move(v)};
            z.reduce_from(p);
        } else {
            for (std::size_t i = 0; i < v.size(); ++i) z.c_[i] = std::move(v[i]);
        }
        return z;
    }
    static NFElem from_ints(std::shared_ptr<const detail::NFCtx> F,
                            std::initializer_list<long> v) {
        std::vector<Rat> w;
        for (long x : v) w.emplace_back(x);
        return from_coords(std::move(F), std::move(w));
    }
    static NFElem gen(std::shared_ptr<const detail::NFCtx> F) { return from_ints(std::move(F), {0, 1}); }
    static NFElem one(std::shared_ptr<const detail::NFCtx> F) { return from_ints(std::move(F), {1}); }

    const std::vector<Rat>& coords() const { return c_; }
    const std::shared_ptr<const detail::NFCtx>& field() const { return F_; }
    std::size_t deg() const { return F_->deg; }

    bool is_zero() const {
        for (auto& a : c_)
            if (a != 0) return false;
        return true;
    }
    friend bool operator==(const NFElem& a, const NFElem& b) { return a.c_ == b.c_; }

    friend NFElem operator+(const NFElem& a, const NFElem& b) {
        NFElem r = a;
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
        return r;
    }
    friend NFElem operator-(const NFElem& a, const NFElem& b) {
        NFElem r = a;
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
        return r;
    }
    friend NFElem operator-(const NFElem& a) {
        NFElem r = a;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend NFElem operator*(const NFElem& a, const Rat& s) {
        NFElem r = a;
        for (auto& x : r.c_) x *= s;
        return r;
    }
    friend NFElem operator*(const NFElem& a, const NFElem& b) {
        NFElem r(a.F_);
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
    NFElem inv() const {
        QPoly self;
        self.c = c_;
        self.trim();
        if (self.is_zero()) throw std::domain_error("inverse of 0 in number field");
        QPoly u, v;
        QPoly g = ext_gcd(self, F_->p, u, v);
        if (g.deg() != 0) throw std::logic_error("element not invertible");
        NFElem r(F_);
        QPoly us = u * (Rat(1) / g.c[0]);
        r.reduce_from(us);
        return r;
    }
    friend NFElem operator/(const NFElem& a, const NFElem& b) { return a * b.inv(); }

    NFElem pow(long e) const {
        NFElem base = *this, acc = one(F_);
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

    // image under the j-th embedding (canonical root order of the context)
    CBall embed(std::size_t j, mpfr_prec_t prec) const {
        const CBall& x = F_->roots(prec)[j];
        CBall r = CBall::from(0L, prec);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            r = r * x + CBall::from(*it, prec);
        return r;
    }
};

} // namespace q41
