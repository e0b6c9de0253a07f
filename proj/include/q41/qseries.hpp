#pragma once
// Exact truncated Laurent series in q with rational coefficients on a
// fractional exponent lattice (1/den)*Z.  A series is either "entire"
// (all coefficients known, i.e. a Laurent polynomial) or truncated with
// an O(q^{ord/den}) tail; arithmetic tracks how far the result is known.

#include "rational.hpp"
#include "ball.hpp"
#include "cyclotomic.hpp"

#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace q41 {

class QSeries {
public:
    // exponents at or beyond this many lattice units are treated as fully known
    static constexpr long ENTIRE = std::numeric_limits<long>::max() / 8;

    QSeries() : den_(1), lo_(0), ord_(ENTIRE) {}

    static QSeries zero(long den = 1) {
        QSeries s;
        s.den_ = check_den(den);
        return s;
    }
    // the zero series known only up to (not including) exponent ord_units/den
    static QSeries truncated_zero(long den, long ord_units) {
        QSeries s;
        s.den_ = check_den(den);
        s.ord_ = ord_units;
        return s;
    }
    // c * q^{num/den}, exactly
    static QSeries monomial(const Rat& coef, long num, long den = 1) {
        QSeries s;
        s.den_ = check_den(den);
        s.lo_ = num;
        s.c_.push_back(coef);
        s.trim();
        return s;
    }
    static QSeries one() { return monomial(Rat(1), 0, 1); }
    // polynomial sum_i coeffs[i] q^{i} from integer/rational coefficient lists
    static QSeries poly(const std::vector<Rat>& coeffs, long den = 1, long lo = 0) {
        QSeries s;
        s.den_ = check_den(den);
        s.lo_ = lo;
        s.c_ = coeffs;
        s.trim();
        return s;
    }
    static QSeries poly_ints(const std::vector<long>& coeffs, long den = 1, long lo = 0) {
        std::vector<Rat> v;
        v.reserve(coeffs.size());
        for (long x : coeffs) v.emplace_back(x);
        return poly(v, den, lo);
    }

    long den() const { return den_; }
    long lo_units() const { return c_.empty() ? ord_ : lo_; }
    long ord_units() const { return ord_; }
    bool is_entire() const { return ord_ >= ENTIRE; }
    bool is_zero() const { return c_.empty(); } // zero as far as it is known
    std::size_t nterms() const { return c_.size(); }

    // coefficient of q^{num/dd}; throws if the exponent is beyond what is known
    Rat coeff(long num, long dd = 1) const {
        if (den_ % dd == 0) { num *= den_ / dd; }
        else if ((num * den_) % dd == 0) { num = num * den_ / dd; }
        else return Rat(0); // exponent off this lattice
        if (!is_entire() && num >= ord_)
            throw std::out_of_range("QSeries::coeff beyond truncation order");
        if (c_.empty() || num < lo_ || num >= lo_ + (long)c_.size()) return Rat(0);
        return c_[num - lo_];
    }

    // re-express on a finer lattice with denominator den*k
    QSeries refine(long k) const {
        if (k == 1) return *this;
        if (k <= 0) throw std::invalid_argument("QSeries::refine factor must be positive");
        QSeries r;
        r.den_ = den_ * k;
        r.lo_ = lo_ * k;
        r.ord_ = is_entire() ? ENTIRE : ord_ * k;
        if (!c_.empty()) {
            r.c_.assign(c_.size() * k - (k - 1), Rat(0));
            for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i * k] = c_[i];
        }
        return r;
    }

    // drop everything at or beyond ord_units (in this series' lattice units)
    QSeries truncate(long ord_units) const {
        QSeries r(*this);
        r.ord_ = std::min(ord_, ord_units);
        r.clip();
        return r;
    }

    // multiply by q^{num/dd}
    QSeries shift(long num, long dd = 1) const {
        long g = std::gcd(std::abs(num) == 0 ? dd : std::abs(num), dd);
        long n2 = num / g, d2 = dd / g;
        long l = std::lcm(den_, d2);
        QSeries r = refine(l / den_);
        long u = n2 * (l / d2);
        r.lo_ += u;
        if (!r.is_entire()) r.ord_ += u;
        return r;
    }

    // substitute q -> q^k (k >= 1)
    QSeries subst_pow(long k) const {
        if (k <= 0) throw std::invalid_argument("QSeries::subst_pow needs k >= 1");
        QSeries r;
        r.den_ = den_;
        r.lo_ = lo_ * k;
        r.ord_ = is_entire() ? ENTIRE : ord_ * k;
        if (!c_.empty()) {
            r.c_.assign(c_.size() * k - (k - 1), Rat(0));
            for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i * k] = c_[i];
        }
        return r;
    }

    // q d/dq
    QSeries derivative() const {
        QSeries r(*this);
        for (std::size_t i = 0; i < r.c_.size(); ++i)
            r.c_[i] *= Rat(r.lo_ + (long)i, r.den_);
        r.trim();
        return r;
    }

    friend QSeries operator-(const QSeries& a) {
        QSeries r(a);
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend QSeries operator+(const QSeries& a, const QSeries& b) {
        long l = std::lcm(a.den_, b.den_);
        QSeries x = a.refine(l / a.den_), y = b.refine(l / b.den_);
        QSeries r;
        r.den_ = l;
        r.ord_ = std::min(x.ord_, y.ord_);
        if (x.c_.empty() && y.c_.empty()) { r.clip(); return r; }
        long lo = std::numeric_limits<long>::max(), hi = std::numeric_limits<long>::min();
        if (!x.c_.empty()) { lo = x.lo_; hi = x.lo_ + (long)x.c_.size(); }
        if (!y.c_.empty()) {
            lo = std::min(lo, y.lo_);
            hi = std::max(hi, y.lo_ + (long)y.c_.size());
        }
        r.lo_ = lo;
        r.c_.assign(hi - lo, Rat(0));
        for (std::size_t i = 0; i < x.c_.size(); ++i) r.c_[x.lo_ - lo + i] = x.c_[i];
        for (std::size_t i = 0; i < y.c_.size(); ++i) r.c_[y.lo_ - lo + i] += y.c_[i];
        r.clip();
        r.trim();
        return r;
    }
    friend QSeries operator-(const QSeries& a, const QSeries& b) { return a + (-b); }

    friend QSeries operator*(const QSeries& a, const Rat& s) {
        if (s == 0) {
            QSeries r;
            r.den_ = a.den_;
            r.ord_ = a.ord_;
            return r;
        }
        QSeries r(a);
        for (auto& x : r.c_) x *= s;
        return r;
    }
    friend QSeries operator*(const Rat& s, const QSeries& a) { return a * s; }

    friend QSeries operator*(const QSeries& a, const QSeries& b) {
        long l = std::lcm(a.den_, b.den_);
        QSeries x = a.refine(l / a.den_), y = b.refine(l / b.den_);
        QSeries r;
        r.den_ = l;
        // the product is known below min(ord_x + lo_y, ord_y + lo_x)
        long ord = ENTIRE;
        if (!x.is_entire()) ord = std::min(ord, sat_add(x.ord_, y.lo_units()));
        if (!y.is_entire()) ord = std::min(ord, sat_add(y.ord_, x.lo_units()));
        r.ord_ = ord;
        if (x.c_.empty() || y.c_.empty()) { r.clip(); return r; }
        r.lo_ = x.lo_ + y.lo_;
        long n = (long)x.c_.size(), m = (long)y.c_.size();
        long len = n + m - 1;
        if (!r.is_entire()) len = std::min(len, r.ord_ - r.lo_);
        if (len <= 0) { r.c_.clear(); r.clip(); return r; }
        r.c_.assign(len, Rat(0));
        for (long i = 0; i < n; ++i) {
            if (x.c_[i] == 0) continue;
            long jmax = std::min(m, len - i);
            for (long j = 0; j < jmax; ++j) {
                if (y.c_[j] == 0) continue;
                r.c_[i + j] += x.c_[i] * y.c_[j];
            }
        }
        r.trim();
        return r;
    }

    // reciprocal, known to ord_units lattice units (in this series' lattice);
    // the lowest known coefficient must be nonzero
    QSeries inv(long ord_units) const {
        if (c_.empty()) throw std::domain_error("QSeries::inv of zero series");
        QSeries r;
        r.den_ = den_;
        r.lo_ = -lo_;
        long avail = is_entire() ? ord_units + lo_ + 1 : ord_ - lo_; // known coeffs of self
        long want = ord_units - r.lo_;                               // coeffs needed in result
        if (!is_entire()) want = std::min(want, avail);
        r.ord_ = r.lo_ + want;
        if (want <= 0) { r.c_.clear(); r.clip(); return r; }
        r.c_.assign(want, Rat(0));
        Rat c0inv = Rat(1) / c_[0];
        r.c_[0] = c0inv;
        for (long k = 1; k < want; ++k) {
            Rat s(0);
            long imax = std::min<long>(k, (long)c_.size() - 1);
            for (long i = 1; i <= imax; ++i)
                if (c_[i] != 0 && r.c_[k - i] != 0) s += c_[i] * r.c_[k - i];
            r.c_[k] = -s * c0inv;
        }
        r.trim();
        return r;
    }
    // reciprocal of a truncated series to its own known order
    QSeries inv() const {
        if (is_entire())
            throw std::domain_error("QSeries::inv of entire series needs an explicit order");
        return inv(ord_ - 2 * lo_);
    }

    friend QSeries operator/(const QSeries& a, const QSeries& b) {
        if (b.c_.empty()) throw std::domain_error("QSeries division by zero series");
        long l = std::lcm(a.den_, b.den_);
        QSeries x = a.refine(l / a.den_), y = b.refine(l / b.den_);
        long ord;
        if (!y.is_entire()) ord = y.ord_ - 2 * y.lo_;
        else if (!x.is_entire()) ord = x.ord_ - x.lo_units() - y.lo_; // enough for the product
        else throw std::domain_error("QSeries division of entire series needs truncation first");
        return x * y.inv(ord);
    }
    friend QSeries operator/(const QSeries& a, const Rat& s) { return a * (Rat(1) / s); }

    QSeries pow(long k) const {
        if (k < 0) {
            if (is_entire())
                throw std::domain_error("QSeries::pow negative power of entire series needs truncation");
            return inv().pow(-k);
        }
        QSeries r = one().refine(den_);
        QSeries b(*this);
        while (k > 0) {
            if (k & 1) r = r * b;
            if (k >>= 1) b = b * b;
        }
        return r;
    }

    // exact equality of the overlapping known range (and same knowledge horizon)
    friend bool operator==(const QSeries& a, const QSeries& b) {
        QSeries d = a - b;
        return d.c_.empty() && ((a.is_entire() && b.is_entire()) || !d.is_entire());
    }

    // do a and b agree on all exponents strictly below num/dd?
    friend bool agree_upto(const QSeries& a, const QSeries& b, long num, long dd = 1) {
        QSeries d = a - b;
        long bound = num * d.den_;
        if (bound % dd != 0 && (num * d.den_) % dd != 0)
            throw std::invalid_argument("agree_upto: bound off the common lattice");
        bound = (num * d.den_) / dd;
        if (!d.is_entire() && d.ord_ < bound)
            throw std::out_of_range("agree_upto: series not known that far");
        for (std::size_t i = 0; i < d.c_.size(); ++i)
            if (d.c_[i] != 0 && d.lo_ + (long)i < bound) return false;
        return true;
    }

    // evaluate the known polynomial part at a numeric value of q^{1/den} (Horner);
    // no tail bound is added -- callers own the truncation error
    CBall eval_poly(const CBall& q_root) const {
        mpfr_prec_t p = q_root.prec();
        CBall acc = CBall::from(0L, p);
        for (std::size_t i = c_.size(); i-- > 0;) {
            acc = acc * q_root;
            if (c_[i] != 0) acc = acc + CBall::from(c_[i], p);
        }
        if (lo_ > 0) acc = acc * q41::pow(q_root, lo_);
        else if (lo_ < 0) acc = acc * q41::pow(q_root.inv(), -lo_);
        return acc;
    }

    // evaluate the known polynomial part at a cyclotomic value of q^{1/den}
    Cyclo eval_poly(const Cyclo& q_root) const {
        Cyclo acc = Cyclo::from_rat(q_root.order(), Rat(0));
        for (std::size_t i = c_.size(); i-- > 0;) {
            acc = acc * q_root;
            if (c_[i] != 0) acc = acc + Cyclo::from_rat(q_root.order(), c_[i]);
        }
        if (lo_ > 0) acc = acc * q_root.pow(lo_);
        else if (lo_ < 0) acc = acc * q_root.pow(-lo_).inv();
        return acc;
    }

    // coefficients of q^{e/dd} for e = from..to (inclusive), for tables/CSV
    std::vector<Rat> coeff_range(long from, long to, long dd = 1) const {
        std::vector<Rat> v;
        v.reserve(to - from + 1);
        for (long e = from; e <= to; ++e) v.push_back(coeff(e, dd));
        return v;
    }

    std::string str(std::size_t max_terms = 12) const {
        std::ostringstream os;
        std::size_t shown = 0;
        bool first = true;
        for (std::size_t i = 0; i < c_.size() && shown < max_terms; ++i) {
            if (c_[i] == 0) continue;
            Rat co = c_[i];
            if (first) {
                if (co < 0) { os << "-"; co = -co; }
            } else {
                os << (co < 0 ? " - " : " + ");
                if (co < 0) co = -co;
            }
            long e = lo_ + (long)i;
            bool unit = (co == 1);
            if (!unit || e == 0) os << co.get_str();
            if (e != 0) {
                if (!unit) os << "*";
                os << "q";
                if (e != den_) {
                    if (e % den_ == 0) os << "^" << (e / den_);
                    else {
                        long g = std::gcd(std::abs(e), den_);
                        os << "^(" << e / g << "/" << den_ / g << ")";
                    }
                }
            }
            first = false;
            ++shown;
        }
        if (first) os << "0";
        if (shown < count_nonzero()) os << " + ...";
        if (!is_entire()) {
            long g = std::gcd(std::abs(ord_) == 0 ? den_ : std::abs(ord_), den_);
            os << " + O(q^";
            if (ord_ % den_ == 0) os << (ord_ / den_);
            else os << "(" << ord_ / g << "/" << den_ / g << ")";
            os << ")";
        }
        return os.str();
    }

private:
    long den_;            // exponent lattice denominator
    long lo_;             // exponent (in 1/den units) of c_[0]
    long ord_;            // knowledge horizon in 1/den units, or >= ENTIRE
    std::vector<Rat> c_;  // c_[i] multiplies q^{(lo_+i)/den_}

    static long check_den(long d) {
        if (d <= 0) throw std::invalid_argument("QSeries lattice denominator must be positive");
        return d;
    }
    static long sat_add(long a, long b) {
        if (a >= ENTIRE / 2 || b >= ENTIRE / 2) return ENTIRE;
        return a + b;
    }
    std::size_t count_nonzero() const {
        std::size_t n = 0;
        for (const auto& x : c_)
            if (x != 0) ++n;
        return n;
    }
    void trim() {
        std::size_t b = 0;
        while (b < c_.size() && c_[b] == 0) ++b;
        std::size_t e = c_.size();
        while (e > b && c_[e - 1] == 0) --e;
        if (b > 0 || e < c_.size()) {
            c_ = std::vector<Rat>(c_.begin() + b, c_.begin() + e);
            lo_ += (long)b;
        }
        if (c_.empty()) lo_ = 0;
    }
    void clip() {
        if (is_entire()) return;
        if (!c_.empty() && lo_ + (long)c_.size() > ord_) {
            long keep = ord_ - lo_;
            if (keep <= 0) c_.clear();
            else c_.resize(keep);
        }
        trim();
    }
};

// ---------------------------------------------------------------------------
// q-Pochhammer builders (q is the formal series variable)

// (a; q)_n = prod_{j=0}^{n-1} (1 - a q^j); negative n uses
// (a; q)_{-n} = 1 / prod_{j=1}^{n} (1 - a q^{-j}) and requires truncation later
inline QSeries qpoch(const QSeries& a, long n) {
    QSeries r = QSeries::one();
    if (n >= 0) {
        for (long j = 0; j < n; ++j) r = r * (QSeries::one() - a.shift(j));
        return r;
    }
    for (long j = 1; j <= -n; ++j) r = r * (QSeries::one() - a.shift(-j));
    return r; // caller divides: (a;q)_{-n} = 1 / r
}

// (q; q)_n
inline QSeries qpoch_qq(long n) { return qpoch(QSeries::monomial(Rat(1), 1), n); }

// (a; q)_inf as a finite exact product, valid when a has positive valuation:
// factors with a q^j = O(q^{ord}) are 1 up to the truncation order
inline QSeries qpoch_inf_prod(const QSeries& a, long ord_num, long ord_den = 1) {
    if (a.is_zero() && a.is_entire()) return QSeries::one();
    long den = std::lcm(a.den(), ord_den);
    long ord_units = ord_num * (den / ord_den);
    long lo = a.lo_units() * (den / a.den());
    if (lo <= 0)
        throw std::domain_error("qpoch_inf_prod needs a series with positive valuation");
    QSeries r = QSeries::one().refine(den).truncate(ord_units);
    for (long j = 0; lo + j * den < ord_units; ++j)
        r = r * (QSeries::one() - a.shift(j));
    return r.truncate(ord_units);
}

// (q; q)_inf by the pentagonal number expansion, exact to the given order
inline QSeries euler_pentagonal(long ord_num, long ord_den = 1) {
    QSeries r = QSeries::truncated_zero(ord_den, ord_num);
    for (long k = 0;; ++k) {
        long e1 = k * (3 * k - 1) / 2, e2 = k * (3 * k + 1) / 2;
        if (e1 * ord_den >= ord_num && e2 * ord_den >= ord_num) break;
        Rat sign = (k % 2 == 0) ? Rat(1) : Rat(-1);
        if (e1 * ord_den < ord_num) r = r + QSeries::monomial(sign, e1 * ord_den, ord_den);
        if (k > 0 && e2 * ord_den < ord_num) r = r + QSeries::monomial(sign, e2 * ord_den, ord_den);
    }
    return r;
}

// (a; q)_inf = sum_{n>=0} (-1)^n q^{n(n-1)/2} a^n / (q;q)_n  (Euler)
inline QSeries qpoch_inf_euler(const QSeries& a, long ord_num, long ord_den = 1) {
    long den = std::lcm(a.den(), ord_den);
    long ord_units = ord_num * (den / ord_den);
    long lo = a.lo_units() * (den / a.den());
    if (lo <= 0)
        throw std::domain_error("qpoch_inf_euler needs a series with positive valuation");
    QSeries r = QSeries::truncated_zero(den, ord_units);
    QSeries apow = QSeries::one().refine(den).truncate(ord_units);
    QSeries a_t = a.refine(den / a.den()).truncate(ord_units);
    for (long n = 0;; ++n) {
        long val = n * (n - 1) / 2 * den + n * lo; // valuation of the n-th term
        if (val >= ord_units) break;
        QSeries term = apow.shift(n * (n - 1) / 2) / qpoch_qq(n).refine(den).truncate(ord_units);
        if (n % 2 == 1) term = -term;
        r = r + term;
        apow = (apow * a_t).truncate(ord_units);
    }
    return r.truncate(ord_units);
}

// 1/(a; q)_inf = sum_{n>=0} a^n / (q;q)_n  (Euler)
inline QSeries qpoch_inf_inv_euler(const QSeries& a, long ord_num, long ord_den = 1) {
    long den = std::lcm(a.den(), ord_den);
    long ord_units = ord_num * (den / ord_den);
    long lo = a.lo_units() * (den / a.den());
    if (lo <= 0)
        throw std::domain_error("qpoch_inf_inv_euler needs a series with positive valuation");
    QSeries r = QSeries::truncated_zero(den, ord_units);
    QSeries apow = QSeries::one().refine(den).truncate(ord_units);
    QSeries a_t = a.refine(den / a.den()).truncate(ord_units);
    for (long n = 0;; ++n) {
        if (n * lo >= ord_units) break;
        r = r + apow / qpoch_qq(n).refine(den).truncate(ord_units);
        apow = (apow * a_t).truncate(ord_units);
    }
    return r.truncate(ord_units);
}

// ---------------------------------------------------------------------------
// classical arithmetic q-series

// sigma_k(n) = sum of k-th powers of divisors
inline Int sigma_k(long k, long n) {
    Int s = 0;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        s += int_pow(Int(d), k);
        long e = n / d;
        if (e != d) s += int_pow(Int(e), k);
    }
    return s;
}

// E_l(q) = zeta(1-l)/2 + sum_{n>=1} sigma_{l-1}(n) q^n, exact to the given order
inline QSeries eisenstein_series(long l, long ord) {
    QSeries r = QSeries::monomial(zeta_one_minus(l) / 2, 0).truncate(ord);
    for (long n = 1; n < ord; ++n)
        r = r + QSeries::monomial(Rat(sigma_k(l - 1, n)), n);
    return r;
}

// Li_{-m}(q) = sum_{k>=1} k^m q^k, exact to the given order
inline QSeries polylog_neg_series(long m, long ord) {
    QSeries r = QSeries::truncated_zero(1, ord);
    for (long k = 1; k < ord; ++k)
        r = r + QSeries::monomial(Rat(int_pow(Int(k), m)), k);
    return r;
}

} // namespace q41
