#include <catch2/catch_amalgamated.hpp>

#include <q41/qseries.hpp>
#include <q41/special.hpp>

using namespace q41;

static QSeries qmono(long num, long den = 1) { return QSeries::monomial(Rat(1), num, den); }

TEST_CASE("lattice arithmetic basics", "[qseries]") {
    // q^{1/2} * q^{1/2} = q across lattices
    QSeries h = qmono(1, 2);
    REQUIRE(h * h == qmono(1, 1));
    REQUIRE((h * h).coeff(1) == 1);
    REQUIRE(h.coeff(1, 2) == 1);
    REQUIRE(h.coeff(3, 2) == 0);

    // mixing denominators 2 and 8 lands on lattice 8
    QSeries e8 = qmono(1, 8);
    QSeries s = h + e8;
    REQUIRE(s.den() == 8);
    REQUIRE(s.coeff(1, 2) == 1);
    REQUIRE(s.coeff(1, 8) == 1);

    // shift and refine round-trips
    QSeries p = QSeries::poly_ints({1, -2, 3});
    REQUIRE(p.shift(5).coeff(5) == 1);
    REQUIRE(p.shift(5).coeff(7) == 3);
    REQUIRE(p.shift(-1, 2).coeff(1, 2) == -2);
    REQUIRE(p.refine(4) == p);

    // associativity / distributivity on a mixed-lattice triple
    QSeries a = QSeries::poly_ints({1, 2}, 2, -1); // q^{-1/2} + 2
    QSeries b = QSeries::poly_ints({3, 0, -1}, 1);
    QSeries c = qmono(3, 8) - QSeries::one();
    REQUIRE((a * b) * c == a * (b * c));
    REQUIRE(a * (b + c) == a * b + a * c);
}

TEST_CASE("reciprocals and division", "[qseries]") {
    QSeries one = QSeries::one();
    QSeries geom = (one - qmono(1)).inv(20);
    for (long n = 0; n < 20; ++n) REQUIRE(geom.coeff(n) == 1);

    // a * inv(a) == 1 to the knowledge horizon, including fractional lead
    QSeries a = QSeries::poly_ints({2, -1, 5, 7}, 4, -3); // lead 2 q^{-3/4}
    QSeries ia = a.inv(40);
    // product of a (lowest exponent -3/4) with a reciprocal known to q^10
    // is known to q^{37/4} only
    REQUIRE((a * ia).ord_units() == 37);
    REQUIRE(agree_upto(a * ia, one, 9));

    // division of entire by entire without truncation is refused
    REQUIRE_THROWS_AS(one / (one - qmono(1)), std::domain_error);
    REQUIRE_THROWS_AS(QSeries::zero().inv(5), std::domain_error);

    // truncations propagate: knowing b mod q^5 only supports the quotient mod q^5
    QSeries b = (one - qmono(1)).truncate(5);
    QSeries g5 = one / b;
    REQUIRE(g5.ord_units() == 5);
    REQUIRE(g5.coeff(4) == 1);
    REQUIRE_THROWS_AS(g5.coeff(5), std::out_of_range);
}

TEST_CASE("finite q-Pochhammer composition", "[qseries]") {
    // (a;q)_{m+n} = (a;q)_m (a q^m; q)_n, exactly, for polynomial a
    QSeries a = QSeries::monomial(Rat(2), 1);
    REQUIRE(qpoch(a, 7) == qpoch(a, 3) * qpoch(a.shift(3), 4));
    // (q;q)_5 starts 1 - q - q^2 + q^5 + ...
    QSeries p5 = qpoch_qq(5);
    REQUIRE(p5.coeff(0) == 1);
    REQUIRE(p5.coeff(1) == -1);
    REQUIRE(p5.coeff(2) == -1);
    REQUIRE(p5.coeff(3) == 0);
    REQUIRE(p5.coeff(5) == 1);
}

TEST_CASE("pentagonal number expansion of (q;q)_inf", "[qseries]") {
    long N = 200;
    QSeries prod = qpoch_inf_prod(qmono(1), N);
    QSeries pent = euler_pentagonal(N);
    REQUIRE(prod == pent);
    // spot values: coefficient is nonzero exactly at generalized pentagonal numbers
    REQUIRE(pent.coeff(0) == 1);
    REQUIRE(pent.coeff(1) == -1);
    REQUIRE(pent.coeff(2) == -1);
    REQUIRE(pent.coeff(5) == 1);
    REQUIRE(pent.coeff(7) == 1);
    REQUIRE(pent.coeff(12) == -1);
    REQUIRE(pent.coeff(98) == 0);   // between 92 (k=8) and 100 (k=-8)
    REQUIRE(pent.coeff(100) == 1);  // 100 = (-8)(3(-8)-1)/2, sign (-1)^8
    REQUIRE(pent.coeff(117) == -1); // 117 = 9(3*9-1)/2, sign (-1)^9
}

TEST_CASE("Euler expansions of (a;q)_inf agree with the product", "[qseries]") {
    long N = 60;
    for (const QSeries& a : {qmono(1), qmono(2), QSeries::monomial(Rat(3, 2), 3),
                             QSeries::monomial(Rat(-1), 1, 2)}) {
        QSeries prod = qpoch_inf_prod(a, N);
        QSeries sum = qpoch_inf_euler(a, N);
        QSeries isum = qpoch_inf_inv_euler(a, N);
        REQUIRE(agree_upto(prod, sum, N));
        REQUIRE(agree_upto(prod * isum, QSeries::one(), N));
    }
    REQUIRE_THROWS_AS(qpoch_inf_prod(QSeries::one(), 10), std::domain_error);
}

TEST_CASE("knowledge horizons under multiplication", "[qseries]") {
    // multiplying by q^5 pushes the horizon out; by q^{-5} pulls it in
    QSeries t = QSeries::truncated_zero(1, 8) + QSeries::one(); // 1 + O(q^8)
    REQUIRE((t * qmono(5)).ord_units() == 13);
    REQUIRE((t * qmono(-5)).ord_units() == 3);
    REQUIRE((t + qmono(20)).ord_units() == 8); // addition can't restore knowledge
    REQUIRE(t.truncate(3).ord_units() == 3);
}

TEST_CASE("derivative q d/dq", "[qseries]") {
    QSeries f = QSeries::poly_ints({1, 0, 5}, 2, 1); // q^{1/2} + 5 q^{3/2}
    QSeries df = f.derivative();
    REQUIRE(df.coeff(1, 2) == Rat(1, 2));
    REQUIRE(df.coeff(3, 2) == Rat(15, 2));
    // Leibniz
    QSeries g = QSeries::poly_ints({2, -3, 1});
    REQUIRE((f * g).derivative() == f.derivative() * g + f * g.derivative());
}

TEST_CASE("Eisenstein series with divisor-sum oracle", "[qseries]") {
    long N = 24;
    // independent oracle: Lambert series sum_s s^{l-1} q^s/(1-q^s)
    auto lambert = [&](long l) {
        QSeries r = QSeries::truncated_zero(1, N);
        for (long s = 1; s < N; ++s) {
            QSeries term = QSeries::monomial(rat_pow(Rat(s), l - 1), s) /
                           (QSeries::one() - qmono(s)).truncate(N);
            r = r + term.truncate(N);
        }
        return r;
    };
    for (long l : {1L, 2L, 3L, 6L}) {
        QSeries e = eisenstein_series(l, N);
        REQUIRE(e.coeff(0) == zeta_one_minus(l) / 2);
        REQUIRE(agree_upto(e - QSeries::monomial(e.coeff(0), 0), lambert(l), N));
    }
    // classical constants: E_1 has -1/4, E_2 has -1/24
    REQUIRE(eisenstein_series(1, 4).coeff(0) == Rat(-1, 4));
    REQUIRE(eisenstein_series(2, 4).coeff(0) == Rat(-1, 24));
    REQUIRE(eisenstein_series(2, 12).coeff(6) == 12); // sigma_1(6)
    REQUIRE(eisenstein_series(4, 12).coeff(6) == 252); // sigma_3(6)
}

TEST_CASE("negative polylog series equal their rational closed forms", "[qseries]") {
    long N = 30;
    QSeries q = qmono(1);
    QSeries one = QSeries::one();
    // Li_{-1}(q) = q/(1-q)^2, Li_{-2}(q) = q(1+q)/(1-q)^3
    QSeries li1 = polylog_neg_series(1, N);
    QSeries li2m = polylog_neg_series(2, N);
    REQUIRE(agree_upto(li1, q / ((one - q) * (one - q)).truncate(N), N));
    REQUIRE(agree_upto(li2m, (q * (one + q)) / ((one - q).pow(3)).truncate(N), N));
    // and against the shared numerator polynomials used by the ball route
    QPoly num2 = polylog_neg_numerator(2);
    QSeries num2s = QSeries::poly(num2.c, 1, 0);
    REQUIRE(agree_upto(li2m, num2s / ((one - q).pow(3)).truncate(N), N));
}

TEST_CASE("substitution q -> q^k", "[qseries]") {
    QSeries e2 = eisenstein_series(2, 10);
    QSeries e2sq = e2.subst_pow(2);
    REQUIRE(e2sq.coeff(6) == 4);  // sigma_1(3)
    REQUIRE(e2sq.coeff(7) == 0);  // odd powers vanish
    REQUIRE(e2sq.ord_units() == 20);
}

TEST_CASE("evaluation of the polynomial part", "[qseries]") {
    // cyclotomic: q + q^2 at q = zeta_5
    QSeries s = qmono(1) + qmono(2);
    Cyclo z5 = Cyclo::root_power(5, 1);
    REQUIRE(s.eval_poly(z5) == Cyclo::root_power(5, 1) + Cyclo::root_power(5, 2));
    // half-integer lattice: q^{1/2} - 3 q at q^{1/2} = zeta_10
    QSeries t = qmono(1, 2) - QSeries::monomial(Rat(3), 2, 2);
    REQUIRE(t.eval_poly(Cyclo::root_power(10, 1)) ==
            Cyclo::root_power(10, 1) - Cyclo::root_power(10, 2) * Rat(3));

    // numeric: geometric series at q = 1/3, tail below 2^-60
    long prec = 128;
    QSeries geo = (QSeries::one() - qmono(1)).inv(45);
    CBall q3 = CBall::from(Rat(1, 3), prec);
    CBall v = geo.eval_poly(q3);
    CBall target = CBall::from(Rat(3, 2), prec).inflate_2exp(-60);
    REQUIRE(target.contains(v));

    // Laurent part: (q^{-1} + q) at q = 1/2 gives 5/2
    QSeries lau = qmono(-1) + qmono(1);
    CBall vb = lau.eval_poly(CBall::from(Rat(1, 2), prec));
    REQUIRE(vb.contains(CBall::from(Rat(5, 2), prec)));
}

TEST_CASE("surgery-sum engine stress: vanishing-prefix golden series", "[qseries]") {
    // triple sum  sum_{0<=k<=l} (-1)^{k+l} q^{3k(k+1)/2 + l(l+1)/2 - k}
    //             (q;q)_l / ((q;q)_{2k} (q;q)_{l-k})
    // whose expansion starts 1 - q + 2q^3 - 2q^6 + q^9 + 3q^10 + q^11 - q^14 - 3q^15
    long N = 16;
    QSeries acc = QSeries::truncated_zero(1, N);
    for (long l = 0; l <= 2 * N; ++l) {
        bool any = false;
        for (long k = 0; k <= l; ++k) {
            long e = 3 * k * (k + 1) / 2 + l * (l + 1) / 2 - k;
            if (e >= N) continue;
            any = true;
            QSeries frac = qpoch_qq(l).truncate(N - e) /
                           (qpoch_qq(2 * k) * qpoch_qq(l - k)).truncate(N - e);
            QSeries term = QSeries::monomial(Rat(1), e) * frac;
            acc = acc + (((k + l) % 2) ? -term : term);
        }
        if (!any && l * (l + 1) / 2 - l >= N) break;
    }
    std::vector<long> expect = {1, -1, 0, 2, 0, 0, -2, 0, 0, 1, 3, 1, 0, 0, -1, -3};
    for (long n = 0; n < (long)expect.size(); ++n) {
        INFO("coefficient of q^" << n << " in " << acc.str(20));
        REQUIRE(acc.coeff(n) == expect[n]);
    }
}

TEST_CASE("printing", "[qseries]") {
    QSeries s = qmono(-1, 2) - QSeries::monomial(Rat(2), 3, 8);
    std::string t = s.truncate(10).str();
    REQUIRE(t.find("q^(-1/2)") != std::string::npos);
    REQUIRE(t.find("2*q^(3/8)") != std::string::npos);
    REQUIRE(t.find("O(q^") != std::string::npos);
    REQUIRE(QSeries::zero().str() == "0");
}
