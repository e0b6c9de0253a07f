#include <catch2/catch_amalgamated.hpp>

#include <q41/connections.hpp>
#include <q41/habiro.hpp>
#include <q41/linalg.hpp>

using namespace q41;

// sum of c * e(k/M) terms in the basis used by the exact evaluators
static Cyclo lin(long M, std::initializer_list<std::pair<long, long>> terms) {
    Cyclo z(M);
    for (const auto& t : terms)
        z = z + Cyclo::from_rat(M, Rat(t.first)) * Cyclo::root_power(M, t.second);
    return z;
}

static CBall neg_i(const CBall& z) { return CBall(z.imag(), -z.real(), z.rad()); }

TEST_CASE("the normalized invariant vanishes at q = 1", "[habiro]") {
    for (long m : {-3L, 0L, 2L})
        for (long n : {-1L, 0L, 4L}) REQUIRE(wrt_exact(1, 1, m, n).is_zero());
}

TEST_CASE("closed-form values at q = e(-1/M)", "[habiro]") {
    // the value at e(-1/M) is an integer combination of at most four root
    // powers for every M up to 8
    REQUIRE(wrt_exact(2, 1) == lin(2, {{2, 0}}));
    REQUIRE(wrt_exact(3, 2) == lin(3, {{1, 0}, {-1, -1}}));
    REQUIRE(wrt_exact(4, 3) == lin(4, {{1, 0}, {-1, -1}}));
    REQUIRE(wrt_exact(5, 4) == lin(5, {{2, 0}, {-1, -1}, {2, -2}, {2, -3}}));
    REQUIRE(wrt_exact(6, 5) == lin(6, {{1, 0}, {-1, -1}}));
    REQUIRE(wrt_exact(7, 6) == lin(7, {{2, 0}, {-2, -1}, {-1, -2}, {1, -3}}));
    REQUIRE(wrt_exact(8, 7) == lin(8, {{3, 0}, {-3, -1}}));
}

TEST_CASE("certified values at high-order roots", "[habiro]") {
    // q = e(1/1000): the summands reach ~1e131 while the value is O(10), so
    // the evaluator must raise its working precision internally
    {
        CBall z = wrt_value(1000, 1, 0, 0, 256);
        REQUIRE(z.good_digits() >= 74);
        CBall anchor = CBall::from_decimal("-6.3258", "14.804", 256);
        REQUIRE(anchor.contains(z));
    }
    // q = e(2/2001) and e(3/3001): values of size ~1e98, quoted to five
    // digits; compare after scaling down
    {
        CBall scale = CBall::from(rat_pow(Rat(1, 10), 98), 256);
        CBall z = wrt_value(2001, 2, 0, 0, 256) * scale;
        REQUIRE(CBall::from_decimal("1.6433", "0.067579", 256).contains(z));
    }
    {
        CBall scale = CBall::from(rat_pow(Rat(1, 10), 98), 256);
        CBall z = wrt_value(3001, 3, 0, 0, 256) * scale;
        REQUIRE(CBall::from_decimal("1.0551", "0.87759", 256).contains(z));
    }
}

TEST_CASE("ball evaluation agrees with the exact evaluation", "[habiro]") {
    // exercised at numerators other than +-1 mod M, where the two routes
    // reduce exponents differently
    for (auto [M, N] : {std::pair<long, long>{7, 2}, {9, 2}, {11, 3}, {12, 5}}) {
        RootContext C(M, N, 192);
        CBall exact = wrt_exact(M, N, -2, 3).eval(1, 192);
        REQUIRE(wrt_ball(C, -2, 3).agrees(exact));
        CBall wexact = w_exact(M, N, -1, 2, 1).eval(1, 192);
        REQUIRE(w_ball(C, -1, 2, 1).agrees(wexact));
    }
}

TEST_CASE("Taylor coefficients at q = e^h", "[habiro]") {
    QSeries S = wrt_taylor(0, 0, 5);
    REQUIRE(S.coeff(0) == 0);
    REQUIRE(S.coeff(1) == -1);
    REQUIRE(S.coeff(2) == Rat(-25, 2));
    REQUIRE(S.coeff(3) == Rat(-1621, 6));
    REQUIRE(S.coeff(4) == Rat(-195601, 24));
    REQUIRE(S.coeff(5) == Rat(-37907101, 120));

    // first-row deformation: h^3 and h^4 coefficients are polynomial in m
    for (long m : {-2L, 1L, 3L}) {
        QSeries T = wrt_taylor(m, 0, 4);
        REQUIRE(T.coeff(3) == Rat(-12 * m) + Rat(-1621, 6));
        REQUIRE(T.coeff(4) == Rat(-6 * m * m - 510 * m) + Rat(-195601, 24));
    }
}

TEST_CASE("positive-cone family w", "[habiro]") {
    // values at q = 1 detect only the region label p
    for (long a : {-2L, 0L, 3L})
        for (long b : {-1L, 2L}) {
            REQUIRE(w_exact(1, 1, a, b, 0) == lin(1, {{1, 0}}));
            REQUIRE(w_exact(1, 1, a, b, 1).is_zero());
            REQUIRE(w_exact(1, 1, a, b, 3).is_zero());
        }
    // w_{m, n+m, 1} recovers the two-parameter invariant
    for (long M : {4L, 5L, 7L, 9L}) {
        long N = M - 1;
        for (auto [m, n] : {std::pair<long, long>{1, 0}, {-2, 3}, {0, 2}})
            REQUIRE(w_exact(M, N, m, n + m, 1) == wrt_exact(M, N, m, n));
    }
}

TEST_CASE("canonical basis reproduces the value table", "[habiro]") {
    // eight exact values for each r = 1/2, 1/3, 1/4, 1/5 at q = e(-r)
    std::vector<std::vector<Cyclo>> table(6);
    table[2] = {lin(2, {{1, 0}}),  lin(2, {{1, 0}}), lin(2, {{1, 0}}),
                lin(2, {}),        lin(2, {{1, 0}}), lin(2, {{1, 0}}),
                lin(2, {{-1, 0}}), lin(2, {{2, 0}})};
    table[3] = {lin(3, {{1, 0}}),          lin(3, {{-1, 0}, {-1, 1}}),
                lin(3, {{-1, 0}, {-1, 1}}), lin(3, {{1, 0}, {2, 1}}),
                lin(3, {{2, 0}, {2, 1}}),   lin(3, {{2, 0}, {-1, 1}}),
                lin(3, {{1, 0}}),           lin(3, {{2, 0}, {1, 1}})};
    table[4] = {lin(4, {{1, 0}}),           lin(4, {{1, 0}}),
                lin(4, {{-1, 0}, {-2, 1}}), lin(4, {{-2, 1}}),
                lin(4, {{-1, 0}, {2, 1}}),  lin(4, {{1, 0}}),
                lin(4, {{1, 1}}),           lin(4, {{1, 0}, {1, 1}})};
    table[5] = {lin(5, {{1, 0}}),
                lin(5, {{-2, 0}, {-2, 2}}),
                lin(5, {{-2, 0}, {-1, 1}, {-1, 3}}),
                lin(5, {{-1, 0}, {-1, 1}, {-2, 2}, {-1, 3}}),
                lin(5, {{1, 0}, {-1, 1}, {1, 2}}),
                lin(5, {{3, 0}, {1, 1}, {1, 2}, {1, 3}}),
                lin(5, {{2, 0}, {-1, 3}}),
                lin(5, {{3, 0}, {1, 1}, {3, 2}, {3, 3}})};
    for (long M = 2; M <= 5; ++M) {
        auto Xm = canonical_x_matrix(M, M - 1);
        auto Xw = canonical_x_w(M, M - 1);
        for (std::size_t j = 0; j < 8; ++j) {
            INFO("M=" << M << " row " << j);
            REQUIRE(Xm[j] == table[(std::size_t)M][j]);
            REQUIRE(Xw[j] == table[(std::size_t)M][j]);
        }
    }
    // at r = 1 only the w-route applies; the column is (1,1,1,0,1,1,1,0)
    auto X1 = canonical_x_w(1, 1);
    const int expect[8] = {1, 1, 1, 0, 1, 1, 1, 0};
    for (std::size_t j = 0; j < 8; ++j) {
        if (expect[j])
            REQUIRE(X1[j] == lin(1, {{1, 0}}));
        else
            REQUIRE(X1[j].is_zero());
    }
}

TEST_CASE("canonical basis routes agree at deeper roots", "[habiro]") {
    for (auto [M, N] : {std::pair<long, long>{7, 1}, {7, 3}, {8, 3}, {9, 2},
                        {11, 7}, {12, 5}}) {
        auto Xm = canonical_x_matrix(M, N);
        auto Xw = canonical_x_w(M, N);
        for (std::size_t j = 0; j < 8; ++j) {
            INFO("M=" << M << " N=" << N << " row " << j);
            REQUIRE(Xm[j] == Xw[j]);
        }
    }
}

TEST_CASE("periodic functions at order one", "[habiro]") {
    const mpfr_prec_t P = 192;
    auto F = Connections::trace_field();
    NFElem one = NFElem::one(F);
    NFElem X1 = Connections::X1(), X2 = Connections::X2();
    NFElem D = Connections::Delta();
    // squared constant terms are explicit field elements over Delta
    NFElem Ee = (one - X1 * X1).pow(2) * (one - X2) * (one - X2 * X1.inv()) * X2 * X2;
    NFElem Eb = X2 * X2 * (one - X1 * X1) * ((one - X2 * X1.inv()).pow(2)).inv();
    for (int j = 1; j <= 7; ++j) {
        CBall S0e = periodic_sha(j, 0, 1, 1, P, PeriodicNorm::EtaCyclic);
        CBall S0b = periodic_sha(j, 0, 1, 1, P, PeriodicNorm::Balanced);
        REQUIRE((S0e * S0e).agrees(neg_i(Connections::embed(Ee * D.inv(), j, P))));
        REQUIRE((S0b * S0b).agrees(neg_i(Connections::embed(Eb * D.inv(), j, P))));
        // consecutive rows grow by exactly 1/X1 at this order
        CBall g = Connections::embed(X1.inv(), j, P);
        CBall S1 = periodic_sha(j, 1, 1, 1, P, PeriodicNorm::EtaCyclic);
        CBall S2 = periodic_sha(j, 2, 1, 1, P, PeriodicNorm::EtaCyclic);
        REQUIRE((S1 * S0e.inv()).agrees(g));
        REQUIRE((S2 * S1.inv()).agrees(g));
    }
}

TEST_CASE("growth ratio generates the expected degree-seven field", "[habiro]") {
    // z = 1/X1 satisfies z^7 + 2z^6 - 3z^5 - 3z^4 + 5z^3 + z^2 - 3z - 1 = 0;
    // nearby candidates do not
    auto F = Connections::trace_field();
    auto zpoly_at = [&](const NFElem& z) {
        const long c[8] = {-1, -3, 1, 5, -3, -3, 2, 1};
        NFElem acc = NFElem::from_ints(F, {c[7]});
        for (int i = 6; i >= 0; --i) acc = acc * z + NFElem::from_ints(F, {c[i]});
        return acc;
    };
    NFElem one = NFElem::one(F);
    NFElem X1 = Connections::X1(), X2 = Connections::X2();
    REQUIRE(zpoly_at(X1.inv()).is_zero());
    REQUIRE(!zpoly_at(X1).is_zero());
    REQUIRE(!zpoly_at(X2).is_zero());
    REQUIRE(!zpoly_at(one - X2).is_zero());
}

TEST_CASE("the two periodic normalizations differ by a constant", "[habiro]") {
    const mpfr_prec_t P = 160;
    for (auto [M, N] : {std::pair<long, long>{2, 1}, {3, 2}}) {
        for (int j : {1, 3, 6}) {
            CBall r0 = periodic_sha(j, 0, M, N, P, PeriodicNorm::Balanced) *
                       periodic_sha(j, 0, M, N, P, PeriodicNorm::EtaCyclic).inv();
            for (long m : {1L, 5L}) {
                CBall rm = periodic_sha(j, m, M, N, P, PeriodicNorm::Balanced) *
                           periodic_sha(j, m, M, N, P, PeriodicNorm::EtaCyclic).inv();
                REQUIRE(rm.agrees(r0));
            }
        }
    }
}

TEST_CASE("matrix of values at a rational point is invertible", "[habiro]") {
    const mpfr_prec_t P = 160;
    for (auto [M, N] : {std::pair<long, long>{3, 1}, {5, 2}}) {
        auto Z = z_matrix_at_root(0, M, N, P);
        // first column is the invariant itself
        REQUIRE(Z[0][0].agrees(wrt_exact(M, N, 0, 0).eval(1, P)));
        REQUIRE(Z[2][0].agrees(wrt_exact(M, N, 2, 0).eval(1, P)));
        BallMatrix A(8, std::vector<CBall>(8, CBall::from(0L, P)));
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j) A[i][j] = Z[i][j];
        CBall det = ball_det(A);
        INFO("M=" << M << " N=" << N << " det=" << det.str(8));
        REQUIRE(!det.contains_zero());
    }
}
