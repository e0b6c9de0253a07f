#include <catch2/catch_amalgamated.hpp>

#include "q41/ball.hpp"

using namespace q41;

static CBall expr(mpfr_prec_t p) {
    // a deliberately messy expression exercising most operations
    CBall a = CBall::from(Rat(3, 7), Rat(-2, 5), p);
    CBall b = exp(a) * sqrt(a + CBall::from(2L, p)) - log(a + CBall::from(4L, p));
    return b / (a * a + CBall::from(1L, p)) + sin(a) * cos(a);
}

TEST_CASE("roots of unity via e()") {
    mpfr_prec_t p = 128;
    CHECK(e_of(Rat(0), p).contains(CBall::from(1L, p)));
    CHECK(e_of(Rat(1, 2), p).contains(CBall::from(-1L, p)));
    CHECK(e_of(Rat(1, 4), p).contains(CBall::i_unit(p)));
    CHECK(e_of(Rat(7, 2), p).contains(CBall::from(-1L, p))); // reduction mod 1

    CBall w = e_of(Rat(1, 3), p);
    CBall want = CBall::from_decimal("-0.5", "0.86602540378443864676", p, 1.0);
    CHECK(w.agrees(want));
    // e(1/3)^3 = 1
    CHECK(pow(w, 3L).contains(CBall::from(1L, p)));

    // e(a)e(b) = e(a+b) for a grid of rationals
    for (long i = 1; i < 12; ++i)
        for (long j = 1; j < 12; ++j) {
            CBall lhs = e_of(Rat(i, 12), p) * e_of(Rat(j, 12), p);
            CHECK(lhs.agrees(e_of(Rat(i + j, 12), p)));
        }
}

TEST_CASE("field axioms hold inside the enclosure") {
    mpfr_prec_t p = 96;
    CBall a = CBall::from(Rat(13, 9), Rat(-4, 3), p);
    CBall b = CBall::from(Rat(-2, 11), Rat(5, 7), p);
    CBall lhs = (a + b) * (a + b);
    CBall rhs = a * a + a * b * 2 + b * b;
    CHECK(lhs.agrees(rhs));
    CHECK((a / b * b).agrees(a));
    CHECK((a.inv() * a).agrees(CBall::from(1L, p)));
}

TEST_CASE("elementary functions invert each other") {
    mpfr_prec_t p = 160;
    CBall z = CBall::from(Rat(5, 4), Rat(3, 8), p);
    CHECK(exp(log(z)).agrees(z));
    CHECK(log(exp(z)).agrees(z));
    CBall s = sqrt(z);
    CHECK((s * s).agrees(z));
    CHECK(pow(z, Rat(1, 2)).agrees(s));
    // sin^2 + cos^2 = 1
    CBall one = sin(z) * sin(z) + cos(z) * cos(z);
    CHECK(one.agrees(CBall::from(1L, p)));
}

TEST_CASE("pi ball") {
    mpfr_prec_t p = 256;
    CBall pi = CBall::pi(p);
    CBall s = sin(pi);
    CHECK(s.abs_ub().to_double() < 1e-70);
    CHECK(s.contains_zero());
}

TEST_CASE("higher-precision evaluation lands inside the coarser ball") {
    CBall lo = expr(64);
    CBall hi = expr(320);
    CHECK(hi.rad() < lo.rad());
    CHECK(lo.agrees(hi));
    // and the coarse enclosure really contains the sharp one
    CHECK(lo.contains(hi));
}

TEST_CASE("ill-posed operations are refused") {
    mpfr_prec_t p = 64;
    CBall tiny = CBall::from(0L, p);
    tiny.inflate_2exp(-4);
    CHECK_THROWS_AS(tiny.inv(), std::domain_error);
    CHECK_THROWS_AS(log(tiny), std::domain_error);
    CBall negcut = CBall::from(-2L, p);
    negcut.inflate_2exp(-8);
    CHECK_THROWS_AS(sqrt(negcut), std::domain_error);
    CHECK_THROWS_AS(log(negcut), std::domain_error);
}

TEST_CASE("radius survives scaling and printing") {
    mpfr_prec_t p = 64;
    CBall z = CBall::from(Rat(1, 3), Rat(0), p);
    CHECK(z.good_digits() > 15);
    CHECK(z.mul_2exp(100).good_digits() == z.good_digits());
    std::string s = z.str(10);
    CHECK(s.find("0.333333") != std::string::npos);
}
