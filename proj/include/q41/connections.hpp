#pragma once

// Algebraic data attached to the seven flat SL(2,C) connections of the
// surgered figure-eight manifold: the degree-7 trace field, its quadratic
// shape-field extension, the distinguished elements (1-loop invariant, the
// two saddle coordinates X1, X2, the Hessian determinant), complex volumes
// computed from shape-field roots with integer flattenings, and the fixed
// numbering rho = 1..7 (rho = 6 geometric, rho = 7 its conjugate).

#include "q41/numfield.hpp"
#include "q41/special.hpp"

#include <array>

namespace q41 {

class Connections {
public:
    static const std::shared_ptr<const detail::NFCtx>& trace_field() {
        static auto ctx = detail::nf_ctx(
            QPoly::from_ints({-1, 3, 6, -11, 6, -2, -1, 1}));
        return ctx;
    }
    static const std::shared_ptr<const detail::NFCtx>& shape_field() {
        static auto ctx = detail::nf_ctx(QPoly::from_ints(
            {1, 2, 1, 0, -4, -8, -10, -13, -10, -8, -4, 0, 1, 2, 1}));
        return ctx;
    }

    static NFElem xi() { return NFElem::gen(trace_field()); }
    // 1-loop invariant
    static NFElem one_loop() {
        return NFElem::from_ints(trace_field(), {-74, -66, 133, -74, 31, 15, -12});
    }
    static NFElem X1() {
        return NFElem::from_ints(trace_field(), {-3, 11, 20, -15, 6, -2, -4});
    }
    static NFElem X2() {
        return NFElem::from_ints(trace_field(), {-9, 19, 76, -52, 20, -4, -13});
    }
    // determinant of the saddle Hessian data
    static NFElem Delta() {
        return NFElem::from_ints(trace_field(), {-257, 806, 947, -749, 331, -133, -213});
    }
    // t^2 - quad_coeff() t + 1 = 0 generates the shape field over the trace field
    static NFElem quad_coeff() {
        return NFElem::from_ints(trace_field(), {1, 4, 4, -3, 1, -1, -1});
    }

    static QPoly z1_poly() {
        return QPoly::from_ints({4, 2, 1, -1, -13, -10, -20, -15, -12, -9, 0, 1, 3, 2});
    }
    static QPoly z2_poly() {
        return QPoly::from_ints({-3, -2, 0, 1, 12, 10, 20, 15, 12, 9, 0, -1, -3, -2});
    }

    static constexpr int geometric = 6;
    static constexpr int antigeometric = 7;

    static int a_coeff(int rho) {
        static constexpr std::array<int, 7> a{2, 0, 0, 1, 1, -1, 1};
        return a.at((std::size_t)rho - 1);
    }
    // flattening pairs (p,q) entering the two Rogers terms
    static std::pair<long, long> flat1(int rho) {
        static constexpr std::array<std::pair<long, long>, 7> r{
            {{0, 0}, {0, 1}, {0, 0}, {0, 0}, {0, -1}, {0, 0}, {0, 0}}};
        return r.at((std::size_t)rho - 1);
    }
    static std::pair<long, long> flat2(int rho) {
        static constexpr std::array<std::pair<long, long>, 7> r{
            {{-2, -3}, {0, 0}, {0, 0}, {1, 1}, {-1, -2}, {-1, -2}, {1, 2}}};
        return r.at((std::size_t)rho - 1);
    }

    // canonical root index of the trace field realising embedding rho
    static std::size_t root_index(int rho) {
        static const std::array<std::size_t, 7> map = [] {
            const double re[7] = {-2.2411, -0.43760, 0.25599, 1.3348, 1.3483, 0.36981, 0.36981};
            const double im[7] = {0, 0, 0, 0, 0, -1.4410, 1.4410};
            return match_roots(trace_field(), re, im);
        }();
        return map.at((std::size_t)rho - 1);
    }
    // shape-field root attached to connection rho
    static std::size_t alpha_index(int rho) {
        static const std::array<std::size_t, 7> map = [] {
            const double re[7] = {0.477, 0.156, 0.616, -0.194, -0.424, -0.693, -0.693};
            const double im[7] = {0.879, 0.988, 0, 0.981, 0.906, 0.0194, -0.0194};
            return match_roots(shape_field(), re, im);
        }();
        return map.at((std::size_t)rho - 1);
    }

    static CBall xi_rho(int rho, mpfr_prec_t p) {
        return trace_field()->roots(p)[root_index(rho)];
    }
    static CBall embed(const NFElem& e, int rho, mpfr_prec_t p) {
        return e.embed(root_index(rho), p);
    }
    static CBall alpha(int rho, mpfr_prec_t p) {
        return shape_field()->roots(p)[alpha_index(rho)];
    }

    // dilogarithm/logarithm with a side convention for real arguments on the
    // cuts: side = +1 approaches from above, -1 from below, 0 = principal.
    // Balls that merely touch the real axis (rounding noise in the imaginary
    // midpoint) are projected onto it, widening the radius, so that the
    // one-sided value is the continuation of that branch.
    static CBall project_to_axis(const CBall& z) {
        RF nr(RAD_PREC), t(RAD_PREC);
        mpfr_abs(t.get(), z.imag().get(), MPFR_RNDU);
        mpfr_add(nr.get(), z.rad().get(), t.get(), MPFR_RNDU);
        return CBall(z.real(), RF::from(0L, z.prec()), nr);
    }
    static bool touches_axis(const CBall& z) {
        return mpfr_cmpabs(z.imag().get(), z.rad().get()) <= 0;
    }
    static CBall li2_side(const CBall& z, int side) {
        mpfr_prec_t p = z.prec();
        if (side != 0 && touches_axis(z) && z.real() > RF::from(1L, p)) {
            // Li2(x +/- i0) = pi^2/3 - log(x)^2/2 - Li2(1/x) +/- i pi log x
            CBall zr = project_to_axis(z);
            CBall pi = CBall::pi(p);
            CBall lx = log(zr);
            CBall base = pi * pi * Rat(1, 3) - lx * lx * Rat(1, 2) - li2(zr.inv());
            return base + CBall::i_unit(p) * pi * lx * (long)side;
        }
        return li2(z);
    }
    static CBall log_side(const CBall& z, int side) {
        mpfr_prec_t p = z.prec();
        if (side != 0 && touches_axis(z) && z.real().sgn() < 0) {
            // log(x +/- i0) = log|x| +/- i pi
            CBall zr = project_to_axis(z);
            CBall pi = CBall::pi(p);
            return log(-zr) + CBall::i_unit(p) * pi * (long)side;
        }
        return log(z);
    }
    static CBall rogers_side(const CBall& z, long pw, long qw, int side) {
        mpfr_prec_t p = z.prec();
        CBall one = CBall::from(1L, p);
        CBall twopii = CBall::pi(p) * 2 * CBall::i_unit(p);
        // a real z > 1 puts 1-z on the log cut; approach from side
        CBall a = log_side(z, side) + twopii * pw;
        CBall b = log_side(one - z, -side) + (-twopii) * qw;
        return li2_side(z, side) + a * b * Rat(1, 2);
    }

    // branch convention under which the saddle identities hold exactly for the
    // real embeddings: dilogarithms continuous from below the cut [1,oo),
    // logarithms continuous from above the cut (-oo,0]
    static constexpr int li2_branch = -1;
    static constexpr int log_branch = +1;

    // complex volume of connection rho, in the representative for which
    //   -Li2(X2) - Li2(X1^2) - Li2(X1^{-1}X2) - ... = -V - 4 pi^2 (k^2+kl+a k + 1/24)
    // holds exactly (no residual multiple of (2 pi i)^2)
    static CBall volume(int rho, mpfr_prec_t p) {
        CBall al = alpha(rho, p);
        CBall z1 = z1_poly().eval(al), z2 = z2_poly().eval(al);
        auto [p1, q1] = flat1(rho);
        auto [p2, q2] = flat2(rho);
        // the real connection (rho = 3) has both shapes on the real axis
        int side = (rho == 3) ? 1 : 0;
        CBall raw = -rogers_side(z1, p1, q1, side) + rogers_side(z2, p2, q2, side);
        static constexpr long shift[7] = {-2, 0, 0, 0, -1, -1, -1};
        CBall pi = CBall::pi(p);
        return raw + pi * pi * 4 * shift[rho - 1];
    }

private:
    template <std::size_t N>
    static std::array<std::size_t, N> match_roots_impl(
        const std::shared_ptr<const detail::NFCtx>& F, const double (&re)[N],
        const double (&im)[N]) {
        const auto& roots = F->roots(96);
        std::array<std::size_t, N> out{};
        for (std::size_t j = 0; j < N; ++j) {
            double best = 1e9;
            std::size_t arg = 0;
            for (std::size_t i = 0; i < roots.size(); ++i) {
                double dr = roots[i].to_double_re() - re[j];
                double di = roots[i].to_double_im() - im[j];
                double d = dr * dr + di * di;
                if (d < best) {
                    best = d;
                    arg = i;
                }
            }
            if (best > 1e-4) throw std::logic_error("embedding anchor not matched");
            out[j] = arg;
        }
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t k = j + 1; k < N; ++k)
                if (out[j] == out[k]) throw std::logic_error("ambiguous embedding match");
        return out;
    }
    static std::array<std::size_t, 7> match_roots(
        const std::shared_ptr<const detail::NFCtx>& F, const double (&re)[7],
        const double (&im)[7]) {
        return match_roots_impl<7>(F, re, im);
    }
};

} // namespace q41
