#include "doctest.h"
#include "sectorprimes/errors.hpp"
#include "sectorprimes/selberg.hpp"
#include "sectorprimes/tiling.hpp"
#include "sectorprimes/window.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace sp;

TEST_CASE("transition function")
{
    CHECK(transition(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::fabs(transition(0.25) + transition(0.75) - 1.0) < 1e-15);
    CHECK(transition(1e-3) < 1e-100);
    CHECK(transition(1.0 - 1e-3) == 1.0);
    CHECK(transition(-1.0) == 0.0);
    CHECK(transition(2.0) == 1.0);
    double prev = 0.0;
    for (double y = 0.0; y <= 1.0; y += 1e-3) {
        const double v = transition(y);
        CHECK(v >= prev);
        CHECK(std::fabs(v + transition(1.0 - y) - 1.0) < 1e-14);
        prev = v;
    }
}

TEST_CASE("smooth windows")
{
    const SmoothWindow lo{1000.0, 100.0, 10.0, Sign::minorant};
    const SmoothWindow up{1000.0, 100.0, 10.0, Sign::majorant};
    CHECK(window_eval(lo, 1050.0) == 1.0);
    CHECK(window_eval(lo, 1005.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(window_eval(lo, 1000.0) == 0.0);
    CHECK(window_eval(lo, 1100.0) == 0.0);
    CHECK(window_eval(up, 990.0) == 0.0);
    CHECK(window_eval(up, 1000.0) == 1.0);
    CHECK(window_eval(up, 1099.999) == 1.0);
    CHECK(window_eval(up, 1110.0) == 0.0);
    for (double y = 980.0; y < 1120.0; y += 0.37) {
        const double ind = (y >= 1000.0 && y < 1100.0) ? 1.0 : 0.0;
        CHECK(window_eval(lo, y) <= ind);
        CHECK(window_eval(up, y) >= ind);
    }
    const SmoothWindow bad{1000.0, 100.0, 60.0, Sign::minorant};
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
}

TEST_CASE("Mellin transform at s = 1 and s = 2")
{
    for (double u : {0.5, 5.0, 50.0}) {
        for (Sign sg : {Sign::minorant, Sign::majorant}) {
            const SmoothWindow w{1e5, 1000.0, u, sg};
            const MellinResult g1 = mellin(w, {1.0, 0.0}, 1e-10);
            CHECK(std::fabs(g1.value.imag()) < 1e-9);
            CHECK(std::fabs(g1.value.real() - 1000.0) <= u + g1.effective_tol);
            // the ramps are symmetric, so G(1) = h -+ u exactly
            const double expect = sg == Sign::minorant ? 1000.0 - u : 1000.0 + u;
            CHECK(g1.value.real() == doctest::Approx(expect).epsilon(1e-12));
            const double g2 = mellin(w, {2.0, 0.0}, 1e-6).value.real();
            CHECK(g2 >= 1e5 * (1000.0 - 2.0 * u));
            CHECK(g2 <= (1e5 + 1000.0 + u) * (1000.0 + 2.0 * u));
            // conjugate symmetry of a real window
            const auto a = mellin(w, {0.5, 30.0}, 1e-8).value;
            const auto b = mellin(w, {0.5, -30.0}, 1e-8).value;
            CHECK(std::abs(a - std::conj(b)) < 1e-6);
        }
    }
    const SmoothWindow w{1e5, 1000.0, 5.0, Sign::majorant};
    CHECK_THROWS_AS(mellin(w, {2.5, 0.0}, 1e-8), InvalidInput);
}

TEST_CASE("Mellin against direct quadrature")
{
    const SmoothWindow w{200.0, 50.0, 7.0, Sign::majorant};
    const std::complex<double> s(0.5, 3.0);
    // composite Simpson on a fine grid over the support
    const int n = 400000;
    const double a = w.support_lo(), b = w.support_hi(), step = (b - a) / n;
    std::complex<double> acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double y = a + i * step;
        const double c = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += c * window_eval(w, y) * std::pow(std::complex<double>(y, 0.0), s - 1.0);
    }
    acc *= step / 3.0;
    CHECK(std::abs(mellin(w, s, 1e-10).value - acc) < 1e-7);
}

TEST_CASE("Mellin decay constants are finite")
{
    const SmoothWindow w{1e5, 1e4, 100.0, Sign::minorant};
    const auto prof = mellin_decay_profile(w, {0.0, 0.5, 1.0}, {0.0, 10.0, 100.0}, 1e-8);
    for (double c : prof.constants) {
        CHECK(std::isfinite(c));
        CHECK(c > 0.0);
    }
    CHECK(prof.constants[0] <= 1.5);
    const auto dc = derivative_constants(w, 2000);
    CHECK(std::isfinite(dc[0]));
    CHECK(dc[0] >= 1.0);
}

TEST_CASE("Selberg interval zero coefficients and sandwich")
{
    for (int M : {5, 10, 50, 200}) {
        const double a = 0.17, b = 0.42;
        const auto up = selberg_interval(M, a, b, Sign::majorant);
        const auto dn = selberg_interval(M, a, b, Sign::minorant);
        CHECK(std::fabs(up.zero_coeff().real() - ((b - a) + 1.0 / (M + 1))) < 1e-13);
        CHECK(std::fabs(dn.zero_coeff().real() - ((b - a) - 1.0 / (M + 1))) < 1e-13);
        for (int k = 1; k <= M; ++k) {
            int mp = k, mm = -k;
            CHECK(std::abs(up.coeff(&mm) - std::conj(up.coeff(&mp))) < 1e-15);
            CHECK(std::abs(dn.coeff(&mm) - std::conj(dn.coeff(&mp))) < 1e-15);
        }
        for (int i = 0; i < 10000; ++i) {
            const double phi = (i + 0.5) / 10000.0;
            const double ind = up.indicator(&phi) ? 1.0 : 0.0;
            CHECK(dn.eval(&phi) <= ind + 1e-12);
            CHECK(up.eval(&phi) >= ind - 1e-12);
        }
        const int mout = M + 1;
        CHECK(std::abs(up.coeff(&mout)) == 0.0);
    }
    // an interval wrapping through 0
    const auto w = selberg_interval(30, 0.9, 1.1, Sign::majorant);
    const double z = 0.0;
    CHECK(w.indicator(&z));
    CHECK(w.eval(&z) >= 1.0 - 1e-12);
}

TEST_CASE("Selberg boxes: zero coefficient identities in d = 1, 2, 3")
{
    for (int d = 1; d <= 3; ++d) {
        for (double kappa : {0.05, 0.1}) {
            const int M = 20;
            const std::vector<double> corner(d, 0.3);
            const auto up = selberg_box(M, corner, kappa, Sign::majorant);
            const auto dn = selberg_box(M, corner, kappa, Sign::minorant);
            const double vol = std::pow(kappa, d);
            CHECK(up.volume() == doctest::Approx(vol));
            CHECK(std::fabs((up.zero_coeff().real() - vol) - majorant_defect(d, kappa, M)) < 1e-12);
            CHECK(std::fabs((vol - dn.zero_coeff().real()) - minorant_defect(d, kappa, M)) < 1e-12);
            const double step = 1.0 / (M + 1);
            CHECK(majorant_defect(d, kappa, M) == doctest::Approx(std::pow(kappa + step, d) - vol));
            CHECK(minorant_defect(d, kappa, M) ==
                  doctest::Approx(std::pow(kappa + 2 * step, d) - std::pow(kappa + step, d)));
            std::mt19937_64 rng(d * 100 + M);
            std::uniform_real_distribution<double> U(0.0, 1.0);
            for (int i = 0; i < 3000; ++i) {
                double phi[3];
                for (int j = 0; j < d; ++j) phi[j] = (i % 2) ? U(rng) : 0.3 + 1.2 * kappa * U(rng) - 0.1 * kappa;
                const double ind = up.indicator(phi) ? 1.0 : 0.0;
                CHECK(dn.eval(phi) <= ind + 1e-12);
                CHECK(up.eval(phi) >= ind - 1e-12);
            }
        }
    }
    // d = 1 box coincides with the interval
    const auto box = selberg_box(40, {0.2}, 0.1, Sign::majorant);
    const auto iv = selberg_interval(40, 0.2, 0.3, Sign::majorant);
    for (int m = -40; m <= 40; ++m) CHECK(std::abs(box.coeff(&m) - iv.coeff(&m)) < 1e-15);
    // d = 2, kappa = 0.1, M = 20
    const auto b2 = selberg_box(20, {0.0, 0.0}, 0.1, Sign::majorant);
    CHECK(std::fabs(b2.zero_coeff().real() - 0.01 - (std::pow(0.1 + 1.0 / 21, 2) - 0.01)) < 1e-13);
}

TEST_CASE("Selberg coefficient bound")
{
    const auto up = selberg_box(100, {0.4}, 0.05, Sign::majorant);
    const auto r = coeff_bound_check(up, 10.0);
    CHECK(r.within_limit);
    CHECK(r.max_ratio <= 10.0);
    const auto b2 = selberg_box(30, {0.1, 0.6}, 0.05, Sign::minorant);
    CHECK(coeff_bound_check(b2, 10.0).within_limit);
    int z[2] = {0, 0};
    const double k = 0.05, M = 30;
    CHECK(std::abs(b2.coeff(z)) <= k * k + 2.0 / (M + 1) * (k + 1.0 / (M + 1)) * 2.0);
}

TEST_CASE("cube tilings")
{
    PolytopeSpec aligned;
    aligned.dim = 2;
    aligned.base = {make_box({0.0, 0.0}, {0.5, 0.25})};
    const auto t = tile(aligned, 0.05);
    CHECK(t.inner.size() == t.outer.size());
    CHECK(t.inner_volume == doctest::Approx(0.125));
    CHECK(t.outer_volume == doctest::Approx(0.125));

    PolytopeSpec seg;
    seg.dim = 1;
    seg.base = {make_box({-0.337}, {0.4121})};
    for (double k0 : {0.1, 0.01, 0.001}) {
        const auto ts = tile(seg, k0);
        CHECK(ts.inner_error() >= 0.0);
        CHECK(ts.outer_error() >= 0.0);
        CHECK(ts.inner_error() <= 2.0 * k0 + 1e-12);
        CHECK(ts.outer_error() <= 2.0 * k0 + 1e-12);
    }

    // equilateral triangle of unit perimeter
    const double side = 1.0 / 3.0;
    PolytopeSpec tri;
    tri.dim = 2;
    tri.base = {make_polygon({{0.01, 0.02}, {0.01 + side, 0.02}, {0.01 + side / 2, 0.02 + side * std::sqrt(3.0) / 2}})};
    CHECK(tri.base_volume() == doctest::Approx(std::sqrt(3.0) / 4 * side * side));
    CHECK(tri.base_boundary() == doctest::Approx(1.0));
    double prev_inner = 0.0;
    for (double k0 : {0.1, 0.01, 0.001}) {
        const auto tt = tile(tri, k0);
        CHECK(tt.inner_error() <= 4.0 * k0);
        CHECK(tt.outer_error() <= 4.0 * k0);
        CHECK(tt.inner_volume >= prev_inner);
        prev_inner = tt.inner_volume;
    }
    // halving the grid refines both tilings
    const auto coarse = tile(tri, 0.02), fine = tile(tri, 0.01);
    CHECK(fine.inner_volume >= coarse.inner_volume - 1e-15);
    CHECK(fine.outer_volume <= coarse.outer_volume + 1e-15);
    CHECK_THROWS_AS(tile(tri, 0.0), InvalidInput);
}

TEST_CASE("box sums of Selberg polynomials")
{
    PolytopeSpec one;
    one.dim = 1;
    one.base = {make_box({0.0}, {0.1})};
    one.origin = AngleVec(0.3);
    one.dilation = 1.0;
    const auto t = tile(one, 0.1);
    REQUIRE(t.inner.size() == 1);
    const auto F = box_sum(one, t, 25, Sign::majorant);
    const auto S = selberg_box(25, {0.3}, 0.1, Sign::majorant);
    for (int m = -25; m <= 25; ++m) CHECK(std::abs(F.at(&m) - S.coeff(&m)) < 1e-14);

    PolytopeSpec iv;
    iv.dim = 1;
    iv.base = {make_box({-1.0}, {1.0})};
    iv.origin = AngleVec(0.7);
    iv.dilation = 0.05;
    const auto ti = tile(iv, 0.1);
    const auto Fu = box_sum(iv, ti, 200, Sign::majorant);
    const auto Fl = box_sum(iv, ti, 200, Sign::minorant);
    CHECK(Fu.zero().real() >= iv.volume());
    CHECK(Fl.zero().real() <= iv.volume());
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const AngleVec phi(U(rng));
        const double ind = iv.contains(phi) ? 1.0 : 0.0;
        CHECK(Fl.eval(phi) <= ind + 1e-9);
        CHECK(Fu.eval(phi) >= ind - 1e-9);
    }
    PolytopeSpec big;
    big.dim = 3;
    big.base = {make_box({0.0, 0.0, 0.0}, {0.5, 0.5, 0.5})};
    CHECK_THROWS_AS(box_sum(big, tile(big, 0.25), 400, Sign::majorant), ResourceError);
}
