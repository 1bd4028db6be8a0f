#include "doctest.h"
#include "oracles.hpp"
#include "sectorprimes/errors.hpp"
#include "sectorprimes/hecke.hpp"
#include "sectorprimes/ideal_scan.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace sp;

namespace {

double dist_to_set(double t, const std::set<double>& s)
{
    double best = 1.0;
    for (double v : s) best = std::min(best, oracle::circle_dist(t, v));
    return best;
}

}  // namespace

TEST_CASE("angle of (2+i) and Gaussian angles against the representation oracle")
{
    const auto ctx = FieldContext::make(-1);
    CHECK(ctx.basis.exponent == 4);
    const double expected = 4.0 * std::atan2(1.0, 2.0) / (2.0 * std::numbers::pi);
    CHECK(expected == doctest::Approx(0.29517).epsilon(1e-4));
    const double a = angle_of_element(ctx.field, ctx.basis, QuadElem{2, 1, 1})[0];
    CHECK(std::fabs(a - expected) < 1e-12);
    const double a4 = std::arg(std::pow(std::complex<double>(2.0, 1.0), 4)) / (2.0 * std::numbers::pi);
    CHECK(oracle::circle_dist(a, a4) < 1e-12);

    for (u64 p : primes_up_to(1500)) {
        if (p % 4 != 1) continue;
        const auto oracle_angles = oracle::gaussian_angles(p);
        REQUIRE(oracle_angles.size() == 2);
        const PrimeIdeals pi = scan_prime(ctx, p);
        REQUIRE(pi.angles.size() == 2);
        CAPTURE(p);
        for (double t : pi.angles) CHECK(dist_to_set(t, oracle_angles) < 1e-9);
        CHECK(oracle::circle_dist(pi.angles[0], -pi.angles[1]) < 1e-9);
    }
}

TEST_CASE("angles are unit invariant and vanish on rationals")
{
    const auto gi = FieldContext::make(-1);
    const double a = angle_of_element(gi.field, gi.basis, QuadElem{1, 1, 1})[0];
    const double b = angle_of_element(gi.field, gi.basis, QuadElem{-1, 1, 1})[0];
    CHECK(oracle::circle_dist(a, b) < 1e-15);
    CHECK(angle_of_element(gi.field, gi.basis, QuadElem{7, 0, 1})[0] == 0.0);
    CHECK(oracle::circle_dist(angle_of_element(gi.field, gi.basis, QuadElem{0, 3, 1})[0], 0.0) < 1e-15);
    CHECK_THROWS_AS(angle_of_element(gi.field, gi.basis, QuadElem{0, 0, 1}), InvalidInput);

    const auto r5 = FieldContext::make(5);
    CHECK(r5.basis.half_turn_unit == 0.5);
    CHECK(oracle::circle_dist(angle_of_element(r5.field, r5.basis, QuadElem{1, 1, 2})[0], 0.0) < 1e-12);
    CHECK(oracle::circle_dist(angle_of_element(r5.field, r5.basis, QuadElem{3, 1, 2})[0], 0.0) < 1e-12);
    CHECK(angle_of_element(r5.field, r5.basis, QuadElem{11, 0, 1})[0] == 0.0);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        const i64 x = static_cast<i64>(rng() % 60) - 30;
        const i64 y = static_cast<i64>(rng() % 30) + 1;
        const QuadElem e{2 * x + (y & 1), y, 2};
        if (norm(r5.field, e) == 0) continue;
        const QuadElem eu = multiply(r5.field, e, QuadElem{3, 1, 2});
        const QuadElem ef = multiply(r5.field, e, QuadElem{1, 1, 2});
        const double base = angle_of_element(r5.field, r5.basis, e)[0];
        CHECK(oracle::circle_dist(base, angle_of_element(r5.field, r5.basis, eu)[0]) < 1e-9);
        CHECK(oracle::circle_dist(base, angle_of_element(r5.field, r5.basis, ef)[0]) < 1e-9);
    }
}

TEST_CASE("angle map is additive on principal ideals")
{
    for (i64 m : {-1, -3, -2, 5, 13}) {
        const auto ctx = FieldContext::make(m);
        const int den = ctx.field.disc == m ? 2 : 1;
        std::mt19937_64 rng(11);
        int tested = 0;
        while (tested < 1000) {
            auto draw = [&]() {
                const i64 y = static_cast<i64>(rng() % 41) - 20;
                i64 x = static_cast<i64>(rng() % 81) - 40;
                if (den == 2 && ((x - y) & 1)) ++x;
                return QuadElem{x, y, den};
            };
            const QuadElem u = draw(), v = draw();
            if (norm(ctx.field, u) <= 0 || norm(ctx.field, v) <= 0) continue;
            const QuadElem w = multiply(ctx.field, u, v);
            const double lhs = angle_of_element(ctx.field, ctx.basis, w)[0];
            const double rhs = angle_of_element(ctx.field, ctx.basis, u)[0] + angle_of_element(ctx.field, ctx.basis, v)[0];
            CAPTURE(m);
            CHECK(oracle::circle_dist(lhs, rhs) < 1e-9);
            ++tested;
        }
    }
}

TEST_CASE("angle map is a character on non-principal classes")
{
    for (i64 m : {-5, -23, -47, 15, 79}) {
        const auto ctx = FieldContext::make(m);
        std::vector<PrimeIdealRec> pool;
        for (u64 p : primes_up_to(2000)) {
            for (const auto& id : primes_over(ctx.field, ctx.group, p)) {
                if (id.kind == SplitKind::split) pool.push_back(id);
            }
        }
        std::mt19937_64 rng(5);
        for (int t = 0; t < 500; ++t) {
            const auto& a = pool[rng() % pool.size()];
            const auto& b = pool[rng() % pool.size()];
            if (a.p == b.p) continue;
            const FormProduct prod = compose(a.form, b.form);
            const double lhs = angle_of_form(ctx.group, ctx.basis, prod.form)[0];
            const double rhs = angle_of(ctx.basis, a)[0] + angle_of(ctx.basis, b)[0];
            CAPTURE(m);
            CHECK(oracle::circle_dist(lhs, rhs) < 1e-8);
        }
        // the product of a split ideal with its conjugate is (p)
        for (std::size_t i = 0; i < std::min<std::size_t>(pool.size(), 200); ++i) {
            const auto c = galois_conjugate(ctx.field, ctx.group, pool[i]);
            CHECK(oracle::circle_dist(angle_of(ctx.basis, pool[i])[0] + angle_of(ctx.basis, c)[0], 0.0) < 1e-8);
        }
    }
}

TEST_CASE("Galois pullbacks")
{
    for (i64 m : {-1, -5, -23, 5, 79}) {
        const auto ctx = FieldContext::make(m);
        REQUIRE(ctx.pullbacks.size() == 2);
        CHECK(ctx.pullbacks[0].entries == std::vector<int>{1});
        CHECK(ctx.pullbacks[1].entries == std::vector<int>{-1});
    }
    const auto gi = FieldContext::make(-1);
    int checked = 0;
    for (u64 p : primes_up_to(1000)) {
        for (const auto& id : primes_over(gi.field, gi.group, p)) {
            const auto c = apply_automorphism(gi.field, gi.group, id, Automorphism::conjugation);
            CHECK(oracle::circle_dist(angle_of(gi.basis, c)[0], -angle_of(gi.basis, id)[0]) < 1e-12);
            ++checked;
        }
    }
    CHECK(checked >= 100);
}

TEST_CASE("sector membership")
{
    SectorSpec s;
    s.phi0 = AngleVec(0.29517);
    s.delta = 0.3;
    const auto gi = FieldContext::make(-1);
    const AngleVec a = angle_of_element(gi.field, gi.basis, QuadElem{2, 1, 1});
    CHECK(std::pow(5.0, -0.3) == doctest::Approx(0.617).epsilon(1e-3));
    CHECK(in_sector(a, s, 5.0));
    CHECK(in_sector(s.phi0, s, 1e12));

    SectorSpec whole;
    whole.phi0 = AngleVec(0.1);
    whole.delta = 0.0;
    for (double t = 0.0; t < 1.0; t += 0.01) CHECK(in_sector(AngleVec(t), whole, 1e9));

    SectorSpec fx;
    fx.phi0 = AngleVec(0.5);
    fx.delta = 0.2;
    fx.mode = ScaleMode::fixed_x;
    fx.ref_x = 1e4;
    CHECK(fx.radius(1e8) == doctest::Approx(std::pow(1e4, -0.2)));
    // strict inequality at the boundary
    CHECK_FALSE(in_sector(AngleVec(0.5 + std::pow(1e4, -0.2) + 1e-12), fx, 7.0));

    SectorSpec bad;
    bad.delta = 0.5;
    CHECK_THROWS_AS(bad.validate(2), InvalidInput);
    bad.delta = -0.1;
    CHECK_THROWS_AS(bad.validate(2), InvalidInput);
    bad.delta = 0.25;
    CHECK(bad.validate(2).size() == 1);
    bad.delta = 0.15;
    CHECK(bad.validate(2).empty());
}

TEST_CASE("sector polytopes")
{
    const std::vector<PullbackMatrix> id_only{PullbackMatrix{1, {1}, 0.0}};
    const std::vector<PullbackMatrix> both{PullbackMatrix{1, {1}, 0.0}, PullbackMatrix{1, {-1}, 0.0}};
    SectorSpec s;
    s.phi0 = AngleVec(0.3);
    s.delta = 0.25;
    const double x = 1e4;
    const double r = std::pow(x, -0.25);
    const PolytopeSpec p1 = sector_polytope(s, id_only, x);
    CHECK_FALSE(p1.empty);
    CHECK(p1.base_volume() == doctest::Approx(2.0));
    CHECK(p1.volume() == doctest::Approx(2.0 * r));
    CHECK(p1.contains(AngleVec(0.3 + 0.99 * r)));
    CHECK_FALSE(p1.contains(AngleVec(0.3 + 1.01 * r)));

    s.phi0 = AngleVec(0.0);
    const PolytopeSpec p0 = sector_polytope(s, both, x);
    CHECK(p0.base_volume() == doctest::Approx(2.0));

    s.phi0 = AngleVec(0.25);
    s.delta = 0.5;
    CHECK(std::pow(x, -0.5) == doctest::Approx(0.01));
    CHECK(sector_polytope(s, both, x).empty);

    // membership oracle: phi in the region iff both |phi - phi0| and |-phi - phi0| are below r
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        s.phi0 = AngleVec(U(rng));
        s.delta = 0.1;
        const double rr = std::pow(x, -0.1);
        const PolytopeSpec p = sector_polytope(s, both, x);
        for (int k = 0; k < 500; ++k) {
            const double phi = U(rng);
            const bool expect = oracle::circle_dist(phi, s.phi0[0]) < rr && oracle::circle_dist(-phi, s.phi0[0]) < rr;
            const bool edge = std::fabs(oracle::circle_dist(phi, s.phi0[0]) - rr) < 1e-9 ||
                              std::fabs(oracle::circle_dist(-phi, s.phi0[0]) - rr) < 1e-9;
            if (!edge) CHECK(p.contains(AngleVec(phi)) == expect);
        }
    }
}
