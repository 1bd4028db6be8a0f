#include "doctest.h"
#include "oracles.hpp"
#include "sectorprimes/counting.hpp"
#include "sectorprimes/errors.hpp"

#include <cmath>
#include <random>

using namespace sp;

namespace {

SectorSpec sector(double phi0, double delta)
{
    SectorSpec s;
    s.phi0 = AngleVec(phi0);
    s.delta = delta;
    return s;
}

CountQuery query(const FieldContext& ctx, double phi0, double delta, double x, double h)
{
    CountQuery q;
    q.class_idx = ctx.group.identity_idx;
    q.sector = sector(phi0, delta);
    q.x = x;
    q.h = h;
    return q;
}

}  // namespace

TEST_CASE("log p sum over split Gaussian primes in [100, 200)")
{
    const auto ctx = FieldContext::make(-1);
    const auto rep = sector_prime_sum(ctx, query(ctx, 0.0, 0.0, 100.0, 100.0));
    double expect = 0.0;
    u64 n = 0;
    for (u64 p : oracle::primes_in(100, 200)) {
        if (p % 4 == 1) {
            expect += std::log(static_cast<double>(p));
            ++n;
        }
    }
    CHECK(rep.count == n);
    CHECK(rep.contributing == std::vector<u64>{101, 109, 113, 137, 149, 157, 173, 181, 193, 197});
    CHECK(rep.weighted_sum == doctest::Approx(expect).epsilon(1e-14));
    CHECK(rep.primes_in_interval == oracle::primes_in(100, 200).size());

    // residue a = 3 mod 4 carries nothing
    CountQuery q3 = query(ctx, 0.0, 0.0, 100.0, 100.0);
    q3.residue = Residue{3, 4};
    CHECK(sector_prime_sum(ctx, q3).weighted_sum == 0.0);
}

TEST_CASE("sector sums against a direct angle oracle")
{
    const auto ctx = FieldContext::make(-1);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int t = 0; t < 10; ++t) {
        const double phi0 = U(rng), delta = 0.3 * U(rng);
        const auto rep = sector_prime_sum(ctx, query(ctx, phi0, delta, 10000.0, 5000.0));
        double expect = 0.0;
        for (u64 p : oracle::primes_in(10000, 15000)) {
            if (p % 4 != 1) continue;
            const double r = std::pow(static_cast<double>(p), -delta);
            bool any = false;
            for (double a : oracle::gaussian_angles(p)) any = any || oracle::circle_dist(a, phi0) < r;
            if (any) expect += std::log(static_cast<double>(p));
        }
        CHECK(rep.weighted_sum == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("empty sector gives zero")
{
    const auto ctx = FieldContext::make(-1);
    const auto pi = scan_prime(ctx, 101);
    // the point of the circle farthest from both angles of 101
    double best = 0.0, phi = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double t = i / 1000.0;
        const double d = std::min(oracle::circle_dist(t, pi.angles[0]), oracle::circle_dist(t, pi.angles[1]));
        if (d > best) {
            best = d;
            phi = t;
        }
    }
    const double delta = 0.45;
    REQUIRE(std::pow(101.0, -delta) < best);
    CHECK(sector_prime_sum(ctx, query(ctx, phi, delta, 101.0, 1.0)).weighted_sum == 0.0);
    CHECK(sector_prime_sum(ctx, query(ctx, pi.angles[0], delta, 101.0, 1.0)).weighted_sum ==
          doctest::Approx(std::log(101.0)));
}

TEST_CASE("non-identity class of m = -5")
{
    const auto ctx = FieldContext::make(-5);
    const int other = 1 - ctx.group.identity_idx;
    const auto pi = scan_prime(ctx, 103);
    REQUIRE(pi.ideals.size() == 2);
    CHECK(pi.ideals[0].class_idx == other);
    for (double phi0 : {pi.angles[0], wrap01(pi.angles[0] + 0.5)}) {
        CountQuery q = query(ctx, phi0, 0.4, 103.0, 1.0);
        q.class_idx = other;
        const bool in = in_sector(AngleVec(pi.angles[0]), q.sector, 103.0) ||
                        in_sector(AngleVec(pi.angles[1]), q.sector, 103.0);
        CHECK(sector_prime_sum(ctx, q).weighted_sum == (in ? doctest::Approx(std::log(103.0)) : doctest::Approx(0.0)));
        q.class_idx = ctx.group.identity_idx;
        CHECK(sector_prime_sum(ctx, q).weighted_sum == 0.0);
    }
}

TEST_CASE("inclusion-exclusion identity cases")
{
    for (i64 m : {-1, -5}) {
        const auto ctx = FieldContext::make(m);
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        int two = 0, one = 0;
        for (u64 p : primes_up_to(100000)) {
            const auto pi = scan_prime(ctx, p, true);
            if (pi.kind == SplitKind::ramified) continue;
            for (int cls = 0; cls < ctx.class_count(); ++cls) {
                const SectorSpec s = sector(U(rng), 0.2);
                const auto r = inclusion_exclusion_identity(ctx, pi, cls, s);
                int sat = 0;
                for (std::size_t i = 0; i < pi.ideals.size(); ++i) {
                    if (pi.ideals[i].norm == p && pi.ideals[i].class_idx == cls &&
                        in_sector(AngleVec(pi.angles[i]), s, static_cast<double>(p))) {
                        ++sat;
                    }
                }
                CAPTURE(p);
                CHECK(r.holds());
                CHECK(r.lhs == (sat > 0 ? 1 : 0));
                if (pi.kind == SplitKind::inert) {
                    CHECK(r.lhs == 0);
                    CHECK(r.rhs_num == 0);
                }
                if (sat == 2) {
                    ++two;
                    CHECK(r.rhs_num == 2);
                    CHECK(r.rhs_den == 2);
                }
                if (sat == 1) ++one;
            }
        }
        CHECK(two > 0);
        CHECK(one > 0);
    }
    const auto ctx = FieldContext::make(-1);
    CHECK(inclusion_exclusion_identity(ctx, 5, 0, sector(0.0, 0.0)).rhs_num == 2);
    CHECK(inclusion_exclusion_identity(ctx, 3, 0, sector(0.0, 0.0)).lhs == 0);
}

TEST_CASE("von Mangoldt sum with prime powers")
{
    const auto ctx = FieldContext::make(-1);
    // norms in [121, 130): (11) of norm 121, the cubes of the two primes over 5 (norm 125); 127 is inert, 128 ramified
    const auto rep = von_mangoldt_sum(ctx, query(ctx, 0.0, 0.0, 121.0, 9.0));
    CHECK(rep.prime_ideal_sum == 0.0);
    CHECK(rep.power_terms == 3);
    CHECK(rep.value == doctest::Approx(std::log(121.0) + 2.0 * std::log(5.0)).epsilon(1e-14));
    CHECK(rep.power_part == doctest::Approx(rep.value));

    // no prime powers in [1000, 1020): value counts each split ideal, prime sum counts each prime once
    const auto r2 = von_mangoldt_sum(ctx, query(ctx, 0.0, 0.0, 1000.0, 20.0));
    CHECK(r2.power_terms == 0);
    CHECK(r2.value == doctest::Approx(2.0 * r2.sector_prime_sum));
    CHECK(r2.sector_prime_sum == doctest::Approx(std::log(1009.0) + std::log(1013.0)));

    // [100, 200) holds the norms 121, 125, 169 of prime powers
    const auto r3 = von_mangoldt_sum(ctx, query(ctx, 0.0, 0.0, 100.0, 100.0));
    CHECK(r3.power_part > 0.0);
    CHECK(r3.ratio < 1.0);
}

TEST_CASE("Galois class constancy")
{
    const auto c5 = FieldContext::make(-5);
    const int nid = 1 - c5.group.identity_idx;
    CHECK(galois_class_constancy(c5, nid, {Automorphism::identity}) == nid);
    CHECK(galois_class_constancy(c5, nid, {Automorphism::identity, Automorphism::conjugation}) == nid);
    const auto c23 = FieldContext::make(-23);
    for (int c = 0; c < 3; ++c) {
        const auto r = galois_class_constancy(c23, c, {Automorphism::identity, Automorphism::conjugation});
        if (c == c23.group.identity_idx) {
            CHECK(r == c);
        } else {
            CHECK_FALSE(r.has_value());
        }
        CHECK(galois_class_constancy(c23, c, {Automorphism::conjugation}) == c23.group.inverse[c]);
    }
    CHECK_THROWS_AS(galois_class_constancy(c23, 0, {}), InvalidInput);
}

TEST_CASE("smoothed sum with trivial ingredients is the von Mangoldt sum")
{
    const auto ctx = FieldContext::make(-1);
    SmoothedQuery sq;
    sq.base = query(ctx, 0.3, 0.0, 1000.0, 500.0);
    const auto rep = smoothed_sum_with(ctx, sq, nullptr, nullptr, nullptr, nullptr, nullptr);
    const auto vm = von_mangoldt_sum(ctx, sq.base);
    CHECK(rep.exact_sum == vm.exact);
    CHECK(rep.lower_sum == vm.exact);
    CHECK(rep.upper_sum == vm.exact);
}

TEST_CASE("smoothed sums sandwich the exact sum")
{
    const auto ctx = FieldContext::make(-1);
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int t = 0; t < 6; ++t) {
        SmoothedQuery sq;
        const double x = 1e5 * (1.0 + 4.0 * U(rng));
        sq.base = query(ctx, U(rng), 0.1, x, std::pow(x, 0.9));
        const auto d = default_smoothing(x, sq.base.h, 0.1, 0.1, 1.0, 2);
        sq.u = d.u;
        sq.M = 40;
        sq.kappa0 = 0.1;
        if (t % 2) sq.sigmas = {Automorphism::identity, Automorphism::conjugation};
        const auto r = smoothed_sum(ctx, sq);
        CHECK(r.lower_sum <= r.exact_sum);
        CHECK(r.exact_sum <= r.upper_sum);
        CHECK(r.G1_lower <= sq.base.h);
        CHECK(r.G1_upper >= sq.base.h);
        CHECK(std::fabs(r.G1_lower - sq.base.h) <= sq.u + 1e-6);
    }
}

TEST_CASE("monotonicity in delta and scale-mode ordering")
{
    const auto ctx = FieldContext::make(-1);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double x = 50000.0, h = 20000.0;
    const IntervalScan scan = scan_interval(ctx, 50000, 70000, nullptr, 2);
    for (int t = 0; t < 10; ++t) {
        const double phi0 = U(rng);
        ExactSum prev;
        bool first = true;
        for (double delta : {0.45, 0.35, 0.25, 0.15, 0.05, 0.0}) {
            const auto r = sector_sum_on_scan(ctx, scan, query(ctx, phi0, delta, x, h));
            if (!first) CHECK(prev <= r.exact);
            prev = r.exact;
            first = false;
        }
        CountQuery per = query(ctx, phi0, 0.2, x, h);
        CountQuery at_x = per, at_xh = per;
        at_x.sector.mode = ScaleMode::fixed_x;
        at_x.sector.ref_x = x;
        at_xh.sector.mode = ScaleMode::fixed_x;
        at_xh.sector.ref_x = x + h;
        const auto a = sector_sum_on_scan(ctx, scan, at_x).exact;
        const auto b = sector_sum_on_scan(ctx, scan, per).exact;
        const auto c = sector_sum_on_scan(ctx, scan, at_xh).exact;
        CHECK(c <= b);
        CHECK(b <= a);
    }
}

TEST_CASE("thread count does not change sums")
{
    const auto ctx = FieldContext::make(-5);
    CountQuery q = query(ctx, 0.61, 0.12, 2e6, 3e5);
    q.class_idx = 1 - ctx.group.identity_idx;
    q.threads = 1;
    const auto one = sector_prime_sum(ctx, q);
    for (int th : {2, 3, 7, 16}) {
        q.threads = th;
        const auto many = sector_prime_sum(ctx, q);
        CHECK(many.exact == one.exact);
        CHECK(many.weighted_sum == one.weighted_sum);
        CHECK(many.contributing == one.contributing);
    }
}

TEST_CASE("main term and smoothing defaults")
{
    CHECK(main_term(0.25, 1000.0, 1) == doctest::Approx(250.0));
    CHECK(main_term(0.25, 1000.0, 2) == doctest::Approx(125.0));
    CHECK_THROWS_AS(main_term(0.25, 1000.0, 0), InvalidInput);
    const double x = 1e7, delta = 0.15, r = std::pow(x, -delta), h = std::pow(x, 0.9);
    CHECK(main_term(2.0 * r, h, 1) == doctest::Approx(h * r * 2.0));
    const auto d = default_smoothing(x, h, 0.15, 0.1, 1.0, 2);
    CHECK(d.tau == doctest::Approx(0.18));
    CHECK(d.tau_prime == doctest::Approx(0.165));
    CHECK(d.u <= h / 4.0);
    CHECK(d.M == static_cast<int>(std::ceil(std::pow(x, 0.18))));
    CHECK(d.kappa0 == doctest::Approx(std::pow(std::log(x), -2.0)));
}

TEST_CASE("query validation")
{
    const auto ctx = FieldContext::make(-1);
    CHECK_THROWS_AS(sector_prime_sum(ctx, query(ctx, 0.0, 0.0, 50.0, 10.0)), InvalidInput);
    CHECK_THROWS_AS(sector_prime_sum(ctx, query(ctx, 0.0, 0.6, 500.0, 10.0)), InvalidInput);
    CountQuery q = query(ctx, 0.0, 0.0, 500.0, 10.0);
    q.residue = Residue{2, 4};
    CHECK_THROWS_AS(sector_prime_sum(ctx, q), InvalidInput);
    q.residue.reset();
    q.class_idx = 3;
    CHECK_THROWS_AS(sector_prime_sum(ctx, q), InvalidInput);
    const auto w = query(ctx, 0.0, 0.3, 500.0, 10.0).validate(ctx);
    CHECK(w.size() == 1);
}

TEST_CASE("asymptotic fit recovers a planted constant")
{
    std::vector<FitPoint> pts;
    for (double x : {1e4, 1e5, 1e6}) {
        FitPoint p;
        p.x = x;
        p.scale = std::sqrt(x);
        p.sum = 1.7 * p.scale;
        pts.push_back(p);
    }
    const auto f = fit_points(pts);
    CHECK(f.c_hat == doctest::Approx(1.7));
    for (const auto& p : f.points) CHECK(std::fabs(p.residual) < 1e-9);
    pts.pop_back();
    CHECK_THROWS_AS(fit_points(pts), InvalidInput);
}
