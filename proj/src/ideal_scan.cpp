#include "sectorprimes/ideal_scan.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "sectorprimes/errors.hpp"

namespace sp {

FieldContext FieldContext::make(i64 m, i64 disc_bound)
{
    FieldContext ctx;
    ctx.field = make_field(m);
    ctx.group = narrow_class_group(ctx.field, disc_bound);
    ctx.basis = make_hecke_basis(ctx.field, ctx.group);
    ctx.automorphisms = {Automorphism::identity, Automorphism::conjugation};
    for (auto a : ctx.automorphisms) ctx.pullbacks.push_back(character_pullback(ctx.field, ctx.basis, a));
    return ctx;
}

PrimeIdeals scan_prime(const FieldContext& ctx, u64 p, bool with_images)
{
    PrimeIdeals out;
    out.p = p;
    out.kind = split_type(ctx.field, p);
    out.ideals = primes_over(ctx.field, ctx.group, p);
    out.angles.reserve(out.ideals.size());
    for (const auto& id : out.ideals) out.angles.push_back(angle_of(ctx.basis, id)[0]);
    if (with_images) {
        for (const auto& id : out.ideals) {
            std::vector<IdealImage> row;
            for (auto sigma : ctx.automorphisms) {
                const PrimeIdealRec img = apply_automorphism(ctx.field, ctx.group, id, sigma);
                row.push_back(IdealImage{img.norm, img.class_idx, angle_of(ctx.basis, img)[0]});
            }
            out.images.push_back(std::move(row));
        }
    }
    return out;
}

int resolve_threads(int threads)
{
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

IntervalScan scan_interval(const FieldContext& ctx, u64 lo, u64 hi, const SieveCache* cache, int threads,
                           bool with_images)
{
    IntervalScan scan;
    scan.lo = lo;
    scan.hi = hi;
    if (hi <= lo) return scan;
    const SieveResult sieve = sieve_range(lo, hi, cache, &scan.cache_hit);
    const std::vector<u64> ps = sieve.primes();
    scan.primes.resize(ps.size());

    const int nt = std::max(1, std::min<int>(resolve_threads(threads), static_cast<int>(ps.size() / 256 + 1)));
    auto work = [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) scan.primes[i] = scan_prime(ctx, ps[i], with_images);
    };
    if (nt == 1) {
        work(0, ps.size());
        return scan;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nt);
    const std::size_t chunk = (ps.size() + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        const std::size_t b = std::min(ps.size(), t * chunk), e = std::min(ps.size(), b + chunk);
        pool.emplace_back([&, b, e, t] {
            try {
                work(b, e);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
    return scan;
}

std::vector<PowerIdeal> higher_prime_powers(const FieldContext& ctx, u64 lo, u64 hi)
{
    std::vector<PowerIdeal> out;
    if (hi <= lo || hi < 5) return out;
    const u64 root = isqrt(hi - 1);
    for (u64 p : primes_up_to(root)) {
        const PrimeIdeals pi = scan_prime(ctx, p, false);
        if (pi.kind == SplitKind::ramified) continue;
        for (std::size_t i = 0; i < pi.ideals.size(); ++i) {
            const PrimeIdealRec& id = pi.ideals[i];
            const double lambda = std::log(static_cast<double>(id.norm));
            u64 n = id.norm;
            int k = 1;
            // norms of id^k for k >= 1, skipping k = 1 for degree-one ideals
            while (true) {
                const bool counted = !(k == 1 && id.norm == p);
                if (n >= lo && n < hi && counted) {
                    PowerIdeal pw;
                    pw.p = p;
                    pw.k = k;
                    pw.norm = n;
                    pw.class_idx = ctx.group.power_idx(id.class_idx, k);
                    pw.angle = wrap01(std::fmod(static_cast<double>(k) * pi.angles[i], 1.0));
                    pw.lambda = lambda;
                    out.push_back(pw);
                }
                if (n > (hi - 1) / id.norm) break;
                n *= id.norm;
                ++k;
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const PowerIdeal& a, const PowerIdeal& b) {
        return std::tie(a.norm, a.p, a.class_idx, a.angle) < std::tie(b.norm, b.p, b.class_idx, b.angle);
    });
    return out;
}

}  // namespace sp
