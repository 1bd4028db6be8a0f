#include "sectorprimes/bv.hpp"

#include <cmath>
#include <sstream>

#include "sectorprimes/errors.hpp"

namespace sp {

Admissibility q_admissible(const FieldContext& ctx, u64 q)
{
    if (q == 0) throw InvalidInput("q_admissible: q must be >= 1");
    const u64 d = static_cast<u64>(ctx.field.disc < 0 ? -ctx.field.disc : ctx.field.disc);
    Admissibility r;
    if (ctx.class_count() == 1) {
        r.admissible = q % d != 0;
    } else {
        r.surrogate = true;
        r.admissible = gcd(static_cast<i64>(q % d), static_cast<i64>(d)) == 1;
    }
    return r;
}

double ResidueCounts::at(u64 a) const
{
    const auto it = by_residue.find(a % q);
    if (it == by_residue.end()) throw InvalidInput("residue_counts: residue not coprime to q");
    return it->second.value();
}

bool ResidueCounts::partition_holds() const
{
    ExactSum s = dividing;
    for (const auto& [a, v] : by_residue) s += v;
    return s == total;
}

ResidueCounts residue_counts(const CountReport& unrestricted, u64 q)
{
    if (q == 0) throw InvalidInput("residue_counts: q must be >= 1");
    if (unrestricted.query.residue) throw InvalidInput("residue_counts: base query already has a residue");
    ResidueCounts rc;
    rc.q = q;
    for (u64 a = 0; a < q; ++a) {
        if (gcd(static_cast<i64>(a), static_cast<i64>(q)) == 1) rc.by_residue[a] = ExactSum{};
    }
    if (q == 1) rc.by_residue[0] = ExactSum{};
    for (u64 p : unrestricted.contributing) {
        const double lp = std::log(static_cast<double>(p));
        const u64 a = p % q;
        auto it = rc.by_residue.find(a);
        if (it == rc.by_residue.end()) {
            rc.dividing.add(lp);
        } else {
            it->second.add(lp);
        }
        rc.total.add(lp);
    }
    return rc;
}

ResidueCounts residue_counts(const FieldContext& ctx, const CountQuery& query, u64 q, const SieveCache* cache)
{
    return residue_counts(sector_prime_sum(ctx, query, cache), q);
}

u64 BVQuery::Q() const
{
    if (Q_override) return *Q_override;
    const double v = std::floor(std::pow(base.x, theta) + 1e-9);
    return v < 1.0 ? 1 : static_cast<u64>(v);
}

std::vector<std::string> BVQuery::validate(const FieldContext& ctx) const
{
    if (base.residue) throw InvalidInput("bv: base query must not carry a residue");
    if (!(theta > 0.0) && !Q_override) throw InvalidInput("bv: theta must be positive");
    std::vector<std::string> w = base.validate(ctx);
    const double bound = 2.0 / (5.0 * ctx.degree());
    if (2.0 * theta + std::max(base.sector.delta, base.delta_prime) >= bound) {
        std::ostringstream os;
        os << "bv: 2 theta + max(delta, delta') = " << 2.0 * theta + std::max(base.sector.delta, base.delta_prime)
           << " is at or above 2/(5n) = " << bound;
        w.push_back(os.str());
    }
    if (Q() < 3) {
        std::ostringstream os;
        os << "bv: Q = " << Q() << " < 3, the modulus scan is degenerate";
        w.push_back(os.str());
    }
    return w;
}

BVReport bv_from_report(const FieldContext& ctx, const BVQuery& q, const CountReport& unrestricted)
{
    if (!q.c_hat) throw InvalidInput("bv: c_hat must be supplied or calibrated first");
    BVReport rep;
    rep.query = q;
    rep.warnings = q.validate(ctx);
    rep.Q = q.Q();
    rep.c_hat = *q.c_hat;
    const auto& b = q.base;
    rep.main_term_scale = b.h * std::pow(b.x, -(ctx.degree() - 1) * b.sector.delta);
    rep.unrestricted_sum = unrestricted.weighted_sum;

    std::vector<char> adm(rep.Q + 1, 0);
    for (u64 m = 1; m <= rep.Q; ++m) {
        const Admissibility a = q_admissible(ctx, m);
        adm[m] = a.admissible;
        BVRow row;
        row.q = m;
        row.admissible = a.admissible;
        row.surrogate = a.surrogate;
        row.phi_q = euler_phi(m);
        row.expected = rep.c_hat * rep.main_term_scale / (static_cast<double>(row.phi_q) * ctx.class_count());
        const ResidueCounts rc = residue_counts(unrestricted, m);
        row.partition_ok = rc.partition_holds();
        if (!row.partition_ok) throw InvariantViolation("bv: residue partition fails for q = " + std::to_string(m));
        double best = -1.0;
        for (const auto& [r, v] : rc.by_residue) {
            const double d = std::fabs(v.value() - row.expected);
            if (d > best) {
                best = d;
                row.argmax_a = r;
                row.count_at_max = v.value();
            }
        }
        double best_rev = -1.0;
        for (auto it = rc.by_residue.rbegin(); it != rc.by_residue.rend(); ++it) {
            best_rev = std::max(best_rev, std::fabs(it->second.value() - row.expected));
        }
        if (best_rev != best) throw InvariantViolation("bv: maximum depends on enumeration order");
        row.max_discrepancy = best;
        row.normalized = best / rep.main_term_scale;
        if (row.admissible) rep.total += row.max_discrepancy;
        rep.per_q.push_back(row);
    }
    for (u64 m = 1; m <= rep.Q; ++m) {
        if (!adm[m]) continue;
        for (u64 d = 1; d < m; ++d) {
            if (m % d == 0 && !adm[d]) {
                throw InvariantViolation("bv: admissibility not closed under divisors at q = " + std::to_string(m));
            }
        }
    }
    rep.normalized_total = rep.total / rep.main_term_scale;

    ExactSum corr;
    for (const auto& pw : higher_prime_powers(ctx, b.lo(), b.hi())) {
        if (ideal_qualifies(b, pw.norm, pw.class_idx, pw.angle)) corr.add(pw.lambda);
    }
    rep.prime_power_correction = corr.value();
    return rep;
}

BVReport bv_discrepancy(const FieldContext& ctx, const BVQuery& q, const SieveCache* cache)
{
    q.validate(ctx);
    return bv_from_report(ctx, q, sector_prime_sum(ctx, q.base, cache));
}

BVLadder bv_ladder(const FieldContext& ctx, const BVQuery& base, const std::vector<double>& xs,
                   const SieveCache* cache)
{
    std::vector<CountReport> counts;
    std::vector<FitPoint> pts;
    std::vector<BVQuery> queries;
    for (double x : xs) {
        BVQuery q = base;
        q.base = CountQuery::standard(base.base.class_idx, base.base.sector, x, base.base.delta_prime);
        q.base.threads = base.base.threads;
        counts.push_back(sector_prime_sum(ctx, q.base, cache));
        FitPoint p;
        p.x = x;
        p.h = q.base.h;
        p.sum = counts.back().weighted_sum;
        p.scale = std::pow(x, -(ctx.degree() - 1) * q.base.sector.delta) * q.base.h / ctx.class_count();
        pts.push_back(p);
        queries.push_back(q);
    }
    BVLadder out;
    out.fit = fit_points(std::move(pts));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        BVQuery q = queries[i];
        if (!q.c_hat) q.c_hat = out.fit.c_hat;
        out.reports.push_back(bv_from_report(ctx, q, counts[i]));
    }
    return out;
}

}  // namespace sp
