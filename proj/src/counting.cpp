#include "sectorprimes/counting.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "sectorprimes/errors.hpp"

namespace sp {

namespace {

constexpr double kTermSlack = 1e-9;

bool residue_ok(const CountQuery& q, u64 n)
{
    return !q.residue || n % q.residue->q == q.residue->a % q.residue->q;
}

double log_u(u64 n) { return std::log(static_cast<double>(n)); }

}  // namespace

std::string to_string(Weight w) { return w == Weight::log_p ? "log_p" : "von_mangoldt"; }

CountQuery CountQuery::standard(int class_idx, SectorSpec sector, double x, double delta_prime)
{
    CountQuery q;
    q.class_idx = class_idx;
    q.sector = std::move(sector);
    q.x = x;
    q.delta_prime = delta_prime;
    q.h = std::pow(x, 1.0 - delta_prime);
    return q;
}

u64 CountQuery::lo() const { return static_cast<u64>(std::ceil(x)); }

u64 CountQuery::hi() const { return static_cast<u64>(std::ceil(x + h)); }

std::vector<std::string> CountQuery::validate(const FieldContext& ctx) const
{
    if (!(x >= 100.0)) throw InvalidInput("count query: x must be >= 100");
    if (!(h > 0.0) || !std::isfinite(x + h)) throw InvalidInput("count query: h must be positive and finite");
    if (x + h > 4.0e18) throw ResourceError("count query: interval beyond the 64-bit sieve range");
    if (class_idx < 0 || class_idx >= ctx.class_count()) throw InvalidInput("count query: class index out of range");
    if (!(delta_prime >= 0.0)) throw InvalidInput("count query: delta_prime must be >= 0");
    std::vector<std::string> warnings = sector.validate(ctx.degree());
    const double bound = 2.0 / (5.0 * ctx.degree());
    if (delta_prime >= bound) {
        std::ostringstream os;
        os << "count query: delta_prime = " << delta_prime << " is at or above 2/(5n) = " << bound;
        warnings.push_back(os.str());
    }
    if (residue) {
        if (residue->q == 0) throw InvalidInput("count query: residue modulus must be >= 1");
        if (gcd(static_cast<i64>(residue->a % residue->q), static_cast<i64>(residue->q)) != 1) {
            throw InvalidInput("count query: residue class is not coprime to its modulus");
        }
    }
    return warnings;
}

bool prime_in_sector_class(const PrimeIdeals& pi, int class_idx, const SectorSpec& sector)
{
    for (std::size_t i = 0; i < pi.ideals.size(); ++i) {
        const auto& id = pi.ideals[i];
        if (id.norm == pi.p && id.class_idx == class_idx &&
            in_sector(AngleVec(pi.angles[i]), sector, static_cast<double>(pi.p))) {
            return true;
        }
    }
    return false;
}

CountReport sector_sum_on_scan(const FieldContext& ctx, const IntervalScan& scan, const CountQuery& query)
{
    CountReport rep;
    rep.query = query;
    rep.warnings = query.validate(ctx);
    rep.cache_hit = scan.cache_hit;
    const u64 lo = query.lo(), hi = query.hi();
    if (scan.lo > lo || scan.hi < hi) throw InvalidInput("sector sum: scan does not cover the interval");
    for (const auto& pi : scan.primes) {
        if (pi.p < lo || pi.p >= hi) continue;
        ++rep.primes_in_interval;
        if (pi.kind == SplitKind::ramified) {
            rep.ramified_skipped.push_back(pi.p);
            continue;
        }
        if (!residue_ok(query, pi.p)) continue;
        bool hit = false;
        for (std::size_t i = 0; i < pi.ideals.size(); ++i) {
            const auto& id = pi.ideals[i];
            const bool sect = in_sector(AngleVec(pi.angles[i]), query.sector, static_cast<double>(pi.p));
            const bool wit = sect && id.norm == pi.p && id.class_idx == query.class_idx;
            hit = hit || wit;
            if (query.record_primes && id.norm == pi.p) {
                rep.per_prime.push_back(IdealRow{pi.p, id.norm, id.class_idx, pi.angles[i], sect, wit, id.form});
            }
        }
        if (hit) {
            rep.exact.add(log_u(pi.p));
            ++rep.count;
            rep.contributing.push_back(pi.p);
        }
    }
    if (!rep.ramified_skipped.empty()) {
        std::ostringstream os;
        os << "skipped " << rep.ramified_skipped.size() << " ramified prime(s)";
        rep.warnings.push_back(os.str());
    }
    rep.weighted_sum = rep.exact.value();
    return rep;
}

CountReport sector_prime_sum(const FieldContext& ctx, const CountQuery& query, const SieveCache* cache)
{
    query.validate(ctx);
    const IntervalScan scan = scan_interval(ctx, query.lo(), query.hi(), cache, query.threads);
    return sector_sum_on_scan(ctx, scan, query);
}

void calibrate(CountReport& report, const FieldContext& ctx, double c_hat)
{
    const auto& q = report.query;
    const double scale =
        std::pow(q.x, -(ctx.degree() - 1) * q.sector.delta) * q.h / static_cast<double>(ctx.class_count());
    report.main_term_prediction = c_hat * scale;
    report.ratio = *report.main_term_prediction > 0.0 ? report.weighted_sum / *report.main_term_prediction : 0.0;
}

IdentityResult inclusion_exclusion_identity(const FieldContext& ctx, const PrimeIdeals& pi, int class_idx,
                                            const SectorSpec& sector)
{
    if (pi.kind == SplitKind::ramified) throw InvalidInput("identity: p ramifies");
    const std::size_t n = ctx.automorphisms.size();
    if (pi.images.size() != pi.ideals.size()) throw InvalidInput("identity: prime record lacks Galois images");
    const double p = static_cast<double>(pi.p);
    auto cond = [&](const IdealImage& im) {
        return im.norm == pi.p && im.class_idx == class_idx && in_sector(AngleVec(im.angle), sector, p);
    };

    IdentityResult r;
    r.p = pi.p;
    for (std::size_t i = 0; i < pi.ideals.size(); ++i) {
        if (pi.ideals[i].norm == pi.p && pi.ideals[i].class_idx == class_idx &&
            in_sector(AngleVec(pi.angles[i]), sector, p)) {
            r.lhs = 1;
        }
    }
    r.rhs_den = static_cast<i64>(n);
    for (u64 mask = 1; mask < (u64{1} << n); ++mask) {
        i64 term = 0;
        for (const auto& row : pi.images) {
            bool all = true;
            for (std::size_t j = 0; j < n && all; ++j) {
                if ((mask >> j) & 1) all = cond(row[j]);
            }
            term += all ? 1 : 0;
        }
        r.subset_terms.push_back(term);
        r.rhs_num += (std::popcount(mask) % 2 == 1) ? term : -term;
    }
    return r;
}

IdentityResult inclusion_exclusion_identity(const FieldContext& ctx, u64 p, int class_idx, const SectorSpec& sector)
{
    if (!is_prime(p)) throw InvalidInput("identity: p is not prime");
    return inclusion_exclusion_identity(ctx, scan_prime(ctx, p, true), class_idx, sector);
}

bool ideal_qualifies(const CountQuery& q, u64 norm, int class_idx, double angle)
{
    return class_idx == q.class_idx && residue_ok(q, norm) &&
           in_sector(AngleVec(angle), q.sector, static_cast<double>(norm));
}

VonMangoldtReport von_mangoldt_sum(const FieldContext& ctx, const CountQuery& query, const SieveCache* cache)
{
    query.validate(ctx);
    const u64 lo = query.lo(), hi = query.hi();
    const IntervalScan scan = scan_interval(ctx, lo, hi, cache, query.threads);
    VonMangoldtReport rep;
    ExactSum prime_part, exist;
    for (const auto& pi : scan.primes) {
        if (pi.kind == SplitKind::ramified) continue;
        const double lp = log_u(pi.p);
        bool any = false;
        for (std::size_t i = 0; i < pi.ideals.size(); ++i) {
            const auto& id = pi.ideals[i];
            if (id.norm != pi.p) continue;
            if (ideal_qualifies(query, id.norm, id.class_idx, pi.angles[i])) {
                prime_part.add(lp);
                any = true;
            }
        }
        if (any) exist.add(lp);
    }
    ExactSum powers;
    for (const auto& pw : higher_prime_powers(ctx, lo, hi)) {
        if (ideal_qualifies(query, pw.norm, pw.class_idx, pw.angle)) {
            powers.add(pw.lambda);
            ++rep.power_terms;
        }
    }
    rep.exact = prime_part;
    rep.exact += powers;
    rep.value = rep.exact.value();
    rep.prime_ideal_sum = prime_part.value();
    rep.power_part = powers.value();
    rep.sector_prime_sum = exist.value();
    rep.bound_scale = std::sqrt(query.x) * std::log(query.x);
    rep.ratio = std::fabs(rep.power_part) / rep.bound_scale;
    return rep;
}

std::optional<int> galois_class_constancy(const FieldContext& ctx, int class_idx,
                                          const std::vector<Automorphism>& sigmas)
{
    if (sigmas.empty()) throw InvalidInput("galois_class_constancy: empty automorphism set");
    if (class_idx < 0 || class_idx >= ctx.class_count()) throw InvalidInput("galois_class_constancy: bad class");
    std::optional<int> common;
    for (auto s : sigmas) {
        // conjugation is an involution and maps a class to its inverse
        const int pre = s == Automorphism::identity ? class_idx : ctx.group.inverse[class_idx];
        if (common && *common != pre) return std::nullopt;
        common = pre;
    }
    return common;
}

double main_term(double F0, double G1, int class_count)
{
    if (class_count <= 0) throw InvalidInput("main_term: class count must be positive");
    if (!std::isfinite(F0) || !std::isfinite(G1)) throw InvalidInput("main_term: non-finite input");
    return F0 * G1 / class_count;
}

SmoothingDefaults default_smoothing(double x, double h, double delta, double delta_prime, double A, int degree)
{
    if (!(x > 2.0) || !(h > 0.0)) throw InvalidInput("default_smoothing: need x > 2 and h > 0");
    SmoothingDefaults d;
    d.tau = 0.9 * 2.0 / (5.0 * degree);
    d.tau_prime = 0.5 * (std::max(delta, delta_prime) + d.tau);
    d.u = std::min(std::pow(x, 1.0 - d.tau_prime), 0.25 * h);
    d.M = static_cast<int>(std::ceil(std::pow(x, d.tau)));
    d.kappa0 = std::pow(std::log(x), -(A + 1.0));
    return d;
}

SmoothedSumReport smoothed_sum_with(const FieldContext& ctx, const SmoothedQuery& q, const CoeffMap* F_lower,
                                    const CoeffMap* F_upper, const SmoothWindow* g_lower,
                                    const SmoothWindow* g_upper, const PolytopeSpec* region,
                                    const SieveCache* cache)
{
    const CountQuery& base = q.base;
    base.validate(ctx);
    SmoothedSumReport rep;
    rep.effective_class = galois_class_constancy(ctx, base.class_idx, q.sigmas);
    if (!rep.effective_class) return rep;
    const int cls = *rep.effective_class;

    double s_lo = base.x, s_hi = base.x + base.h;
    if (g_lower) s_lo = std::min(s_lo, g_lower->support_lo()), s_hi = std::max(s_hi, g_lower->support_hi());
    if (g_upper) s_lo = std::min(s_lo, g_upper->support_lo()), s_hi = std::max(s_hi, g_upper->support_hi());
    const u64 lo = static_cast<u64>(std::max(2.0, std::floor(s_lo)));
    const u64 hi = static_cast<u64>(std::ceil(s_hi)) + 1;

    auto in_interval = [&](u64 n) {
        const double v = static_cast<double>(n);
        return v >= base.x && v < base.x + base.h;
    };
    auto visit = [&](u64 norm, int c, double angle, double lambda) {
        if (c != cls || !residue_ok(base, norm)) return;
        ++rep.ideals_scanned;
        const double y = static_cast<double>(norm);
        const AngleVec phi(angle);
        const double gl = g_lower ? window_eval(*g_lower, y) : (in_interval(norm) ? 1.0 : 0.0);
        const double gu = g_upper ? window_eval(*g_upper, y) : (in_interval(norm) ? 1.0 : 0.0);
        const double fl = F_lower ? F_lower->eval(phi) : 1.0;
        const double fu = F_upper ? F_upper->eval(phi) : 1.0;
        const bool inside = in_interval(norm) && (region == nullptr || region->contains(phi));
        const double ind = inside ? 1.0 : 0.0;
        if (gl * fl > ind + kTermSlack || gu * fu < ind - kTermSlack) {
            std::ostringstream os;
            os << "smoothed sum: pointwise sandwich breach at norm " << norm << ", angle " << angle << " (" << gl * fl
               << " <= " << ind << " <= " << gu * fu << " fails)";
            throw InvariantViolation(os.str());
        }
        if (gl != 0.0) rep.lower_sum.add(gl * fl * lambda);
        if (inside) rep.exact_sum.add(lambda);
        if (gu != 0.0) rep.upper_sum.add(gu * fu * lambda);
    };

    const IntervalScan scan = scan_interval(ctx, lo, hi, cache, base.threads);
    for (const auto& pi : scan.primes) {
        if (pi.kind == SplitKind::ramified) continue;
        const double lp = log_u(pi.p);
        for (std::size_t i = 0; i < pi.ideals.size(); ++i) {
            if (pi.ideals[i].norm == pi.p) visit(pi.p, pi.ideals[i].class_idx, pi.angles[i], lp);
        }
    }
    for (const auto& pw : higher_prime_powers(ctx, lo, hi)) visit(pw.norm, pw.class_idx, pw.angle, pw.lambda);

    rep.lower = rep.lower_sum.value();
    rep.exact = rep.exact_sum.value();
    rep.upper = rep.upper_sum.value();
    if (!(rep.lower_sum <= rep.exact_sum) || !(rep.exact_sum <= rep.upper_sum)) {
        std::ostringstream os;
        os.precision(17);
        os << "smoothed sum: sandwich breach " << rep.lower << " <= " << rep.exact << " <= " << rep.upper;
        throw InvariantViolation(os.str());
    }

    rep.F0_lower = F_lower ? F_lower->zero().real() : 1.0;
    rep.F0_upper = F_upper ? F_upper->zero().real() : 1.0;
    rep.G1_lower = g_lower ? mellin(*g_lower, 1.0, q.mellin_tol).value.real() : base.h;
    rep.G1_upper = g_upper ? mellin(*g_upper, 1.0, q.mellin_tol).value.real() : base.h;
    rep.main_term_lower = main_term(rep.F0_lower, rep.G1_lower, ctx.class_count());
    rep.main_term_upper = main_term(rep.F0_upper, rep.G1_upper, ctx.class_count());
    rep.region_volume = region ? region->volume() : 1.0;
    return rep;
}

SmoothedSumReport smoothed_sum(const FieldContext& ctx, const SmoothedQuery& q, const SieveCache* cache)
{
    const CountQuery& base = q.base;
    base.validate(ctx);
    if (!(q.u > 0.0)) throw InvalidInput("smoothed sum: u must be positive");
    if (q.M < 1) throw InvalidInput("smoothed sum: M must be >= 1");

    SectorSpec fixed = base.sector;
    fixed.mode = ScaleMode::fixed_x;
    fixed.ref_x = base.x;
    std::vector<PullbackMatrix> pbs;
    for (auto s : q.sigmas) {
        const auto it = std::find(ctx.automorphisms.begin(), ctx.automorphisms.end(), s);
        pbs.push_back(ctx.pullbacks[static_cast<std::size_t>(it - ctx.automorphisms.begin())]);
    }
    const PolytopeSpec region = sector_polytope(fixed, pbs, base.x);
    const CubeTiling tiling = tile(region, q.kappa0);
    const CoeffMap Fl = box_sum(region, tiling, q.M, Sign::minorant);
    const CoeffMap Fu = box_sum(region, tiling, q.M, Sign::majorant);
    const SmoothWindow gl{base.x, base.h, q.u, Sign::minorant};
    const SmoothWindow gu{base.x, base.h, q.u, Sign::majorant};
    gl.validate();
    gu.validate();
    CountQuery inner = base;
    inner.sector = fixed;
    SmoothedQuery sq = q;
    sq.base = inner;
    return smoothed_sum_with(ctx, sq, &Fl, &Fu, &gl, &gu, &region, cache);
}

FitResult fit_points(std::vector<FitPoint> points)
{
    if (points.size() < 3) throw InvalidInput("asymptotic fit: need at least 3 points");
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i].x > points[i - 1].x)) throw InvalidInput("asymptotic fit: xs must be increasing");
    }
    double st = 0.0, tt = 0.0;
    for (const auto& p : points) {
        st += p.sum * p.scale;
        tt += p.scale * p.scale;
    }
    if (!(tt > 0.0)) throw InvalidInput("asymptotic fit: degenerate scales");
    FitResult r;
    r.c_hat = st / tt;
    for (auto& p : points) {
        p.ratio = p.sum / p.scale;
        p.residual = p.sum - r.c_hat * p.scale;
    }
    r.points = std::move(points);
    return r;
}

FitResult asymptotic_fit(const FieldContext& ctx, int class_idx, const AngleVec& phi0, double delta,
                         double delta_prime, const std::vector<double>& xs, const SieveCache* cache, int threads)
{
    if (xs.size() < 3) throw InvalidInput("asymptotic fit: need at least 3 points");
    std::vector<FitPoint> pts;
    for (double x : xs) {
        SectorSpec s;
        s.phi0 = phi0;
        s.delta = delta;
        s.mode = ScaleMode::per_prime;
        CountQuery q = CountQuery::standard(class_idx, s, x, delta_prime);
        q.threads = threads;
        const CountReport rep = sector_prime_sum(ctx, q, cache);
        FitPoint p;
        p.x = x;
        p.h = q.h;
        p.sum = rep.weighted_sum;
        p.scale = std::pow(x, -(ctx.degree() - 1) * delta) * q.h / ctx.class_count();
        pts.push_back(p);
    }
    return fit_points(std::move(pts));
}

}  // namespace sp
