#include "sectorprimes/hecke.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "sectorprimes/errors.hpp"

namespace sp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAnchorTol = 1e-9;

double turns_dist0(double t) { return circle_dist(t, 0.0); }

}  // namespace

std::string to_string(Automorphism a) { return a == Automorphism::identity ? "identity" : "conjugation"; }

std::string to_string(ScaleMode m) { return m == ScaleMode::per_prime ? "per_prime" : "fixed_x"; }

double angle_from_phase(const HeckeBasis& basis, int class_idx, long double raw_phase)
{
    const long double t = static_cast<long double>(basis.anchors[class_idx]) +
                          static_cast<long double>(basis.phase_scale) * raw_phase;
    return wrap01(static_cast<double>(t - std::floor(t)));
}

HeckeBasis make_hecke_basis(const FieldSpec& field, const NarrowClassGroup& group)
{
    HeckeBasis b;
    b.dim = 1;
    b.imaginary = field.imaginary();
    if (b.imaginary) {
        b.exponent = field.unit_count;
        b.phase_scale = field.unit_count / (2.0 * kPi);
    } else {
        b.v = kPi / field.log_tot_pos_unit;
        b.phase_scale = 1.0 / (2.0 * field.log_tot_pos_unit);
        b.half_turn_unit = (field.fund_unit && field.fund_unit->norm == -1) ? 0.5 : 0.0;
    }

    const int h = group.order();
    b.anchors.assign(h, 0.0);
    std::vector<char> pinned(h, 0);
    std::vector<int> members{group.identity_idx};
    pinned[group.identity_idx] = 1;
    b.anchors[group.identity_idx] = 0.0;

    // phi(A_i) + phi(A_j) = phi(A_{ij}) + scale * tau(i, j), tau from class_product
    auto step = [&](int c, int g) {
        const ClassInfo ci = class_product(group, c, g);
        const long double t = static_cast<long double>(b.anchors[c]) + b.anchors[g] -
                              static_cast<long double>(b.phase_scale) * ci.phase;
        return std::pair<int, double>(ci.class_idx, static_cast<double>(t - std::floor(t)));
    };

    while (static_cast<int>(members.size()) < h) {
        int g = 0;
        while (pinned[g]) ++g;
        // relative order of g over the pinned subgroup, with the accumulated phase
        int cls = g;
        long double acc = 0.0L;
        int order = 1;
        while (!pinned[cls]) {
            const ClassInfo ci = class_product(group, cls, g);
            acc += ci.phase;
            cls = ci.class_idx;
            ++order;
        }
        const long double target = static_cast<long double>(b.anchors[cls]) +
                                   static_cast<long double>(b.phase_scale) * acc;
        const double branch = wrap01(static_cast<double>(target - std::floor(target))) / order;
        b.generators.push_back(AnchorGenerator{g, order, cls, branch});
        b.anchors[g] = branch;

        std::vector<int> layer = members;
        std::vector<int> grown = members;
        for (int j = 1; j < order; ++j) {
            std::vector<int> next;
            for (int c : layer) {
                auto [k, val] = step(c, g);
                if (pinned[k] && k != g) throw InvariantViolation("anchor extension revisits a class");
                pinned[k] = 1;
                b.anchors[k] = val;
                next.push_back(k);
            }
            grown.insert(grown.end(), next.begin(), next.end());
            layer = std::move(next);
        }
        members = std::move(grown);
    }

    // character check: anchors must respect every class product
    std::mt19937_64 rng(0xA1C4);
    const bool full = h <= 64;
    const int trials = full ? h * h : 4096;
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const int i = full ? t % h : static_cast<int>(rng() % h);
        const int j = full ? t / h : static_cast<int>(rng() % h);
        const ClassInfo ci = class_product(group, i, j);
        const long double lhs = static_cast<long double>(b.anchors[i]) + b.anchors[j];
        const long double rhs = static_cast<long double>(b.anchors[ci.class_idx]) +
                                static_cast<long double>(b.phase_scale) * ci.phase;
        worst = std::max(worst, turns_dist0(static_cast<double>(lhs - rhs)));
    }
    b.consistency_residual = worst;
    if (worst > kAnchorTol) {
        std::ostringstream os;
        os << "class anchors are not multiplicative (residual " << worst << ")";
        throw InvariantViolation(os.str());
    }
    return b;
}

AngleVec angle_of(const HeckeBasis& basis, const PrimeIdealRec& ideal)
{
    return AngleVec(angle_from_phase(basis, ideal.class_idx, ideal.phase));
}

AngleVec angle_of_form(const NarrowClassGroup& group, const HeckeBasis& basis, const QuadForm& form)
{
    const ClassInfo ci = classify_form(group, form);
    return AngleVec(angle_from_phase(basis, ci.class_idx, ci.phase));
}

AngleVec angle_of_element(const FieldSpec& field, const HeckeBasis& basis, const QuadElem& x)
{
    if (x.a == 0 && x.b == 0) throw InvalidInput("angle_of_element: zero element");
    if (field.imaginary()) {
        const auto e = embed(field, x);
        const long double arg = std::atan2(e[1], e[0]);
        const long double t = static_cast<long double>(basis.phase_scale) * arg;
        return AngleVec(static_cast<double>(t - std::floor(t)));
    }
    const i128 n = norm(field, x);
    // larger embedding first, the other one from the exact norm
    const long double root = std::sqrt(static_cast<long double>(field.m));
    const long double a = static_cast<long double>(x.a) / x.den;
    const long double bb = static_cast<long double>(x.b) / x.den;
    const bool same_sign = (x.a >= 0) == (x.b >= 0);
    const long double big = same_sign ? a + bb * root : a - bb * root;
    const long double other = static_cast<long double>(n) / big;
    long double log_ratio = std::log(std::fabs(big)) - std::log(std::fabs(other));
    if (!same_sign) log_ratio = -log_ratio;  // big was the second embedding
    long double t = static_cast<long double>(basis.phase_scale) * log_ratio;
    if (n < 0) {
        if (basis.half_turn_unit == 0.0) {
            throw InvalidInput("angle_of_element: element has no totally positive associate");
        }
        t += basis.half_turn_unit;
    }
    return AngleVec(static_cast<double>(t - std::floor(t)));
}

PrimeIdealRec apply_automorphism(const FieldSpec& field, const NarrowClassGroup& group, const PrimeIdealRec& ideal,
                                 Automorphism sigma)
{
    if (sigma == Automorphism::identity) return ideal;
    return galois_conjugate(field, group, ideal);
}

PullbackMatrix character_pullback(const FieldSpec& field, const HeckeBasis& basis, Automorphism sigma)
{
    PullbackMatrix pb;
    pb.dim = 1;
    if (sigma == Automorphism::identity) {
        pb.entries = {1};
        return pb;
    }
    std::vector<std::pair<double, double>> samples;
    const int den = (field.disc == field.m) ? 2 : 1;
    const i64 span = 8 + 7 * static_cast<i64>(isqrt(static_cast<u64>(field.m < 0 ? -field.m : field.m)));
    for (i64 a = -span; a <= span; ++a) {
        for (i64 b = 1; b <= 6; ++b) {
            if (den == 2 && ((a - b) & 1)) continue;
            const QuadElem x{a, b, den};
            const i128 n = norm(field, x);
            if (n == 0) continue;
            if (n < 0 && basis.half_turn_unit == 0.0 && !field.imaginary()) continue;
            const double f = angle_of_element(field, basis, x)[0];
            const double fs = angle_of_element(field, basis, conjugate(x))[0];
            if (turns_dist0(f) < 1e-3) continue;  // uninformative
            samples.emplace_back(f, fs);
        }
    }
    if (samples.empty()) throw InvariantViolation("character_pullback: no informative generators");
    int best = 0;
    double best_res = 1e300;
    for (int cand = -4; cand <= 4; ++cand) {
        double res = 0.0;
        for (auto [f, fs] : samples) res = std::max(res, circle_dist(fs, cand * f));
        if (res < best_res) {
            best_res = res;
            best = cand;
        }
    }
    if (best_res > 1e-6) {
        std::ostringstream os;
        os << "character_pullback: no integer pullback fits (residual " << best_res << ")";
        throw InvariantViolation(os.str());
    }
    pb.entries = {best};
    pb.residual = best_res;
    return pb;
}

double SectorSpec::radius(double norm) const
{
    const double base = mode == ScaleMode::per_prime ? norm : ref_x;
    return std::pow(base, -delta);
}

std::vector<std::string> SectorSpec::validate(int degree) const
{
    std::vector<std::string> warnings;
    if (!(delta >= 0.0)) throw InvalidInput("sector: delta must be >= 0");
    if (delta >= 0.5) throw InvalidInput("sector: delta must be < 1/2");
    if (mode == ScaleMode::fixed_x && !(ref_x >= 2.0)) throw InvalidInput("sector: fixed_x mode needs ref_x >= 2");
    const double bound = 2.0 / (5.0 * degree);
    if (delta >= bound) {
        std::ostringstream os;
        os << "sector: delta = " << delta << " is at or above 2/(5n) = " << bound;
        warnings.push_back(os.str());
    }
    return warnings;
}

bool in_sector(const AngleVec& angle, const SectorSpec& spec, double norm)
{
    return torus_dist(angle, spec.phi0) < spec.radius(norm);
}

PolytopeSpec sector_polytope(const SectorSpec& spec, const std::vector<PullbackMatrix>& pullbacks, double x)
{
    if (pullbacks.empty()) throw InvalidInput("sector_polytope: no automorphisms");
    const double r = std::pow(x, -spec.delta);
    const double phi0 = spec.phi0[0];
    // work on the window [phi0 - 1/2, phi0 + 1/2) in coordinates t = phi - phi0
    using Iv = std::pair<double, double>;
    auto arcs_for = [&](int X) {
        std::vector<Iv> out;
        if (X == 0) throw InvalidInput("sector_polytope: zero pullback");
        const int ax = std::abs(X);
        const double half = r / ax;
        if (r >= 0.5) {
            out.emplace_back(-0.5, 0.5);
            return out;
        }
        for (int k = 0; k < ax; ++k) {
            double c = (phi0 + k) / X - phi0;
            c = wrap01(c + 0.5) - 0.5;
            double lo = c - half, hi = c + half;
            if (lo < -0.5) {
                out.emplace_back(lo + 1.0, 0.5);
                lo = -0.5;
            }
            if (hi > 0.5) {
                out.emplace_back(-0.5, hi - 1.0);
                hi = 0.5;
            }
            out.emplace_back(lo, hi);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    std::vector<Iv> region = arcs_for(pullbacks[0].entries.at(0));
    for (std::size_t j = 1; j < pullbacks.size(); ++j) {
        const auto other = arcs_for(pullbacks[j].entries.at(0));
        std::vector<Iv> next;
        for (const auto& a : region) {
            for (const auto& b : other) {
                const double lo = std::max(a.first, b.first), hi = std::min(a.second, b.second);
                if (hi > lo) next.emplace_back(lo, hi);
            }
        }
        std::sort(next.begin(), next.end());
        region = std::move(next);
    }
    PolytopeSpec poly;
    poly.dim = 1;
    poly.origin = AngleVec(phi0);
    poly.dilation = r;
    for (const auto& [lo, hi] : region) poly.base.push_back(make_box({lo / r}, {hi / r}));
    poly.empty = poly.base.empty();
    return poly;
}

}  // namespace sp
