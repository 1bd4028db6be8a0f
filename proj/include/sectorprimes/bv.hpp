#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sectorprimes/counting.hpp"

namespace sp {

struct Admissibility {
    bool admissible = true;
    bool surrogate = false;  // decided by gcd(q, disc) = 1 rather than the exact field condition
};

// Whether the narrow Hilbert class field meets Q(zeta_q) only in Q.
// Exact when the narrow class group is trivial (K contained in Q(zeta_q) iff
// |disc| divides q), otherwise the necessary condition gcd(q, disc) = 1.
Admissibility q_admissible(const FieldContext& ctx, u64 q);

struct ResidueCounts {
    u64 q = 1;
    std::map<u64, ExactSum> by_residue;  // every a in (Z/q)^*
    ExactSum dividing;                   // primes p | q
    ExactSum total;                      // no residue restriction

    double at(u64 a) const;
    // sum over a of by_residue + dividing == total, as exact integers
    bool partition_holds() const;
};

// Bucket the contributing primes of a residue-free report by p mod q.
ResidueCounts residue_counts(const CountReport& unrestricted, u64 q);
ResidueCounts residue_counts(const FieldContext& ctx, const CountQuery& query, u64 q, const SieveCache* cache = nullptr);

struct BVQuery {
    CountQuery base;  // no residue
    double theta = 0.05;
    double A = 1.0;
    std::optional<double> c_hat;
    std::optional<u64> Q_override;

    u64 Q() const;
    std::vector<std::string> validate(const FieldContext& ctx) const;
};

struct BVRow {
    u64 q = 1;
    bool admissible = true;
    bool surrogate = false;
    u64 phi_q = 1;
    double expected = 0.0;
    double max_discrepancy = 0.0;
    u64 argmax_a = 1;
    double count_at_max = 0.0;  // residue count at argmax_a
    double normalized = 0.0;
    bool partition_ok = true;
};

struct BVReport {
    BVQuery query;
    u64 Q = 1;
    double c_hat = 0.0;
    double main_term_scale = 0.0;  // h x^{-(n-1) delta}
    std::vector<BVRow> per_q;
    double total = 0.0;  // admissible q only
    double normalized_total = 0.0;
    double unrestricted_sum = 0.0;
    double prime_power_correction = 0.0;  // reported separately, never folded in
    std::vector<std::string> warnings;
};

BVReport bv_discrepancy(const FieldContext& ctx, const BVQuery& q, const SieveCache* cache = nullptr);

// Same, reusing an unrestricted report for base.
BVReport bv_from_report(const FieldContext& ctx, const BVQuery& q, const CountReport& unrestricted);

struct BVLadder {
    FitResult fit;
    std::vector<BVReport> reports;
};

// Calibrate c on the residue-free counts of the ladder, then scan every rung.
BVLadder bv_ladder(const FieldContext& ctx, const BVQuery& base, const std::vector<double>& xs,
                   const SieveCache* cache = nullptr);

}  // namespace sp
