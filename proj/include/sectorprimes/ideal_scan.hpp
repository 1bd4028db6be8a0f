#pragma once

#include <vector>

#include "sectorprimes/hecke.hpp"
#include "sectorprimes/quadfield.hpp"
#include "sectorprimes/sieve.hpp"

namespace sp {

// Field, narrow class group, angle map and Galois pullbacks, built once.
struct FieldContext {
    FieldSpec field;
    NarrowClassGroup group;
    HeckeBasis basis;
    std::vector<Automorphism> automorphisms;  // identity first
    std::vector<PullbackMatrix> pullbacks;    // aligned with automorphisms

    static FieldContext make(i64 m, i64 disc_bound = kDefaultDiscBound);
    int degree() const { return field.degree(); }
    int class_count() const { return group.order(); }
};

// Norm, class and angle of an ideal.
struct IdealImage {
    u64 norm = 0;
    int class_idx = 0;
    double angle = 0.0;
};

struct PrimeIdeals {
    u64 p = 0;
    SplitKind kind = SplitKind::split;
    std::vector<PrimeIdealRec> ideals;
    std::vector<double> angles;
    // images[i][j]: ideal i moved by automorphism j; filled on request
    std::vector<std::vector<IdealImage>> images;
};

PrimeIdeals scan_prime(const FieldContext& ctx, u64 p, bool with_images = false);

struct IntervalScan {
    u64 lo = 0;
    u64 hi = 0;
    std::vector<PrimeIdeals> primes;  // every rational prime of [lo, hi), ramified ones included
    bool cache_hit = false;
};

// Sieve [lo, hi) and run primes_over on every prime. Work is split into
// contiguous blocks, one per thread; results are stored by index.
IntervalScan scan_interval(const FieldContext& ctx, u64 lo, u64 hi, const SieveCache* cache, int threads,
                           bool with_images = false);

int resolve_threads(int threads);

// A prime-power ideal p^k with N = norm and von Mangoldt weight log N(p).
struct PowerIdeal {
    u64 p = 0;
    int k = 1;
    u64 norm = 0;
    int class_idx = 0;
    double angle = 0.0;
    double lambda = 0.0;
};

// Prime-power ideals with norm in [lo, hi) that are not prime ideals of prime
// norm: powers p^k, k >= 2, of degree-one primes and powers of inert primes.
// Ramified primes are skipped.
std::vector<PowerIdeal> higher_prime_powers(const FieldContext& ctx, u64 lo, u64 hi);

}  // namespace sp
