#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sectorprimes/exact_sum.hpp"
#include "sectorprimes/ideal_scan.hpp"
#include "sectorprimes/selberg.hpp"
#include "sectorprimes/tiling.hpp"
#include "sectorprimes/window.hpp"

namespace sp {

struct Residue {
    u64 a = 0;
    u64 q = 1;
};

enum class Weight { log_p, von_mangoldt };

std::string to_string(Weight w);

struct CountQuery {
    int class_idx = 0;
    SectorSpec sector;
    double x = 0.0;
    double h = 0.0;
    double delta_prime = 0.0;
    std::optional<Residue> residue;
    Weight weight = Weight::log_p;
    bool record_primes = false;
    int threads = 0;

    // h = x^(1 - delta_prime)
    static CountQuery standard(int class_idx, SectorSpec sector, double x, double delta_prime);

    u64 lo() const;  // first integer >= x
    u64 hi() const;  // first integer >= x + h
    // Throws InvalidInput on hard violations, returns warnings otherwise.
    std::vector<std::string> validate(const FieldContext& ctx) const;
};

// One degree-one prime ideal of the interval, for per-prime listings.
struct IdealRow {
    u64 p = 0;
    u64 norm = 0;
    int class_idx = 0;
    double angle = 0.0;
    bool in_sector = false;  // angle condition alone
    bool witness = false;    // class, norm and angle conditions
    QuadForm form;
};

struct CountReport {
    CountQuery query;
    double weighted_sum = 0.0;
    ExactSum exact;
    u64 count = 0;               // contributing primes
    u64 primes_in_interval = 0;  // pi(x + h) - pi(x)
    std::vector<u64> ramified_skipped;
    std::vector<u64> contributing;  // primes counted, ascending
    std::vector<IdealRow> per_prime;
    std::optional<double> main_term_prediction;
    std::optional<double> ratio;
    std::vector<std::string> warnings;
    bool cache_hit = false;
};

// Existence condition for one prime: some ideal over p has norm p, the class
// and an angle inside the sector.
bool prime_in_sector_class(const PrimeIdeals& pi, int class_idx, const SectorSpec& sector);

// Sum of log p over the primes of the scan satisfying the query (the scan must
// cover [query.lo(), query.hi())).
CountReport sector_sum_on_scan(const FieldContext& ctx, const IntervalScan& scan, const CountQuery& query);

CountReport sector_prime_sum(const FieldContext& ctx, const CountQuery& query, const SieveCache* cache = nullptr);

// Fill main_term_prediction = c * x^{-(n-1) delta} h / |I| and the ratio.
void calibrate(CountReport& report, const FieldContext& ctx, double c_hat);

struct IdentityResult {
    u64 p = 0;
    int lhs = 0;
    i64 rhs_num = 0;  // rhs = rhs_num / rhs_den
    i64 rhs_den = 1;
    std::vector<i64> subset_terms;  // per non-empty automorphism subset, bitmask order

    bool integral() const { return rhs_num % rhs_den == 0; }
    bool holds() const { return integral() && rhs_num / rhs_den == lhs && (lhs == 0 || lhs == 1); }
};

// Inclusion-exclusion over automorphism subsets. `pi` must carry images.
IdentityResult inclusion_exclusion_identity(const FieldContext& ctx, const PrimeIdeals& pi, int class_idx,
                                            const SectorSpec& sector);
IdentityResult inclusion_exclusion_identity(const FieldContext& ctx, u64 p, int class_idx, const SectorSpec& sector);

struct VonMangoldtReport {
    double value = 0.0;             // sum of Lambda over qualifying ideals
    double prime_ideal_sum = 0.0;   // degree-one prime ideals only (each ideal counted)
    double power_part = 0.0;        // value - prime_ideal_sum
    double sector_prime_sum = 0.0;  // existence-weighted log p sum over primes
    u64 power_terms = 0;
    double bound_scale = 0.0;  // x^(1/2) log x
    double ratio = 0.0;        // |power_part| / bound_scale
    ExactSum exact;
};

// Lambda condition on an ideal with norm N, class and angle.
bool ideal_qualifies(const CountQuery& q, u64 norm, int class_idx, double angle);

VonMangoldtReport von_mangoldt_sum(const FieldContext& ctx, const CountQuery& query, const SieveCache* cache = nullptr);

// sigma_j^{-1}(I) for every sigma; the common class if it is constant.
std::optional<int> galois_class_constancy(const FieldContext& ctx, int class_idx,
                                          const std::vector<Automorphism>& sigmas);

struct SmoothedQuery {
    CountQuery base;  // sector mode is ignored: the region uses the radius x^-delta
    std::vector<Automorphism> sigmas{Automorphism::identity};
    double u = 0.0;
    int M = 50;
    double kappa0 = 0.05;
    double mellin_tol = 1e-8;
};

struct SmoothedSumReport {
    double lower = 0.0;
    double exact = 0.0;
    double upper = 0.0;
    ExactSum lower_sum, exact_sum, upper_sum;
    double main_term_lower = 0.0;  // F^-(0) G^-(1) / |I|
    double main_term_upper = 0.0;  // F^+(0) G^+(1) / |I|
    double F0_lower = 0.0, F0_upper = 0.0;
    double G1_lower = 0.0, G1_upper = 0.0;
    double region_volume = 0.0;
    std::optional<int> effective_class;
    u64 ideals_scanned = 0;
};

// Sandwich of the sum of Lambda over ideals of class I' in the region between
// smooth windowed sums built from coefficient maps.
SmoothedSumReport smoothed_sum(const FieldContext& ctx, const SmoothedQuery& q, const SieveCache* cache = nullptr);

// Same, with explicit ingredients: a null coefficient map is F = 1, a null
// window the exact indicator of [x, x+h), a null region the whole torus.
SmoothedSumReport smoothed_sum_with(const FieldContext& ctx, const SmoothedQuery& q, const CoeffMap* F_lower,
                                    const CoeffMap* F_upper, const SmoothWindow* g_lower,
                                    const SmoothWindow* g_upper, const PolytopeSpec* region,
                                    const SieveCache* cache = nullptr);

double main_term(double F0, double G1, int class_count);

// Parameter shapes for the smoothed sums: tau = 0.9 * 2/(5n), tau' halfway
// between max(delta, delta') and tau, u = x^(1 - tau') capped at h/4,
// M = ceil(x^tau), kappa0 = (log x)^-(A+1).
struct SmoothingDefaults {
    double tau = 0.0;
    double tau_prime = 0.0;
    double u = 0.0;
    int M = 1;
    double kappa0 = 0.0;
};
SmoothingDefaults default_smoothing(double x, double h, double delta, double delta_prime, double A, int degree);

struct FitPoint {
    double x = 0.0;
    double h = 0.0;
    double sum = 0.0;
    double scale = 0.0;  // x^{-(n-1) delta} h / |I|
    double ratio = 0.0;  // sum / scale
    double residual = 0.0;
};

struct FitResult {
    double c_hat = 0.0;
    std::vector<FitPoint> points;
};

// Least-squares c in sum = c * scale.
FitResult fit_points(std::vector<FitPoint> points);

FitResult asymptotic_fit(const FieldContext& ctx, int class_idx, const AngleVec& phi0, double delta,
                         double delta_prime, const std::vector<double>& xs, const SieveCache* cache = nullptr,
                         int threads = 0);

}  // namespace sp
