#pragma once

// Exact arithmetic for quadratic fields K = Q(sqrt(m)): discriminants, units,
// prime splitting, prime ideals and narrow class groups.
//
// Ideals are handled through binary quadratic forms. A form (a, b, c) of
// discriminant D = b^2 - 4ac stands for the ideal
//
//     J(a, b, c) = a Z + ((b + sqrt(D)) / 2) Z,
//
// whose oriented basis (beta1, beta2) = (a, (b + sqrt D)/2) satisfies
// N(x beta1 + y beta2) = a * f(x, y). Proper (SL2) equivalence of forms
// is narrow equivalence of ideals. Reductions keep track of how beta1
// moves; for an ideal A in class C with canonical ideal A_C this yields an
// element gamma with A = (gamma) A_C, recorded through its raw phase:
//
//   imaginary: arg(gamma) in radians (first complex embedding, sqrt(D) = i sqrt|D|)
//   real:      log|gamma / gamma'|  (gamma' the Galois conjugate)

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sectorprimes/int_math.hpp"

namespace sp {

using BigInt = boost::multiprecision::cpp_int;

enum class SplitKind { split, inert, ramified };

std::string to_string(SplitKind kind);

// (a + b sqrt(m)) / den, den in {1, 2}.
struct QuadElem {
    i64 a = 0;
    i64 b = 0;
    int den = 1;
    bool operator==(const QuadElem&) const = default;
};

struct BigQuadElem {
    BigInt a;
    BigInt b;
    int den = 1;
    int norm = 1;
};

struct FieldSpec {
    i64 m = -1;
    i64 disc = -4;
    int r1 = 0;
    int r2 = 1;
    int unit_count = 4;                      // roots of unity, imaginary case only
    std::optional<BigQuadElem> fund_unit;     // real case only
    std::optional<BigQuadElem> tot_pos_unit;  // real case only
    double log_tot_pos_unit = 0.0;            // real case only

    bool imaginary() const { return m < 0; }
    int degree() const { return r1 + 2 * r2; }
};

FieldSpec make_field(i64 m);

struct QuadForm {
    i64 a = 0;
    i64 b = 0;
    i64 c = 0;

    i64 discriminant() const { return b * b - 4 * a * c; }
    bool operator==(const QuadForm&) const = default;
};

std::string to_string(const QuadForm& f);

struct QuadFormHash {
    std::size_t operator()(const QuadForm& f) const noexcept
    {
        u64 h = static_cast<u64>(f.a) * 0x9E3779B97F4A7C15ULL;
        h ^= static_cast<u64>(f.b) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

// Result of reducing a form while tracking the first basis vector.
struct TrackedForm {
    QuadForm form;
    long double phase = 0.0L;  // raw phase of beta1_final / beta1_initial
    // beta_final = beta_initial * basis_change; absent once entries overflow.
    std::optional<std::array<i128, 4>> basis_change;
};

bool is_reduced(const QuadForm& f);

TrackedForm reduce_tracked(const QuadForm& f);

// Ideal product J(f1) J(f2) = scale * J(form). The returned form is not reduced.
struct FormProduct {
    QuadForm form;
    i64 scale = 1;
};
FormProduct compose(const QuadForm& f1, const QuadForm& f2);

struct NarrowClassGroup {
    i64 disc = 0;
    std::vector<QuadForm> forms;    // canonical representative per class
    std::vector<int> comp_table;    // row-major order() x order()
    int identity_idx = 0;
    std::vector<int> inverse;

    // Every reduced form of discriminant disc -> (class, raw phase to walk it onto the
    // canonical form of its class). For imaginary fields the phase is always zero.
    struct Entry {
        int class_idx;
        long double phase;
    };
    std::unordered_map<QuadForm, Entry, QuadFormHash> reduced_lookup;
    std::size_t reduced_form_count = 0;
    // Real case: total raw phase around each class's cycle of reduced forms.
    std::vector<long double> cycle_phase;

    int order() const { return static_cast<int>(forms.size()); }
    int compose_idx(int i, int j) const { return comp_table[static_cast<std::size_t>(i) * forms.size() + j]; }
    int power_idx(int i, i64 k) const;
};

inline constexpr i64 kDefaultDiscBound = 1'000'000;

NarrowClassGroup narrow_class_group(const FieldSpec& field, i64 disc_bound = kDefaultDiscBound);

// Class and raw phase of J(f): J(f) = (gamma) J(canonical form of class).
struct ClassInfo {
    int class_idx = 0;
    long double phase = 0.0L;
    std::optional<std::array<i128, 4>> basis_change;
    QuadForm reduced;
};
ClassInfo classify_form(const NarrowClassGroup& group, const QuadForm& f);

// A_i * A_j = (scale) (gamma) A_{i*j} for canonical ideals.
ClassInfo class_product(const NarrowClassGroup& group, int i, int j);

struct PrimeIdealRec {
    u64 p = 0;
    u64 norm = 0;
    SplitKind kind = SplitKind::split;
    QuadForm form;      // primitive part; the ideal is scale * J(form)
    u64 scale = 1;      // p for inert primes, else 1
    int branch = 0;     // 0 or 1 for the two split ideals over p
    int class_idx = 0;
    long double phase = 0.0L;            // raw phase of gamma in (ideal) = (gamma) A_class
    std::optional<QuadElem> generator;   // when narrowly principal and representable
};

SplitKind split_type(const FieldSpec& field, u64 p);

std::vector<PrimeIdealRec> primes_over(const FieldSpec& field, const NarrowClassGroup& group, u64 p);

int class_of(const NarrowClassGroup& group, const PrimeIdealRec& ideal);

PrimeIdealRec galois_conjugate(const FieldSpec& field, const NarrowClassGroup& group, const PrimeIdealRec& ideal);

// Prime ideal record for the ideal J(form) of prime norm p (or the inert ideal (p)).
PrimeIdealRec make_prime_ideal(const FieldSpec& field, const NarrowClassGroup& group, u64 p, SplitKind kind,
                               const QuadForm& form, int branch);

// Exact norm of (a + b sqrt m)/den.
i128 norm(const FieldSpec& field, const QuadElem& x);

// Embeddings of (a + b sqrt m)/den: real case returns (x, x'), imaginary case (Re, Im).
std::array<long double, 2> embed(const FieldSpec& field, const QuadElem& x);

QuadElem multiply(const FieldSpec& field, const QuadElem& x, const QuadElem& y);
QuadElem conjugate(const QuadElem& x);

double big_log(const BigInt& x);

}  // namespace sp
