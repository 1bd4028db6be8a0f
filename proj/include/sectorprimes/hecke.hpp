#pragma once

// Infinite-order Hecke character of a quadratic field and its angle map.
//
// On a principal ideal (alpha) with alpha totally positive:
//   imaginary: lambda = (alpha/|alpha|)^g,     g = number of roots of unity
//   real:      lambda = |alpha/alpha'|^{i v},  v = pi / log(eps+)
// and phi is defined by lambda = e(phi). Non-principal classes are pinned by
// anchor values on the canonical ideal of each class, chosen so that phi is a
// genuine character on the whole ideal group (see make_hecke_basis).

#include <string>
#include <vector>

#include "sectorprimes/quadfield.hpp"
#include "sectorprimes/tiling.hpp"
#include "sectorprimes/torus.hpp"

namespace sp {

// Echelon generator: class_idx has relative order `order` over the classes
// pinned before it, and its anchor is the branch of (target value)/order in [0, 1/order).
struct AnchorGenerator {
    int class_idx = 0;
    int order = 1;
    int power_class = 0;  // class of class_idx^order, already pinned
    double branch = 0.0;
};

struct HeckeBasis {
    int dim = 1;
    bool imaginary = true;
    int exponent = 0;           // g, imaginary case
    double v = 0.0;             // real case
    double phase_scale = 0.0;   // raw phase -> turns
    double half_turn_unit = 0.0;  // real case: turns added by a unit of norm -1
    std::vector<double> anchors;  // angle of the canonical ideal of each class
    std::vector<AnchorGenerator> generators;
    double consistency_residual = 0.0;
};

HeckeBasis make_hecke_basis(const FieldSpec& field, const NarrowClassGroup& group);

double angle_from_phase(const HeckeBasis& basis, int class_idx, long double raw_phase);

AngleVec angle_of(const HeckeBasis& basis, const PrimeIdealRec& ideal);

// Angle of J(form), form.a > 0.
AngleVec angle_of_form(const NarrowClassGroup& group, const HeckeBasis& basis, const QuadForm& form);

// Angle of the principal ideal (x). Real case: x must have a totally positive
// associate (positive norm, or a fundamental unit of norm -1).
AngleVec angle_of_element(const FieldSpec& field, const HeckeBasis& basis, const QuadElem& x);

enum class Automorphism { identity, conjugation };

std::string to_string(Automorphism a);

PrimeIdealRec apply_automorphism(const FieldSpec& field, const NarrowClassGroup& group, const PrimeIdealRec& ideal,
                                 Automorphism sigma);

struct PullbackMatrix {
    int dim = 1;
    std::vector<int> entries{1};
    double residual = 0.0;
};

// Integer X with phi(sigma(a)) = X phi(a) mod 1, recovered on principal generators.
PullbackMatrix character_pullback(const FieldSpec& field, const HeckeBasis& basis, Automorphism sigma);

enum class ScaleMode { per_prime, fixed_x };

std::string to_string(ScaleMode m);

struct SectorSpec {
    AngleVec phi0;
    double delta = 0.0;
    ScaleMode mode = ScaleMode::per_prime;
    double ref_x = 0.0;  // fixed_x mode

    double radius(double norm) const;
    // Throws on delta < 0 or delta >= 1/2; returns warnings (delta above 2/(5n)).
    std::vector<std::string> validate(int degree) const;
};

bool in_sector(const AngleVec& angle, const SectorSpec& spec, double norm);

// Region {phi : |phi0 - X_j phi| < x^-delta for every pullback X_j} as a
// dilation of a fixed union of intervals around phi0 (d = 1).
PolytopeSpec sector_polytope(const SectorSpec& spec, const std::vector<PullbackMatrix>& pullbacks, double x);

}  // namespace sp
