#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sectorprimes/selberg.hpp"
#include "sectorprimes/torus.hpp"

namespace sp {

// Convex piece of a polytope: an axis-aligned box [lo, hi], or (d = 2) a
// convex polygon given by counter-clockwise vertices.
struct ConvexPiece {
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<std::array<double, 2>> polygon;

    bool is_box() const { return polygon.empty(); }
    double volume() const;
    bool contains(const double* y) const;  // closed
};

ConvexPiece make_box(std::vector<double> lo, std::vector<double> hi);
ConvexPiece make_polygon(std::vector<std::array<double, 2>> vertices);

// Region origin + dilation * base on T^d; base is the fixed polytope in local
// coordinates, a union of convex pieces overlapping only on boundaries.
struct PolytopeSpec {
    int dim = 1;
    std::vector<ConvexPiece> base;
    AngleVec origin;
    double dilation = 1.0;
    bool empty = false;

    double base_volume() const;
    double volume() const;
    double base_boundary() const;  // perimeter (d = 2), endpoint count (d = 1), surface area (boxes)
    bool contains_local(const double* y) const;
    bool contains(const AngleVec& phi) const;
};

struct CubeTiling {
    int dim = 1;
    double kappa0 = 0.0;
    std::vector<std::array<std::int64_t, 3>> inner;  // grid cells [k kappa0, (k+1) kappa0]^d inside the base
    std::vector<std::array<std::int64_t, 3>> outer;  // cells meeting the base in positive measure
    double inner_volume = 0.0;
    double outer_volume = 0.0;
    double base_volume = 0.0;

    double inner_error() const { return base_volume - inner_volume; }
    double outer_error() const { return outer_volume - base_volume; }
};

CubeTiling tile(const PolytopeSpec& poly, double kappa0);

// Dense Fourier coefficient map on [-M, M]^d.
struct CoeffMap {
    int dim = 1;
    int M = 0;
    std::vector<std::complex<double>> data;

    std::size_t index(const int* m) const;
    std::complex<double> at(const int* m) const { return data[index(m)]; }
    std::complex<double> zero() const;
    double eval(const AngleVec& phi) const;
    void write_csv(std::ostream& os) const;
};

inline constexpr std::size_t kMaxCoeffEntries = 50'000'000;

// Sum over the tiling's cubes (inner for the minorant, outer for the majorant)
// of translated Selberg polynomials, placed on the torus by the polytope's
// origin and dilation.
CoeffMap box_sum(const PolytopeSpec& poly, const CubeTiling& tiling, int M, Sign sign,
                 std::size_t max_entries = kMaxCoeffEntries);

}  // namespace sp
