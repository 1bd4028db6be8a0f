#pragma once

#include <complex>
#include <vector>

#include "sectorprimes/window.hpp"

namespace sp {

using cplx = std::complex<double>;

// Fourier coefficients k = -M..M (index k + M) of the Selberg majorant or
// minorant of the indicator of [a, b] on R/Z, built from Vaaler's polynomial.
std::vector<cplx> selberg_1d(int M, double a, double b, Sign sign);

// Trigonometric majorant/minorant of a cube B = prod [corner_j, corner_j + kappa] in T^d.
// The majorant is the product of one-dimensional majorants; the minorant is
// sum_j minor_j prod_{i != j} major_i - (d-1) prod major_i - shift.
struct SelbergApprox {
    int dim = 1;
    int M = 1;
    double kappa = 0.0;
    Sign sign = Sign::majorant;
    std::vector<double> corner;
    std::vector<std::vector<cplx>> major;  // per axis
    std::vector<std::vector<cplx>> minor;  // per axis, minorant only
    double shift = 0.0;

    double volume() const;
    cplx coeff(const int* m) const;
    cplx zero_coeff() const;
    double eval(const double* phi) const;
    bool indicator(const double* phi) const;  // closed box on the torus
};

SelbergApprox selberg_interval(int M, double a, double b, Sign sign);
SelbergApprox selberg_box(int M, const std::vector<double>& corner, double kappa, Sign sign);

// Closed forms of the zero coefficient defects: f^+(0) - vol and vol - f^-(0).
double majorant_defect(int d, double kappa, int M);
double minorant_defect(int d, double kappa, int M);

// Shape max(kappa^(d-1)/M, M^-d) + prod min(kappa, 1/|m_j|) of the coefficient bound.
double coeff_bound_shape(int d, double kappa, int M, const int* m);

struct CoeffBoundReport {
    double max_ratio = 0.0;
    std::vector<int> argmax;
    double limit = 10.0;
    bool within_limit = true;
};
CoeffBoundReport coeff_bound_check(const SelbergApprox& approx, double limit = 10.0);

}  // namespace sp
