#pragma once

#include <array>
#include <complex>
#include <vector>

namespace sp {

enum class Sign { minorant, majorant };

const char* to_string(Sign s);

// Smooth step from 0 to 1 on (0, 1); 0 and 1 outside.
double transition(double y);

// Smooth minorant (sign = minorant) or majorant of the indicator of [x, x+h).
struct SmoothWindow {
    double x = 0.0;
    double h = 0.0;
    double u = 0.0;
    Sign sign = Sign::majorant;

    void validate() const;
    double support_lo() const { return sign == Sign::minorant ? x : x - u; }
    double support_hi() const { return sign == Sign::minorant ? x + h : x + h + u; }
    // Ends of the two transition ramps: [k0, k1] rising, [k2, k3] falling.
    std::array<double, 4> knots() const;
};

double window_eval(const SmoothWindow& w, double y);

struct MellinResult {
    std::complex<double> value;
    double error_estimate = 0.0;
    double effective_tol = 0.0;  // tol, raised to the double resolution of |value| when needed
};

// G(s) = int_0^inf g(y) y^(s-1) dy to absolute accuracy tol.
MellinResult mellin(const SmoothWindow& w, std::complex<double> s, double tol);

// Measured constants C_l in |G(sigma+it)| <= C_l u^-l (1+|s|)^-l h x^(sigma+l-1).
struct DecayProfile {
    std::vector<double> sigmas;
    std::vector<double> ts;
    std::array<double, 4> constants{};  // l = 0..3
};
DecayProfile mellin_decay_profile(const SmoothWindow& w, const std::vector<double>& sigmas,
                                  const std::vector<double>& ts, double tol);

// Largest |g^(l)(y)| u^l over the support for l = 1, 2, by central differences.
std::array<double, 2> derivative_constants(const SmoothWindow& w, int samples);

}  // namespace sp
