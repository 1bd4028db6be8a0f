#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace sp {

inline double wrap01(double t)
{
    double r = t - std::floor(t);
    return r >= 1.0 ? 0.0 : r;
}

// distance from t to the nearest integer
inline double circle_dist(double a, double b)
{
    double d = std::fabs(wrap01(a - b));
    return std::min(d, 1.0 - d);
}

// Point of T^d, d <= 3, coordinates kept in [0, 1).
struct AngleVec {
    std::array<double, 3> coords{0.0, 0.0, 0.0};
    int dim = 1;

    AngleVec() = default;
    explicit AngleVec(double t) : dim(1) { coords[0] = wrap01(t); }
    AngleVec(std::initializer_list<double> xs) : dim(static_cast<int>(xs.size()))
    {
        if (xs.size() == 0 || xs.size() > 3) throw std::invalid_argument("AngleVec: dimension must be 1..3");
        int i = 0;
        for (double x : xs) coords[i++] = wrap01(x);
    }

    double operator[](int i) const { return coords[i]; }
};

inline double torus_dist(const AngleVec& a, const AngleVec& b)
{
    if (a.dim != b.dim) throw std::invalid_argument("torus_dist: dimension mismatch");
    double best = 0.0;
    for (int i = 0; i < a.dim; ++i) best = std::max(best, circle_dist(a.coords[i], b.coords[i]));
    return best;
}

}  // namespace sp
