#include "sectorprimes/selberg.hpp"

#include <cmath>
#include <numbers>

#include "sectorprimes/errors.hpp"

namespace sp {

namespace {

constexpr double kPi = std::numbers::pi;

// e(-k t) with the phase reduced mod 1 first
cplx expo_neg(long k, double t)
{
    const double ph = std::fmod(static_cast<double>(k) * t, 1.0);
    return std::polar(1.0, -2.0 * kPi * ph);
}

double eval_1d(const std::vector<cplx>& c, int M, double phi)
{
    // real trig polynomial: c0 + 2 Re sum_{k>0} c_k e(k phi)
    const cplx step = std::polar(1.0, 2.0 * kPi * phi);
    cplx w = step;
    double acc = c[M].real();
    for (int k = 1; k <= M; ++k) {
        acc += 2.0 * (c[M + k] * w).real();
        w *= step;
        if ((k & 63) == 0) w = std::polar(1.0, 2.0 * kPi * std::fmod(static_cast<double>(k + 1) * phi, 1.0));
    }
    return acc;
}

}  // namespace

std::vector<cplx> selberg_1d(int M, double a, double b, Sign sign)
{
    if (M < 1) throw InvalidInput("selberg: degree M must be >= 1");
    if (!(b - a > 0.0 && b - a < 1.0)) throw InvalidInput("selberg: need 0 < b - a < 1");
    const double np1 = M + 1.0;
    const double pm = sign == Sign::majorant ? 1.0 : -1.0;
    std::vector<cplx> c(2 * M + 1);
    c[M] = (b - a) + pm / np1;
    const cplx two_i(0.0, 2.0);
    for (int k = 1; k <= M; ++k) {
        const double t = k / np1;
        const double J = kPi * t * (1.0 - t) / std::tan(kPi * t) + t;
        const double vk = -J / (kPi * k);
        const cplx ea = expo_neg(k, a);
        const cplx eb = expo_neg(k, b);
        const cplx val = vk * (eb - ea) / two_i + pm * (1.0 - t) / (2.0 * np1) * (ea + eb);
        c[M + k] = val;
        c[M - k] = std::conj(val);
    }
    return c;
}

double SelbergApprox::volume() const { return std::pow(kappa, dim); }

cplx SelbergApprox::coeff(const int* m) const
{
    cplx prod_major = 1.0;
    for (int j = 0; j < dim; ++j) {
        if (m[j] < -M || m[j] > M) return 0.0;
        prod_major *= major[j][m[j] + M];
    }
    if (sign == Sign::majorant) return prod_major;
    cplx acc = -(dim - 1.0) * prod_major;
    for (int j = 0; j < dim; ++j) {
        cplx term = minor[j][m[j] + M];
        for (int i = 0; i < dim; ++i) {
            if (i != j) term *= major[i][m[i] + M];
        }
        acc += term;
    }
    bool zero = true;
    for (int j = 0; j < dim; ++j) zero = zero && m[j] == 0;
    if (zero) acc -= shift;
    return acc;
}

cplx SelbergApprox::zero_coeff() const
{
    std::vector<int> z(dim, 0);
    return coeff(z.data());
}

double SelbergApprox::eval(const double* phi) const
{
    std::vector<double> maj(dim);
    double prod = 1.0;
    for (int j = 0; j < dim; ++j) {
        maj[j] = eval_1d(major[j], M, phi[j]);
        prod *= maj[j];
    }
    if (sign == Sign::majorant) return prod;
    double acc = -(dim - 1.0) * prod - shift;
    for (int j = 0; j < dim; ++j) {
        double term = eval_1d(minor[j], M, phi[j]);
        for (int i = 0; i < dim; ++i) {
            if (i != j) term *= maj[i];
        }
        acc += term;
    }
    return acc;
}

bool SelbergApprox::indicator(const double* phi) const
{
    for (int j = 0; j < dim; ++j) {
        double r = std::fmod(phi[j] - corner[j], 1.0);
        if (r < 0) r += 1.0;
        if (r > kappa) return false;
    }
    return true;
}

SelbergApprox selberg_box(int M, const std::vector<double>& corner, double kappa, Sign sign)
{
    const int d = static_cast<int>(corner.size());
    if (d < 1 || d > 3) throw InvalidInput("selberg_box: dimension " + std::to_string(d) + " unsupported (1..3)");
    if (!(kappa > 0.0 && kappa < 1.0)) throw InvalidInput("selberg_box: side must lie in (0, 1)");
    SelbergApprox s;
    s.dim = d;
    s.M = M;
    s.kappa = kappa;
    s.sign = sign;
    s.corner = corner;
    for (int j = 0; j < d; ++j) {
        s.major.push_back(selberg_1d(M, corner[j], corner[j] + kappa, Sign::majorant));
        if (sign == Sign::minorant) s.minor.push_back(selberg_1d(M, corner[j], corner[j] + kappa, Sign::minorant));
    }
    if (sign == Sign::minorant) {
        // lowers the product-sum minorant onto the exact zero-coefficient defect; nonzero only for d = 3
        const double dl = 1.0 / (M + 1.0);
        const double sum_prod = d * (kappa - dl) * std::pow(kappa + dl, d - 1) - (d - 1.0) * std::pow(kappa + dl, d);
        s.shift = sum_prod - (std::pow(kappa, d) - minorant_defect(d, kappa, M));
        if (s.shift < 0.0 && s.shift > -1e-15) s.shift = 0.0;
        if (s.shift < 0.0) throw InvariantViolation("selberg_box: negative minorant shift");
    }
    return s;
}

SelbergApprox selberg_interval(int M, double a, double b, Sign sign)
{
    if (!(b - a > 0.0 && b - a < 1.0)) throw InvalidInput("selberg_interval: need 0 < b - a < 1");
    return selberg_box(M, {a}, b - a, sign);
}

double majorant_defect(int d, double kappa, int M)
{
    const double dl = 1.0 / (M + 1.0);
    return std::pow(kappa + dl, d) - std::pow(kappa, d);
}

double minorant_defect(int d, double kappa, int M)
{
    const double dl = 1.0 / (M + 1.0);
    return std::pow(kappa + 2.0 * dl, d) - std::pow(kappa + dl, d);
}

double coeff_bound_shape(int d, double kappa, int M, const int* m)
{
    double first = std::max(std::pow(kappa, d - 1) / M, std::pow(static_cast<double>(M), -d));
    double prod = 1.0;
    for (int j = 0; j < d; ++j) prod *= (m[j] == 0) ? kappa : std::min(kappa, 1.0 / std::abs(m[j]));
    return first + prod;
}

CoeffBoundReport coeff_bound_check(const SelbergApprox& approx, double limit)
{
    CoeffBoundReport rep;
    rep.limit = limit;
    const int d = approx.dim, M = approx.M;
    std::vector<int> m(d, -M);
    rep.argmax.assign(d, 0);
    for (;;) {
        const double r = std::abs(approx.coeff(m.data())) / coeff_bound_shape(d, approx.kappa, M, m.data());
        if (r > rep.max_ratio) {
            rep.max_ratio = r;
            rep.argmax = m;
        }
        int j = 0;
        while (j < d && m[j] == M) m[j++] = -M;
        if (j == d) break;
        ++m[j];
    }
    rep.within_limit = rep.max_ratio <= limit;
    return rep;
}

}  // namespace sp
