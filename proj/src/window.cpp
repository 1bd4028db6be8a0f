#include "sectorprimes/window.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sectorprimes/errors.hpp"

namespace sp {

namespace {

using cplx = std::complex<double>;

// (e^z - 1) / z without cancellation near 0
cplx expm1_over_z(cplx z)
{
    if (std::abs(z) < 1e-6) return 1.0 + z / 2.0 + z * z / 6.0;
    const double a = z.real(), b = z.imag();
    const double sb2 = std::sin(0.5 * b);
    const cplx em1(std::expm1(a) * std::cos(b) - 2.0 * sb2 * sb2, std::exp(a) * std::sin(b));
    return em1 / z;
}

cplx cpow_real(double y, cplx e) { return std::exp(e * std::log(y)); }

}  // namespace

const char* to_string(Sign s) { return s == Sign::minorant ? "minorant" : "majorant"; }

double transition(double y)
{
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    const double e = 1.0 / y - 1.0 / (1.0 - y);
    return 1.0 / (1.0 + std::exp(e));
}

void SmoothWindow::validate() const
{
    if (!(x >= 2.0)) throw InvalidInput("window: x must be >= 2");
    if (!(h > 0.0)) throw InvalidInput("window: h must be positive");
    if (!(u > 0.0)) throw InvalidInput("window: u must be positive");
    if (sign == Sign::minorant && 2.0 * u > h) throw InvalidInput("window: minorant needs 2u <= h");
    if (sign == Sign::majorant && u >= x) throw InvalidInput("window: majorant needs u < x");
}

std::array<double, 4> SmoothWindow::knots() const
{
    if (sign == Sign::minorant) return {x, x + u, x + h - u, x + h};
    return {x - u, x, x + h, x + h + u};
}

double window_eval(const SmoothWindow& w, double y)
{
    const auto k = w.knots();
    if (y <= k[0] || y >= k[3]) return 0.0;
    if (y < k[1]) return transition((y - k[0]) / w.u);
    if (y <= k[2]) return 1.0;
    return transition((k[3] - y) / w.u);
}

MellinResult mellin(const SmoothWindow& w, cplx s, double tol)
{
    w.validate();
    if (!(tol > 0.0)) throw InvalidInput("mellin: tol must be positive");
    if (s.real() > 2.0) throw InvalidInput("mellin: Re s must be <= 2");
    const auto k = w.knots();
    const cplx sm1 = s - 1.0;

    // plateau [k1, k2] in closed form: k1^s (e^{sL} - 1)/s with L = log(k2/k1)
    const double L = std::log(k[2] / k[1]);
    const cplx plateau = cpow_real(k[1], s) * L * expm1_over_z(s * L);

    auto rise = [&](double tau) -> cplx { return transition(tau) * cpow_real(k[0] + w.u * tau, sm1) * w.u; };
    auto fall = [&](double tau) -> cplx { return transition(tau) * cpow_real(k[3] - w.u * tau, sm1) * w.u; };

    // ramp integrands are bounded by u * max(y^(sigma-1)) on the ramp
    const double ramp_mag = w.u * std::max(std::pow(k[0], s.real() - 1.0), std::pow(k[3], s.real() - 1.0));
    const double scale = std::abs(plateau) + 2.0 * ramp_mag;
    const double floor_tol = 64.0 * std::numeric_limits<double>::epsilon() * scale;
    const double eff_tol = std::max(tol, floor_tol);

    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    MellinResult out;
    out.effective_tol = eff_tol;
    cplx total = plateau;
    double err_total = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(plateau);
    for (int side = 0; side < 2; ++side) {
        double l1 = 0.0, err = 0.0;
        cplx val;
        // relative tolerance in terms of the L1 norm of the integrand
        const double rel = std::max(0.25 * eff_tol / std::max(ramp_mag, 1e-300), 1e-15);
        if (side == 0) {
            val = GK::integrate(rise, 0.0, 1.0, 30, rel, &err, &l1);
        } else {
            val = GK::integrate(fall, 0.0, 1.0, 30, rel, &err, &l1);
        }
        total += val;
        err_total += err;
    }
    out.value = total;
    out.error_estimate = err_total;
    if (!(err_total <= eff_tol)) {
        throw ResourceError("mellin: quadrature did not converge; achieved accuracy " + std::to_string(err_total) +
                            " vs requested " + std::to_string(eff_tol));
    }
    return out;
}

DecayProfile mellin_decay_profile(const SmoothWindow& w, const std::vector<double>& sigmas,
                                  const std::vector<double>& ts, double tol)
{
    DecayProfile prof;
    prof.sigmas = sigmas;
    prof.ts = ts;
    prof.constants.fill(0.0);
    for (double sigma : sigmas) {
        for (double t : ts) {
            const cplx s(sigma, t);
            const double g = std::abs(mellin(w, s, tol).value);
            for (int l = 0; l <= 3; ++l) {
                const double bound_shape = std::pow(w.u, -l) * std::pow(1.0 + std::abs(s), -l) * w.h *
                                           std::pow(w.x, sigma + l - 1.0);
                prof.constants[l] = std::max(prof.constants[l], g / bound_shape);
            }
        }
    }
    return prof;
}

std::array<double, 2> derivative_constants(const SmoothWindow& w, int samples)
{
    const auto k = w.knots();
    std::array<double, 2> best{0.0, 0.0};
    const double h1 = 1e-4 * w.u;
    const double h2 = 1e-3 * w.u;
    for (int ramp = 0; ramp < 2; ++ramp) {
        const double lo = ramp == 0 ? k[0] : k[2];
        for (int i = 1; i < samples; ++i) {
            const double y = lo + w.u * static_cast<double>(i) / samples;
            const double d1 = (window_eval(w, y + h1) - window_eval(w, y - h1)) / (2.0 * h1);
            const double d2 = (window_eval(w, y + h2) - 2.0 * window_eval(w, y) + window_eval(w, y - h2)) / (h2 * h2);
            best[0] = std::max(best[0], std::fabs(d1) * w.u);
            best[1] = std::max(best[1], std::fabs(d2) * w.u * w.u);
        }
    }
    return best;
}

}  // namespace sp
