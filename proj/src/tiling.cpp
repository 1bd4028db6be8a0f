#include "sectorprimes/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "sectorprimes/errors.hpp"

namespace sp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 1e-12;

double cross(const std::array<double, 2>& o, const std::array<double, 2>& a, const std::array<double, 2>& b)
{
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// positive-measure overlap of the cell [lo, lo + side]^d with a piece
bool overlaps(const ConvexPiece& piece, const double* lo, double side, int dim)
{
    const double tol = kEps * std::max(1.0, side);
    if (piece.is_box()) {
        for (int j = 0; j < dim; ++j) {
            const double ov = std::min(piece.hi[j], lo[j] + side) - std::max(piece.lo[j], lo[j]);
            if (ov <= tol) return false;
        }
        return true;
    }
    // separating axis test for polygon vs square
    std::vector<std::array<double, 2>> axes{{1.0, 0.0}, {0.0, 1.0}};
    const auto& P = piece.polygon;
    for (std::size_t i = 0; i < P.size(); ++i) {
        const auto& a = P[i];
        const auto& b = P[(i + 1) % P.size()];
        axes.push_back({b[1] - a[1], a[0] - b[0]});
    }
    const std::array<std::array<double, 2>, 4> cell{{{lo[0], lo[1]},
                                                     {lo[0] + side, lo[1]},
                                                     {lo[0] + side, lo[1] + side},
                                                     {lo[0], lo[1] + side}}};
    for (const auto& ax : axes) {
        const double len = std::hypot(ax[0], ax[1]);
        if (len == 0.0) continue;
        double pmin = std::numeric_limits<double>::infinity(), pmax = -pmin;
        double cmin = pmin, cmax = -pmin;
        for (const auto& v : P) {
            const double t = (v[0] * ax[0] + v[1] * ax[1]) / len;
            pmin = std::min(pmin, t);
            pmax = std::max(pmax, t);
        }
        for (const auto& v : cell) {
            const double t = (v[0] * ax[0] + v[1] * ax[1]) / len;
            cmin = std::min(cmin, t);
            cmax = std::max(cmax, t);
        }
        if (std::min(pmax, cmax) - std::max(pmin, cmin) <= tol) return false;
    }
    return true;
}

bool cell_inside(const ConvexPiece& piece, const double* lo, double side, int dim)
{
    const int corners = 1 << dim;
    for (int mask = 0; mask < corners; ++mask) {
        double v[3];
        for (int j = 0; j < dim; ++j) v[j] = lo[j] + ((mask >> j) & 1 ? side : 0.0);
        if (!piece.contains(v)) return false;
    }
    return true;
}

}  // namespace

ConvexPiece make_box(std::vector<double> lo, std::vector<double> hi)
{
    if (lo.size() != hi.size() || lo.empty() || lo.size() > 3) throw InvalidInput("make_box: bad dimensions");
    for (std::size_t j = 0; j < lo.size(); ++j) {
        if (!(hi[j] > lo[j])) throw InvalidInput("make_box: empty side");
    }
    ConvexPiece p;
    p.lo = std::move(lo);
    p.hi = std::move(hi);
    return p;
}

ConvexPiece make_polygon(std::vector<std::array<double, 2>> vertices)
{
    if (vertices.size() < 3) throw InvalidInput("make_polygon: need at least 3 vertices");
    double area2 = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const auto& a = vertices[i];
        const auto& b = vertices[(i + 1) % vertices.size()];
        area2 += a[0] * b[1] - a[1] * b[0];
    }
    if (area2 < 0.0) std::reverse(vertices.begin(), vertices.end());
    if (area2 == 0.0) throw InvalidInput("make_polygon: degenerate polygon");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const auto& a = vertices[i];
        const auto& b = vertices[(i + 1) % vertices.size()];
        const auto& c = vertices[(i + 2) % vertices.size()];
        if (cross(a, b, c) < 0.0) throw InvalidInput("make_polygon: polygon is not convex");
    }
    ConvexPiece p;
    p.polygon = std::move(vertices);
    p.lo = {p.polygon[0][0], p.polygon[0][1]};
    p.hi = p.lo;
    for (const auto& v : p.polygon) {
        p.lo[0] = std::min(p.lo[0], v[0]);
        p.lo[1] = std::min(p.lo[1], v[1]);
        p.hi[0] = std::max(p.hi[0], v[0]);
        p.hi[1] = std::max(p.hi[1], v[1]);
    }
    return p;
}

double ConvexPiece::volume() const
{
    if (is_box()) {
        double v = 1.0;
        for (std::size_t j = 0; j < lo.size(); ++j) v *= hi[j] - lo[j];
        return v;
    }
    double area2 = 0.0;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const auto& a = polygon[i];
        const auto& b = polygon[(i + 1) % polygon.size()];
        area2 += a[0] * b[1] - a[1] * b[0];
    }
    return 0.5 * area2;
}

bool ConvexPiece::contains(const double* y) const
{
    if (is_box()) {
        for (std::size_t j = 0; j < lo.size(); ++j) {
            const double tol = kEps * std::max({1.0, std::fabs(lo[j]), std::fabs(hi[j])});
            if (y[j] < lo[j] - tol || y[j] > hi[j] + tol) return false;
        }
        return true;
    }
    const std::array<double, 2> p{y[0], y[1]};
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const auto& a = polygon[i];
        const auto& b = polygon[(i + 1) % polygon.size()];
        const double scale = std::hypot(b[0] - a[0], b[1] - a[1]);
        if (cross(a, b, p) < -kEps * std::max(1.0, scale)) return false;
    }
    return true;
}

double PolytopeSpec::base_volume() const
{
    if (empty) return 0.0;
    double v = 0.0;
    for (const auto& p : base) v += p.volume();
    return v;
}

double PolytopeSpec::volume() const { return base_volume() * std::pow(dilation, dim); }

double PolytopeSpec::base_boundary() const
{
    if (empty) return 0.0;
    if (dim == 1) {
        std::vector<std::pair<double, double>> iv;
        for (const auto& p : base) iv.emplace_back(p.lo[0], p.hi[0]);
        std::sort(iv.begin(), iv.end());
        int ends = 0;
        double cur_hi = -std::numeric_limits<double>::infinity();
        for (const auto& [a, b] : iv) {
            if (a > cur_hi) ends += 2;
            cur_hi = std::max(cur_hi, b);
        }
        return ends;
    }
    double total = 0.0;
    for (const auto& p : base) {
        if (!p.is_box()) {
            for (std::size_t i = 0; i < p.polygon.size(); ++i) {
                const auto& a = p.polygon[i];
                const auto& b = p.polygon[(i + 1) % p.polygon.size()];
                total += std::hypot(b[0] - a[0], b[1] - a[1]);
            }
            continue;
        }
        const double vol = p.volume();
        for (int j = 0; j < dim; ++j) total += 2.0 * vol / (p.hi[j] - p.lo[j]);
    }
    return total;
}

bool PolytopeSpec::contains_local(const double* y) const
{
    if (empty) return false;
    for (const auto& p : base) {
        if (p.contains(y)) return true;
    }
    return false;
}

bool PolytopeSpec::contains(const AngleVec& phi) const
{
    if (empty) return false;
    if (phi.dim != dim) throw InvalidInput("PolytopeSpec::contains: dimension mismatch");
    double y0[3];
    for (int j = 0; j < dim; ++j) {
        double t = wrap01(phi.coords[j] - origin.coords[j]);
        if (t > 0.5) t -= 1.0;
        y0[j] = t;
    }
    int lifts = 1;
    for (int j = 0; j < dim; ++j) lifts *= 3;
    for (int code = 0; code < lifts; ++code) {
        double y[3];
        int c = code;
        for (int j = 0; j < dim; ++j) {
            y[j] = (y0[j] + static_cast<double>(c % 3 - 1)) / dilation;
            c /= 3;
        }
        if (contains_local(y)) return true;
    }
    return false;
}

CubeTiling tile(const PolytopeSpec& poly, double kappa0)
{
    if (!(kappa0 > 0.0)) throw InvalidInput("tile: kappa0 must be positive");
    CubeTiling t;
    t.dim = poly.dim;
    t.kappa0 = kappa0;
    t.base_volume = poly.base_volume();
    if (poly.empty || poly.base.empty()) return t;
    const int d = poly.dim;
    std::array<std::int64_t, 3> kmin{0, 0, 0}, kmax{0, 0, 0};
    for (int j = 0; j < d; ++j) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& p : poly.base) {
            lo = std::min(lo, p.lo[j]);
            hi = std::max(hi, p.hi[j]);
        }
        kmin[j] = static_cast<std::int64_t>(std::floor(lo / kappa0)) - 1;
        kmax[j] = static_cast<std::int64_t>(std::ceil(hi / kappa0)) + 1;
    }
    double cells = 1.0;
    for (int j = 0; j < d; ++j) cells *= static_cast<double>(kmax[j] - kmin[j]);
    if (cells > 1e8) throw ResourceError("tile: grid too fine for the polytope");

    std::array<std::int64_t, 3> k = kmin;
    for (;;) {
        double lo[3];
        for (int j = 0; j < d; ++j) lo[j] = static_cast<double>(k[j]) * kappa0;
        bool in = false, meet = false;
        for (const auto& p : poly.base) {
            if (!in && cell_inside(p, lo, kappa0, d)) in = true;
            if (!meet && overlaps(p, lo, kappa0, d)) meet = true;
        }
        if (in) t.inner.push_back(k);
        if (meet || in) t.outer.push_back(k);
        int j = 0;
        while (j < d && k[j] + 1 >= kmax[j]) {
            k[j] = kmin[j];
            ++j;
        }
        if (j == d) break;
        ++k[j];
    }
    const double cell_vol = std::pow(kappa0, d);
    t.inner_volume = static_cast<double>(t.inner.size()) * cell_vol;
    t.outer_volume = static_cast<double>(t.outer.size()) * cell_vol;
    return t;
}

std::size_t CoeffMap::index(const int* m) const
{
    std::size_t idx = 0;
    for (int j = dim - 1; j >= 0; --j) idx = idx * (2 * M + 1) + static_cast<std::size_t>(m[j] + M);
    return idx;
}

std::complex<double> CoeffMap::zero() const
{
    int z[3] = {0, 0, 0};
    return at(z);
}

double CoeffMap::eval(const AngleVec& phi) const
{
    const int w = 2 * M + 1;
    std::vector<std::vector<std::complex<double>>> e(dim, std::vector<std::complex<double>>(w));
    for (int j = 0; j < dim; ++j) {
        for (int m = -M; m <= M; ++m) {
            e[j][m + M] = std::polar(1.0, 2.0 * kPi * std::fmod(static_cast<double>(m) * phi.coords[j], 1.0));
        }
    }
    double acc = 0.0;
    if (dim == 1) {
        for (int a = 0; a < w; ++a) acc += (data[a] * e[0][a]).real();
        return acc;
    }
    if (dim == 2) {
        for (int b = 0; b < w; ++b) {
            std::complex<double> row = 0.0;
            for (int a = 0; a < w; ++a) row += data[static_cast<std::size_t>(b) * w + a] * e[0][a];
            acc += (row * e[1][b]).real();
        }
        return acc;
    }
    for (int c = 0; c < w; ++c) {
        for (int b = 0; b < w; ++b) {
            std::complex<double> row = 0.0;
            const std::size_t base = (static_cast<std::size_t>(c) * w + b) * w;
            for (int a = 0; a < w; ++a) row += data[base + a] * e[0][a];
            acc += (row * e[1][b] * e[2][c]).real();
        }
    }
    return acc;
}

void CoeffMap::write_csv(std::ostream& os) const
{
    for (int j = 0; j < dim; ++j) os << "m_" << (j + 1) << ",";
    os << "re,im\n";
    const auto old_prec = os.precision(17);
    int m[3] = {-M, -M, -M};
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::size_t r = i;
        for (int j = 0; j < dim; ++j) {
            m[j] = static_cast<int>(r % (2 * M + 1)) - M;
            r /= (2 * M + 1);
        }
        for (int j = 0; j < dim; ++j) os << m[j] << ",";
        os << data[i].real() << "," << data[i].imag() << "\n";
    }
    os.precision(old_prec);
}

CoeffMap box_sum(const PolytopeSpec& poly, const CubeTiling& tiling, int M, Sign sign, std::size_t max_entries)
{
    const int d = poly.dim;
    CoeffMap out;
    out.dim = d;
    out.M = M;
    double entries = 1.0;
    for (int j = 0; j < d; ++j) entries *= 2.0 * M + 1.0;
    if (entries > static_cast<double>(max_entries)) {
        throw ResourceError("box_sum: coefficient map of " + std::to_string(entries) + " entries exceeds limit");
    }
    out.data.assign(static_cast<std::size_t>(entries), 0.0);
    const auto& cubes = sign == Sign::minorant ? tiling.inner : tiling.outer;
    if (cubes.empty()) return out;
    if (entries * static_cast<double>(cubes.size()) > 4e9) throw ResourceError("box_sum: too many cubes for degree M");
    const double side = poly.dilation * tiling.kappa0;
    const SelbergApprox base = selberg_box(M, std::vector<double>(d, 0.0), side, sign);

    // translation sums S(m) = sum over cubes of e(-m . corner)
    const int w = 2 * M + 1;
    std::vector<std::complex<double>> S(out.data.size(), 0.0);
    std::vector<std::vector<std::complex<double>>> ph(d, std::vector<std::complex<double>>(w));
    for (const auto& k : cubes) {
        for (int j = 0; j < d; ++j) {
            const double c = poly.origin.coords[j] + poly.dilation * static_cast<double>(k[j]) * tiling.kappa0;
            for (int m = -M; m <= M; ++m) {
                ph[j][m + M] = std::polar(1.0, -2.0 * kPi * std::fmod(static_cast<double>(m) * c, 1.0));
            }
        }
        if (d == 1) {
            for (int a = 0; a < w; ++a) S[a] += ph[0][a];
        } else if (d == 2) {
            for (int b = 0; b < w; ++b)
                for (int a = 0; a < w; ++a) S[static_cast<std::size_t>(b) * w + a] += ph[0][a] * ph[1][b];
        } else {
            for (int c = 0; c < w; ++c)
                for (int b = 0; b < w; ++b) {
                    const std::complex<double> bc = ph[1][b] * ph[2][c];
                    const std::size_t row = (static_cast<std::size_t>(c) * w + b) * w;
                    for (int a = 0; a < w; ++a) S[row + a] += ph[0][a] * bc;
                }
        }
    }
    int m[3] = {0, 0, 0};
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        std::size_t r = i;
        for (int j = 0; j < d; ++j) {
            m[j] = static_cast<int>(r % w) - M;
            r /= w;
        }
        out.data[i] = base.coeff(m) * S[i];
    }
    return out;
}

}  // namespace sp
