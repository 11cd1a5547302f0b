#include "aqe/hypgeom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aqe/quadrule.hpp"

namespace aqe::hypgeom {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Point GroupWord::apply(const Point& p) const {
    std::complex<double> z = p.z();
    std::complex<double> num = (double)a * z + (double)b;
    std::complex<double> den = (double)c * z + (double)d;
    std::complex<double> w = num / den;
    return {w.real(), w.imag()};
}

GroupWord GroupWord::mul(const GroupWord& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c,
            c * o.b + d * o.d};
}

double hyp_distance(const Point& z, const Point& w) {
    if (!(z.y > 0.0) || !(w.y > 0.0))
        throw DomainError("hyp_distance: points must lie in the upper half-plane");
    double dx = z.x - w.x, dy = z.y - w.y;
    double dist = std::hypot(dx, dy);
    // log((|z-wbar|+|z-w|)/(|z-wbar|-|z-w|)) = 2 asinh(|z-w| / (2 sqrt(y y')))
    return 2.0 * std::asinh(0.5 * dist / std::sqrt(z.y * w.y));
}

std::pair<Point, GroupWord> reduce(const Point& p) {
    if (!(p.y > 0.0)) throw DomainError("reduce: y must be positive");
    double x = p.x, y = p.y;
    GroupWord g; // identity
    for (int iter = 0; iter < 20000; iter++) {
        double n = std::nearbyint(x);
        if (n != 0.0) {
            x -= n;
            GroupWord t{1, -(std::int64_t)n, 0, 1};
            g = t.mul(g);
        }
        double r2 = x * x + y * y;
        if (r2 >= 1.0 - 1e-15) break;
        // apply S: z -> -1/z
        double nx = -x / r2, ny = y / r2;
        x = nx;
        y = ny;
        GroupWord s{0, -1, 1, 0};
        g = s.mul(g);
    }
    if (x >= 0.5) {
        x -= 1.0;
        GroupWord t{1, -1, 0, 1};
        g = t.mul(g);
    }
    // one-shot application of the word avoids the drift accumulated by the
    // iteration, so the returned pair is consistent to machine precision
    Point zf = g.apply(p);
    if (std::abs(zf.x - x) < 1e-9 && std::abs(zf.y - y) < 1e-9)
        return {zf, g};
    return {Point{x, y}, g};
}

double ball_measure(const GeodesicBall& ball) {
    if (!ball.injective)
        throw NotInjectiveError("ball_measure: ball is not injective");
    double s = std::sinh(ball.radius / 2.0);
    return 4.0 * kPi * s * s;
}

double min_displacement(const Point& p) {
    Point z = reduce(p).first;
    double y = z.y, x = z.x;
    // translation T gives the initial bound
    double best = hyp_distance(z, Point{x + 1.0, y});
    auto ext_gcd = [](std::int64_t a, std::int64_t b, std::int64_t& u,
                      std::int64_t& v) {
        std::int64_t u0 = 1, v0 = 0, u1 = 0, v1 = 1;
        while (b != 0) {
            std::int64_t q = a / b, r = a % b;
            a = b;
            b = r;
            std::int64_t u2 = u0 - q * u1, v2 = v0 - q * v1;
            u0 = u1;
            v0 = v1;
            u1 = u2;
            v1 = v2;
        }
        u = u0;
        v = v0;
    };
    // enumerate coprime (c,d), c >= 1, within caps implied by the current
    // best displacement: Im(gamma z) = y/|cz+d|^2 and
    // cosh d(z,w) >= max(y/Im w, Im w/y)/2 force c^2 y^2 <= 2 cosh(best)
    // and (cx+d)^2 <= 2 cosh(best) y^2... iterate until the cap stabilizes.
    for (int pass = 0; pass < 8; pass++) {
        double ch = std::cosh(best);
        std::int64_t cmax =
            (std::int64_t)std::ceil(std::sqrt(2.0 * ch) / y) + 1;
        std::int64_t dspan =
            (std::int64_t)std::ceil(std::sqrt(2.0 * ch) * std::max(1.0, y)) + 1;
        double prev_best = best;
        for (std::int64_t c = 1; c <= cmax; c++) {
            std::int64_t dlo = (std::int64_t)std::floor(-c * x - dspan);
            std::int64_t dhi = (std::int64_t)std::ceil(-c * x + dspan);
            for (std::int64_t d = dlo; d <= dhi; d++) {
                if (std::gcd(c, d) != 1) continue;
                std::int64_t a0, b0;
                ext_gcd(d, -c, a0, b0); // a0*d - b0*c = +-1
                if (a0 * d - b0 * c == -1) {
                    a0 = -a0;
                    b0 = -b0;
                }
                std::complex<double> zz = z.z();
                std::complex<double> den = (double)c * zz + (double)d;
                std::complex<double> w = ((double)a0 * zz + (double)b0) / den;
                double k0 = std::nearbyint(x - w.real());
                for (double k : {k0 - 1.0, k0, k0 + 1.0}) {
                    Point gz{w.real() + k, w.imag()};
                    double dd = hyp_distance(z, gz);
                    if (dd < best) best = dd;
                }
            }
        }
        if (best >= prev_best - 1e-15) break;
    }
    return best;
}

double injectivity_radius(const Point& z) {
    return 0.5 * min_displacement(z);
}

GeodesicBall make_ball(const Point& center, double radius) {
    GeodesicBall b;
    b.center = center;
    b.radius = radius;
    b.injective = radius <= injectivity_radius(center) * (1.0 + 1e-12);
    return b;
}

// ---------------------------------------------------------------------------
// Fundamental-domain quadrature
// ---------------------------------------------------------------------------

namespace {

double domain_floor(double x) { return std::sqrt(1.0 - x * x); }

} // namespace

QuadratureGrid::QuadratureGrid(double cusp_height, const GridResolution& res)
    : Y_(cusp_height), res_(res) {
    if (!(cusp_height >= 2.0))
        throw DomainError("QuadratureGrid: cusp_height must be >= 2");
    int nx = res.nx, ny = res.ny;
    if (nx < 8 || ny < 8 || (nx & (nx - 1)) || (ny & (ny - 1)))
        throw ResolutionError("QuadratureGrid: nx, ny must be powers of two >= 8");
    if ((long)(nx + 1) * (ny + 1) > res.max_nodes)
        throw ResolutionError("QuadratureGrid: node count exceeds max_nodes");

    // Trapezoid weights at three dyadic levels, Romberg-combined:
    //   W = (64 T2 - 20 T1 + T0) / 45 on the shared finest nodes.
    auto level_weight_1d = [](int n, int i, int stride) -> double {
        if (i % stride) return 0.0;
        int j = i / stride, m = n / stride;
        return (j == 0 || j == m) ? 0.5 * stride : (double)stride;
    };
    auto romberg_w = [&](int n, int i, double h) {
        double t2 = level_weight_1d(n, i, 1);
        double t1 = level_weight_1d(n, i, 2);
        double t0 = level_weight_1d(n, i, 4);
        return h * (64.0 * t2 - 20.0 * t1 + t0) / 45.0;
    };
    auto coarse_w = [&](int n, int i, double h) {
        double t1 = level_weight_1d(n, i, 2);
        double t0 = level_weight_1d(n, i, 4);
        return h * (4.0 * t1 - t0) / 3.0;
    };

    double hx = 1.0 / nx;
    nodes_.reserve((std::size_t)(nx + 1) * (ny + 1));
    coarse_w_.reserve((std::size_t)(nx + 1) * (ny + 1));
    for (int i = 0; i <= nx; i++) {
        double x = -0.5 + i * hx;
        double wx = romberg_w(nx, i, hx);
        double wx_c = coarse_w(nx, i, hx);
        double v0 = std::log(domain_floor(x));
        double v1 = std::log(Y_);
        double hv = (v1 - v0) / ny;
        for (int j = 0; j <= ny; j++) {
            double v = v0 + j * hv;
            double y = std::exp(v);
            double wv = romberg_w(ny, j, hv);
            double wv_c = coarse_w(ny, j, hv);
            // dmu = y^{-2} dx dy = y^{-1} dx dv
            nodes_.push_back({Point{x, y}, wx * wv / y});
            coarse_w_.push_back(wx_c * wv_c / y);
        }
    }
    total_mass_ = 0.0;
    for (auto& nw : nodes_) total_mass_ += nw.second;
}

double QuadratureGrid::integrate(const std::function<double(const Point&)>& f,
                                 double* err_estimate) const {
    double fine = 0.0, coarse = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); i++) {
        double fv = f(nodes_[i].first);
        fine += nodes_[i].second * fv;
        coarse += coarse_w_[i] * fv;
    }
    if (err_estimate) *err_estimate = std::abs(fine - coarse);
    return fine;
}

double QuadratureGrid::integrate_region(
    const std::function<double(const Point&)>& f, double y_min) const {
    int nx = res_.nx, ny = res_.ny;
    std::vector<double> cx, cw;
    quadrule::gauss_legendre(std::min(ny, 96), cx, cw);
    auto column = [&](double x) {
        double lo = std::max(domain_floor(x), y_min);
        if (lo >= Y_) return 0.0;
        double v0 = std::log(lo), v1 = std::log(Y_);
        double mid = 0.5 * (v0 + v1), half = 0.5 * (v1 - v0);
        double s = 0.0;
        for (std::size_t k = 0; k < cx.size(); k++) {
            double y = std::exp(mid + half * cx[k]);
            s += cw[k] * half * f(Point{x, y}) / y;
        }
        return s;
    };
    std::vector<double> gx, gw;
    quadrule::gauss_legendre_ab(std::min(nx, 96), -0.5, 0.5, gx, gw);
    double total = 0.0;
    for (std::size_t i = 0; i < gx.size(); i++) total += gw[i] * column(gx[i]);
    return total;
}

double integrate_ball(const std::function<double(const Point&)>& f,
                      const Point& center, double radius, int n_rho,
                      int n_theta) {
    std::vector<double> rx, rw;
    quadrule::gauss_legendre_ab(n_rho, 0.0, radius, rx, rw);
    double u = center.x, v = center.y;
    double total = 0.0;
    double ht = 2.0 * kPi / n_theta;
    for (int i = 0; i < n_rho; i++) {
        double rho = rx[i];
        double sh = std::sinh(rho), chv = std::cosh(rho);
        double ring = 0.0;
        for (int j = 0; j < n_theta; j++) {
            double th = j * ht;
            Point z{u + v * sh * std::cos(th), v * (chv + sh * std::sin(th))};
            ring += f(z);
        }
        total += rw[i] * sh * ring * ht;
    }
    return total;
}

} // namespace aqe::hypgeom
