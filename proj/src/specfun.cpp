#include "aqe/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aqe::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLog2Pi = 1.8378770664093454836;

bool near_integer(double x, double tol = 1e-12) {
    return std::abs(x - std::round(x)) < tol;
}

// log(sin(pi z)) up to an integer multiple of 2 pi i; exp-correct.
cplx log_sin_pi(cplx z) {
    if (z.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
    const cplx i(0.0, 1.0);
    // sin(pi z) = -e^{-i pi z}/(2i) * (1 - e^{2 i pi z}),  Im z >= 0
    return std::log(0.5) + i * (kPi / 2.0) - i * kPi * z +
           std::log(1.0 - std::exp(2.0 * i * kPi * z));
}

} // namespace

cplx log_gamma(cplx z) {
    if (z.real() < 0.5) {
        // reflection  Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return std::log(cplx(kPi)) - log_sin_pi(z) - log_gamma(1.0 - z);
    }
    cplx acc = 0.0;
    while (std::abs(z) < 12.0) {
        acc -= std::log(z);
        z += 1.0;
    }
    // Stirling series with B_2..B_16
    static const double c[8] = {
        1.0 / 12.0,     -1.0 / 360.0,       1.0 / 1260.0, -1.0 / 1680.0,
        1.0 / 1188.0,   -691.0 / 360360.0,  1.0 / 156.0,  -3617.0 / 122400.0};
    cplx zi = 1.0 / z, zi2 = zi * zi, term = zi, series = 0.0;
    for (int n = 0; n < 8; n++) {
        series += c[n] * term;
        term *= zi2;
    }
    return acc + (z - 0.5) * std::log(z) - z + 0.5 * kLog2Pi + series;
}

cplx gamma_r(cplx s) {
    if (std::abs(s.imag()) < 1e-14 && near_integer(s.real()) &&
        s.real() < 0.5) {
        double n = std::round(s.real());
        if (std::fmod(n, 2.0) == 0.0)
            throw PoleError("gamma_r: pole at nonpositive even integer");
    }
    return std::exp(-s * 0.5 * std::log(cplx(kPi)) + log_gamma(s * 0.5));
}

cplx gamma_c(cplx s) {
    if (std::abs(s.imag()) < 1e-14 && near_integer(s.real()) &&
        std::round(s.real()) <= 0.0)
        throw PoleError("gamma_c: pole at nonpositive integer");
    return std::exp(std::log(2.0) - s * std::log(cplx(2.0 * kPi)) + log_gamma(s));
}

double log_abs_gamma_r(cplx s) {
    return std::real(log_gamma(s * 0.5)) - 0.5 * s.real() * std::log(kPi);
}

double log_abs_gamma_c(cplx s) {
    return std::log(2.0) - s.real() * std::log(2.0 * kPi) +
           std::real(log_gamma(s));
}

double log_stirling_gamma_r_abs(double sigma, double tau) {
    double at = std::abs(tau);
    return (1.0 - sigma / 2.0) * std::log(2.0) +
           (1.0 - sigma) / 2.0 * std::log(kPi) +
           (sigma - 1.0) / 2.0 * std::log(3.0 + at) - (kPi / 4.0) * at;
}

double stirling_gamma_r_abs(double sigma, double tau) {
    return std::exp(log_stirling_gamma_r_abs(sigma, tau));
}

cplx hurwitz_zeta(cplx s, double a) {
    if (std::abs(s - 1.0) < 1e-14)
        throw PoleError("hurwitz_zeta: pole at s = 1");
    if (!(a > 0.0)) throw DomainError("hurwitz_zeta: a must be positive");
    int N = (int)std::max(24.0, 1.5 * std::abs(s.imag()) + 16.0 - a);
    if (N < 1) N = 1;
    cplx sum = 0.0;
    for (int n = 0; n < N; n++) sum += std::exp(-s * std::log(n + a));
    double Na = N + a;
    cplx Ns = std::exp(-s * std::log(Na));
    sum += Na * Ns / (s - 1.0) + 0.5 * Ns;
    static const double B[] = {1.0 / 6,  -1.0 / 30,       1.0 / 42, -1.0 / 30,
                               5.0 / 66, -691.0 / 2730,   7.0 / 6,  -3617.0 / 510};
    static const double fac2k[] = {2,       24,        720,          40320,
                                   3628800, 479001600, 87178291200.0,
                                   20922789888000.0};
    cplx rising = s; // (s)_1
    cplx npow = Ns / Na;
    for (int k = 1; k <= 8; k++) {
        sum += B[k - 1] / fac2k[k - 1] * rising * npow;
        rising *= (s + (double)(2 * k - 1)) * (s + (double)(2 * k));
        npow /= Na * Na;
    }
    return sum;
}

cplx riemann_zeta(cplx s) { return hurwitz_zeta(s, 1.0); }

cplx xi_completed(cplx s) { return gamma_r(s) * riemann_zeta(s); }

// ---------------------------------------------------------------------------
// K-Bessel machinery
// ---------------------------------------------------------------------------

namespace {

#if defined(__SIZEOF_FLOAT128__)
#define AQE_HAVE_QUAD 1
using quad = __float128;
struct qcplx {
    quad re, im;
};
inline qcplx qc_add(qcplx a, qcplx b) { return {a.re + b.re, a.im + b.im}; }
inline qcplx qc_mul(qcplx a, qcplx b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline qcplx qc_scale(qcplx a, quad s) { return {a.re * s, a.im * s}; }
extern "C" {
quad expq(quad);
quad coshq(quad);
quad cosq(quad);
quad sqrtq(quad);
}
#endif

// Normalized decay exponent: e^{pi t/2} K_{it}(x) ~ e^{-eta(x,t)} for x > t.
double eta_decay(double x, double t) {
    t = std::abs(t);
    if (x <= t) return 0.0;
    return std::sqrt(x * x - t * t) - t * std::acos(t / x);
}

// Predicted log10-ish cancellation (natural log) of the ascending series.
double series_loss(double x, double t) {
    double lx = 2.0 * std::log(x / 2.0); // ln(x^2/4)
    double lt = 0.0, lmax = 0.0, lsum = 0.0;
    for (int k = 1; k <= 500; k++) {
        lsum += 0.5 * std::log((double)k * k + t * t) + std::log((double)k);
        lt = k * lx - lsum;
        lmax = std::max(lmax, lt);
        if (lt < lmax - 40.0) break;
    }
    return lmax;
}

double trap_loss(double x, double t) {
    t = std::abs(t);
    return std::max(0.0, kPi * t / 2.0 - x + eta_decay(x, t));
}

// Trapezoid rule for e^{pi t/2} \int_0^inf e^{-x cosh u} cos(t u) du.
// The integrand is even and entire, so the trapezoid converges super-
// algebraically; h is limited by aliasing against the oscillation.
double trap_k_it_scaled(double t, double x) {
    t = std::abs(t);
    double h = std::min(0.30, 2.0 * kPi / (2.0 * t + 26.0));
    double pref = kPi * t / 2.0;
    double need = x + trap_loss(x, t) + 45.0;
    double umax = std::acosh(std::max(1.0 + 1e-8, need / x));
    double sum = 0.5 * std::exp(pref - x);
    long n = (long)(umax / h) + 2;
    for (long k = 1; k <= n; k++) {
        double u = k * h;
        double e = pref - x * std::cosh(u);
        if (e < -745.0) break;
        sum += std::exp(e) * std::cos(t * u);
    }
    return sum * h;
}

#ifdef AQE_HAVE_QUAD
double trap_k_it_scaled_q(double t_, double x_) {
    quad t = (quad)std::abs(t_), x = (quad)x_;
    double hd = std::min(0.22, 2.0 * kPi / (2.0 * std::abs(t_) + 40.0));
    quad h = (quad)hd;
    quad pref = (quad)(kPi / 2.0) * t;
    double need = x_ + trap_loss(x_, t_) + 85.0;
    double umax = std::acosh(std::max(1.0 + 1e-8, need / x_));
    quad sum = expq(pref - x) * 0.5q;
    long n = (long)(umax / hd) + 2;
    for (long k = 1; k <= n; k++) {
        quad u = k * h;
        quad e = pref - x * coshq(u);
        if ((double)e < -11300.0) break;
        sum += expq(e) * cosq(t * u);
    }
    return (double)(sum * h);
}
#endif

// Ascending series, imaginary order it, |t| > ~0.5:
//   A = (x/2)^{it} / Gamma(1+it) * sum_k (x^2/4)^k / (k! (1+it)_k)
//   e^{pi t/2} K_{it}(x) = -2 pi Im(A e^{-pi t/2}) / (1 - e^{-2 pi t})
double series_k_it_scaled(double t, double x) {
    t = std::abs(t);
    cplx it(0.0, t);
    cplx term = 1.0, sum = 1.0;
    double x24 = x * x / 4.0;
    for (int k = 1; k <= 600; k++) {
        term *= x24 / (cplx((double)k) * (cplx((double)k) + it));
        sum += term;
        if (std::abs(term) < 1e-20 * std::abs(sum) && k > 4) break;
    }
    // scaled prefactor (x/2)^{it} e^{-lgamma(1+it) - pi t/2}
    cplx lpref = it * std::log(x / 2.0) - log_gamma(1.0 + it) - kPi * t / 2.0;
    cplx a = std::exp(lpref) * sum;
    double denom = 1.0 - std::exp(-2.0 * kPi * t);
    return -2.0 * kPi * a.imag() / denom;
}

#ifdef AQE_HAVE_QUAD
double series_k_it_scaled_q(double t_, double x_) {
    double t = std::abs(t_);
    quad x24 = (quad)x_ * (quad)x_ / 4.0q;
    qcplx term{1.0q, 0.0q}, sum{1.0q, 0.0q};
    quad tq = (quad)t;
    for (int k = 1; k <= 2000; k++) {
        quad kk = (quad)k;
        // term *= x24 / (k (k + it))
        qcplx denom{kk * kk, kk * tq};
        quad d2 = denom.re * denom.re + denom.im * denom.im;
        qcplx inv{denom.re / d2, -denom.im / d2};
        term = qc_scale(qc_mul(term, inv), x24);
        sum = qc_add(sum, term);
        double ta = std::abs((double)term.re) + std::abs((double)term.im);
        double sa = std::abs((double)sum.re) + std::abs((double)sum.im) + 1e-300;
        if (k > 8 && ta < 1e-38 * sa) break;
    }
    cplx s((double)sum.re, (double)sum.im);
    cplx it(0.0, t);
    cplx lpref = it * std::log(x_ / 2.0) - log_gamma(1.0 + it) - kPi * t / 2.0;
    cplx a = std::exp(lpref) * s;
    double denom = 1.0 - std::exp(-2.0 * kPi * t);
    return -2.0 * kPi * a.imag() / denom;
}
#endif

// Temme-style series for K_nu(x), complex |nu| <= 0.6, x <= 2.  Stable
// through nu -> 0; returns K_nu and K_{nu+1}.
void temme_k(cplx nu, double x, cplx& knu, cplx& knu1) {
    const double eps = 1e-17;
    cplx nu2 = nu * nu;
    double x2 = x / 2.0;
    double d = -std::log(x2);
    cplx e = nu * d;
    // gam1 = (1/Gamma(1-nu) - 1/Gamma(1+nu)) / (2 nu), gam2 = average
    cplx gp = std::exp(-log_gamma(1.0 + nu)); // 1/Gamma(1+nu)
    cplx gm = std::exp(-log_gamma(1.0 - nu)); // 1/Gamma(1-nu)
    cplx gam1;
    if (std::abs(nu) < 1e-4) {
        // 1/Gamma(1+v) = 1 + a1 v + a2 v^2 + a3 v^3 + ...
        const double a1 = 0.57721566490153286061;
        const double a3 = -0.04200263503409523553;
        gam1 = -(a1 + a3 * nu2);
    } else {
        gam1 = (gm - gp) / (2.0 * nu);
    }
    cplx gam2 = (gm + gp) / 2.0;
    cplx fact = 1.0, fact2 = 1.0;
    if (std::abs(nu) > 1e-8) {
        cplx pin = kPi * nu;
        fact = pin / std::sin(pin);
    }
    if (std::abs(e) > 1e-8) fact2 = std::sinh(e) / e;
    cplx ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    cplx sum = ff;
    cplx ee = std::exp(e);
    cplx p = 0.5 * ee / gp;  // (1/2)(x/2)^{-nu} Gamma(1+nu)
    cplx q = 0.5 / (ee * gm); // (1/2)(x/2)^{nu} Gamma(1-nu)
    cplx c = 1.0;
    double dd = x2 * x2;
    cplx sum1 = p;
    for (int i = 1; i <= 400; i++) {
        ff = ((double)i * ff + p + q) / ((double)i * i - nu2);
        c *= dd / (double)i;
        p /= ((double)i - nu);
        q /= ((double)i + nu);
        cplx del = c * ff;
        sum += del;
        cplx del1 = c * (p - (double)i * ff);
        sum1 += del1;
        if (std::abs(del) < std::abs(sum) * eps) break;
    }
    knu = sum;
    knu1 = sum1 * (2.0 / x);
}

cplx trap_k_nu(cplx nu, double x) {
    double sig = std::abs(nu.real());
    double tau = std::abs(nu.imag());
    double h = std::min(0.30, 2.0 * kPi / (2.0 * tau + 26.0));
    // integrand e^{-x cosh u} cosh(nu u); find u beyond which it is < 1e-19 rel
    double umax = 1.0;
    for (int it = 0; it < 60; it++) {
        double f = x * std::cosh(umax) - sig * umax - (x + 46.0);
        if (f > 0.0) break;
        umax += 0.5;
    }
    cplx sum = 0.5 * std::exp(cplx(-x));
    long n = (long)(umax / h) + 2;
    for (long k = 1; k <= n; k++) {
        double u = k * h;
        double base = -x * std::cosh(u);
        if (base + sig * u < -760.0) break;
        sum += std::exp(cplx(base)) * std::cosh(nu * u);
    }
    return sum * h;
}

} // namespace

double bessel_k_it_cutoff(double t, double eps) {
    t = std::abs(t);
    double L = -std::log(eps);
    double lo = t, hi = t + L + 60.0;
    for (int i = 0; i < 200; i++) {
        double mid = 0.5 * (lo + hi);
        if (eta_decay(mid, t) < L)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

double bessel_k_it_scaled(double t, double x, bool* underflow, Precision prec) {
    if (underflow) *underflow = false;
    if (!(x > 0.0)) throw DomainError("bessel_k_it: x must be positive");
    t = std::abs(t);
    if (eta_decay(x, t) > 43.0) {
        if (underflow) *underflow = true;
        return 0.0;
    }
    if (x <= 2.0 && t <= 0.55) {
        cplx knu, knu1;
        temme_k(cplx(0.0, t), x, knu, knu1);
        return knu.real() * std::exp(kPi * t / 2.0);
    }
    double ls = (t > 0.55) ? series_loss(x, t) : 1e9;
    double lt = trap_loss(x, t);
#ifdef AQE_HAVE_QUAD
    if (prec == Precision::Extended) {
        if (ls < lt && t > 0.55) return series_k_it_scaled_q(t, x);
        return trap_k_it_scaled_q(t, x);
    }
    if (ls <= 7.0) return series_k_it_scaled(t, x);
    if (lt <= 7.0) return trap_k_it_scaled(t, x);
    if (ls <= 48.0 && ls < lt) return series_k_it_scaled_q(t, x);
    if (lt <= 48.0) return trap_k_it_scaled_q(t, x);
    return (ls < lt) ? series_k_it_scaled_q(t, x) : trap_k_it_scaled_q(t, x);
#else
    (void)prec;
    if (ls <= 7.0) return series_k_it_scaled(t, x);
    return trap_k_it_scaled(t, x);
#endif
}

double bessel_k_it(double t, double x, bool* underflow, Precision prec) {
    bool uf = false;
    double v = bessel_k_it_scaled(t, x, &uf, prec);
    if (underflow) *underflow = uf;
    if (uf) return 0.0;
    double s = std::exp(-kPi * std::abs(t) / 2.0);
    return v * s;
}

cplx bessel_k_nu(cplx nu, double x) {
    if (!(x > 0.0)) throw DomainError("bessel_k_nu: x must be positive");
    if (nu.real() < 0.0) nu = -nu; // K_{-nu} = K_nu
    if (x > 2.0) return trap_k_nu(nu, x);
    int n = (int)std::lround(nu.real());
    cplx nu0 = nu - (double)n;
    cplx k0, k1;
    temme_k(nu0, x, k0, k1);
    if (n == 0) return k0;
    // upward recurrence K_{mu+1} = (2 mu / x) K_mu + K_{mu-1}, stable for K
    for (int i = 1; i < n; i++) {
        cplx k2 = 2.0 * (nu0 + (double)i) / x * k1 + k0;
        k0 = k1;
        k1 = k2;
    }
    return k1;
}

// ---------------------------------------------------------------------------
// Piecewise Chebyshev table
// ---------------------------------------------------------------------------

KBesselTable::KBesselTable(double t, double x_min, Precision prec)
    : t_(std::abs(t)), x_min_(x_min) {
    if (!(x_min > 0.0)) throw DomainError("KBesselTable: x_min must be > 0");
    x_cut_ = bessel_k_it_cutoff(t_, 1e-18);
    degree_ = 16;
    double L0 = std::log(x_min_ * 0.999), L1 = std::log(x_cut_ * 1.001);
    int nint = (int)std::ceil((L1 - L0) * std::max(t_, 4.0) / 6.0) + 1;
    double dl = (L1 - L0) / nint;
    log_x_min_ = L0;
    inv_dlog_ = 1.0 / dl;
    coeffs_.resize(nint);
    lo_.resize(nint);
    hi_.resize(nint);
    int d = degree_;
    std::vector<double> fx(d + 1);
    for (int i = 0; i < nint; i++) {
        lo_[i] = L0 + i * dl;
        hi_[i] = lo_[i] + dl;
        for (int j = 0; j <= d; j++) {
            double theta = kPi * (j + 0.5) / (d + 1);
            double u = std::cos(theta); // in (-1,1)
            double lx = 0.5 * (lo_[i] + hi_[i]) + 0.5 * dl * u;
            fx[j] = bessel_k_it_scaled(t_, std::exp(lx), nullptr, prec);
        }
        coeffs_[i].assign(d + 1, 0.0);
        for (int k = 0; k <= d; k++) {
            double s = 0.0;
            for (int j = 0; j <= d; j++)
                s += fx[j] * std::cos(kPi * k * (j + 0.5) / (d + 1));
            coeffs_[i][k] = 2.0 * s / (d + 1);
        }
        coeffs_[i][0] *= 0.5;
    }
}

double KBesselTable::eval_scaled(double x) const {
    if (x >= x_cut_) return 0.0;
    if (x < x_min_) return bessel_k_it_scaled(t_, x);
    double lx = std::log(x);
    int i = (int)((lx - log_x_min_) * inv_dlog_);
    i = std::clamp(i, 0, (int)coeffs_.size() - 1);
    double u = 2.0 * (lx - lo_[i]) / (hi_[i] - lo_[i]) - 1.0;
    u = std::clamp(u, -1.0, 1.0);
    // Clenshaw
    const std::vector<double>& c = coeffs_[i];
    double b1 = 0.0, b2 = 0.0;
    for (int k = (int)c.size() - 1; k >= 1; k--) {
        double b0 = 2.0 * u * b1 - b2 + c[k];
        b2 = b1;
        b1 = b0;
    }
    return u * b1 - b2 + c[0];
}

} // namespace aqe::specfun
