#ifndef AQE_SPECFUN_HPP
#define AQE_SPECFUN_HPP

#include <complex>
#include <memory>
#include <vector>

#include "aqe/error.hpp"

namespace aqe::specfun {

using cplx = std::complex<double>;

enum class Precision { Standard, Extended };

// Principal-branch complex log-gamma (Stirling series + recurrence,
// reflection for Re z < 0.5).  Accurate to ~1e-14 relative for |z| <= 1e4.
cplx log_gamma(cplx z);

// Gamma_R(s) = pi^{-s/2} Gamma(s/2).  Throws PoleError at s = 0, -2, -4, ...
cplx gamma_r(cplx s);

// Gamma_C(s) = 2 (2pi)^{-s} Gamma(s).  Throws PoleError at s = 0, -1, -2, ...
cplx gamma_c(cplx s);

// log |Gamma_R(sigma + i tau)| computed in log space (no over/underflow).
double log_abs_gamma_r(cplx s);
double log_abs_gamma_c(cplx s);

// Explicit Stirling main term for |Gamma_R(sigma + i tau)|:
//   2^{1-sigma/2} pi^{(1-sigma)/2} (3+|tau|)^{(sigma-1)/2} e^{-(pi/4)|tau|}
double stirling_gamma_r_abs(double sigma, double tau);
double log_stirling_gamma_r_abs(double sigma, double tau);

// K-Bessel of imaginary order: K_{it}(x) for real t, x > 0.  Real-valued.
// Scaled variant returns e^{pi t / 2} K_{it}(x), the well-conditioned form.
// Underflow convention: beyond the exponential-decay cutoff the value is an
// exact 0 and *underflow (if given) is set.
double bessel_k_it(double t, double x, bool* underflow = nullptr,
                   Precision prec = Precision::Standard);
double bessel_k_it_scaled(double t, double x, bool* underflow = nullptr,
                          Precision prec = Precision::Standard);

// x beyond which e^{pi t/2} K_{it}(x) < eps (used by series truncation).
double bessel_k_it_cutoff(double t, double eps = 1e-18);

// Riemann and Hurwitz zeta by Euler-Maclaurin; |Im s| up to ~120.
// riemann_zeta throws PoleError at s = 1.
cplx riemann_zeta(cplx s);
cplx hurwitz_zeta(cplx s, double a);

// Completed zeta xi(s) = Gamma_R(s) zeta(s).
cplx xi_completed(cplx s);

// General complex order (used by Eisenstein series at complex s).
cplx bessel_k_nu(cplx nu, double x);

// Fast repeated evaluation of e^{pi t/2} K_{it}(x) at fixed t: piecewise
// Chebyshev interpolant on a log-x grid covering [x_min, cutoff].
class KBesselTable {
public:
    KBesselTable(double t, double x_min, Precision prec = Precision::Standard);

    // Returns e^{pi t/2} K_{it}(x); exact 0 (underflow) for x >= cutoff().
    double eval_scaled(double x) const;
    double cutoff() const { return x_cut_; }
    double x_min() const { return x_min_; }
    double t() const { return t_; }

private:
    double t_;
    double x_min_;
    double x_cut_;
    double log_x_min_;
    double inv_dlog_;
    int degree_;
    std::vector<std::vector<double>> coeffs_; // per-interval Chebyshev coeffs
    std::vector<double> lo_, hi_;             // interval bounds in log x
};

} // namespace aqe::specfun

#endif
