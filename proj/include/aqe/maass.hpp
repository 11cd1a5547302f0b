#ifndef AQE_MAASS_HPP
#define AQE_MAASS_HPP

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "aqe/error.hpp"
#include "aqe/hypgeom.hpp"
#include "aqe/specfun.hpp"

namespace aqe::maass {

using cplx = std::complex<double>;

enum class Parity { Even, Odd };

inline int parity_sign(Parity p) { return p == Parity::Even ? 1 : -1; }

// A computed level-1 Hecke-Maass cusp form, lambda(1) = 1 normalization.
// phi(x+iy) = rho sqrt(y) sum lambda(m) K_{it}(2 pi m y) {cos,sin}(2 pi m x)
struct MaassForm {
    double t = 0.0;
    Parity parity = Parity::Even;
    std::vector<double> coeffs; // lambda(n), 1-based; coeffs[1] = 1
    int truncation = 0;
    double secular_residual = 0.0;
    double rho = 0.0; // so that integral of |phi|^2 dmu over Gamma\H is 1
    std::string solver_version;

    double lambda(long long n) const;
    int sign() const { return parity_sign(parity); }
    double eval_scale() const; // rho e^{-pi t/2}, the overflow-safe factor

    const specfun::KBesselTable& table(double x_min = 3.0) const;

private:
    mutable std::shared_ptr<specfun::KBesselTable> table_;
};

struct SolveOptions {
    double scan_step = 0.05;
    double base_height = 0.10;   // primary collocation horocycle
    double second_height = 0.08; // certification config
    double dip_threshold = 1e-4;
    specfun::Precision prec = specfun::Precision::Standard;
};

// Hejhal-style implicit-automorphy collocation over a spectral window.
// Returns all certified forms with t in [t_lo, t_hi], coefficients pumped
// to `truncation`.  Throws IllConditionedError if the truncation is too
// small for the window, NoConvergenceError if a secular dip cannot be
// certified.
std::vector<MaassForm> solve_form(double t_lo, double t_hi, Parity parity,
                                  int truncation,
                                  const SolveOptions& opt = SolveOptions{});

// phi(z); z is reduced internally.
double evaluate(const MaassForm& form, const hypgeom::Point& z);

// lambda(1..n_max) from the solved expansion (TruncationError beyond).
std::vector<double> hecke_eigenvalues(const MaassForm& form, int n_max);

// Worst Hecke-relation residual |lambda(m)lambda(n) - lambda(mn)| over
// coprime pairs with mn <= limit.
double hecke_residual(const MaassForm& form, long long limit = 0);

// Real-analytic Eisenstein series E(z, s), constant term y^s + phi(s)y^{1-s}.
// PoleError at s = 1; pre: Re s in [1/2, 3].
cplx eisenstein_eval(const hypgeom::Point& z, cplx s);

// Scattering coefficient phi(s) = xi(2s-1)/xi(2s).
cplx eisenstein_scattering(cplx s);

struct Catalog {
    std::vector<MaassForm> forms;
    // closed scan coverage [lo, hi] per parity (merged by weyl_count)
    std::vector<std::pair<double, double>> scanned_even;
    std::vector<std::pair<double, double>> scanned_odd;
};

// |{ t_k : |t_k| <= T }| with completeness check of the scan coverage.
int weyl_count(double T, const Catalog& catalog);

// Secular least-squares residual of the automorphy system at spectral
// parameter t (exposed so tests can run independent scan oracles).
double secular_residual_at(double t, Parity parity, double Y, int M0);

// Form cache (JSON; schema fixed by the external interface contract).
void save_form(const MaassForm& form, const std::string& path);
MaassForm load_form(const std::string& path);

} // namespace aqe::maass

#endif
