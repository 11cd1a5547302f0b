#ifndef AQE_LFUN_HPP
#define AQE_LFUN_HPP

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "aqe/error.hpp"
#include "aqe/maass_fwd.hpp"

namespace aqe::lfun {

using cplx = std::complex<double>;

// Local data at a prime, given as power sums of the Satake parameters:
//   psum(p, j) = sum_i alpha_i(p)^j
// Power sums add under Dirichlet quotients and multiply under Rankin-
// Selberg composition, which is why they are the stored primitive.
using PowerSum = std::function<double(long long p, int j)>;

struct LFunctionData {
    std::string label;
    int degree = 1;
    long long arith_conductor = 1;
    std::vector<cplx> arch_params;       // mu_j, parity shifts resolved
    int pole_order = 0;                  // r in (s(s-1))^r
    std::vector<double> coeffs;          // lambda(n), 1-based (coeffs[0] unused)
    cplx root_number{1.0, 0.0};
    bool root_resolved = false;
    bool self_dual = true;
    cplx lambda_at_1{0.0, 0.0};          // Lambda(1) when pole_order >= 1
    double fe_fit_residual = 0.0;        // consistency of the (W, Lambda(1)) fit
    PowerSum psum;

    double coeff(long long n) const;
    // Satake parameters at p, solved from the stored power sums.
    std::vector<cplx> satake(long long p) const;
};

using RankinSelbergData = LFunctionData;

// --- constructors ---------------------------------------------------------

LFunctionData zeta_data(std::size_t n_coeffs = 4096);

// Primitive quadratic character mod |D|, D a fundamental discriminant.
// D = 1 returns zeta (pole order 1).  Throws NotFundamentalError.
LFunctionData dirichlet_l(long long D, std::size_t n_coeffs = 4096);

// Standard degree-2 L-function of a level-1 Hecke-Maass form.
LFunctionData from_maass(const maass::MaassForm& form);

// Adjoint (symmetric-square) lift: degree 3, lambda_Ad(p) = lambda(p)^2 - 1.
LFunctionData adjoint(const maass::MaassForm& form);

// Rankin-Selberg product: degree n n', Satake power sums multiply,
// archimedean parameters are pairwise sums (parity shifts re-resolved).
// Both inputs must have conductor 1 (UnramifiedOnlyError otherwise).
RankinSelbergData rankin_selberg(const LFunctionData& a,
                                 const LFunctionData& b);

// --- evaluation -----------------------------------------------------------

struct AfeOptions {
    double x_balance = 1.0;   // kernel balance parameter X
    double rel_tol = 1e-10;   // term truncation target
};

// Completed value Lambda(s) = (s(s-1))^r q^{s/2} L(s,infty) L(s) by the
// smoothed approximate functional equation.  Entire in s.
cplx complete_lambda(const LFunctionData& L, cplx s);

// L(s) itself.  Preconditions per contract: Re s in [0.3, 3], analytic
// conductor at Im s below 1e8.
cplx afe_value(const LFunctionData& L, cplx s);
cplx afe_value(const LFunctionData& L, cplx s, double* err_estimate);

// Operational functional-equation residual at s: the spread of Lambda
// across kernel balance parameters plus the literal reflection identity,
// normalized by the local Lambda scale.  ~1e-9 for correct data; O(1) for
// wrong archimedean parameters, coefficients, or root number.
double fe_residual(const LFunctionData& L, cplx s);

double analytic_conductor(const LFunctionData& L, double t);

struct BhReport {
    double lhs_t, rhs_t;     // C(a x b, t) <= C(a x b) (3+|t|)^{n n'}
    double lhs_c, rhs_c;     // C(a x b)   <= C(a)^{n'} C(b)^{n}
    bool pass_t, pass_c;
};
BhReport bh_inequality_check(const LFunctionData& a, const LFunctionData& b,
                             double t);

// Argument-principle zero count N(sigma, T) with multiplicity in
// { Re >= sigma, |Im| <= T }.
int count_zeros(const LFunctionData& L, double sigma, double T);

struct CentralReport {
    double abs_l_half;       // |L(1/2+it)|
    double convexity_bench;  // C(pi,0)^{1/4} (3+|t|)^{n/4}
    double ratio;
    double abs_l_32_sq;      // |L(3/2+it)|^2
};
CentralReport central_bound_report(const LFunctionData& L, double t);

// JSON descriptor export (degree, conductor, arch params, pole order,
// first 64 coefficients, resolved root number).
std::string export_descriptor(const LFunctionData& L);

} // namespace aqe::lfun

#endif
