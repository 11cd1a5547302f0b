#include "aqe/lfun.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "aqe/maass.hpp"
#include "aqe/specfun.hpp"

namespace aqe::lfun {

namespace sf = aqe::specfun;

namespace {

constexpr double kPi = 3.14159265358979323846;

// --- coefficient machinery -------------------------------------------------

std::vector<long long> primes_up_to(long long n) {
    std::vector<bool> comp(n + 1, false);
    std::vector<long long> ps;
    for (long long p = 2; p <= n; p++) {
        if (comp[p]) continue;
        ps.push_back(p);
        for (long long q = p * p; q <= n; q += p) comp[q] = true;
    }
    return ps;
}

// lambda(p^k) for k = 0..kmax from power sums via Newton's identity for
// complete homogeneous symmetric functions: k h_k = sum_j s_j h_{k-j}.
std::vector<double> local_coeffs(const PowerSum& psum, long long p, int kmax) {
    std::vector<double> h(kmax + 1, 0.0), s(kmax + 1, 0.0);
    h[0] = 1.0;
    for (int j = 1; j <= kmax; j++) s[j] = psum(p, j);
    for (int k = 1; k <= kmax; k++) {
        double acc = 0.0;
        for (int j = 1; j <= k; j++) acc += s[j] * h[k - j];
        h[k] = acc / k;
    }
    return h;
}

std::vector<double> sieve_coeffs(const PowerSum& psum, std::size_t N) {
    std::vector<double> lam(N + 1, 0.0);
    lam[1] = 1.0;
    std::vector<int> spf(N + 1, 0);
    for (std::size_t i = 2; i <= N; i++) {
        if (spf[i]) continue;
        for (std::size_t j = i; j <= N; j += i)
            if (!spf[j]) spf[j] = (int)i;
    }
    for (long long p : primes_up_to((long long)N)) {
        int kmax = 0;
        long long pk = 1;
        while (pk <= (long long)N / p) {
            pk *= p;
            kmax++;
        }
        auto h = local_coeffs(psum, p, kmax);
        pk = 1;
        for (int k = 1; k <= kmax; k++) {
            pk *= p;
            lam[pk] = h[k];
        }
    }
    for (std::size_t n = 2; n <= N; n++) {
        long long p = spf[n];
        long long pk = p, m = (long long)n / p;
        while (m % p == 0) {
            pk *= p;
            m /= p;
        }
        if (m > 1) lam[n] = lam[pk] * lam[m];
    }
    return lam;
}

// --- archimedean kernel ------------------------------------------------------

cplx log_gamma_factor(const std::vector<cplx>& mu, cplx w) {
    cplx acc = 0.0;
    for (const cplx& m : mu)
        acc += sf::log_gamma((w + m) * 0.5) - (w + m) * 0.5 * std::log(kPi);
    return acc;
}

cplx gamma_factor(const std::vector<cplx>& mu, cplx w) {
    return std::exp(log_gamma_factor(mu, w));
}

// V(s, x) = (1/2 pi i) int_(c) gamma(s+u) x^{-u} du / u, by the trapezoid
// rule on u = c + i v; per-s node coefficients are reused across x with a
// rotation recurrence.
struct Kernel {
    double c = 1.2, h = 0.125;
    int K = 0;
    std::vector<cplx> g; // g[K + k] for k in [-K, K]

    cplx eval(double x) const {
        double lx = std::log(x);
        cplx rot = std::polar(1.0, -h * lx);
        cplx acc = g[K];
        cplx pw = rot;
        for (int k = 1; k <= K; k++) {
            acc += g[K + k] * pw + g[K - k] * std::conj(pw);
            pw *= rot;
        }
        return std::pow(x, -c) * acc;
    }
};

Kernel make_kernel(const std::vector<cplx>& mu, cplx s) {
    Kernel ker;
    ker.c = std::max(1.7 - s.real(), 1.2);
    ker.h = 0.125;
    double taumax = 0.0;
    for (const cplx& m : mu)
        taumax = std::max(taumax, std::abs(m.imag() + s.imag()));
    int d = (int)mu.size();
    double vmax = taumax + 200.0 / (kPi * std::max(1, d)) + 10.0;
    ker.K = (int)std::ceil(vmax / ker.h);
    ker.g.resize(2 * ker.K + 1);
    for (int k = -ker.K; k <= ker.K; k++) {
        cplx u(ker.c, k * ker.h);
        ker.g[ker.K + k] = ker.h / (2.0 * kPi) * gamma_factor(mu, s + u) / u;
    }
    return ker;
}

std::vector<cplx> dual_params(const std::vector<cplx>& mu) {
    std::vector<cplx> out;
    out.reserve(mu.size());
    for (const cplx& m : mu) out.push_back(std::conj(m));
    return out;
}

struct SumPair {
    cplx s1, s2; // principal and reflected sums
};

SumPair afe_sums(const LFunctionData& L, cplx s, double X, double rel_tol) {
    if (!L.self_dual)
        throw Error(ErrorCode::Internal, "afe: only self-dual data supported");
    Kernel k1 = make_kernel(L.arch_params, s);
    Kernel k2 = make_kernel(dual_params(L.arch_params), 1.0 - s);
    double sq = std::sqrt((double)L.arith_conductor);
    bool shortfall = false;
    SumPair out;
    // principal: sum a(n) n^{-s} q^{s/2} V(s, n/(X sqrt q))
    {
        cplx qs = std::exp(0.5 * s * std::log((double)L.arith_conductor));
        cplx acc = 0.0;
        double maxterm = 1e-280;
        int quiet = 0;
        std::size_t N = L.coeffs.size() - 1;
        for (std::size_t n = 1;; n++) {
            if (n > N) {
                shortfall = true;
                break;
            }
            cplx v = k1.eval((double)n / (X * sq));
            cplx term =
                L.coeffs[n] * std::exp(-s * std::log((double)n)) * v;
            acc += term;
            double mag = std::abs(term);
            double env = std::abs(v) * std::pow((double)n, -s.real());
            maxterm = std::max(maxterm, mag);
            if (n > 8 && env * (double)n < rel_tol * 1e-2 * maxterm &&
                mag < rel_tol * 1e-2 * maxterm)
                quiet++;
            else
                quiet = 0;
            if (quiet >= 25) break;
        }
        out.s1 = qs * acc;
    }
    // reflected: sum a(n) n^{s-1} q^{(1-s)/2} V~(1-s, n X / sqrt q)
    {
        cplx qs =
            std::exp(0.5 * (1.0 - s) * std::log((double)L.arith_conductor));
        cplx acc = 0.0;
        double maxterm = 1e-280;
        int quiet = 0;
        std::size_t N = L.coeffs.size() - 1;
        for (std::size_t n = 1;; n++) {
            if (n > N) {
                shortfall = true;
                break;
            }
            cplx v = k2.eval((double)n * X / sq);
            cplx term =
                L.coeffs[n] * std::exp((s - 1.0) * std::log((double)n)) * v;
            acc += term;
            double mag = std::abs(term);
            double env = std::abs(v) * std::pow((double)n, s.real() - 1.0);
            maxterm = std::max(maxterm, mag);
            if (n > 8 && env * (double)n < rel_tol * 1e-2 * maxterm &&
                mag < rel_tol * 1e-2 * maxterm)
                quiet++;
            else
                quiet = 0;
            if (quiet >= 25) break;
        }
        out.s2 = qs * acc;
    }
    if (shortfall)
        throw CoefficientShortfallError(
            "afe: coefficient list too short for " + L.label + " (have " +
            std::to_string(L.coeffs.size() - 1) + ")");
    return out;
}

// Entire completed value for given (W, Lambda(1)), balance X:
//   Lambda(s) = (s(s-1))^r (S1 + W S2) + r [ s P X^{1-s} - (s-1) W P X^{-s} ]
cplx lambda_from_sums(const LFunctionData& L, cplx s, const SumPair& sp,
                      double X, cplx W, cplx P) {
    cplx base = sp.s1 + W * sp.s2;
    if (L.pole_order == 0) return base;
    if (L.pole_order != 1)
        throw UnsupportedPoleOrderError(
            "lambda evaluation supports pole order <= 1");
    cplx pole = s * P * std::pow(X, 1.0 - s) -
                (s - 1.0) * W * P * std::pow(X, -s);
    return s * (s - 1.0) * base + pole;
}

cplx lambda_eval_x(const LFunctionData& L, cplx s, double X,
                   double rel_tol = 1e-10) {
    SumPair sp = afe_sums(L, s, X, rel_tol);
    return lambda_from_sums(L, s, sp, X, L.root_number, L.lambda_at_1);
}

// --- root number / pole datum fit -------------------------------------------

struct FeFit {
    double W = 1.0;
    double P = 0.0; // Lambda(1)
    double residual = 0.0;
};

// Joint fit of (W, Lambda(1)) from X-independence of the completed value.
FeFit fit_functional_equation(const LFunctionData& L) {
    const std::vector<cplx> spts = {cplx(0.72, 0.0), cplx(0.58, 0.31),
                                    cplx(0.84, -0.22)};
    const std::vector<double> xs = {0.78, 1.0, 1.28};
    int r = L.pole_order;
    std::vector<std::array<cplx, 3>> rows; // coefficients of (W, P, WP)
    std::vector<cplx> rhs;
    for (const cplx& s : spts) {
        std::vector<SumPair> sp;
        for (double X : xs) sp.push_back(afe_sums(L, s, X, 1e-9));
        auto E1 = [&](double X) { return s * std::pow(X, 1.0 - s); };
        auto E0 = [&](double X) { return -(s - 1.0) * std::pow(X, -s); };
        cplx ss1 = s * (s - 1.0);
        for (std::size_t j = 1; j < xs.size(); j++) {
            cplx f = (r == 1) ? ss1 : cplx(1.0);
            cplx dS1 = f * (sp[j].s1 - sp[0].s1);
            cplx dS2 = f * (sp[j].s2 - sp[0].s2);
            cplx dE1 = r == 1 ? (E1(xs[j]) - E1(xs[0])) : cplx(0.0);
            cplx dE0 = r == 1 ? (E0(xs[j]) - E0(xs[0])) : cplx(0.0);
            rows.push_back({dS2, dE1, dE0});
            rhs.push_back(-dS1);
        }
        if (r == 0) break; // one s-point suffices for the single unknown
    }
    int nunk = (r == 1) ? 3 : 1;
    Eigen::MatrixXd A(2 * (int)rows.size(), nunk);
    Eigen::VectorXd b(2 * (int)rows.size());
    for (std::size_t i = 0; i < rows.size(); i++) {
        double sc = std::max({std::abs(rows[i][0]), std::abs(rows[i][1]),
                              std::abs(rows[i][2]), std::abs(rhs[i]), 1e-300});
        A((int)(2 * i), 0) = rows[i][0].real() / sc;
        A((int)(2 * i + 1), 0) = rows[i][0].imag() / sc;
        if (nunk == 3) {
            A((int)(2 * i), 1) = rows[i][1].real() / sc;
            A((int)(2 * i + 1), 1) = rows[i][1].imag() / sc;
            A((int)(2 * i), 2) = rows[i][2].real() / sc;
            A((int)(2 * i + 1), 2) = rows[i][2].imag() / sc;
        }
        b((int)(2 * i)) = rhs[i].real() / sc;
        b((int)(2 * i + 1)) = rhs[i].imag() / sc;
    }
    Eigen::VectorXd sol = A.colPivHouseholderQr().solve(b);
    FeFit fit;
    fit.W = sol(0);
    fit.P = (nunk == 3) ? sol(1) : 0.0;
    double snapped = (fit.W >= 0.0) ? 1.0 : -1.0;
    fit.residual = std::abs(fit.W - snapped);
    fit.W = snapped;
    if (r == 1) {
        // refit P with W fixed
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < rows.size(); i++) {
            cplx coef = rows[i][1] + fit.W * rows[i][2];
            cplx r0 = rhs[i] - fit.W * rows[i][0];
            num += (std::conj(coef) * r0).real();
            den += std::norm(coef);
        }
        fit.P = den > 0.0 ? num / den : 0.0;
    }
    return fit;
}

// Spread of Lambda across kernel balances at a held-out point; the decisive
// metric for parity-shift resolution.
double x_consistency(const LFunctionData& L, cplx s) {
    std::vector<double> xs = {0.85, 1.0, 1.18};
    std::vector<cplx> vals;
    for (double X : xs) vals.push_back(lambda_eval_x(L, s, X, 1e-10));
    double spread = 0.0, scale = 0.0;
    for (auto& v : vals) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < vals.size(); i++)
        for (std::size_t j = i + 1; j < vals.size(); j++)
            spread = std::max(spread, std::abs(vals[i] - vals[j]));
    double floor_scale =
        1e-2 * std::exp(log_gamma_factor(L.arch_params, s).real()) *
        std::pow((double)L.arith_conductor, 0.5 * s.real());
    return spread / std::max(scale, floor_scale);
}

// --- parity-shift resolution ---------------------------------------------------

struct ArchBlock {
    double tau = 0.0; // imaginary part; pair {delta +- i tau} if pair
    bool pair = false;
    int guess = 0; // delta in {0, 1}
};

std::vector<cplx> assemble_params(const std::vector<ArchBlock>& blocks,
                                  unsigned mask) {
    std::vector<cplx> mu;
    for (std::size_t i = 0; i < blocks.size(); i++) {
        int delta = (mask >> i) & 1u;
        if (blocks[i].pair) {
            mu.push_back(cplx(delta, blocks[i].tau));
            mu.push_back(cplx(delta, -blocks[i].tau));
        } else {
            mu.push_back(cplx(delta, blocks[i].tau));
        }
    }
    return mu;
}

void resolve_arch_and_fe(LFunctionData& L,
                         const std::vector<ArchBlock>& blocks) {
    unsigned nb = (unsigned)blocks.size();
    unsigned gmask = 0;
    for (unsigned i = 0; i < nb; i++)
        if (blocks[i].guess) gmask |= (1u << i);
    std::vector<unsigned> order;
    for (unsigned m = 0; m < (1u << nb); m++) order.push_back(m ^ gmask);
    std::stable_sort(order.begin(), order.end(), [&](unsigned a, unsigned b) {
        return __builtin_popcount(a ^ gmask) < __builtin_popcount(b ^ gmask);
    });
    double best = 1e300;
    std::vector<cplx> best_mu;
    FeFit best_fit;
    const cplx s_held(0.66, 0.40);
    for (unsigned mask : order) {
        L.arch_params = assemble_params(blocks, mask);
        FeFit fit = fit_functional_equation(L);
        L.root_number = fit.W;
        L.lambda_at_1 = fit.P;
        double res = x_consistency(L, s_held);
        if (res < best) {
            best = res;
            best_mu = L.arch_params;
            best_fit = fit;
        }
        if (best < 1e-8) break;
    }
    L.arch_params = best_mu;
    L.root_number = best_fit.W;
    L.lambda_at_1 = best_fit.P;
    L.root_resolved = true;
    L.fe_fit_residual = best;
    if (best > 0.05)
        throw Error(ErrorCode::Internal,
                    "functional-equation fit failed for " + L.label +
                        " (residual " + std::to_string(best) + ")");
}

int kronecker_symbol(long long a, long long n) {
    static const int t2[8] = {0, 1, 0, -1, 0, -1, 0, 1};
    int k = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;
    }
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int v = 0;
    while ((n & 1) == 0) {
        v++;
        n >>= 1;
    }
    if (v & 1) k *= t2[((a % 8) + 8) % 8];
    a = ((a % n) + n) % n;
    while (a) {
        v = 0;
        while ((a & 1) == 0) {
            v++;
            a >>= 1;
        }
        if (v & 1) k *= t2[n % 8];
        if ((a % 4) == 3 && (n % 4) == 3) k = -k;
        long long r = n % a;
        n = a;
        a = r;
    }
    return (n == 1) ? k : 0;
}

bool squarefree(long long m) {
    m = std::llabs(m);
    for (long long p = 2; p * p <= m; p++)
        if (m % (p * p) == 0) return false;
    return true;
}

bool is_fundamental(long long D) {
    if (D == 1) return true;
    if (D == 0) return false;
    long long m4 = ((D % 4) + 4) % 4;
    if (m4 == 1) return squarefree(D);
    if (m4 == 0) {
        long long m = D / 4;
        long long mm4 = ((m % 4) + 4) % 4;
        return (mm4 == 2 || mm4 == 3) && squarefree(m);
    }
    return false;
}

} // namespace

// --- LFunctionData methods ----------------------------------------------------

double LFunctionData::coeff(long long n) const {
    if (n < 1 || (std::size_t)n >= coeffs.size())
        throw CoefficientShortfallError("coefficient index out of range");
    return coeffs[n];
}

std::vector<cplx> LFunctionData::satake(long long p) const {
    int d = degree;
    std::vector<double> e(d + 1, 0.0), s(d + 1, 0.0);
    e[0] = 1.0;
    for (int j = 1; j <= d; j++) s[j] = psum(p, j);
    for (int k = 1; k <= d; k++) {
        double acc = 0.0;
        for (int j = 1; j <= k; j++)
            acc += ((j % 2) ? 1.0 : -1.0) * e[k - j] * s[j];
        e[k] = acc / k;
    }
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; i++) comp(0, i) = ((i % 2) ? -1.0 : 1.0) * e[i + 1];
    for (int i = 1; i < d; i++) comp(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
    std::vector<cplx> roots(d);
    for (int i = 0; i < d; i++) roots[i] = es.eigenvalues()(i);
    return roots;
}

// --- constructors ---------------------------------------------------------------

LFunctionData zeta_data(std::size_t n_coeffs) {
    LFunctionData L;
    L.label = "zeta";
    L.degree = 1;
    L.arith_conductor = 1;
    L.pole_order = 1;
    L.psum = [](long long, int) { return 1.0; };
    L.coeffs = sieve_coeffs(L.psum, n_coeffs);
    resolve_arch_and_fe(L, {ArchBlock{0.0, false, 0}});
    return L;
}

LFunctionData dirichlet_l(long long D, std::size_t n_coeffs) {
    if (!is_fundamental(D) || std::llabs(D) > 1'000'000)
        throw NotFundamentalError(
            "dirichlet_l: D = " + std::to_string(D) +
            " is not a supported fundamental discriminant");
    if (D == 1) return zeta_data(n_coeffs);
    LFunctionData L;
    L.label = "chi_" + std::to_string(D);
    L.degree = 1;
    L.arith_conductor = std::llabs(D);
    L.pole_order = 0;
    L.psum = [D](long long p, int j) {
        int chi = kronecker_symbol(D, p);
        return (j % 2 == 0) ? (double)(chi * chi) : (double)chi;
    };
    L.coeffs = sieve_coeffs(L.psum, n_coeffs);
    int guess = D > 0 ? 0 : 1;
    resolve_arch_and_fe(L, {ArchBlock{0.0, false, guess}});
    return L;
}

LFunctionData from_maass(const maass::MaassForm& form) {
    LFunctionData L;
    L.label = "maass_t" + std::to_string(form.t);
    L.degree = 2;
    L.arith_conductor = 1;
    L.pole_order = 0;
    std::vector<double> lam = form.coeffs;
    L.psum = [lam](long long p, int j) {
        // alpha + 1/alpha = lambda(p); Chebyshev recurrence for s_j
        if ((std::size_t)p >= lam.size())
            throw CoefficientShortfallError(
                "from_maass: prime beyond form truncation");
        if (j == 0) return 2.0;
        double s1 = lam[p];
        if (j == 1) return s1;
        double sm2 = 2.0, sm1 = s1, sj = s1;
        for (int k = 2; k <= j; k++) {
            sj = s1 * sm1 - sm2;
            sm2 = sm1;
            sm1 = sj;
        }
        return sj;
    };
    L.coeffs = lam;
    int guess = form.parity == maass::Parity::Odd ? 1 : 0;
    resolve_arch_and_fe(L, {ArchBlock{form.t, true, guess}});
    return L;
}

LFunctionData adjoint(const maass::MaassForm& form) {
    LFunctionData L;
    L.label = "ad_t" + std::to_string(form.t);
    L.degree = 3;
    L.arith_conductor = 1;
    L.pole_order = 0;
    std::vector<double> lam = form.coeffs;
    L.psum = [lam](long long p, int j) {
        // Satake {alpha^2, 1, alpha^{-2}}: s_j(Ad) = s_j(phi)^2 - 1
        if ((std::size_t)p >= lam.size())
            throw CoefficientShortfallError(
                "adjoint: prime beyond form truncation");
        if (j == 0) return 3.0;
        double s1 = lam[p];
        double sj = s1;
        double sm2 = 2.0, sm1 = s1;
        for (int k = 2; k <= j; k++) {
            sj = s1 * sm1 - sm2;
            sm2 = sm1;
            sm1 = sj;
        }
        return sj * sj - 1.0;
    };
    std::size_t N = std::min<std::size_t>(lam.size() - 1, 8192);
    L.coeffs = sieve_coeffs(L.psum, N);
    resolve_arch_and_fe(
        L, {ArchBlock{2.0 * form.t, true, 0}, ArchBlock{0.0, false, 1}});
    return L;
}

RankinSelbergData rankin_selberg(const LFunctionData& a,
                                 const LFunctionData& b) {
    if (a.arith_conductor != 1 || b.arith_conductor != 1)
        throw UnramifiedOnlyError(
            "rankin_selberg: only level-1 (everywhere unramified) inputs");
    RankinSelbergData L;
    L.label = "rs(" + a.label + "," + b.label + ")";
    L.degree = a.degree * b.degree;
    L.arith_conductor = 1;
    PowerSum pa = a.psum, pb = b.psum;
    L.psum = [pa, pb](long long p, int j) { return pa(p, j) * pb(p, j); };

    // dual detection (self-dual real data: b dual to a iff same local data)
    bool dual = (a.degree == b.degree);
    if (dual) {
        std::size_t m =
            std::min({a.coeffs.size(), b.coeffs.size(), (std::size_t)64});
        for (std::size_t n = 1; n < m; n++)
            if (std::abs(a.coeffs[n] - b.coeffs[n]) > 1e-8) {
                dual = false;
                break;
            }
    }
    L.pole_order = dual ? 1 : 0;

    std::size_t N = std::min(a.coeffs.size(), b.coeffs.size()) - 1;
    N = std::min<std::size_t>(N, 20000);
    L.coeffs = sieve_coeffs(L.psum, N);

    // archimedean blocks from pairwise parameter sums
    std::vector<ArchBlock> blocks;
    std::vector<cplx> sums;
    for (const cplx& ma : a.arch_params)
        for (const cplx& mb : b.arch_params) sums.push_back(ma + mb);
    std::vector<bool> used(sums.size(), false);
    for (std::size_t i = 0; i < sums.size(); i++) {
        if (used[i]) continue;
        double tau = sums[i].imag();
        int guess = ((int)std::lround(sums[i].real())) & 1;
        used[i] = true;
        if (std::abs(tau) < 1e-9) {
            blocks.push_back(ArchBlock{0.0, false, guess});
            continue;
        }
        bool paired = false;
        for (std::size_t j = i + 1; j < sums.size(); j++) {
            if (used[j]) continue;
            if (std::abs(sums[j].imag() + tau) < 1e-9 &&
                std::abs(sums[j].real() - sums[i].real()) < 1e-9) {
                used[j] = true;
                paired = true;
                break;
            }
        }
        if (!paired)
            throw Error(ErrorCode::Internal,
                        "rankin_selberg: unpaired archimedean parameter");
        blocks.push_back(ArchBlock{std::abs(tau), true, guess});
    }
    if (blocks.size() > 6)
        throw Error(ErrorCode::Internal,
                    "rankin_selberg: too many parity blocks");
    resolve_arch_and_fe(L, blocks);
    return L;
}

// --- evaluation ----------------------------------------------------------------

cplx complete_lambda(const LFunctionData& L, cplx s) {
    return lambda_eval_x(L, s, 1.0);
}

cplx afe_value(const LFunctionData& L, cplx s, double* err_estimate) {
    if (s.real() < 0.3 || s.real() > 3.0)
        throw DomainError("afe_value: Re(s) must lie in [0.3, 3]");
    if (analytic_conductor(L, s.imag()) > 1e8)
        throw ConductorTooLargeError("afe_value: analytic conductor > 1e8");
    if (L.pole_order >= 1 &&
        (std::abs(s - 1.0) < 1e-6 || std::abs(s) < 1e-6))
        throw NearPoleError("afe_value: s too close to the pole");
    cplx lam = lambda_eval_x(L, s, 1.0);
    if (err_estimate) {
        cplx lam2 = lambda_eval_x(L, s, 1.21);
        *err_estimate =
            std::abs(lam - lam2) / std::max(std::abs(lam), 1e-300);
    }
    cplx denom = gamma_factor(L.arch_params, s) *
                 std::exp(0.5 * s * std::log((double)L.arith_conductor));
    if (L.pole_order == 1) denom *= s * (s - 1.0);
    return lam / denom;
}

cplx afe_value(const LFunctionData& L, cplx s) {
    return afe_value(L, s, nullptr);
}

double fe_residual(const LFunctionData& L, cplx s) {
    std::vector<double> xs = {0.75, 1.0, 1.33};
    std::vector<cplx> vals;
    for (double X : xs) vals.push_back(lambda_eval_x(L, s, X));
    cplx refl = lambda_eval_x(L, 1.0 - s, 1.0);
    double spread = std::abs(vals[0] - vals[2]);
    spread = std::max(spread, std::abs(vals[1] - vals[0]));
    spread = std::max(spread, std::abs(vals[1] - L.root_number * refl));
    double scale = 0.0;
    for (auto& v : vals) scale = std::max(scale, std::abs(v));
    scale = std::max(scale, std::abs(refl));
    double floor_scale =
        1e-2 * std::exp(log_gamma_factor(L.arch_params, s).real()) *
        std::pow((double)L.arith_conductor, 0.5 * s.real());
    return spread / std::max(scale, floor_scale);
}

double analytic_conductor(const LFunctionData& L, double t) {
    double c = (double)L.arith_conductor;
    for (const cplx& m : L.arch_params)
        c *= 3.0 + std::abs(cplx(0.0, t) + m);
    return c;
}

BhReport bh_inequality_check(const LFunctionData& a, const LFunctionData& b,
                             double t) {
    BhReport rep{};
    double c_rs_t = 1.0, c_rs = 1.0;
    for (const cplx& ma : a.arch_params)
        for (const cplx& mb : b.arch_params) {
            c_rs *= 3.0 + std::abs(ma + mb);
            c_rs_t *= 3.0 + std::abs(cplx(0.0, t) + ma + mb);
        }
    double ca = analytic_conductor(a, 0.0), cb = analytic_conductor(b, 0.0);
    int n = a.degree, np = b.degree;
    rep.lhs_t = c_rs_t;
    rep.rhs_t = c_rs * std::pow(3.0 + std::abs(t), (double)n * np);
    rep.lhs_c = c_rs;
    rep.rhs_c = std::pow(ca, (double)np) * std::pow(cb, (double)n);
    rep.pass_t = rep.lhs_t <= rep.rhs_t * (1.0 + 1e-12);
    rep.pass_c = rep.lhs_c <= rep.rhs_c * (1.0 + 1e-12);
    return rep;
}

int count_zeros(const LFunctionData& L, double sigma, double T) {
    if (sigma < 0.0 || sigma > 1.0)
        throw DomainError("count_zeros: sigma must lie in [0,1]");
    if (T > 50.0) throw DomainError("count_zeros: T <= 50 supported");
    const double B = 1.6;
    auto lam = [&](cplx s) { return lambda_eval_x(L, s, 1.0, 1e-9); };
    std::vector<cplx> corners = {cplx(B, -T), cplx(B, T), cplx(sigma, T),
                                 cplx(sigma, -T), cplx(B, -T)};
    double total_arg = 0.0;
    for (std::size_t e = 0; e + 1 < corners.size(); e++) {
        struct Seg {
            cplx a, b;
            cplx fa, fb;
            int depth;
        };
        std::vector<Seg> stack;
        stack.push_back({corners[e], corners[e + 1], lam(corners[e]),
                         lam(corners[e + 1]), 0});
        while (!stack.empty()) {
            Seg sg = stack.back();
            stack.pop_back();
            double m0 = std::abs(sg.fa), m1 = std::abs(sg.fb);
            if (m0 == 0.0 || m1 == 0.0)
                throw ZeroOnBoundaryError(
                    "count_zeros: zero on the contour; perturb sigma or T");
            cplx mid = 0.5 * (sg.a + sg.b);
            cplx fm = lam(mid);
            if (std::abs(fm) == 0.0)
                throw ZeroOnBoundaryError(
                    "count_zeros: zero on the contour; perturb sigma or T");
            // accept only when the two half-steps reproduce the whole step's
            // phase (catches 2 pi aliasing near off-contour zeros)
            double d1 = std::arg(fm / sg.fa);
            double d2 = std::arg(sg.fb / fm);
            double d = std::arg(sg.fb / sg.fa);
            bool additive = std::abs(d1 + d2 - d) < 1e-9;
            if (additive && std::abs(d1) < 0.9 && std::abs(d2) < 0.9) {
                total_arg += d;
                continue;
            }
            if (sg.depth > 40) {
                if (std::min({m0, m1, std::abs(fm)}) <
                    1e-9 * std::max(m0, m1))
                    throw ZeroOnBoundaryError(
                        "count_zeros: near-zero on the contour");
                throw NonIntegerWindingError(
                    "count_zeros: contour refinement exhausted");
            }
            stack.push_back({mid, sg.b, fm, sg.fb, sg.depth + 1});
            stack.push_back({sg.a, mid, sg.fa, fm, sg.depth + 1});
        }
    }
    double winding = total_arg / (2.0 * kPi);
    long n = std::lround(winding);
    if (std::abs(winding - (double)n) > 0.1)
        throw NonIntegerWindingError("count_zeros: winding " +
                                     std::to_string(winding) +
                                     " not within 0.1 of an integer");
    return (int)n;
}

CentralReport central_bound_report(const LFunctionData& L, double t) {
    CentralReport rep{};
    rep.abs_l_half = std::abs(afe_value(L, cplx(0.5, t)));
    rep.convexity_bench = std::pow(analytic_conductor(L, t), 0.25);
    rep.ratio = rep.abs_l_half / rep.convexity_bench;
    rep.abs_l_32_sq = std::norm(afe_value(L, cplx(1.5, t)));
    return rep;
}

std::string export_descriptor(const LFunctionData& L) {
    std::ostringstream os;
    os.precision(17);
    os << "{\"label\":\"" << L.label << "\",\"degree\":" << L.degree
       << ",\"conductor\":" << L.arith_conductor
       << ",\"pole_order\":" << L.pole_order << ",\"arch_params\":[";
    for (std::size_t i = 0; i < L.arch_params.size(); i++) {
        if (i) os << ",";
        os << "[" << L.arch_params[i].real() << ","
           << L.arch_params[i].imag() << "]";
    }
    os << "],\"root_number\":[" << L.root_number.real() << ","
       << L.root_number.imag() << "],\"coeffs\":[";
    for (int n = 1; n <= 64 && (std::size_t)n < L.coeffs.size(); n++) {
        if (n > 1) os << ",";
        os << L.coeffs[n];
    }
    os << "]}";
    return os.str();
}

} // namespace aqe::lfun
