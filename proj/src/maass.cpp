#include "aqe/maass.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "aqe/quadrule.hpp"
#include "json.hpp"

namespace aqe::maass {

namespace sf = aqe::specfun;
namespace hg = aqe::hypgeom;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr const char* kSolverVersion = "aqe-hejhal-1";

// x with e^{pi t/2} K_{it}(x) ~ e^{-eta0} (inverts the decay exponent)
double x_at_eta(double t, double eta0) {
    return sf::bessel_k_it_cutoff(t, std::exp(-eta0));
}

// in-place radix-2 FFT, n a power of two
void fft(std::vector<std::complex<double>>& a) {
    std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; i++) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = -2.0 * kPi / (double)len;
        std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; j++) {
                std::complex<double> u = a[i + j];
                std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

struct Collocation {
    double Y;
    int M0, J;
    Parity parity;
    std::vector<double> xj;
    std::vector<hg::Point> red;

    Collocation(double Y_, int M0_, Parity p) : Y(Y_), M0(M0_), parity(p) {
        J = (int)std::ceil(1.35 * M0) + 8;
        xj.resize(J);
        red.resize(J);
        for (int j = 0; j < J; j++) {
            xj[j] = (2.0 * j + 1.0) / (4.0 * J); // in (0, 1/2)
            red[j] = hg::reduce(hg::Point{xj[j], Y}).first;
        }
    }
};

double cs(Parity p, double arg) {
    return p == Parity::Even ? std::cos(arg) : std::sin(arg);
}

// Secular least-squares residual at t; optionally returns the c_m solution
// (lambda(1) = 1 normalization).
double secular(const Collocation& co, double t,
               std::vector<double>* coeffs_out) {
    sf::KBesselTable tab(t, 2.0 * kPi * co.Y * 0.95);
    auto kap = [&](int m, double y) {
        double arg = 2.0 * kPi * m * y;
        return std::sqrt(y) * tab.eval_scaled(arg);
    };
    int M0 = co.M0, J = co.J;
    Eigen::MatrixXd A(J, M0);
    for (int j = 0; j < J; j++) {
        for (int m = 1; m <= M0; m++) {
            double a = kap(m, co.Y) * cs(co.parity, 2.0 * kPi * m * co.xj[j]);
            double b = kap(m, co.red[j].y) *
                       cs(co.parity, 2.0 * kPi * m * co.red[j].x);
            A(j, m - 1) = a - b;
        }
    }
    // column scaling for conditioning
    std::vector<double> scale(M0, 1.0);
    for (int m = 0; m < M0; m++) {
        double s = A.col(m).cwiseAbs().maxCoeff();
        scale[m] = (s > 0.0) ? s : 1.0;
        A.col(m) /= scale[m];
    }
    Eigen::VectorXd b = -A.col(0);
    Eigen::MatrixXd Ar = A.rightCols(M0 - 1);
    Eigen::VectorXd c = Ar.colPivHouseholderQr().solve(b);
    double resid = (Ar * c - b).norm() / std::max(b.norm(), 1e-300);
    if (coeffs_out) {
        coeffs_out->assign(M0 + 1, 0.0);
        (*coeffs_out)[1] = 1.0;
        for (int m = 2; m <= M0; m++)
            (*coeffs_out)[m] = c(m - 2) * scale[0] / scale[m - 1];
    }
    return resid;
}

double golden_min(const std::function<double(double)>& f, double a, double b,
                  double tol, double* fmin) {
    const double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    double xm = 0.5 * (a + b);
    if (fmin) *fmin = std::min(f1, f2);
    return xm;
}

// Extend coefficients to n_target by Hejhal's second phase: along a low
// horocycle the Fourier coefficients are read off by a DFT of phi evaluated
// through automorphy (the reduced points only ever need the first ~10
// coefficients, so errors do not compound across bands).
void pump_coefficients(std::vector<double>& lam, double t, Parity parity,
                       int n_target, const sf::KBesselTable& tab) {
    auto eval_red = [&](const hg::Point& zr) {
        double acc = 0.0;
        for (int m = 1;; m++) {
            double arg = 2.0 * kPi * m * zr.y;
            if (arg >= tab.cutoff()) break;
            if ((std::size_t)m >= lam.size()) break;
            acc += lam[m] * tab.eval_scaled(arg) *
                   cs(parity, 2.0 * kPi * m * zr.x);
        }
        return std::sqrt(zr.y) * acc;
    };
    int m_cur = (int)lam.size() - 1;
    double x8 = x_at_eta(t, 8.0);
    while (m_cur < n_target) {
        int m_top = std::min(n_target, (int)std::ceil(1.5 * m_cur) + 2);
        double Yb = x8 / (2.0 * kPi * m_top);
        int m_full = (int)std::ceil(tab.cutoff() / (2.0 * kPi * Yb)) + 2;
        std::size_t nx = 1;
        while (nx < (std::size_t)(2.2 * m_full)) nx <<= 1;
        std::vector<std::complex<double>> f(nx);
        for (std::size_t k = 0; k < nx; k++) {
            hg::Point z{(double)k / (double)nx, Yb};
            f[k] = eval_red(hg::reduce(z).first);
        }
        fft(f);
        lam.resize(m_top + 1, 0.0);
        double sy = std::sqrt(Yb);
        for (int m = m_cur + 1; m <= m_top; m++) {
            double kapm = sy * tab.eval_scaled(2.0 * kPi * m * Yb);
            double am;
            if (parity == Parity::Even)
                am = 2.0 * f[m].real() / (double)nx;
            else
                am = -2.0 * f[m].imag() / (double)nx;
            lam[m] = am / kapm;
        }
        m_cur = m_top;
    }
}

// L^2 normalization: grid integral over the truncated domain plus the
// Parseval cusp tail, for the unnormalized expansion (rho = 1, scaled K).
double l2_norm_unnormalized(const std::vector<double>& lam, double t,
                            Parity parity, const sf::KBesselTable& tab) {
    auto phi_hat = [&](const hg::Point& z) {
        double acc = 0.0;
        for (int m = 1;; m++) {
            double arg = 2.0 * kPi * m * z.y;
            if (arg >= tab.cutoff()) break;
            if ((std::size_t)m >= lam.size()) break;
            acc += lam[m] * tab.eval_scaled(arg) *
                   cs(parity, 2.0 * kPi * m * z.x);
        }
        return std::sqrt(z.y) * acc;
    };
    double Y = 3.0;
    hg::QuadratureGrid grid(Y, hg::GridResolution{64, 64});
    double main = grid.integrate([&](const hg::Point& z) {
        double v = phi_hat(hg::reduce(z).first);
        return v * v;
    });
    // tail: (1/2) sum_m lam(m)^2 int_Y^inf Khat(2 pi m y)^2 dy/y
    double tail = 0.0;
    std::vector<double> qx, qw;
    for (int m = 1;; m++) {
        double a0 = 2.0 * kPi * m * Y;
        if (a0 >= tab.cutoff()) break;
        double l0 = std::log(a0), l1 = std::log(tab.cutoff());
        quadrule::gauss_legendre_ab(48, l0, l1, qx, qw);
        double im = 0.0;
        for (std::size_t k = 0; k < qx.size(); k++) {
            double u = std::exp(qx[k]);
            double kv = tab.eval_scaled(u);
            im += qw[k] * kv * kv; // du/u absorbed by log substitution
        }
        tail += 0.5 * lam[m] * lam[m] * im;
    }
    return main + tail;
}

} // namespace

double MaassForm::lambda(long long n) const {
    if (n < 1 || (std::size_t)n >= coeffs.size())
        throw TruncationError("lambda(n) beyond stored truncation");
    return coeffs[n];
}

double MaassForm::eval_scale() const {
    return rho * std::exp(-kPi * t / 2.0);
}

const sf::KBesselTable& MaassForm::table(double x_min) const {
    if (!table_ || table_->x_min() > x_min)
        table_ = std::make_shared<sf::KBesselTable>(t, x_min);
    return *table_;
}

double secular_residual_at(double t, Parity parity, double Y, int M0) {
    Collocation co(Y, M0, parity);
    return secular(co, t, nullptr);
}

std::vector<MaassForm> solve_form(double t_lo, double t_hi, Parity parity,
                                  int truncation, const SolveOptions& opt) {
    if (t_hi <= t_lo)
        throw DomainError("solve_form: window must be nonempty");
    if (truncation < 10 + 2.0 * t_hi)
        throw IllConditionedError(
            "solve_form: truncation must be at least 10 + 2 * window top");
    if (t_lo < 1.0)
        t_lo = 1.0; // no exceptional spectrum at level 1; avoid t ~ 0 noise
    if (t_hi - t_lo > 2.0) {
        // wide windows are scanned in chunks of width <= 2
        std::vector<MaassForm> all;
        for (double a = t_lo; a < t_hi; a += 2.0) {
            double b = std::min(a + 2.0, t_hi);
            auto part = solve_form(a, b, parity, truncation, opt);
            for (auto& f : part) {
                bool dup = false;
                for (const auto& g : all)
                    if (std::abs(g.t - f.t) < 1e-6) dup = true;
                if (!dup) all.push_back(std::move(f));
            }
        }
        return all;
    }

    auto M0_for = [&](double Y) {
        double cut = sf::bessel_k_it_cutoff(t_hi, 1e-16);
        return (int)std::ceil(cut / (2.0 * kPi * Y));
    };
    Collocation coA(opt.base_height, M0_for(opt.base_height), parity);
    Collocation coB(opt.second_height, M0_for(opt.second_height), parity);

    auto rA = [&](double t) { return secular(coA, t, nullptr); };
    auto rB = [&](double t) { return secular(coB, t, nullptr); };

    // scan for dips of the secular residual
    std::vector<double> ts, rs;
    for (double t = t_lo - opt.scan_step; t <= t_hi + opt.scan_step;
         t += opt.scan_step) {
        ts.push_back(t);
        rs.push_back(rA(t));
    }
    std::vector<MaassForm> out;
    for (std::size_t i = 1; i + 1 < ts.size(); i++) {
        if (!(rs[i] < rs[i - 1] && rs[i] < rs[i + 1])) continue;
        double fmin = 0.0;
        double tA = golden_min(rA, ts[i - 1], ts[i + 1], 1e-11, &fmin);
        if (fmin > opt.dip_threshold) continue;
        if (tA < t_lo || tA > t_hi) continue;
        // certify against the second, independent collocation configuration
        double fminB = 0.0;
        double tB = golden_min(rB, tA - 2.0 * opt.scan_step,
                               tA + 2.0 * opt.scan_step, 1e-11, &fminB);
        if (fminB > opt.dip_threshold || std::abs(tA - tB) > 1e-8)
            throw NoConvergenceError(
                "solve_form: dip at t ~ " + std::to_string(tA) +
                " failed two-height certification (|dt| = " +
                std::to_string(std::abs(tA - tB)) + ")");
        MaassForm form;
        form.t = 0.5 * (tA + tB);
        form.parity = parity;
        form.solver_version = kSolverVersion;
        std::vector<double> cA;
        double res = secular(coA, form.t, &cA);
        form.secular_residual = std::max(res, std::max(fmin, fminB));
        // keep only the well-conditioned head of the solve, then pump
        double x8 = x_at_eta(form.t, 8.0);
        int m_rel = std::max(12, (int)(x8 / (2.0 * kPi * coA.Y)));
        m_rel = std::min<int>(m_rel, (int)cA.size() - 1);
        std::vector<double> lam(cA.begin(), cA.begin() + m_rel + 1);
        double x_min_needed =
            x8 / (2.0 * kPi * truncation) * (2.0 * kPi) * 0.9;
        sf::KBesselTable tab(form.t,
                             std::min(2.0 * kPi * coA.Y * 0.95, x_min_needed),
                             opt.prec);
        pump_coefficients(lam, form.t, parity, truncation, tab);
        if ((int)lam.size() - 1 > truncation) lam.resize(truncation + 1);
        form.coeffs = lam;
        form.truncation = (int)lam.size() - 1;
        double S = l2_norm_unnormalized(lam, form.t, parity, tab);
        form.rho = std::exp(kPi * form.t / 2.0) / std::sqrt(S);
        form.table(1.0);
        out.push_back(std::move(form));
    }
    return out;
}

double evaluate(const MaassForm& form, const hypgeom::Point& z) {
    hg::Point zr = hg::reduce(z).first;
    const sf::KBesselTable& tab = form.table();
    double acc = 0.0;
    for (int m = 1;; m++) {
        double arg = 2.0 * kPi * m * zr.y;
        if (arg >= tab.cutoff()) break;
        if ((std::size_t)m >= form.coeffs.size()) break;
        acc += form.coeffs[m] * tab.eval_scaled(arg) *
               cs(form.parity, 2.0 * kPi * m * zr.x);
    }
    return form.eval_scale() * std::sqrt(zr.y) * acc;
}

std::vector<double> hecke_eigenvalues(const MaassForm& form, int n_max) {
    if (n_max < 1 || n_max > form.truncation)
        throw TruncationError("hecke_eigenvalues: n_max beyond truncation");
    return std::vector<double>(form.coeffs.begin() + 1,
                               form.coeffs.begin() + n_max + 1);
}

double hecke_residual(const MaassForm& form, long long limit) {
    if (limit <= 0) limit = form.truncation;
    limit = std::min<long long>(limit, form.truncation);
    double worst = 0.0;
    for (long long m = 2; m * m <= limit; m++)
        for (long long n = m + 1; m * n <= limit; n++) {
            if (std::gcd(m, n) != 1) continue;
            worst = std::max(worst, std::abs(form.coeffs[m] * form.coeffs[n] -
                                             form.coeffs[m * n]));
        }
    // p-power relation lambda(p)^2 = lambda(p^2) + 1
    for (long long p : {2LL, 3LL, 5LL, 7LL}) {
        if (p * p > limit) break;
        worst = std::max(worst, std::abs(form.coeffs[p] * form.coeffs[p] -
                                         form.coeffs[p * p] - 1.0));
    }
    return worst;
}

cplx eisenstein_scattering(cplx s) {
    return sf::xi_completed(2.0 * s - 1.0) / sf::xi_completed(2.0 * s);
}

cplx eisenstein_eval(const hypgeom::Point& z, cplx s) {
    if (std::abs(s - 1.0) < 1e-9)
        throw PoleError("eisenstein_eval: pole at s = 1");
    if (s.real() < 0.5 - 1e-12 || s.real() > 3.0)
        throw DomainError("eisenstein_eval: Re(s) must lie in [1/2, 3]");
    if (std::abs(s - 0.5) < 1e-10) return 0.0; // E(z, 1/2) vanishes
    hg::Point zr = hg::reduce(z).first;
    double y = zr.y, x = zr.x;
    cplx phis = eisenstein_scattering(s);
    cplx val = std::exp(s * std::log(y)) + phis * std::exp((1.0 - s) * std::log(y));
    cplx nu = s - 0.5;
    double cutoff = std::abs(nu.imag()) + 48.0;
    cplx pref = 4.0 / sf::xi_completed(2.0 * s) * std::sqrt(y);
    for (int n = 1;; n++) {
        double arg = 2.0 * kPi * n * y;
        if (arg > cutoff) break;
        // sigma_{1-2s}(n) = sum_{d | n} d^{1-2s}
        cplx sig = 0.0;
        for (int d = 1; d <= n; d++)
            if (n % d == 0) sig += std::exp((1.0 - 2.0 * s) * std::log((double)d));
        cplx term = std::exp((s - 0.5) * std::log((double)n)) * sig *
                    sf::bessel_k_nu(nu, arg) * std::cos(2.0 * kPi * n * x);
        val += pref * term;
    }
    return val;
}

int weyl_count(double T, const Catalog& catalog) {
    auto covered = [&](const std::vector<std::pair<double, double>>& iv) {
        // merge and check [1, T] coverage (no spectrum below t = 1)
        auto v = iv;
        std::sort(v.begin(), v.end());
        double reach = 1.0;
        for (auto& [a, b] : v) {
            if (a > reach + 1e-9) return false;
            reach = std::max(reach, b);
            if (reach >= T) return true;
        }
        return reach >= T;
    };
    if (!covered(catalog.scanned_even) || !covered(catalog.scanned_odd))
        throw IncompleteCatalogError(
            "weyl_count: scan coverage has gaps below T");
    int n = 0;
    for (const auto& f : catalog.forms)
        if (std::abs(f.t) <= T) n++;
    return n;
}

void save_form(const MaassForm& form, const std::string& path) {
    nlohmann::json j;
    j["t"] = form.t;
    j["parity"] = form.parity == Parity::Even ? "even" : "odd";
    j["coeffs"] = std::vector<double>(form.coeffs.begin() + 1,
                                      form.coeffs.end());
    j["truncation"] = form.truncation;
    j["secular_residual"] = form.secular_residual;
    j["rho"] = form.rho;
    j["solver_version"] = form.solver_version;
    std::ofstream os(path);
    if (!os) throw IoError("save_form: cannot open " + path);
    os << j.dump(2) << "\n";
}

MaassForm load_form(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("load_form: cannot open " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw IoError(std::string("load_form: parse error: ") + e.what());
    }
    MaassForm form;
    try {
        form.t = j.at("t").get<double>();
    } catch (const std::exception&) {
        throw SchemaVersionError("load_form: missing required field");
    }
    std::string p = j.at("parity").get<std::string>();
    if (p != "even" && p != "odd")
        throw SchemaVersionError("load_form: unknown parity value");
    form.parity = p == "even" ? Parity::Even : Parity::Odd;
    auto cs_ = j.at("coeffs").get<std::vector<double>>();
    form.coeffs.assign(1, 0.0);
    form.coeffs.insert(form.coeffs.end(), cs_.begin(), cs_.end());
    form.truncation = j.at("truncation").get<int>();
    form.secular_residual = j.at("secular_residual").get<double>();
    form.rho = j.at("rho").get<double>();
    form.solver_version = j.at("solver_version").get<std::string>();
    return form;
}

} // namespace aqe::maass
