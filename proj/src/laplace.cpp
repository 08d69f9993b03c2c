#include "flatsteer/laplace.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>

#include "flatsteer/errors.hpp"
#include "flatsteer/gevrey.hpp"

namespace flatsteer {

Big LaplaceKernel::d_value(int n) const {
    if (n == 0) fail("invalid-depth", "d_0 is a free parameter of the interpolant");
    double la;
    int s;
    g_hat_log(n - 1, 0.0, la, s);
    Big v = exp(Big(la)) * s;
    return v * exp(Big(log_factorial(n - 1) + log_factorial(n)));
}

void LaplaceKernel::g_hat_all(int mmax, double x, std::vector<double>& ghat) const {
    ghat.resize(mmax + 1);
    for (int m = 0; m <= mmax; ++m) ghat[m] = g_hat(m, x);
}

void ExpKernel::g_hat_log(int m, double x, double& log_abs, int& sign) const {
    log_abs = x - log_factorial(m);
    sign = 1;
}

void ExpKernel::g_hat_all(int mmax, double x, std::vector<double>& ghat) const {
    ghat.resize(mmax + 1);
    double v = std::exp(x);
    for (int m = 0; m <= mmax; ++m) {
        ghat[m] = v;
        v /= (m + 1);
    }
}

PoleKernel::PoleKernel(double kappa, double beta, int nu) : kappa_(kappa), beta_(beta), nu_(nu) {
    if (!(beta > 0)) fail("invalid-weights", "pole kernel needs beta > 0");
    if (nu < 1) fail("invalid-weights", "pole kernel needs nu >= 1");
    if (kappa == 0) fail("invalid-weights", "pole kernel needs kappa != 0");
}

void PoleKernel::g_hat_log(int m, double x, double& log_abs, int& sign) const {
    // ghat_m(x) = kappa C(nu+m-1, m) beta^{-m} (1 - x/beta)^{-(nu+m)}
    double base = 1.0 - x / beta_;
    double logC = log_factorial(nu_ + m - 1) - log_factorial(m) - log_factorial(nu_ - 1);
    log_abs = std::log(std::fabs(kappa_)) + logC - m * std::log(beta_) -
              (nu_ + m) * std::log(base);
    sign = kappa_ > 0 ? 1 : -1;
}

void PoleKernel::g_hat_all(int mmax, double x, std::vector<double>& ghat) const {
    ghat.resize(mmax + 1);
    const double base = 1.0 - x / beta_;  // >= 1 on the negative axis
    double v = kappa_ * std::pow(base, -static_cast<double>(nu_));
    const double step = 1.0 / (beta_ * base);
    for (int m = 0; m <= mmax; ++m) {
        ghat[m] = v;
        v *= step * (nu_ + m) / (m + 1);
    }
}

LaplaceInterpolant laplace_interpolate(std::shared_ptr<const LaplaceKernel> g, Big d0, double T1,
                                       double T2, int n_max, double rel_tol, bool abort_on_y3) {
    if (!(T1 < T2)) fail("invalid-order", "need T1 < T2");
    LaplaceInterpolant f;
    f.kernel_ = std::move(g);
    f.d0_ = d0;
    f.T1_ = T1;
    f.T2_ = T2;
    f.n_max_ = n_max;
    f.rel_tol_ = rel_tol;
    // Sample the boundedness condition |g^{(n)}(x)| <= C |g^{(n)}(0)| on R_-.
    Y3Report rep;
    rep.checked = true;
    rep.x_lo = -50.0;
    rep.samples = 200;
    rep.orders = std::min(n_max, 10);
    double worst = 1.0;
    for (int m = 0; m <= rep.orders; ++m) {
        double la0;
        int s0;
        f.kernel_->g_hat_log(m, 0.0, la0, s0);
        for (int i = 1; i <= rep.samples; ++i) {
            double x = rep.x_lo * i / rep.samples;
            double la;
            int s;
            f.kernel_->g_hat_log(m, x, la, s);
            worst = std::max(worst, std::exp(la - la0));
        }
    }
    rep.C = worst;
    rep.violated = worst > 1.0 + 1e-9;
    if (rep.violated && abort_on_y3)
        fail("condition-Y3-violated", "sampled ratio " + std::to_string(worst));
    f.y3_ = rep;
    return f;
}

namespace {

// One panel-set evaluation of fhat_n(t) with the u = s/(1+s) inverse map:
// s = u/(1-u), ds = du/(1-u)^2. Integrand in log space:
//   exp(-s + n log s + Lpre + log ghat_{n-1}(tau s)) / (1-u)^2
double y5_quadrature(const LaplaceKernel& k, int n, double tau, double Lpre,
                     std::size_t panels) {
    using boost::math::quadrature::gauss;
    auto integrand = [&](double u) -> double {
        if (u <= 0.0 || u >= 1.0) return 0.0;
        double om = 1.0 - u;
        double s = u / om;
        double la;
        int sg;
        k.g_hat_log(n - 1, tau * s, la, sg);
        double ex = -s + n * std::log(s) + Lpre + la;
        if (ex < -745.0) return 0.0;
        return sg * std::exp(ex) / (om * om);
    };
    double total = 0;
    double h = 1.0 / static_cast<double>(panels);
    for (std::size_t i = 0; i < panels; ++i)
        total += gauss<double, 24>::integrate(integrand, i * h, (i + 1) * h);
    return total;
}

}  // namespace

double LaplaceInterpolant::f_scaled(int n, double t) const {
    if (n == 0) {
        // f(t) = d0 + tau * int e^{-s} g(tau s) ds, tau = t - T2 <= 0
        double tau = t - T2_;
        if (tau >= 0) return to_double(d0_);
        using boost::math::quadrature::gauss;
        auto integrand = [&](double u) -> double {
            if (u <= 0.0 || u >= 1.0) return 0.0;
            double om = 1.0 - u;
            double s = u / om;
            double la;
            int sg;
            kernel_->g_hat_log(0, tau * s, la, sg);
            double ex = -s + la;
            if (ex < -745.0) return 0.0;
            return sg * std::exp(ex) / (om * om);
        };
        double prev = 0, cur = 0;
        for (std::size_t p = 4; p <= 256; p *= 2) {
            double h = 1.0 / static_cast<double>(p);
            cur = 0;
            for (std::size_t i = 0; i < p; ++i)
                cur += gauss<double, 24>::integrate(integrand, i * h, (i + 1) * h);
            if (p > 4 && std::fabs(cur - prev) <= rel_tol_ * std::max(1.0, std::fabs(cur))) break;
            prev = cur;
        }
        return to_double(d0_) + tau * cur;
    }
    double tau = t - T2_;
    if (tau > 0) tau = 0;
    const double Lpre = log_factorial(n - 1) - log_factorial(2 * n);
    double prev = y5_quadrature(*kernel_, n, tau, Lpre, 4);
    for (std::size_t p = 8; p <= 256; p *= 2) {
        double cur = y5_quadrature(*kernel_, n, tau, Lpre, p);
        if (std::fabs(cur - prev) <= rel_tol_ * std::max(std::fabs(cur), 1e-290)) return cur;
        prev = cur;
    }
    return prev;
}

std::vector<double> LaplaceInterpolant::f_scaled_table(int nmax, double t) const {
    // Vectorized panel evaluation: one pass over nodes fills every order via
    // the ladder t_n = e^{-s} s^n (n-1)!/(2n)!, t_{n+1} = t_n s n/((2n+1)(2n+2)),
    // with the kernel's O(1)-per-order ghat recursion; panel count doubled
    // until the worst per-order relative change settles.
    std::vector<double> out(nmax + 1, 0.0);
    out[0] = f_scaled(0, t);
    if (nmax == 0) return out;
    double tau = t - T2_;
    if (tau > 0) tau = 0;
    using boost::math::quadrature::gauss;
    const auto& absc = gauss<double, 24>::abscissa();
    const auto& wts = gauss<double, 24>::weights();
    std::vector<double> acc(nmax + 1, 0.0), prev;
    std::vector<double> ghat;
    for (std::size_t panels = 8; panels <= 256; panels *= 2) {
        std::fill(acc.begin(), acc.end(), 0.0);
        const double h = 1.0 / static_cast<double>(panels);
        for (std::size_t p = 0; p < panels; ++p) {
            const double mid = (p + 0.5) * h;
            for (std::size_t node = 0; node < absc.size(); ++node) {
                for (int side = 0; side < 2; ++side) {
                    const double u = mid + (side ? -1.0 : 1.0) * absc[node] * h / 2;
                    const double om = 1.0 - u;
                    if (u <= 0.0 || om <= 0.0) continue;
                    const double s = u / om;
                    const double w = wts[node] * h / 2 / (om * om);
                    double tn = std::exp(-s) * s * 0.5;  // n = 1 ladder seed
                    if (tn == 0.0) continue;
                    kernel_->g_hat_all(nmax - 1, tau * s, ghat);
                    for (int n = 1; n <= nmax; ++n) {
                        acc[n] += w * tn * ghat[n - 1];
                        tn *= s * n / ((2.0 * n + 1.0) * (2.0 * n + 2.0));
                    }
                }
            }
        }
        if (!prev.empty()) {
            double worst = 0;
            for (int n = 1; n <= nmax; ++n) {
                double scale = std::max(std::fabs(acc[n]), 1e-290);
                worst = std::max(worst, std::fabs(acc[n] - prev[n]) / scale);
            }
            if (worst <= 1e-11) break;
        }
        prev = acc;
    }
    for (int n = 1; n <= nmax; ++n) out[n] = acc[n];
    return out;
}

Big LaplaceInterpolant::d(int n) const { return n == 0 ? d0_ : kernel_->d_value(n); }

// ---- finite-interval transform ----

namespace {

// dx^n e^{-t/x} = e^{-t/x} sum_{k=1..n} q_{nk} t^k x^{-(n+k)};
// q_{n+1,k} = q_{n,k-1} - (n+k) q_{n,k}.
std::vector<std::vector<Big>> kernel_poly(int n_max) {
    std::vector<std::vector<Big>> q(n_max + 1);
    q[0] = {Big(1)};  // convention: row 0 is the plain kernel (k=0 term)
    if (n_max >= 1) q[1] = {Big(0), Big(1)};
    for (int n = 1; n < n_max; ++n) {
        q[n + 1].assign(n + 2, Big(0));
        for (int k = 1; k <= n; ++k) {
            q[n + 1][k + 1] += q[n][k];
            q[n + 1][k] -= Big(n + k) * q[n][k];
        }
    }
    return q;
}

}  // namespace

namespace {

// Moments I_k(x) = int_0^R phi(t) t^k e^{-t/x} dt for k = 0..kmax: one pass
// over Gauss-Legendre panels accumulating the power ladder. The kernel
// concentrates in a layer t = O((kmax+1) x); the panel budget is split so the
// layer stays resolved when x << R.
std::vector<Big> phi_moments(const std::function<Big(const Big&)>& phi, double R, int kmax,
                             const Big& x, std::size_t panels) {
    using boost::math::quadrature::gauss;
    std::vector<Big> I(kmax + 1, Big(0));
    const auto& absc = gauss<Big, 24>::abscissa();
    const auto& wts = gauss<Big, 24>::weights();
    double xd = to_double(x);
    double t_cut = std::min(R, xd * (8.0 * kmax + 80.0));
    auto integrate = [&](double lo, double hi, std::size_t pnls) {
        if (!(hi > lo)) return;
        Big h = Big(hi - lo) / pnls;
        for (std::size_t pnl = 0; pnl < pnls; ++pnl) {
            Big mid = Big(lo) + h * pnl + h / 2;
            for (std::size_t node = 0; node < absc.size(); ++node) {
                for (int side = 0; side < 2; ++side) {
                    Big t = mid + (side ? -1 : 1) * absc[node] * h / 2;
                    Big w = wts[node] * h / 2;
                    Big base = phi(t) * exp(-t / x) * w;
                    Big pw = 1;
                    for (int k = 0; k <= kmax; ++k) {
                        I[k] += base * pw;
                        pw *= t;
                    }
                }
            }
        }
    };
    if (t_cut < R) {
        integrate(0.0, t_cut, panels);
        integrate(t_cut, R, std::max<std::size_t>(panels / 4, 8));
    } else {
        integrate(0.0, R, panels);
    }
    return I;
}

Big g_deriv_from_moments(const std::vector<std::vector<Big>>& q, const std::vector<Big>& I, int n,
                         const Big& x) {
    if (n == 0) return I[0];
    Big g = 0;
    for (int k = 1; k <= n; ++k) g += q[n][k] * I[k] * pow(1 / x, n + k);
    return g;
}

}  // namespace

FiniteLaplaceTable finite_laplace_G(const std::function<Big(int)>& a_of_n, int a_terms, double R,
                                    double R0, int n_max, const std::vector<double>& xs) {
    if (!(R < R0)) fail("invalid-cut", "cut R must be below the coefficient radius R0");
    PrecisionGuard guard(std::max<unsigned>(320, 16u * n_max));
    auto q = kernel_poly(n_max);
    // phi(t) = sum_{n>=2} a_n t^{n-1}/(n-1)! on [0,R]
    std::vector<Big> a(a_terms + 1, Big(0));
    bool all_zero = true;
    for (int n = 2; n <= a_terms; ++n) {
        a[n] = a_of_n(n);
        if (a[n] != 0) all_zero = false;
    }
    auto phi = [&](const Big& t) {
        Big acc = 0, pw = t, fact = 1;  // t^{n-1}/(n-1)!, n from 2
        for (int n = 2; n <= a_terms; ++n) {
            acc += a[n] * pw / fact;
            pw *= t;
            fact *= n;
        }
        return acc;
    };
    FiniteLaplaceTable out;
    out.x = xs;
    out.R = R;
    out.R0 = R0;
    out.scaled.assign(n_max + 1, std::vector<double>(xs.size(), 0.0));
    const std::size_t panels = 64;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        Big x = xs[j];
        std::vector<Big> I =
            all_zero ? std::vector<Big>(n_max + 1, Big(0)) : phi_moments(phi, R, n_max, x, panels);
        for (int n = 0; n <= n_max; ++n) {
            Big g = g_deriv_from_moments(q, I, n, x);
            double log_env = 2 * log_factorial(n) + n * std::log(2.0 / R);
            out.scaled[n][j] = to_double(g * exp(Big(-log_env)));
        }
    }
    // endpoint identity G^{(n)}(x) -> a_n n! as x -> 0+ (checked at 1e-3)
    out.endpoint_rel_err.assign(n_max + 1, 0.0);
    if (!all_zero) {
        Big x = Big(1) / 1000;
        std::vector<Big> I = phi_moments(phi, R, n_max, x, panels);
        for (int n = 2; n <= std::min(n_max, a_terms); ++n) {
            if (a[n] == 0) continue;
            Big target = a[n] * exp(Big(log_factorial(n)));
            Big g = g_deriv_from_moments(q, I, n, x);
            out.endpoint_rel_err[n] = std::fabs(to_double((g - target) / target));
        }
    }
    return out;
}

// Exposed single-point derivative for the series phi (endpoint studies).
Big finite_laplace_series_deriv(const std::function<Big(int)>& a_of_n, int a_terms, double R,
                                int n, const Big& x) {
    PrecisionGuard guard(std::max<unsigned>(320, 16u * n));
    auto q = kernel_poly(n);
    std::vector<Big> a(a_terms + 1, Big(0));
    for (int m = 2; m <= a_terms; ++m) a[m] = a_of_n(m);
    auto phi = [&](const Big& t) {
        Big acc = 0, pw = t, fact = 1;
        for (int m = 2; m <= a_terms; ++m) {
            acc += a[m] * pw / fact;
            pw *= t;
            fact *= m;
        }
        return acc;
    };
    std::vector<Big> I = phi_moments(phi, R, n, x, 64);
    return g_deriv_from_moments(q, I, n, x);
}

Big finite_laplace_monomial_deriv(int p, double a_p, double R, int n, const Big& x) {
    // G(x) = a_p x^p - a_p e^{-R/x} sum_{k=0}^{p-1} (R^k/k!) x^{p-k}
    PrecisionGuard guard(std::max<unsigned>(320, 16u * n));
    static thread_local std::vector<std::vector<Big>> q_cache;
    if (static_cast<int>(q_cache.size()) < n + 1) q_cache = kernel_poly(std::max(n, 64));
    Big g = 0;
    // polynomial part
    if (n <= p) {
        Big c = a_p;
        for (int i = 0; i < n; ++i) c *= (p - i);
        g += c * pow(x, p - n);
    }
    // exponential part: -a_p sum_k (R^k/k!) d^n/dx^n [e^{-R/x} x^{p-k}]
    Big E = exp(Big(-R) / x);
    for (int k = 0; k <= p - 1; ++k) {
        Big coef = -a_p * pow(Big(R), k) / exp(Big(log_factorial(k)));
        int m = p - k;  // power of x
        // Leibniz: sum_i C(n,i) (e^{-R/x})^{(i)} (x^m)^{(n-i)}
        Big binom = 1;
        for (int i = 0; i <= n; ++i) {
            int r = n - i;  // derivative order on x^m
            if (r <= m) {
                Big pc = 1;
                for (int t = 0; t < r; ++t) pc *= (m - t);
                Big epart;
                if (i == 0) {
                    epart = E;
                } else {
                    Big acc = 0;
                    for (int kk = 1; kk <= i; ++kk)
                        acc += q_cache[i][kk] * pow(Big(R), kk) * pow(1 / x, i + kk);
                    epart = E * acc;
                }
                g += coef * binom * epart * pc * pow(x, m - r);
            }
            binom = binom * (n - i) / (i + 1);
        }
    }
    return g;
}

LossProbeReport loss_lower_bound_probe(int p, double R, double R_hat, int n_max) {
    if (p < 2) fail("invalid-cut", "probe needs p >= 2");
    if (!(R_hat >= R)) fail("invalid-cut", "probe expects Rhat >= R");
    LossProbeReport rep;
    const double a_p = std::exp(log_factorial(p)) / std::pow(R, p);  // C = 1
    // boundary polynomial P(x) = -a_p sum_{k<p} R^k x^{p-k}/k! has a simple
    // zero at 0: r = 1, Q(0) = -a_p R^{p-1}/(p-1)! scaled by R (F(x) = P(Rx)).
    const int r_mult = 1;
    const double logQ0 = std::log(a_p) + p * std::log(R) - log_factorial(p - 1);
    for (int n = std::max(2, p + 1); n <= n_max; ++n) {
        Big x = Big(R) / (2 * n);
        Big g = finite_laplace_monomial_deriv(p, a_p, R, n, x);
        LossProbeRow row;
        row.n = n;
        row.x_n = to_double(x);
        double lg = g == 0 ? -1e300 : to_double(log(abs(g)));
        row.log_rho_n = lg + n * std::log(R_hat / 2.0) - 2 * log_factorial(n);
        double log_env = (1.0 - r_mult / 2.0) * std::log(2.0) + logQ0 -
                         (r_mult + 1.0) * std::log(static_cast<double>(n));
        row.log_rho_envelope = row.log_rho_n - log_env;
        rep.rows.push_back(row);
    }
    if (rep.rows.size() >= 4) {
        // regression slope of the envelope-normalized proxy (robust against
        // the cosine oscillation); growing when the fitted rise over the
        // probed range exceeds a decade
        double sx = 0, sy = 0, sxx = 0, sxy = 0, n = static_cast<double>(rep.rows.size());
        for (auto& r : rep.rows) {
            sx += r.n;
            sy += r.log_rho_envelope;
            sxx += double(r.n) * r.n;
            sxy += r.n * r.log_rho_envelope;
        }
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        rep.growing = slope * (rep.rows.back().n - rep.rows.front().n) > std::log(10.0);
    }
    // cosine factor: phase n(1 - pi/2) + (1+r)pi/4 with r = 1
    bool pos = false, neg = false;
    for (int n = 1; n <= 200; ++n) {
        double c = std::cos(n * (1.0 - M_PI / 2.0) + (1 + r_mult) * M_PI / 4.0);
        rep.cosine_samples.push_back(c);
        if (c > 0.9) pos = true;
        if (c < -0.9) neg = true;
    }
    rep.cosine_fills = pos && neg;
    return rep;
}

}  // namespace flatsteer
