#include "flatsteer/gevrey.hpp"

#include <array>
#include <cmath>

#include "flatsteer/errors.hpp"
#include "flatsteer/quadrature.hpp"

namespace flatsteer {

double log_factorial(double n) { return std::lgamma(n + 1.0); }

GevreyCertificate fit_certificate(const std::vector<double>& sup_table) {
    std::vector<double> logs(sup_table.size());
    bool all_zero = true;
    for (std::size_t n = 0; n < sup_table.size(); ++n) {
        if (sup_table[n] != 0) all_zero = false;
        logs[n] = sup_table[n] > 0 ? std::log(sup_table[n]) : -1e300;
    }
    if (all_zero) {
        GevreyCertificate c;
        c.trivial = true;
        c.s = 0;
        c.C = 0;
        c.R = 1;
        return c;
    }
    return fit_certificate_log(logs);
}

GevreyCertificate fit_certificate_log(const std::vector<double>& log_sup) {
    const std::size_t N = log_sup.size();
    if (N < 6) fail("insufficient-data", "need derivative orders 0..5 at least");
    // model: y_n = c0 + s*log n! - n*log R, fitted over the tail half of the
    // orders (the Stirling-type corrections that bias log R decay like 1/n).
    std::size_t from = std::max<std::size_t>(2, N / 2);
    auto accumulate = [&](std::size_t lo, double A[3][3], double b[3]) {
        std::size_t used = 0;
        for (std::size_t n = lo; n < N; ++n) {
            if (log_sup[n] <= -1e299) continue;  // skip exact zeros
            double nn = static_cast<double>(n);
            double row[3] = {1.0, log_factorial(nn), -nn};
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) A[i][j] += row[i] * row[j];
                b[i] += row[i] * log_sup[n];
            }
            ++used;
        }
        return used;
    };
    double A[3][3] = {};
    double b[3] = {};
    std::size_t used = accumulate(from, A, b);
    if (used < 6) {
        for (auto& r : A) r[0] = r[1] = r[2] = 0;
        b[0] = b[1] = b[2] = 0;
        used = accumulate(0, A, b);
    }
    if (used < 4) {
        GevreyCertificate c;
        c.trivial = true;
        c.s = 0;
        c.C = 0;
        c.R = 1;
        return c;
    }
    double M[3][4];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) M[i][j] = A[i][j];
        M[i][3] = b[i];
    }
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::fabs(M[r][c]) > std::fabs(M[piv][c])) piv = r;
        std::swap(M[c], M[piv]);
        for (int r = 0; r < 3; ++r) {
            if (r == c || M[c][c] == 0) continue;
            double f = M[r][c] / M[c][c];
            for (int j = c; j < 4; ++j) M[r][j] -= f * M[c][j];
        }
    }
    GevreyCertificate cert;
    double c0 = M[0][3] / M[0][0];
    cert.s = M[1][3] / M[1][1];
    double logR = M[2][3] / M[2][2];
    cert.C = std::exp(c0);
    cert.R = std::exp(logR);
    double rss = 0;
    std::size_t cnt = 0;
    for (std::size_t n = 0; n < N; ++n) {
        if (log_sup[n] <= -1e299) continue;
        double pred = c0 + cert.s * log_factorial(static_cast<double>(n)) - double(n) * logR;
        rss += (pred - log_sup[n]) * (pred - log_sup[n]);
        ++cnt;
    }
    cert.residual = std::sqrt(rss / std::max<std::size_t>(cnt, 1));
    return cert;
}

GevreyCertificate product_certificate(const GevreyCertificate& cf, const GevreyCertificate& cg) {
    if (!(cg.s < cf.s)) fail("order-mismatch", "product needs sigma < s");
    if (!(cg.s > 1.0)) fail("order-mismatch", "product needs sigma > 1");
    const double s = cf.s, sigma = cg.s, R = cf.R, rho = cg.R;
    // Leibniz bound: binom(n,j) j!^s (n-j)!^sigma / (R^j rho^{n-j})
    //   <= Ctil * n!^s / (2^{n-j} R^n), i.e.
    // Ctil = sup_{n,j} (j!(n-j)!/n!)^{s-1} (n-j)!^{sigma-s} (2R/rho)^{n-j},
    // finite since sigma < s; scanned in log space.
    double logCtil = 0.0;
    const int Nscan = 600;
    for (int n = 0; n <= Nscan; ++n) {
        for (int j = 0; j <= n; ++j) {
            int m = n - j;
            double v = (s - 1) * (log_factorial(j) + log_factorial(m) - log_factorial(n)) +
                       (sigma - s) * log_factorial(m) + m * std::log(2 * R / rho);
            logCtil = std::max(logCtil, v);
        }
    }
    GevreyCertificate out;
    out.s = s;
    out.R = R;  // same R as f
    out.C = 2.0 * cf.C * cg.C * std::exp(logCtil);
    return out;
}

// ---- GevreyStep ----

GevreyStep::GevreyStep(double sigma, double T) : sigma_(sigma), T_(T) {
    if (!(sigma > 1.0 && sigma < 2.0)) fail("invalid-order", "step order must be in (1,2)");
    if (!(T > 0)) fail("invalid-order", "horizon must be positive");
    gamma_ = 1.0 / (sigma - 1.0);
    panels_ = 96;
    panel_cum_.resize(panels_ + 1);
    panel_cum_[0] = 0;
    Big h = Big(T_) / panels_;
    for (std::size_t p = 0; p < panels_; ++p) {
        Big lo = h * p, hi = lo + h;
        Big piece = boost::math::quadrature::gauss<Big, 24>::integrate(
            [this](const Big& t) { return kernel(t); }, lo, hi);
        panel_cum_[p + 1] = panel_cum_[p] + piece;
    }
    norm_ = panel_cum_[panels_];
}

Big GevreyStep::kernel(const Big& t) const {
    if (t <= 0 || t >= Big(T_)) return Big(0);
    Big w = t * (Big(T_) - t);
    return exp(-pow(w, Big(-gamma_)));
}

Big GevreyStep::value(const Big& t) const {
    if (t <= 0) return Big(0);
    if (t >= Big(T_)) return Big(1);
    Big h = Big(T_) / panels_;
    auto p = static_cast<std::size_t>(to_double(t / h));
    if (p >= panels_) p = panels_ - 1;
    Big lo = h * p;
    Big partial = boost::math::quadrature::gauss<Big, 24>::integrate(
        [this](const Big& u) { return kernel(u); }, lo, t);
    return (panel_cum_[p] + partial) / norm_;
}

std::vector<Big> GevreyStep::derivative_table(int kmax, const Big& t) const {
    std::vector<Big> out(kmax + 1, Big(0));
    if (t <= 0) return out;
    if (t >= Big(T_)) {
        out[0] = 1;
        return out;
    }
    out[0] = value(t);
    if (kmax == 0) return out;
    // u(tau) = -w^{-gamma}, w = tau(T-tau); p_j = d^j/dtau^j w^{-gamma} obeys
    //   w p_{j+1} = -(j+gamma) w' p_j + j(j-1+2gamma) p_{j-1}   (w'' = -2)
    // and E = exp(u) obeys E^{(m+1)} = sum_i C(m,i) u^{(i+1)} E^{(m-i)}.
    const int m = kmax - 1;  // need E^{(0..m)} where E = norm * g'
    Big w = t * (Big(T_) - t);
    Big wp = Big(T_) - 2 * t;
    std::vector<Big> p(m + 2);
    p[0] = pow(w, Big(-gamma_));
    p[1] = -Big(gamma_) * p[0] * wp / w;
    for (int j = 1; j <= m; ++j) {
        Big acc = -(Big(j) + Big(gamma_)) * wp * p[j] +
                  Big(j) * (Big(j - 1) + 2 * Big(gamma_)) * p[j - 1];
        p[j + 1] = acc / w;
    }
    std::vector<Big> E(m + 1);
    E[0] = exp(-p[0]);
    for (int mm = 0; mm < m; ++mm) {
        Big acc = 0;
        Big binom = 1;
        for (int i = 0; i <= mm; ++i) {
            acc += binom * (-p[i + 1]) * E[mm - i];
            binom = binom * (mm - i) / (i + 1);
        }
        E[mm + 1] = acc;
    }
    for (int k = 1; k <= kmax; ++k) out[k] = E[k - 1] / norm_;
    return out;
}

Big GevreyStep::derivative(int k, const Big& t) const {
    if (k == 0) return value(t);
    return derivative_table(k, t)[k];
}

std::vector<double> GevreyStep::sup_table(int N, int grid) const {
    std::vector<double> sup(N + 1, 0.0);
    std::vector<int> argmax(N + 1, grid / 2);
    for (int i = 1; i < grid; ++i) {
        Big t = Big(T_) * i / grid;
        auto tab = derivative_table(N, t);
        for (int n = 0; n <= N; ++n) {
            double v = std::fabs(to_double(tab[n]));
            if (v > sup[n]) {
                sup[n] = v;
                argmax[n] = i;
            }
        }
    }
    // local refinement around each coarse argmax (high derivatives peak in
    // narrow layers near the endpoints)
    for (int n = 1; n <= N; ++n) {
        double lo = T_ * std::max(argmax[n] - 1, 0) / grid;
        double hi = T_ * std::min(argmax[n] + 1, grid) / grid;
        for (int j = 0; j <= 48; ++j) {
            Big t = Big(lo) + Big(hi - lo) * j / 48;
            double v = std::fabs(to_double(derivative(n, t)));
            if (v > sup[n]) sup[n] = v;
        }
    }
    sup[0] = 1.0;  // g reaches 1 at T
    return sup;
}

GevreyStep gevrey_step(double sigma, double T) { return GevreyStep(sigma, T); }

}  // namespace flatsteer
