#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "flatsteer/bigfloat.hpp"
#include "flatsteer/coeffs.hpp"

namespace flatsteer {

// Closed-form analytic kernel g for the complex-variable interpolation:
// g(z) = sum_n d_{n+1} z^n / (n! (n+1)!) extended analytically to a
// neighborhood of the negative real axis, supplied with an exact scaled
// derivative oracle ghat_m(x) = g^{(m)}(x)/m! in log form.
class LaplaceKernel {
  public:
    virtual ~LaplaceKernel() = default;
    // log|ghat_m(x)| and sign at real x <= 0; sign 0 when the value is 0.
    virtual void g_hat_log(int m, double x, double& log_abs, int& sign) const = 0;
    virtual std::string name() const = 0;
    double g_hat(int m, double x) const {
        double la;
        int s;
        g_hat_log(m, x, la, s);
        return s * std::exp(la);
    }
    // ghat[m] for m = 0..mmax at once (kernels provide an O(1)-per-order
    // recursion; the default falls back to g_hat_log).
    virtual void g_hat_all(int mmax, double x, std::vector<double>& ghat) const;
    // Interpolated targets: d_{m+1} = ghat_m(0) * m! * (m+1)!.
    Big d_value(int n) const;
};

// g identically zero (the interpolant degenerates to the constant d0).
class NullKernel final : public LaplaceKernel {
  public:
    void g_hat_log(int, double, double& log_abs, int& sign) const override {
        log_abs = -1e308;
        sign = 0;
    }
    std::string name() const override { return "null"; }
};

// g(z) = e^z  (targets d_n = n!).
class ExpKernel final : public LaplaceKernel {
  public:
    void g_hat_log(int m, double x, double& log_abs, int& sign) const override;
    void g_hat_all(int mmax, double x, std::vector<double>& ghat) const override;
    std::string name() const override { return "exp"; }
};

// g(z) = kappa (1 - z/beta)^{-nu}, beta > 0 (singularity on the positive
// axis, so g is analytic and monotone-bounded on R_-). Covers the pole
// example (z - z0)^{-k} = (-z0)^{-k} (1 - z/z0)^{-k} and the squared-pole
// target family d_n = (n!)^2 * kappa' / beta^n.
class PoleKernel final : public LaplaceKernel {
  public:
    PoleKernel(double kappa, double beta, int nu);
    void g_hat_log(int m, double x, double& log_abs, int& sign) const override;
    void g_hat_all(int mmax, double x, std::vector<double>& ghat) const override;
    std::string name() const override { return "pole"; }
    double beta() const { return beta_; }

  private:
    double kappa_, beta_;
    int nu_;
};

struct Y3Report {
    bool checked = false;
    bool violated = false;
    double C = 1.0;  // sup ratio |g^{(n)}(x)| / |g^{(n)}(0)| over samples
    double x_lo = 0;
    int samples = 0;
    int orders = 0;
};

// No-loss interpolant on [T1, T2]: f(t) = d0 + int_0^{-inf} e^{-xi/(t-T2)} g(xi) dxi,
// with f^{(n)}(T2) = d_n and |f^{(n)}| <= C d_n-scale (same radius constant).
class LaplaceInterpolant {
  public:
    LaplaceInterpolant() = default;

    // Scaled derivative f^{(n)}(t) / (2n)!  for t in [T1, T2].
    double f_scaled(int n, double t) const;
    std::vector<double> f_scaled_table(int nmax, double t) const;

    const Y3Report& y3() const { return y3_; }
    double T1() const { return T1_; }
    double T2() const { return T2_; }
    Big d(int n) const;

  private:
    friend LaplaceInterpolant laplace_interpolate(std::shared_ptr<const LaplaceKernel>, Big,
                                                  double, double, int, double, bool);
    std::shared_ptr<const LaplaceKernel> kernel_;
    Big d0_ = 0;
    double T1_ = 0, T2_ = 0;
    int n_max_ = 0;
    double rel_tol_ = 1e-12;
    Y3Report y3_;
};

// Builds the interpolant; samples the boundedness condition on the kernel
// derivatives over [x_lo, 0] (violations warn by default, abort on request).
LaplaceInterpolant laplace_interpolate(std::shared_ptr<const LaplaceKernel> g, Big d0, double T1,
                                       double T2, int n_max, double rel_tol = 1e-12,
                                       bool abort_on_y3 = false);

// ---- finite-interval transforms (loss diagnostics) ----

// G(x) = int_0^R phi(t) e^{-t/x} dt, phi(z) = sum_{n>=2} a_n z^{n-1}/(n-1)!,
// |a_n| <= C n!/R0^n with R < R0. Derivative table by high-precision
// quadrature of the differentiated kernel; rows are scaled by (n!)^2 (2/R)^n.
struct FiniteLaplaceTable {
    std::vector<double> x;
    // scaled[n][j] = G^{(n)}(x_j) / ((n!)^2 (2/R)^n); row n = 0 holds G itself
    std::vector<std::vector<double>> scaled;
    double R = 0, R0 = 0;
    // endpoint Taylor check: G^{(n)}(x->0+) -> a_n n!
    std::vector<double> endpoint_rel_err;
};

FiniteLaplaceTable finite_laplace_G(const std::function<Big(int)>& a_of_n, int a_terms, double R,
                                    double R0, int n_max, const std::vector<double>& xs);

// Single-point G^{(n)}(x) for the series phi (endpoint-identity studies).
Big finite_laplace_series_deriv(const std::function<Big(int)>& a_of_n, int a_terms, double R,
                                int n, const Big& x);

// Exact evaluation for the single-monomial sequence a_p = C p!/R^p (all other
// a_n zero): G(x) = a_p x^p + P(x) e^{-R/x} in closed form, any derivative.
Big finite_laplace_monomial_deriv(int p, double a_p, double R, int n, const Big& x);

struct LossProbeRow {
    int n;
    double x_n;               // R/(2n)
    double log_rho_n;         // log of |G^{(n)}(x_n)| (Rhat/2)^n / (n!)^2
    double log_rho_envelope;  // rho_n against the stationary-phase amplitude
                              // 2^{1-r/2} |Q0| n^{-(r+1)} (r = 1 here: the
                              // boundary polynomial vanishes at 0), leaving
                              // the (Rhat/R)^n cosine-modulated factor
};

struct LossProbeReport {
    std::vector<LossProbeRow> rows;
    bool growing = false;  // envelope-normalized proxy grows past 10x
    // cosine factor samples cos(n(1-pi/2) + (1+r)pi/4)
    std::vector<double> cosine_samples;
    bool cosine_fills = false;  // both signs with magnitude > 0.9 attained
};

LossProbeReport loss_lower_bound_probe(int p, double R, double R_hat, int n_max);

}  // namespace flatsteer
