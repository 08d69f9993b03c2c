#pragma once

#include <cstddef>
#include <vector>

#include "flatsteer/bigfloat.hpp"

namespace flatsteer {

// Certificate |f^{(n)}(t)| <= C * (n!)^s / R^n on a declared interval.
struct GevreyCertificate {
    double s = 0;
    double C = 0;
    double R = 0;
    bool trivial = false;   // all-zero samples
    double residual = 0;    // rms residual of the fit in log space
};

// Least-squares fit of log sup_n against log C + s log n! - n log R.
// Input: sup-table sup_n = sup_t |f^{(n)}(t)| for n = 0..N (N >= 5).
GevreyCertificate fit_certificate(const std::vector<double>& sup_table);
GevreyCertificate fit_certificate_log(const std::vector<double>& log_sup_table);

// Product rule: f in G^s(R), g in G^sigma(rho) with 1 < sigma < s gives
// f*g in G^s with the same R; C'' is computed from the Leibniz bound.
GevreyCertificate product_certificate(const GevreyCertificate& cf, const GevreyCertificate& cg);

// Smooth step g on [0,T]: g(0)=0, g(T)=1, all interior derivatives vanish at
// both endpoints; kernel exp(-1/(tau(T-tau))^gamma) with gamma = 1/(sigma-1),
// so g is Gevrey of order ~sigma in (1,2). Derivatives of any order come from
// an exact recursion, values from precomputed panel quadrature.
class GevreyStep {
  public:
    GevreyStep() = default;
    GevreyStep(double sigma, double T);

    double T() const { return T_; }
    double sigma() const { return sigma_; }

    Big value(const Big& t) const;
    Big derivative(int k, const Big& t) const;  // any k >= 0

    // g^{(0..kmax)}(t) in one recursion pass (value included at index 0).
    std::vector<Big> derivative_table(int kmax, const Big& t) const;

    // Table of sup over a t-grid of |g^{(n)}|, n = 0..N (for certificate fits).
    std::vector<double> sup_table(int N, int grid = 192) const;

  private:
    Big kernel(const Big& t) const;  // exp(-(t(T-t))^-gamma), 0 at endpoints
    double sigma_ = 0, T_ = 0, gamma_ = 0;
    Big norm_ = 1;
    std::vector<Big> panel_cum_;  // cumulative integrals at panel boundaries
    std::size_t panels_ = 0;
};

GevreyStep gevrey_step(double sigma, double T);

// log(n!) helper (lgamma-backed).
double log_factorial(double n);

}  // namespace flatsteer
