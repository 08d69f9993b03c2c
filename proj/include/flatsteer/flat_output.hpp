#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flatsteer/coeffs.hpp"
#include "flatsteer/gevrey.hpp"
#include "flatsteer/laplace.hpp"
#include "flatsteer/petzsche.hpp"

namespace flatsteer {

// Flat output y on [0, T]: y = f(t - T) * g(t) with f an interpolant of the
// endpoint targets and g the smooth step. Exposes factorial-scaled
// derivatives yhat_i(t) = y^{(i)}(t)/(2i)! (even) or /(2i+1)! (odd), the form
// the series assembly and the loss diagnostics consume directly.
class FlatOutput {
  public:
    enum class Method { petzsche, laplace };
    enum class Parity { even, odd };

    double scaled_derivative(int i, double t) const;
    std::vector<double> scaled_table(int imax, double t) const;

    Method method() const { return method_; }
    Parity parity() const { return parity_; }
    double T() const { return T_; }
    int n_max() const { return n_max_; }
    double R() const { return R_; }
    double R_prime() const { return R_prime_; }
    double ratio() const { return R_prime_ / R_; }

    // Measured certificate: log M' with sup_t |yhat_i| <= M' ratio^{2i}
    // (even; 2i+1 for odd), over the stored check grid.
    double log_M_prime() const { return log_M_prime_; }
    // sup_t log |yhat_i| per order on the check grid.
    const std::vector<double>& log_sup_scaled() const { return log_sup_scaled_; }

    double endpoint0_abs_max() const { return endpoint0_abs_max_; }
    double interp_rel_max() const { return interp_rel_max_; }

    const CoeffSequence& targets() const { return targets_; }
    const GevreyStep& step() const { return step_; }

  private:
    friend struct FlatOutputAccess;
    void measure(int grid);

    Method method_ = Method::petzsche;
    Parity parity_ = Parity::even;
    double T_ = 0;
    int n_max_ = 0;
    double R_ = 0, R_prime_ = 0;
    double log_M_prime_ = 0;
    double endpoint0_abs_max_ = 0, interp_rel_max_ = 0;
    std::vector<double> log_sup_scaled_;
    CoeffSequence targets_;
    GevreyStep step_;
    std::shared_ptr<PetzscheInterpolant> pet_;
    std::shared_ptr<LaplaceInterpolant> lap_;
};

// Petzsche-backed steering outputs (the real-variable route). Requires the
// target radius above R0 = e^{1/(2e)} and R0 < R_prime < R.
FlatOutput steer_output_even(const CoeffSequence& c_even, double T, double R_prime, double sigma,
                             int n_max, std::size_t N_blocks = 0);
FlatOutput steer_output_odd(const CoeffSequence& c_odd, double T, double R_prime, double sigma,
                            int n_max, std::size_t N_blocks = 0);

// Laplace-backed output (no-loss route for kernel-compatible targets).
FlatOutput laplace_output(std::shared_ptr<const LaplaceKernel> kernel, Big d0, FlatOutput::Parity parity,
                          double T, double R, double sigma, int n_max);

constexpr double kR0Loss = 1.2019372942985469;  // e^{1/(2e)}

double loss_reference_R0();

struct LossReport {
    double rho_min = 1.0;
    double R0 = kR0Loss;
    bool bounded_at_cap = true;              // bounded even at the largest trial rho
    std::vector<double> log_ratio_at_min;    // log r_i at rho_min
    std::vector<double> log_ratio_at_Rp;     // log r_i at the output's R'
};

// Minimal loss rho such that the ratio table r_i = sup|y^{(i)}| /
// ((2i)! (rho/R)^{2i}) stays bounded: operationally, max_i r_i within a
// factor 10 of the early-order maximum. Bisection over (1, R).
LossReport measure_loss(const FlatOutput& fo, int i_max);

// Same bisection on a raw table of log sup |scaled derivative| (used for the
// f-factor-alone diagnostics; odd_powers selects the (2i+1)-exponent).
LossReport measure_loss_from_table(const std::vector<double>& log_sup_scaled, double R,
                                   bool odd_powers, double R_prime);

}  // namespace flatsteer
