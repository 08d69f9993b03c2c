#pragma once

#include <cstddef>
#include <vector>

#include "flatsteer/bigfloat.hpp"
#include "flatsteer/coeffs.hpp"
#include "flatsteer/cutoff.hpp"
#include "flatsteer/weights.hpp"

namespace flatsteer {

// Real-variable interpolant f(x) = sum_p d_p zeta_p(x), zeta_p = phi_p x^p/p!,
// with per-block cutoffs built on flattened hat sequences. f^{(q)}(0) = d_q
// exactly for q <= N_max (plateau evaluation), with measured uniform constant
// against the target rate Htilde^q M_q.
class PetzscheInterpolant {
  public:
    struct Params {
        double H = 0;
        double Htilde = 0;
        double A = 0;
        double delta = 0;
        double h = 0;  // h = (1+delta) A e^{1+1/e} H
        std::size_t N_max = 0;
        double tail_bound = 0;  // sum_{p>N_max} (1+delta)^{-p} scale
    };

    struct Block {
        int p;
        Big d;
        CutoffFunction phi;
        std::size_t k0;
        double kappa;
    };

    Big derivative(int q, const Big& x) const;
    std::vector<Big> derivative_table(int qmax, const Big& x) const;
    Big value(const Big& x) const { return derivative(0, x); }

    const Params& params() const { return prm_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    int max_order() const { return qmax_; }
    double support() const { return support_; }  // f supported in [-support, support]

    // Measured constant in |f^{(q)}| <= C Htilde^q M_q over a grid, q <= qmax.
    double measured_log_C(int qmax, int grid = 96) const;

  private:
    friend PetzscheInterpolant petzsche_interpolate(const CoeffSequence&, const WeightSequence&,
                                                    double, double, std::size_t, int);
    Params prm_;
    std::vector<Block> blocks_;
    const WeightSequence* weights_ = nullptr;  // kept alive by caller
    WeightSequence weights_copy_ = WeightSequence::factorial_pair(2);
    int qmax_ = 0;
    double support_ = 0;
};

// d: targets with |d_q| <= C H^q M_q for the moduli of `w` (a_0 = 1 required).
// Htilde must exceed e^{1/e} H (loss-too-small otherwise); delta and h are
// chosen from the identities
//   h = (1+delta) A e^{1+1/e} H,   (1+delta)(delta A e + 1) e^{1/e} H < Htilde.
// qmax_needed bounds the derivative orders the oracle must supply.
PetzscheInterpolant petzsche_interpolate(const CoeffSequence& d, const WeightSequence& w,
                                         double H, double Htilde, std::size_t N_max,
                                         int qmax_needed);

}  // namespace flatsteer
