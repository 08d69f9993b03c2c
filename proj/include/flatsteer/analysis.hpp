#pragma once

#include <string>
#include <vector>

#include "flatsteer/bigfloat.hpp"
#include "flatsteer/gevrey.hpp"

namespace flatsteer {

struct OrderReport {
    double rho = 0;          // estimated entire order
    bool polynomial = false; // coefficients vanish beyond a finite degree
    double gevrey_g = 0;     // paired Gevrey-order fit on [0,T] (when requested)
    double relation = 0;     // rho * (1 - g), expected ~1 when rho >= 1
    double residual = 0;
};

// Entire-order estimate from Taylor coefficients c_n (series sum c_n z^n):
// least-squares fit of log(1/|c_n|) against (1/rho) log n! + a n + b over a
// tail window (the Stirling-corrected form of rho = limsup n log n /
// log(1/|c_n|); exact on factorial-power families).
OrderReport entire_order_estimate(const std::vector<Big>& c);

// Pairs the order estimate with a Gevrey-order fit of f = sum c_n z^n on
// [0,T] (sup-table of series derivatives, extended precision).
OrderReport entire_order_with_gevrey(const std::vector<Big>& c, double T, int n_derivs);

struct LossStudyConfig {
    std::string out_dir;
    int n_max_bounded = 25;   // bounded-ratio table range
    int n_max_growth = 30;    // growth-table range
    double R = 1.0;           // cut for the bounded table
    double R0 = 2.0;          // series radius for the bounded table
    int monomial_p = 3;       // growth-table monomial index
    double R_hat_factor = 1.1;
};

struct LossStudyResult {
    std::string bounded_csv, growth_csv, loss_csv, summary_json;
    bool bounded_flagged = false;
    bool growth_flagged = false;
};

LossStudyResult run_loss_study(const LossStudyConfig& cfg);

}  // namespace flatsteer
