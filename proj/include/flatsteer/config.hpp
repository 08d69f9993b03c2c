#pragma once

#include <optional>
#include <string>

#include "flatsteer/target.hpp"

namespace flatsteer {

// Experiment configuration (JSON with an explicit schema version).
struct ExperimentConfig {
    int schema_version = 1;

    // problem
    std::string boundary = "neumann";  // neumann | dirichlet | robin-two-sided
    double T = 0.5;
    double domain_lo = 0.0, domain_hi = 1.0;
    double alpha0 = 1, beta0 = 0, alpha1 = 1, beta1 = 0;  // robin pairs

    // target
    std::string target_kind = "rational-poles";  // rational-poles | coeffs | builtin
    std::string target_family;                   // inverse-quadratic | x-inverse-quadratic |
                                                 // shifted-inverse-quadratic | zeta-even | zeta-odd
    double target_a = 1.5;
    double target_zeta = 0.8;
    std::vector<double> coeff_values;
    std::string coeff_convention = "even";
    double coeff_M = 0, coeff_R = 0;

    // synthesis
    std::string method = "laplace";  // petzsche | laplace
    double R_prime = 1.21;
    double sigma = 1.6;
    double tol = 1e-8;
    int N = 0;  // 0: from truncation_order
    unsigned precision_bits = 256;
    double contour_radius = 0;  // 0: auto (0.8 x distance to nearest pole)

    // simulation
    int nx = 2000, nt = 20000;

    // outputs
    std::string out_dir = "out";
    bool write_field = false;
    bool write_binary = false;

    // verification
    double verify_tol = 1e-3;
};

// Parse + validate. Throws Error with slug "config-invalid" on schema
// violations (callers map it to exit code 2).
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_json(const std::string& text);

// Build the analytic target object described by the config.
AnalyticTarget make_target(const ExperimentConfig& cfg);

}  // namespace flatsteer
