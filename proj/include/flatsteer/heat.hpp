#pragma once

#include <functional>
#include <string>
#include <vector>

#include "flatsteer/control.hpp"

namespace flatsteer {

// Per-endpoint boundary data for the verification solver.
struct BoundaryData {
    BoundaryCondition cond;
    std::function<double(double)> data;  // h(t); null means homogeneous
    double eval(double t) const { return data ? data(t) : 0.0; }
};

struct BoundarySpec {
    BoundaryData left, right;
};

// Space-time grid samples of the simulated solution (row-major in time).
struct HeatField {
    int nx = 0, nt = 0;
    double x0 = 0, x1 = 1, T = 0;
    std::string scheme = "crank-nicolson";
    std::vector<double> values;  // (nt+1) x (nx+1)

    double& at(int k, int i) { return values[static_cast<std::size_t>(k) * (nx + 1) + i]; }
    double at(int k, int i) const { return values[static_cast<std::size_t>(k) * (nx + 1) + i]; }
    double x_of(int i) const { return x0 + (x1 - x0) * i / nx; }
    std::vector<double> terminal_row() const;
    // trapezoidal spatial mean of row k
    double mean_row(int k) const;
};

// Crank-Nicolson with ghost-node elimination for Neumann/Robin ends; boundary
// data sampled at half-steps; one tridiagonal solve per step.
HeatField solve_heat(const BoundarySpec& bc, const std::function<double(double)>& init, double x0,
                     double x1, double T, int nx, int nt);

struct ErrorNorms {
    double linf = 0, l2 = 0, rel_linf = 0;
};

ErrorNorms terminal_error(const HeatField& field, const std::function<double(double)>& target);
ErrorNorms terminal_error(const HeatField& field, const std::vector<double>& target_samples);

struct ConvergenceReport {
    std::vector<double> errors;
    std::vector<double> orders;  // log2(err[i]/err[i+1])
    bool exact = false;          // errors at rounding level
};

// Richardson-style observed orders on a problem driven by `run(level)`,
// halving the step at each level against a known solution.
ConvergenceReport convergence_study(const std::function<double(int)>& error_at_level, int levels);

}  // namespace flatsteer
