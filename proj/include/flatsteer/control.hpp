#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "flatsteer/flat_output.hpp"
#include "flatsteer/series.hpp"

namespace flatsteer {

enum class BoundaryKind { dirichlet, neumann, robin };

struct BoundaryCondition {
    BoundaryKind kind = BoundaryKind::dirichlet;
    double alpha = 1.0;  // robin: alpha*psi + beta*psi_x = h
    double beta = 0.0;
};

// Sampled boundary control with a closed-form evaluator. The evaluator sums
// the factorial-scaled derivative tables of the source flat output:
//   neumann:   h(t) = sum_{i>=1} 2i * yhat_i(t)        (= theta_x(1,t))
//   dirichlet: k(t) = sum_{i>=0} zhat_i(t)             (= phi(1,t))
class ControlSignal {
  public:
    ControlSignal() = default;

    double operator()(double t) const { return eval(t); }
    double eval(double t) const;

    double T() const;
    int truncation() const { return N_; }
    const BoundaryCondition& bc() const { return bc_; }
    const std::string& label() const { return label_; }

    // Uniform samples on [0, T] (grid size n+1).
    std::vector<double> sample(int n) const;

  private:
    friend ControlSignal neumann_control(std::shared_ptr<const FlatOutput>, int);
    friend ControlSignal dirichlet_control(std::shared_ptr<const FlatOutput>, int);
    friend std::pair<ControlSignal, ControlSignal> robin_two_sided(
        std::shared_ptr<const FlatOutput>, std::shared_ptr<const FlatOutput>,
        BoundaryCondition, BoundaryCondition, int);
    enum class Mode { neumann_trace, dirichlet_trace, robin_left, robin_right };
    Mode mode_ = Mode::neumann_trace;
    std::shared_ptr<SeriesField> field_;  // owning; mixed for robin
    BoundaryCondition bc_;
    int N_ = 0;
    std::string label_;
};

ControlSignal neumann_control(std::shared_ptr<const FlatOutput> y, int N);
ControlSignal dirichlet_control(std::shared_ptr<const FlatOutput> z, int N);

// Two-sided Robin controls from the even/odd pair: psi = theta + phi on
// [-1,1], h0 = a0 psi(-1,.) + b0 psi_x(-1,.), h1 = a1 psi(1,.) + b1 psi_x(1,.).
std::pair<ControlSignal, ControlSignal> robin_two_sided(std::shared_ptr<const FlatOutput> even,
                                                        std::shared_ptr<const FlatOutput> odd,
                                                        BoundaryCondition bc0,
                                                        BoundaryCondition bc1, int N);

// Smallest N with M * sum_{i>N} ratio^{2i}/(2i+1) <= tol (control tail),
// by direct summation; N_cap guards the ratio -> 1 divergence.
int truncation_order(double M, double ratio, double tol, int N_cap = 200);

}  // namespace flatsteer
