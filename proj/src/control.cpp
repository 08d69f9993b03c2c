#include "flatsteer/control.hpp"

#include <cmath>

#include "flatsteer/errors.hpp"

namespace flatsteer {

double ControlSignal::T() const { return field_->T(); }

double ControlSignal::eval(double t) const {
    switch (mode_) {
        case Mode::neumann_trace:
            return field_->x_derivative(1.0, t);
        case Mode::dirichlet_trace:
            return field_->value(1.0, t);
        case Mode::robin_left:
            return bc_.alpha * field_->value(-1.0, t) + bc_.beta * field_->x_derivative(-1.0, t);
        case Mode::robin_right:
            return bc_.alpha * field_->value(1.0, t) + bc_.beta * field_->x_derivative(1.0, t);
    }
    return 0;
}

std::vector<double> ControlSignal::sample(int n) const {
    std::vector<double> out(n + 1);
    for (int i = 0; i <= n; ++i) out[i] = eval(T() * i / n);
    return out;
}

ControlSignal neumann_control(std::shared_ptr<const FlatOutput> y, int N) {
    ControlSignal c;
    c.mode_ = ControlSignal::Mode::neumann_trace;
    c.field_ = std::make_shared<SeriesField>(assemble_even(std::move(y), N));
    c.bc_ = {BoundaryKind::neumann, 0.0, 1.0};
    c.N_ = N;
    c.label_ = "neumann";
    return c;
}

ControlSignal dirichlet_control(std::shared_ptr<const FlatOutput> z, int N) {
    ControlSignal c;
    c.mode_ = ControlSignal::Mode::dirichlet_trace;
    c.field_ = std::make_shared<SeriesField>(assemble_odd(std::move(z), N));
    c.bc_ = {BoundaryKind::dirichlet, 1.0, 0.0};
    c.N_ = N;
    c.label_ = "dirichlet";
    return c;
}

std::pair<ControlSignal, ControlSignal> robin_two_sided(std::shared_ptr<const FlatOutput> even,
                                                        std::shared_ptr<const FlatOutput> odd,
                                                        BoundaryCondition bc0,
                                                        BoundaryCondition bc1, int N) {
    if (bc0.alpha == 0 && bc0.beta == 0) fail("invalid-bc", "left boundary pair is (0,0)");
    if (bc1.alpha == 0 && bc1.beta == 0) fail("invalid-bc", "right boundary pair is (0,0)");
    auto mixed = std::make_shared<SeriesField>(
        SeriesField::mixed(assemble_even(std::move(even), N), assemble_odd(std::move(odd), N)));
    ControlSignal h0, h1;
    h0.mode_ = ControlSignal::Mode::robin_left;
    h0.field_ = mixed;
    h0.bc_ = bc0;
    h0.bc_.kind = BoundaryKind::robin;
    h0.N_ = N;
    h0.label_ = "robin-left";
    h1.mode_ = ControlSignal::Mode::robin_right;
    h1.field_ = mixed;
    h1.bc_ = bc1;
    h1.bc_.kind = BoundaryKind::robin;
    h1.N_ = N;
    h1.label_ = "robin-right";
    return {std::move(h0), std::move(h1)};
}

int truncation_order(double M, double ratio, double tol, int N_cap) {
    if (!(M >= 0) || !(ratio >= 0) || !(tol > 0))
        fail("infeasible-parameters", "truncation_order needs M, ratio >= 0 and tol > 0");
    if (M == 0) return 0;
    // full tail from i = 1 (N = 0 case) downward; direct summation
    auto tail_from = [&](int n0) {
        double s = 0;
        double r2 = ratio * ratio;
        double term = std::pow(r2, n0);
        for (int i = n0; i < n0 + 100000; ++i) {
            double v = term / (2.0 * i + 1.0);
            s += v;
            term *= r2;
            if (v < 1e-22 * (s + 1e-300)) break;
            if (!(term < 1e290)) return 1e300;  // divergent
        }
        return M * s;
    };
    if (ratio >= 1.0) {
        if (tail_from(1) <= tol) return 0;  // degenerate M = tiny
        fail("divergence-guard", "ratio >= 1: tail cannot meet tolerance");
    }
    for (int N = 0; N <= N_cap; ++N) {
        if (tail_from(N + 1) <= tol) return N;
    }
    fail("divergence-guard",
         "truncation order exceeds cap " + std::to_string(N_cap) +
             " (certificate M = " + std::to_string(M) + ", ratio = " + std::to_string(ratio) + ")");
}

}  // namespace flatsteer
