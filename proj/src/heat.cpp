#include "flatsteer/heat.hpp"

#include <cmath>

#include "flatsteer/errors.hpp"

namespace flatsteer {

std::vector<double> HeatField::terminal_row() const {
    return std::vector<double>(values.end() - (nx + 1), values.end());
}

double HeatField::mean_row(int k) const {
    double s = 0.5 * (at(k, 0) + at(k, nx));
    for (int i = 1; i < nx; ++i) s += at(k, i);
    return s / nx;
}

namespace {

// Thomas solve for a tridiagonal system (a: sub, b: diag, c: super).
void thomas(std::vector<double>& a, std::vector<double>& b, std::vector<double>& c,
            std::vector<double>& d) {
    const std::size_t n = b.size();
    for (std::size_t i = 1; i < n; ++i) {
        double m = a[i] / b[i - 1];
        b[i] -= m * c[i - 1];
        d[i] -= m * d[i - 1];
    }
    d[n - 1] /= b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
}

}  // namespace

HeatField solve_heat(const BoundarySpec& bc, const std::function<double(double)>& init, double x0,
                     double x1, double T, int nx, int nt) {
    if (nx < 16 || nt < 16) fail("invalid-bc", "need nx >= 16 and nt >= 16");
    for (const BoundaryData* b : {&bc.left, &bc.right})
        if (b->cond.kind == BoundaryKind::robin && b->cond.alpha == 0 && b->cond.beta == 0)
            fail("invalid-bc", "degenerate Robin pair (0,0)");
    HeatField F;
    F.nx = nx;
    F.nt = nt;
    F.x0 = x0;
    F.x1 = x1;
    F.T = T;
    F.values.assign(static_cast<std::size_t>(nt + 1) * (nx + 1), 0.0);
    const double dx = (x1 - x0) / nx;
    const double dt = T / nt;
    const double r = dt / (2.0 * dx * dx);  // CN half-weight

    for (int i = 0; i <= nx; ++i) F.at(0, i) = init ? init(F.x_of(i)) : 0.0;

    // Row closures. Dirichlet pins the value; Neumann/Robin eliminate the
    // ghost node with the second-order centered flux:
    //   alpha u + beta u_x = h  at x0:  u_{-1} = u_1 - (2 dx/beta)(h - alpha u_0)
    //   at x1:                          u_{n+1} = u_{n-1} + (2 dx/beta)(h - alpha u_n)
    auto left_kind = bc.left.cond.kind;
    auto right_kind = bc.right.cond.kind;
    auto effective = [](const BoundaryData& b) {
        // Robin with beta = 0 degenerates to a scaled Dirichlet condition.
        if (b.cond.kind == BoundaryKind::robin && b.cond.beta == 0.0) return BoundaryKind::dirichlet;
        return b.cond.kind;
    };
    left_kind = effective(bc.left);
    right_kind = effective(bc.right);

    std::vector<double> sub(nx + 1), diag(nx + 1), sup(nx + 1), rhs(nx + 1), u(nx + 1);

    for (int k = 0; k < nt; ++k) {
        const double t_half = (k + 0.5) * dt;
        const double t_new = (k + 1) * dt;
        for (int i = 0; i <= nx; ++i) u[i] = F.at(k, i);

        // interior rows
        for (int i = 1; i < nx; ++i) {
            sub[i] = -r;
            diag[i] = 1.0 + 2.0 * r;
            sup[i] = -r;
            rhs[i] = u[i] + r * (u[i + 1] - 2.0 * u[i] + u[i - 1]);
        }

        // left row
        if (left_kind == BoundaryKind::dirichlet) {
            double scale = bc.left.cond.kind == BoundaryKind::robin ? bc.left.cond.alpha : 1.0;
            sub[0] = 0;
            diag[0] = 1;
            sup[0] = 0;
            rhs[0] = bc.left.eval(t_new) / scale;
        } else {
            const double beta = bc.left.cond.kind == BoundaryKind::neumann ? 1.0 : bc.left.cond.beta;
            const double alpha = bc.left.cond.kind == BoundaryKind::neumann ? 0.0 : bc.left.cond.alpha;
            const double h = bc.left.eval(t_half);
            // L u |_0 = (2u_1 - 2u_0 + (2 dx alpha/beta) u_0 - (2 dx/beta) h)/dx^2
            const double c0 = 2.0 * dx * alpha / beta;
            sub[0] = 0;
            diag[0] = 1.0 + r * (2.0 - c0);
            sup[0] = -2.0 * r;
            rhs[0] = u[0] + r * (2.0 * u[1] - (2.0 - c0) * u[0]) - (2.0 * dt / (beta * dx)) * h;
        }

        // right row
        if (right_kind == BoundaryKind::dirichlet) {
            double scale = bc.right.cond.kind == BoundaryKind::robin ? bc.right.cond.alpha : 1.0;
            sub[nx] = 0;
            diag[nx] = 1;
            sup[nx] = 0;
            rhs[nx] = bc.right.eval(t_new) / scale;
        } else {
            const double beta = bc.right.cond.kind == BoundaryKind::neumann ? 1.0 : bc.right.cond.beta;
            const double alpha = bc.right.cond.kind == BoundaryKind::neumann ? 0.0 : bc.right.cond.alpha;
            const double h = bc.right.eval(t_half);
            // L u |_n = (2u_{n-1} - 2u_n - (2 dx alpha/beta) u_n + (2 dx/beta) h)/dx^2
            const double cn = 2.0 * dx * alpha / beta;
            sub[nx] = -2.0 * r;
            diag[nx] = 1.0 + r * (2.0 + cn);
            sup[nx] = 0;
            rhs[nx] = u[nx] + r * (2.0 * u[nx - 1] - (2.0 + cn) * u[nx]) + (2.0 * dt / (beta * dx)) * h;
        }

        thomas(sub, diag, sup, rhs);
        for (int i = 0; i <= nx; ++i) F.at(k + 1, i) = rhs[i];
    }
    return F;
}

ErrorNorms terminal_error(const HeatField& field, const std::vector<double>& target) {
    if (static_cast<int>(target.size()) != field.nx + 1)
        fail("invalid-bc", "target sample count mismatch");
    ErrorNorms e;
    double tmax = 0, l2 = 0;
    auto row = field.terminal_row();
    for (int i = 0; i <= field.nx; ++i) {
        double d = std::fabs(row[i] - target[i]);
        e.linf = std::max(e.linf, d);
        tmax = std::max(tmax, std::fabs(target[i]));
        double w = (i == 0 || i == field.nx) ? 0.5 : 1.0;
        l2 += w * d * d;
    }
    e.l2 = std::sqrt(l2 * (field.x1 - field.x0) / field.nx);
    e.rel_linf = tmax > 0 ? e.linf / tmax : e.linf;
    return e;
}

ErrorNorms terminal_error(const HeatField& field, const std::function<double(double)>& target) {
    std::vector<double> samples(field.nx + 1);
    for (int i = 0; i <= field.nx; ++i) samples[i] = target(field.x_of(i));
    return terminal_error(field, samples);
}

ConvergenceReport convergence_study(const std::function<double(int)>& error_at_level, int levels) {
    ConvergenceReport rep;
    for (int l = 0; l < levels; ++l) rep.errors.push_back(error_at_level(l));
    bool exact = true;
    for (double e : rep.errors)
        if (e > 1e-11) exact = false;
    rep.exact = exact;
    if (!exact)
        for (int l = 0; l + 1 < levels; ++l)
            rep.orders.push_back(std::log2(rep.errors[l] / rep.errors[l + 1]));
    return rep;
}

}  // namespace flatsteer
