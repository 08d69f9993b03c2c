#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "flatsteer/errors.hpp"
#include "flatsteer/heat.hpp"

using namespace flatsteer;

TEST_CASE("zero data stays identically zero") {
    BoundarySpec bc;
    bc.left.cond = {BoundaryKind::dirichlet, 1, 0};
    bc.right.cond = {BoundaryKind::neumann, 0, 1};
    auto f = solve_heat(bc, nullptr, 0, 1, 0.3, 32, 32);
    for (double v : f.values) CHECK(v == 0.0);
}

TEST_CASE("separable Dirichlet decay: terminal error at O(dx^2 + dt^2)") {
    const double T = 0.1;
    BoundarySpec bc;
    bc.left.cond = {BoundaryKind::dirichlet, 1, 0};
    bc.right.cond = {BoundaryKind::dirichlet, 1, 0};
    auto f = solve_heat(bc, [](double x) { return std::sin(M_PI * x); }, 0, 1, T, 256, 256);
    auto err = terminal_error(f, [&](double x) {
        return std::exp(-M_PI * M_PI * T) * std::sin(M_PI * x);
    });
    CHECK(err.linf <= 5e-6);
    CHECK(err.l2 <= err.linf);
}

TEST_CASE("manufactured polynomial is reproduced to rounding") {
    // psi = x^2 + 2t solves the heat equation exactly; CN is exact on it.
    const double T = 0.25;
    BoundarySpec bc;
    bc.left.cond = {BoundaryKind::neumann, 0, 1};
    bc.left.data = [](double) { return 0.0; };
    bc.right.cond = {BoundaryKind::neumann, 0, 1};
    bc.right.data = [](double) { return 2.0; };
    auto f = solve_heat(bc, [](double x) { return x * x; }, 0, 1, T, 64, 64);
    auto err = terminal_error(f, [&](double x) { return x * x + 2 * T; });
    CHECK(err.linf <= 1e-11);
}

TEST_CASE("convergence orders: spatial and temporal 2.0 +- 0.1") {
    const double T = 0.1;
    // time-varying Dirichlet data from the exact solution e^{-t} sin(x)
    auto exact = [&](double x, double t) { return std::exp(-t) * std::sin(x); };
    auto run = [&](int nx, int nt) {
        BoundarySpec bc;
        bc.left.cond = {BoundaryKind::dirichlet, 1, 0};
        bc.left.data = [&](double t) { return 0.0 * t; };
        bc.right.cond = {BoundaryKind::dirichlet, 1, 0};
        bc.right.data = [&](double t) { return exact(1.0, t); };
        auto f = solve_heat(bc, [&](double x) { return exact(x, 0.0); }, 0, 1, T, nx, nt);
        return terminal_error(f, [&](double x) { return exact(x, T); }).linf;
    };
    auto spatial = convergence_study([&](int l) { return run(16 << l, 8192); }, 4);
    for (double o : spatial.orders) CHECK(o == doctest::Approx(2.0).epsilon(0.05));
    auto temporal = convergence_study([&](int l) { return run(4096, 16 << l); }, 4);
    for (double o : temporal.orders) CHECK(o == doctest::Approx(2.0).epsilon(0.05));

    // polynomial problem: error at rounding level flags "exact"
    auto poly = convergence_study(
        [&](int l) {
            BoundarySpec bc;
            bc.left.cond = {BoundaryKind::neumann, 0, 1};
            bc.right.cond = {BoundaryKind::neumann, 0, 1};
            bc.right.data = [](double) { return 2.0; };
            auto f = solve_heat(bc, [](double x) { return x * x; }, 0, 1, 0.1, 32 << l, 64);
            return terminal_error(f, [](double x) { return x * x + 0.2; }).linf;
        },
        3);
    CHECK(poly.exact);
}

TEST_CASE("Neumann mean conservation: drift <= 1e-12 over 1e4 steps") {
    BoundarySpec bc;
    bc.left.cond = {BoundaryKind::neumann, 0, 1};
    bc.right.cond = {BoundaryKind::neumann, 0, 1};
    auto f = solve_heat(bc, [](double x) { return std::cos(M_PI * x) + 2.0; }, 0, 1, 1.0, 64,
                        10000);
    double m0 = f.mean_row(0);
    double worst = 0;
    for (int k = 1; k <= f.nt; k += 100) worst = std::max(worst, std::fabs(f.mean_row(k) - m0));
    CHECK(std::fabs(f.mean_row(f.nt) - m0) <= 1e-12);
    CHECK(worst <= 1e-12);
}

TEST_CASE("stability envelope on a driven problem") {
    BoundarySpec bc;
    bc.left.cond = {BoundaryKind::neumann, 0, 1};
    bc.right.cond = {BoundaryKind::neumann, 0, 1};
    bc.right.data = [](double t) { return std::sin(20 * t); };
    auto f = solve_heat(bc, [](double x) { return std::cos(M_PI * x); }, 0, 1, 1.0, 64, 256);
    double sup = 0;
    for (double v : f.values) sup = std::max(sup, std::fabs(v));
    CHECK(sup <= (1.0 + 1.0 * 1.0) * 1.05);  // init sup + T * boundary envelope, 5% slack
}

TEST_CASE("grid refinement monotonicity on the manufactured problem") {
    const double T = 0.1;
    auto exact = [&](double x, double t) { return std::exp(-t) * std::sin(x); };
    double prev = 1e300;
    for (int l = 0; l < 3; ++l) {
        BoundarySpec bc;
        bc.left.cond = {BoundaryKind::dirichlet, 1, 0};
        bc.right.cond = {BoundaryKind::dirichlet, 1, 0};
        bc.right.data = [&](double t) { return exact(1.0, t); };
        auto f = solve_heat(bc, [&](double x) { return exact(x, 0.0); }, 0, 1, T, 32 << l,
                            32 << l);
        double e = terminal_error(f, [&](double x) { return exact(x, T); }).linf;
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("parity preservation on [-1,1]") {
    // odd data, zero Dirichlet ends
    {
        BoundarySpec bc;
        bc.left.cond = {BoundaryKind::dirichlet, 1, 0};
        bc.right.cond = {BoundaryKind::dirichlet, 1, 0};
        auto f = solve_heat(bc, [](double x) { return x * (1 - x * x); }, -1, 1, 0.2, 128, 128);
        double worst = 0;
        for (int i = 0; i <= f.nx; ++i)
            worst = std::max(worst, std::fabs(f.at(f.nt, i) + f.at(f.nt, f.nx - i)));
        CHECK(worst <= 1e-10);
    }
    // even data, zero Neumann ends
    {
        BoundarySpec bc;
        bc.left.cond = {BoundaryKind::neumann, 0, 1};
        bc.right.cond = {BoundaryKind::neumann, 0, 1};
        auto f = solve_heat(bc, [](double x) { return std::cos(M_PI * x); }, -1, 1, 0.2, 128, 128);
        double worst = 0;
        for (int i = 0; i <= f.nx; ++i)
            worst = std::max(worst, std::fabs(f.at(f.nt, i) - f.at(f.nt, f.nx - i)));
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("robin closure: equilibrium of alpha psi + beta psi_x = h") {
    // steady state of psi_t = psi_xx with robin data: psi = 1 satisfies
    // alpha*1 + beta*0 = alpha at both ends
    BoundarySpec bc;
    bc.left.cond = {BoundaryKind::robin, 2.0, 1.0};
    bc.left.data = [](double) { return 2.0; };
    bc.right.cond = {BoundaryKind::robin, 3.0, -0.5};
    bc.right.data = [](double) { return 3.0; };
    auto f = solve_heat(bc, [](double) { return 1.0; }, 0, 1, 0.5, 64, 128);
    auto err = terminal_error(f, [](double) { return 1.0; });
    CHECK(err.linf <= 1e-10);
    // degenerate pair rejected
    BoundarySpec bad;
    bad.left.cond = {BoundaryKind::robin, 0.0, 0.0};
    bad.right.cond = {BoundaryKind::dirichlet, 1, 0};
    CHECK_THROWS_AS(solve_heat(bad, nullptr, 0, 1, 0.1, 32, 32), Error);
    CHECK_THROWS_AS(solve_heat(bc, nullptr, 0, 1, 0.1, 8, 32), Error);  // grid too coarse
}

TEST_CASE("manufactured solution with known offset") {
    BoundarySpec bc;
    bc.left.cond = {BoundaryKind::dirichlet, 1, 0};
    bc.right.cond = {BoundaryKind::dirichlet, 1, 0};
    auto f = solve_heat(bc, [](double x) { return std::sin(M_PI * x); }, 0, 1, 0.05, 64, 64);
    auto base = f.terminal_row();
    std::vector<double> shifted(base);
    for (double& v : shifted) v += 1e-3;
    auto err = terminal_error(f, shifted);
    CHECK(err.linf == doctest::Approx(1e-3).epsilon(1e-9));
}
