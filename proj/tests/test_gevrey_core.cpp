#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "flatsteer/bump.hpp"
#include "flatsteer/cutoff.hpp"
#include "flatsteer/errors.hpp"
#include "flatsteer/gevrey.hpp"
#include "flatsteer/weights.hpp"

using namespace flatsteer;

namespace {

// d^n/dt^n e^{-1/t} for t > 0, exact via the kernel-polynomial recursion
// q_{m+1,k} = q_{m,k-1} - (m+k) q_{m,k}.
double exp_inv_deriv(int n, double t) {
    Big E = exp(Big(-1.0) / Big(t));
    if (n == 0) return to_double(E);
    std::vector<std::vector<Big>> q(n + 1);
    q[0] = {Big(1)};
    q[1] = {Big(0), Big(1)};
    for (int m = 1; m < n; ++m) {
        q[m + 1].assign(m + 2, Big(0));
        for (int k = 1; k <= m; ++k) {
            q[m + 1][k + 1] += q[m][k];
            q[m + 1][k] -= Big(m + k) * q[m][k];
        }
    }
    Big acc = 0;
    for (int k = 1; k <= n; ++k) acc += q[n][k] * pow(1 / Big(t), n + k);
    return to_double(E * acc);
}

}  // namespace

TEST_CASE("weight sequences validate their invariants") {
    auto w = WeightSequence::dyadic(64);
    w.validate();
    CHECK(w.a(0) == doctest::Approx(0.5));
    CHECK(w.tail_sum(1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w.sum_all() == doctest::Approx(1.0).epsilon(1e-12));

    auto fp = WeightSequence::factorial_pair(4096);
    fp.validate();
    CHECK(fp.a(0) == 1.0);
    CHECK(fp.a(1) == doctest::Approx(0.5));
    CHECK(fp.tail_sum(1) == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    // M_p = (2p)!
    CHECK(fp.log_modulus(5) == doctest::Approx(log_factorial(10)).epsilon(1e-12));
    CHECK(fp.regularity_A() == doctest::Approx(2.0).epsilon(0.01));

    CHECK_THROWS_AS(WeightSequence::from_list({0.5, 0.1, 0.2}), Error);  // rising at index 2
    CHECK_THROWS_AS(WeightSequence::from_list({0.5, -0.1}), Error);
}

TEST_CASE("bump: unit mass, support, nonnegativity (dyadic K=8)") {
    auto w = WeightSequence::dyadic(64);
    auto u = make_bump(w, 8);
    CHECK(u.support_end() == doctest::Approx(1.0 - std::ldexp(1.0, -8)).epsilon(1e-14));
    CHECK(std::fabs(u.mass_quadrature(1e-13) - 1.0) <= 1e-12);
    for (int i = 0; i <= 200; ++i) {
        double x = u.support_end() * i / 200;
        CHECK(to_double(u.value(Big(x))) >= -1e-30);
    }
    CHECK(to_double(u.value(Big(-0.01))) == 0.0);
    CHECK(to_double(u.value(Big(u.support_end() + 0.01))) == 0.0);
}

TEST_CASE("bump: two equal boxes give the hat function") {
    auto w = WeightSequence::from_list({0.5, 0.5});
    auto u = make_bump(w, 2);
    CHECK(u.support_end() == doctest::Approx(1.0));
    CHECK(to_double(u.value(Big(0.5))) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(to_double(u.value(Big(0.25))) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(to_double(u.value(Big(0.75))) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("bump: derivative bound 2^k (a_0...a_k)^{-1} on a grid") {
    auto w = WeightSequence::dyadic(64);
    const int K = 8;
    auto u = make_bump(w, K);
    for (int k = 0; k <= K - 2; ++k) {
        double log_bound = k * std::log(2.0) + w.log_modulus(k);
        double sup = 0;
        for (int i = 1; i < 400; ++i) {
            double x = u.support_end() * i / 400;
            sup = std::max(sup, std::fabs(to_double(u.derivative(k, Big(x)))));
        }
        CHECK(std::log(std::max(sup, 1e-300)) <= log_bound + 1e-9);
    }
    // the k = 3 case spelled out: sup|u'''| <= 8/(a0 a1 a2 a3)
    double bound3 = 8.0 / (0.5 * 0.25 * 0.125 * 0.0625);
    double sup3 = 0;
    for (int i = 1; i < 400; ++i)
        sup3 = std::max(sup3,
                        std::fabs(to_double(u.derivative(3, Big(u.support_end() * i / 400.0)))));
    CHECK(sup3 <= bound3);
}

TEST_CASE("bump: difference-operator identity and centered differences") {
    auto w = WeightSequence::dyadic(64);
    auto u = make_bump(w, 6);
    for (int k = 1; k <= 4; ++k) {
        for (double frac : {0.23, 0.5, 0.71}) {
            Big x = Big(u.support_end()) * frac;
            double exact = to_double(u.derivative(k, x));
            double via_diff = to_double(u.derivative_by_differences(k, x));
            CHECK(exact == doctest::Approx(via_diff).epsilon(1e-10));
        }
    }
    // centered finite differences of u^{(2)} converge to u^{(3)} at O(h^2)
    Big x = Big(u.support_end()) * 0.4;
    double exact = to_double(u.derivative(3, x));
    auto fd = [&](double h) {
        return to_double((u.derivative(2, x + Big(h)) - u.derivative(2, x - Big(h))) /
                         (2 * Big(h)));
    };
    double e1 = std::fabs(fd(1e-3) - exact);
    double e2 = std::fabs(fd(5e-4) - exact);
    CHECK(e2 <= e1 / 3.0);
}

TEST_CASE("bump errors: invalid depth and exhausted prefix") {
    auto w = WeightSequence::dyadic(64);
    CHECK_THROWS_AS(make_bump(w, 1), Error);
    auto shortw = WeightSequence::from_list({0.5, 0.25, 0.125});
    CHECK_THROWS_AS(sharpen_bump(shortw, 0.01, 3), Error);
}

TEST_CASE("sharpen: delta = 2 recovers the base construction with M <= 1") {
    auto w = WeightSequence::dyadic(64);
    auto res = sharpen_bump(w, 2.0, 8);
    CHECK(res.k0 == 0);
    CHECK(res.kappa == doctest::Approx(1.0));
    CHECK(res.M_measured <= 1.0 + 1e-9);
}

TEST_CASE("sharpen: delta = 0.5 picks the smallest flattening index") {
    auto w = WeightSequence::dyadic(64);
    const double delta = 0.5;
    auto res = sharpen_bump(w, delta, 8);
    // independent recomputation of the smallest k0 with kappa > 2/delta
    std::size_t k0 = 0;
    double kappa = 0;
    const double total = w.sum_all();
    for (;; ++k0) {
        kappa = total / ((k0 + 1) * w.a(k0) + w.tail_sum(k0 + 1));
        if (kappa > 2.0 / delta) break;
    }
    CHECK(res.k0 == k0);
    CHECK(res.kappa == doctest::Approx(kappa).epsilon(1e-12));
    // bound |v^{(k)}| <= M delta^k (a_0...a_k)^{-1} on a fresh grid
    for (int k = 0; k <= 6; ++k) {
        double log_env =
            std::log(res.M_measured * (1 + 1e-9)) + k * std::log(delta) + w.log_modulus(k);
        for (int i = 1; i < 233; ++i) {
            double x = res.bump.support_end() * i / 233;
            double v = std::fabs(to_double(res.bump.derivative(k, Big(x))));
            if (v > 0) CHECK(std::log(v) <= log_env + 1e-9);
        }
    }
    // support containment [0, a] = [0, 1]
    CHECK(res.bump.support_end() <= w.sum_all() + 1e-14);
}

TEST_CASE("cutoff: plateau value, endpoint zeros, derivative vanishing at 0") {
    auto w = WeightSequence::dyadic(64);
    const int K = 8;
    auto phi = make_cutoff(w, 0.7, K);
    CHECK(to_double(phi.value(Big(0))) == 1.0);  // exact
    CHECK(to_double(phi.value(Big(phi.support()))) == 0.0);
    CHECK(to_double(phi.value(Big(-phi.support()))) == 0.0);
    for (int k = 1; k <= K - 2; ++k) CHECK(to_double(phi.derivative(k, Big(0))) == 0.0);
    // 0 <= phi <= 1 and the shifted-index derivative bound with the reported C
    for (int k = 0; k <= K - 3; ++k) {
        double logprod = 0;
        for (int j = 1; j <= k; ++j) logprod += std::log(w.a(j));
        double log_env =
            std::log(phi.C_measured() * (1 + 1e-9)) + k * std::log(phi.delta()) - logprod;
        for (int i = 0; i <= 1000; ++i) {
            double x = -phi.support() + 2 * phi.support() * i / 1000.0;
            double v = to_double(phi.value(Big(x)));
            CHECK(v >= -1e-30);
            CHECK(v <= 1.0 + 1e-15);
            if (k >= 1) {
                double dv = std::fabs(to_double(phi.derivative(k, Big(x))));
                if (dv > 0) CHECK(std::log(dv) <= log_env + 1e-9);
            }
        }
    }
}

TEST_CASE("gevrey step: endpoints, symmetry, fitted order") {
    const double T = 0.5, sigma = 1.5;
    auto g = gevrey_step(sigma, T);
    CHECK(to_double(g.value(Big(0))) == 0.0);
    CHECK(to_double(g.value(Big(T))) == 1.0);
    for (double f : {0.1, 0.3, 0.45}) {
        double s = to_double(g.value(Big(f * T))) + to_double(g.value(Big((1 - f) * T)));
        CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
    }
    for (int k = 1; k <= 8; ++k) {
        CHECK(to_double(g.derivative(k, Big(0))) == 0.0);
        CHECK(to_double(g.derivative(k, Big(T))) == 0.0);
    }
    // The fitted order at n <= 18 sits well below the design order sigma
    // (the kernel family is pre-asymptotic at these depths; the fitter is
    // validated on the exactly-known order-2 family below). The class claim
    // G^sigma is not violated by a smaller measured order.
    auto cert = fit_certificate(g.sup_table(18));
    CHECK(cert.s > 0.0);
    CHECK(cert.s <= sigma + 0.1);
    CHECK(cert.R > 0.0);
    CHECK_THROWS_AS(gevrey_step(2.5, T), Error);
}

TEST_CASE("fit_certificate: honest fits on synthetic tables") {
    // constant table (all derivatives of e^t on [0,1] share the sup e): the
    // least-squares fit in the certificate's own convention returns s ~ 0,
    // R ~ 1; factorial growth would overshoot a constant table.
    {
        std::vector<double> sup(16, std::exp(1.0));
        auto c = fit_certificate(sup);
        CHECK(std::fabs(c.s) <= 0.05);
        CHECK(c.R == doctest::Approx(1.0).epsilon(0.1));
    }
    // sup_n = (2n)!/rho^{2n}: s = 2 and R = rho^2/4 once the central binomial
    // 4^n is accounted for.
    {
        const double rho = 1.7;
        std::vector<double> logsup;
        for (int n = 0; n <= 40; ++n)
            logsup.push_back(log_factorial(2.0 * n) - 2.0 * n * std::log(rho));
        auto c = fit_certificate_log(logsup);
        CHECK(c.s == doctest::Approx(2.0).epsilon(0.05));
        CHECK(c.R == doctest::Approx(rho * rho / 4.0).epsilon(0.10));
    }
    // control experiment: the exactly-known order-2 family e^{-1/t} fits to
    // s ~ 2 (validates the sup-measurement + fitter pair).
    {
        std::vector<double> logsup;
        for (int n = 0; n <= 24; ++n) {
            double best = -1e300;
            for (int i = 1; i <= 1500; ++i) {
                double t = i / 1500.0;
                double v = std::fabs(exp_inv_deriv(n, t));
                if (v > 0) best = std::max(best, std::log(v));
            }
            logsup.push_back(best);
        }
        auto c = fit_certificate_log(logsup);
        CHECK(c.s == doctest::Approx(2.0).epsilon(0.06));
    }
    {
        std::vector<double> zeros(12, 0.0);
        auto c = fit_certificate(zeros);
        CHECK(c.trivial);
    }
}

TEST_CASE("product certificate keeps the radius of the less regular factor") {
    GevreyCertificate cf{2.0, 1.0, 1.0};
    GevreyCertificate cg{1.01, 1.0, 1.0};
    auto cp = product_certificate(cf, cg);
    CHECK(cp.s == doctest::Approx(2.0));
    CHECK(cp.R == cf.R);  // never smaller than the input radius
    CHECK(cp.C >= cf.C * cg.C);
    CHECK_THROWS_AS(product_certificate(cf, GevreyCertificate{2.5, 1, 1}), Error);
}

TEST_CASE("product certificate bound holds for a closed-form pair") {
    // f(t) = e^{-1/t} on [0.2, 1.2] (order-2 class), g(t) = e^t (order 1.2).
    const double lo = 0.2, hi = 1.2;
    std::vector<double> sup_f(16, 0.0);
    for (int n = 0; n <= 15; ++n)
        for (int i = 0; i <= 40; ++i) {
            double t = lo + (hi - lo) * i / 40;
            sup_f[n] = std::max(sup_f[n], std::fabs(exp_inv_deriv(n, t)));
        }
    GevreyCertificate cert_f;
    cert_f.s = 2.0;
    cert_f.R = 1.0;
    double logC = -1e300;
    for (int n = 0; n <= 15; ++n)
        logC = std::max(logC, std::log(sup_f[n]) - 2 * log_factorial(n));
    cert_f.C = std::exp(logC) * (1 + 1e-12);
    GevreyCertificate cert_g{1.2, std::exp(hi), 1.0};
    auto cp = product_certificate(cert_f, cert_g);
    CHECK(cp.R == cert_f.R);
    for (int n = 0; n <= 15; ++n) {
        double bound = cp.C * std::exp(2 * log_factorial(n) - n * std::log(cp.R));
        for (int i = 0; i <= 20; ++i) {
            double t = lo + (hi - lo) * i / 20;
            double acc = 0, binom = 1;
            for (int j = 0; j <= n; ++j) {
                acc += binom * exp_inv_deriv(j, t) * std::exp(t);
                binom = binom * (n - j) / (j + 1.0);
            }
            CHECK(std::fabs(acc) <= bound * (1 + 1e-9));
        }
    }
}
