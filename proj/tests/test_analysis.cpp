#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "flatsteer/analysis.hpp"
#include "flatsteer/errors.hpp"

using namespace flatsteer;

namespace {

std::vector<Big> factorial_power_family(double inv_rho, int N) {
    std::vector<Big> c;
    for (int n = 0; n <= N; ++n) c.push_back(exp(Big(-inv_rho * log_factorial(n))));
    return c;
}

}  // namespace

TEST_CASE("entire order: factorial-power families within 5%") {
    // c_n = (n!)^{-1/rho0}
    for (double rho0 : {0.5, 1.0, 2.0}) {
        auto rep = entire_order_estimate(factorial_power_family(1.0 / rho0, 60));
        CHECK(rep.rho == doctest::Approx(rho0).epsilon(0.05));
        CHECK_FALSE(rep.polynomial);
    }
}

TEST_CASE("entire order: polynomial coefficients flag rho = 0") {
    std::vector<Big> c(40, Big(0));
    c[0] = 1;
    c[3] = -2;
    c[5] = 0.25;
    auto rep = entire_order_estimate(c);
    CHECK(rep.polynomial);
    CHECK(rep.rho == 0.0);
}

TEST_CASE("entire order: insufficient data is rejected") {
    std::vector<Big> c(6, Big(1));
    CHECK_THROWS_AS(entire_order_estimate(c), Error);
}

TEST_CASE("order/Gevrey relation rho (1 - g) = 1 on synthetic families") {
    for (double rho0 : {1.0, 2.0}) {
        auto rep = entire_order_with_gevrey(factorial_power_family(1.0 / rho0, 140), 1.0, 40);
        CHECK(std::fabs(rep.rho * (1.0 - rep.gevrey_g) - 1.0) <= 0.1);
    }
}

TEST_CASE("loss study emits the three tables with flags") {
    LossStudyConfig cfg;
    cfg.out_dir = "loss_study_test_out";
    cfg.n_max_bounded = 20;
    cfg.n_max_growth = 30;
    auto res = run_loss_study(cfg);
    CHECK(res.bounded_flagged);
    CHECK(res.growth_flagged);
    CHECK(std::filesystem::exists(res.bounded_csv));
    CHECK(std::filesystem::exists(res.growth_csv));
    CHECK(std::filesystem::exists(res.summary_json));
    // header lines present
    std::ifstream in(res.growth_csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,x_n,log_rho_n");
    std::filesystem::remove_all(cfg.out_dir);
}

TEST_CASE("empty coefficient input yields empty-but-successful tables") {
    std::vector<Big> empty;
    auto rep = entire_order_estimate(empty);
    CHECK(rep.polynomial);
    CHECK(rep.rho == 0.0);
}
