#include "flatsteer/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "flatsteer/errors.hpp"
#include "flatsteer/flat_output.hpp"
#include "flatsteer/laplace.hpp"

namespace flatsteer {

OrderReport entire_order_estimate(const std::vector<Big>& c) {
    OrderReport rep;
    std::vector<std::pair<double, double>> pts;  // (n, log 1/|c_n|)
    int last_nonzero = -1;
    for (std::size_t n = 0; n < c.size(); ++n)
        if (c[n] != 0) last_nonzero = static_cast<int>(n);
    if (last_nonzero < 0) {
        rep.polynomial = true;
        rep.rho = 0;
        return rep;
    }
    // polynomial flag: trailing zeros past the last nonzero entry
    if (last_nonzero + 10 <= static_cast<int>(c.size()) - 1) {
        rep.polynomial = true;
        rep.rho = 0;
        return rep;
    }
    int count_nz = 0;
    for (std::size_t n = 2; n < c.size(); ++n) {
        if (c[n] == 0) continue;
        ++count_nz;
        pts.push_back({static_cast<double>(n), -to_double(log(abs(c[n])))});
    }
    if (count_nz < 10) fail("insufficient-data", "need >= 10 nonzero coefficients");
    // tail window: keep the upper half of indices
    std::size_t keep_from = pts.size() / 2;
    std::vector<std::pair<double, double>> w(pts.begin() + keep_from, pts.end());
    // LSQ: y = (1/rho) log n! + a n + b
    double A[3][3] = {};
    double rhsv[3] = {};
    for (auto& p : w) {
        double row[3] = {log_factorial(p.first), p.first, 1.0};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) A[i][j] += row[i] * row[j];
            rhsv[i] += row[i] * p.second;
        }
    }
    double M[3][4];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) M[i][j] = A[i][j];
        M[i][3] = rhsv[i];
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int rr = col + 1; rr < 3; ++rr)
            if (std::fabs(M[rr][col]) > std::fabs(M[piv][col])) piv = rr;
        std::swap(M[col], M[piv]);
        for (int rr = 0; rr < 3; ++rr) {
            if (rr == col || M[col][col] == 0) continue;
            double f = M[rr][col] / M[col][col];
            for (int j = col; j < 4; ++j) M[rr][j] -= f * M[col][j];
        }
    }
    double inv_rho = M[0][3] / M[0][0];
    double rss = 0;
    for (auto& p : w) {
        double pred = inv_rho * log_factorial(p.first) + (M[1][3] / M[1][1]) * p.first +
                      (M[2][3] / M[2][2]);
        rss += (pred - p.second) * (pred - p.second);
    }
    rep.residual = std::sqrt(rss / w.size());
    if (inv_rho <= 0) {
        // slower-than-any-(n!)^{1/rho} decay: finite-radius data; order infinite
        rep.rho = std::numeric_limits<double>::infinity();
        return rep;
    }
    rep.rho = 1.0 / inv_rho;
    return rep;
}

OrderReport entire_order_with_gevrey(const std::vector<Big>& c, double T, int n_derivs) {
    OrderReport rep = entire_order_estimate(c);
    // f(z) = sum c_n z^n; sup_{[0,T]} |f^{(q)}| by direct series summation at
    // t = T (positive-envelope bound: sum |c_n| n!/(n-q)! T^{n-q}).
    std::vector<double> log_sup(n_derivs + 1, -1e300);
    PrecisionGuard guard(512);
    for (int q = 0; q <= n_derivs; ++q) {
        Big acc = 0;
        for (std::size_t n = q; n < c.size(); ++n) {
            Big term = abs(c[n]) * exp(Big(log_factorial(static_cast<double>(n)) -
                                            log_factorial(static_cast<double>(n - q))));
            acc += term * pow(Big(T), static_cast<int>(n - q));
        }
        if (acc > 0) log_sup[q] = to_double(log(acc));
    }
    auto cert = fit_certificate_log(log_sup);
    rep.gevrey_g = cert.s;
    rep.relation = rep.rho * (1.0 - rep.gevrey_g);
    return rep;
}

LossStudyResult run_loss_study(const LossStudyConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    LossStudyResult res;

    // Bounded-ratio table: analytic phi with a_n = n!/R0^n on the cut [0,R].
    {
        auto a_of_n = [&](int n) { return exp(Big(log_factorial(n) - n * std::log(cfg.R0))); };
        std::vector<double> xs;
        for (int i = 0; i < 40; ++i) xs.push_back(0.002 * std::pow(1.35, i));
        auto table = finite_laplace_G(a_of_n, 64, cfg.R, cfg.R0, cfg.n_max_bounded, xs);
        res.bounded_csv = cfg.out_dir + "/appendix_bounded.csv";
        std::ofstream out(res.bounded_csv);
        out << "n,sup_scaled\n";
        double mx = 0, mn = 1e300;
        for (int n = 5; n <= cfg.n_max_bounded; ++n) {
            double s = 0;
            for (double v : table.scaled[n]) s = std::max(s, std::fabs(v));
            out << n << "," << s << "\n";
            mx = std::max(mx, s);
            mn = std::min(mn, s);
        }
        res.bounded_flagged = (mn > 0) && (mx / mn < 1e3);
    }

    // Growth table: monomial sequence, Rhat above the cut.
    {
        auto probe = loss_lower_bound_probe(cfg.monomial_p, cfg.R, cfg.R * cfg.R_hat_factor,
                                            cfg.n_max_growth);
        res.growth_csv = cfg.out_dir + "/appendix_growth.csv";
        std::ofstream out(res.growth_csv);
        out << "n,x_n,log_rho_n\n";
        for (auto& row : probe.rows)
            out << row.n << "," << row.x_n << "," << row.log_rho_n << "\n";
        res.growth_flagged = probe.growing;
    }

    res.summary_json = cfg.out_dir + "/loss_study.json";
    std::ofstream js(res.summary_json);
    js << "{\n  \"bounded_table\": \"" << res.bounded_csv << "\",\n  \"bounded_flag\": "
       << (res.bounded_flagged ? "\"bounded\"" : "\"growing\"") << ",\n  \"growth_table\": \""
       << res.growth_csv << "\",\n  \"growth_flag\": "
       << (res.growth_flagged ? "\"growing\"" : "\"bounded\"") << ",\n  \"R\": " << cfg.R
       << ",\n  \"R0\": " << cfg.R0 << ",\n  \"monomial_p\": " << cfg.monomial_p
       << ",\n  \"R_hat_factor\": " << cfg.R_hat_factor << "\n}\n";
    return res;
}

}  // namespace flatsteer
