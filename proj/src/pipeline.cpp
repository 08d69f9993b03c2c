#include "flatsteer/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "flatsteer/analysis.hpp"
#include "flatsteer/errors.hpp"
#include "flatsteer/gevrey.hpp"
#include "flatsteer/io.hpp"

namespace flatsteer {

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

// Coefficient sequence(s) for the requested boundary setting.
struct TargetCoeffs {
    CoeffSequence even, odd;
    bool has_even = false, has_odd = false;
};

TargetCoeffs target_coefficients(const ExperimentConfig& cfg, const AnalyticTarget& tgt) {
    TargetCoeffs tc;
    const bool want_even = cfg.boundary == "neumann" || cfg.boundary == "robin-two-sided";
    const bool want_odd = cfg.boundary == "dirichlet" || cfg.boundary == "robin-two-sided";
    if (tgt.kind == AnalyticTarget::Kind::coefficients) {
        if (tgt.coeffs.conv == CoeffSequence::Convention::EvenGevrey2) {
            if (!want_even) fail("config-invalid", "even coefficient target with odd boundary");
            tc.even = tgt.coeffs;
            tc.has_even = true;
        } else if (tgt.coeffs.conv == CoeffSequence::Convention::OddGevrey2) {
            if (!want_odd) fail("config-invalid", "odd coefficient target with even boundary");
            tc.odd = tgt.coeffs;
            tc.has_odd = true;
        } else {
            auto [e, o] = parity_split(tgt.coeffs);
            tc.even = std::move(e);
            tc.odd = std::move(o);
            tc.has_even = tc.has_odd = true;
        }
        return tc;
    }
    // closed form: contour coefficients about 0
    double dist = 1e300;
    for (auto p : tgt.poles) dist = std::min(dist, std::abs(p));
    if (dist > 1e290) dist = tgt.claimed_radius > 0 ? tgt.claimed_radius : 1.0;
    double r = cfg.contour_radius > 0 ? cfg.contour_radius : 0.8 * dist;
    const int n_derivs = 2 * 64 + 1;
    auto c = taylor_coeffs(tgt, 0.0, n_derivs, r);
    auto [e, o] = parity_split(c);
    // The contour certificate has R = r < dist; with declared singularities
    // the sharp radius is the pole distance. Re-certify there with the
    // measured constant (verified entrywise).
    if (!tgt.poles.empty()) {
        for (CoeffSequence* s : {&e, &o}) {
            s->R = dist;
            s->M = std::max(s->measured_M() * (1 + 1e-12), 1e-300);
            s->verify_bound();
        }
    }
    tc.even = std::move(e);
    tc.odd = std::move(o);
    tc.has_even = want_even;
    tc.has_odd = want_odd;
    return tc;
}

std::shared_ptr<const LaplaceKernel> laplace_kernel_for(const ExperimentConfig& cfg) {
    if (cfg.target_family == "zeta-even" || cfg.target_family == "zeta-odd") {
        const double z2 = cfg.target_zeta * cfg.target_zeta;
        return std::make_shared<PoleKernel>(1.0 / z2, z2, 2);
    }
    if (cfg.target_family == "exp") return std::make_shared<ExpKernel>();
    fail("condition-Y3-violated",
         "no negative-axis-analytic kernel for target family '" + cfg.target_family +
             "' (its transform is singular on the negative axis); use the petzsche method");
}

std::shared_ptr<FlatOutput> synth_one(const ExperimentConfig& cfg, const CoeffSequence& c,
                                      FlatOutput::Parity parity, int& N_out) {
    const double ratio_guess = cfg.method == "laplace" ? 1.0 / c.R : cfg.R_prime / c.R;
    int N = cfg.N;
    if (N <= 0) N = truncation_order(std::max(c.M, 1.0), ratio_guess, cfg.tol);
    std::shared_ptr<FlatOutput> fo;
    for (int attempt = 0; attempt < 3; ++attempt) {
        int n_max = N + 2;
        if (cfg.method == "laplace") {
            auto kern = laplace_kernel_for(cfg);
            Big d0 = c.d.empty() ? Big(0) : c.d[0];
            fo = std::make_shared<FlatOutput>(
                laplace_output(kern, d0, parity, cfg.T, c.R, cfg.sigma, n_max));
        } else {
            fo = std::make_shared<FlatOutput>(
                parity == FlatOutput::Parity::even
                    ? steer_output_even(c, cfg.T, cfg.R_prime, cfg.sigma, n_max)
                    : steer_output_odd(c, cfg.T, cfg.R_prime, cfg.sigma, n_max));
        }
        if (cfg.N > 0) break;  // pinned truncation
        int N_needed = truncation_order(std::exp(std::min(fo->log_M_prime(), 690.0)),
                                        fo->ratio(), cfg.tol);
        if (N_needed <= N) {
            N = N_needed;
            break;
        }
        N = N_needed;
    }
    N_out = N;
    return fo;
}

json certificate_json(const FlatOutput& fo, int N, const LossReport& loss) {
    json j;
    j["method"] = fo.method() == FlatOutput::Method::petzsche ? "petzsche" : "laplace";
    j["parity"] = fo.parity() == FlatOutput::Parity::even ? "even" : "odd";
    j["M_target"] = fo.targets().M;
    j["R"] = fo.R();
    j["R_prime"] = fo.R_prime();
    j["log_M_prime"] = fo.log_M_prime();
    j["N"] = N;
    j["R0"] = loss_reference_R0();
    j["endpoint0_abs_max"] = fo.endpoint0_abs_max();
    j["interp_rel_max"] = fo.interp_rel_max();
    j["loss_rho_min"] = loss.rho_min;
    j["loss_bounded_at_cap"] = loss.bounded_at_cap;
    return j;
}

json norms_json(const ErrorNorms& e) {
    return json{{"linf", e.linf}, {"l2", e.l2}, {"rel_linf", e.rel_linf}};
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

int guarded(const ExperimentConfig& cfg, const std::function<void()>& body) {
    try {
        body();
        return kExitOk;
    } catch (const Error& e) {
        if (e.slug() == "config-invalid") return kExitConfig;
        fs::create_directories(cfg.out_dir);
        json j{{"error", e.slug()}, {"detail", e.what()}};
        write_json(cfg.out_dir + "/error.json", j);
        return kExitNumeric;
    }
}

}  // namespace

SynthResult run_synth(const ExperimentConfig& cfg) {
    set_precision_bits(cfg.precision_bits);
    AnalyticTarget tgt = make_target(cfg);
    TargetCoeffs tc = target_coefficients(cfg, tgt);
    SynthResult res;
    if (cfg.boundary == "neumann") {
        res.even = synth_one(cfg, tc.even, FlatOutput::Parity::even, res.N);
        res.h_right = neumann_control(res.even, res.N);
        res.loss = measure_loss(*res.even, std::min(20, res.even->n_max()));
    } else if (cfg.boundary == "dirichlet") {
        res.odd = synth_one(cfg, tc.odd, FlatOutput::Parity::odd, res.N);
        res.h_right = dirichlet_control(res.odd, res.N);
        res.loss = measure_loss(*res.odd, std::min(20, res.odd->n_max()));
    } else {
        // two-sided: a single-parity target leaves the other component zero
        auto zero_output = [&](FlatOutput::Parity par, double R) {
            return std::make_shared<FlatOutput>(laplace_output(
                std::make_shared<NullKernel>(), Big(0), par, cfg.T, R, cfg.sigma, 8));
        };
        int Ne = 0, No = 0;
        res.even = tc.has_even ? synth_one(cfg, tc.even, FlatOutput::Parity::even, Ne)
                               : zero_output(FlatOutput::Parity::even, tc.odd.R);
        res.odd = tc.has_odd ? synth_one(cfg, tc.odd, FlatOutput::Parity::odd, No)
                             : zero_output(FlatOutput::Parity::odd, tc.even.R);
        res.N = std::max({Ne, No, 8});
        auto [h0, h1] = robin_two_sided(res.even, res.odd, {BoundaryKind::robin, cfg.alpha0, cfg.beta0},
                                        {BoundaryKind::robin, cfg.alpha1, cfg.beta1}, res.N);
        res.h_left = std::move(h0);
        res.h_right = std::move(h1);
        res.loss = measure_loss(*res.even, std::min(20, res.even->n_max()));
    }
    return res;
}

HeatField run_simulate(const ExperimentConfig& cfg, const SynthResult& synth) {
    BoundarySpec bc;
    const ControlSignal& hr = synth.h_right;
    if (cfg.boundary == "neumann") {
        bc.left.cond = {BoundaryKind::neumann, 0.0, 1.0};
        bc.right.cond = {BoundaryKind::neumann, 0.0, 1.0};
        bc.right.data = [&hr](double t) { return hr.eval(t); };
        return solve_heat(bc, nullptr, 0.0, 1.0, cfg.T, cfg.nx, cfg.nt);
    }
    if (cfg.boundary == "dirichlet") {
        bc.left.cond = {BoundaryKind::dirichlet, 1.0, 0.0};
        bc.right.cond = {BoundaryKind::dirichlet, 1.0, 0.0};
        bc.right.data = [&hr](double t) { return hr.eval(t); };
        return solve_heat(bc, nullptr, 0.0, 1.0, cfg.T, cfg.nx, cfg.nt);
    }
    const ControlSignal& hl = *synth.h_left;
    bc.left.cond = {BoundaryKind::robin, cfg.alpha0, cfg.beta0};
    bc.right.cond = {BoundaryKind::robin, cfg.alpha1, cfg.beta1};
    bc.left.data = [&hl](double t) { return hl.eval(t); };
    bc.right.data = [&hr](double t) { return hr.eval(t); };
    return solve_heat(bc, nullptr, -1.0, 1.0, cfg.T, cfg.nx, cfg.nt);
}

ErrorNorms run_terminal_check(const ExperimentConfig& cfg, const HeatField& field) {
    AnalyticTarget tgt = make_target(cfg);
    std::vector<double> samples(field.nx + 1);
    for (int i = 0; i <= field.nx; ++i) samples[i] = tgt.sample_real(field.x_of(i));
    return terminal_error(field, samples);
}

int cmd_synth(const ExperimentConfig& cfg) {
    return guarded(cfg, [&] {
        auto synth = run_synth(cfg);
        fs::create_directories(cfg.out_dir);
        write_control_csv(cfg.out_dir + "/control_right.csv", synth.h_right, 2000);
        if (synth.h_left)
            write_control_csv(cfg.out_dir + "/control_left.csv", *synth.h_left, 2000);
        const FlatOutput& fo = synth.even ? *synth.even : *synth.odd;
        json rep;
        rep["config_echo"] = {{"boundary", cfg.boundary}, {"method", cfg.method},
                              {"T", cfg.T},           {"target", cfg.target_family},
                              {"tol", cfg.tol},       {"precision_bits", cfg.precision_bits}};
        rep["certificate"] = certificate_json(fo, synth.N, synth.loss);
        write_json(cfg.out_dir + "/synth_report.json", rep);
    });
}

int cmd_simulate(const ExperimentConfig& cfg) {
    return guarded(cfg, [&] {
        auto synth = run_synth(cfg);
        auto field = run_simulate(cfg, synth);
        auto err = run_terminal_check(cfg, field);
        fs::create_directories(cfg.out_dir);
        if (cfg.write_field)
            write_field_csv(cfg.out_dir + "/field.csv", field, std::max(1, field.nt / 200),
                            std::max(1, field.nx / 200));
        if (cfg.write_binary) write_field_binary(cfg.out_dir + "/field.bin", field);
        json rep;
        rep["terminal_error"] = norms_json(err);
        rep["certificate"] = certificate_json(synth.even ? *synth.even : *synth.odd, synth.N,
                                              synth.loss);
        write_json(cfg.out_dir + "/simulate_report.json", rep);
    });
}

int cmd_verify(const ExperimentConfig& cfg) {
    ErrorNorms err;
    int code = guarded(cfg, [&] {
        auto synth = run_synth(cfg);
        auto field = run_simulate(cfg, synth);
        err = run_terminal_check(cfg, field);
        fs::create_directories(cfg.out_dir);
        json rep;
        rep["terminal_error"] = norms_json(err);
        rep["tolerance"] = cfg.verify_tol;
        rep["pass"] = err.rel_linf <= cfg.verify_tol;
        rep["certificate"] = certificate_json(synth.even ? *synth.even : *synth.odd, synth.N,
                                              synth.loss);
        write_json(cfg.out_dir + "/verify_report.json", rep);
        if (!(err.rel_linf <= cfg.verify_tol))
            fail("verify-tolerance",
                 "terminal relative Linf " + std::to_string(err.rel_linf) + " exceeds " +
                     std::to_string(cfg.verify_tol));
    });
    return code;
}

int cmd_study(const ExperimentConfig& cfg) {
    return guarded(cfg, [&] {
        LossStudyConfig sc;
        sc.out_dir = cfg.out_dir;
        auto res = run_loss_study(sc);
        // R0-loss table on the configured synthesis output
        auto synth = run_synth(cfg);
        const FlatOutput& fo = synth.even ? *synth.even : *synth.odd;
        std::ofstream out(cfg.out_dir + "/loss_ratios.csv");
        out << "i,log_ratio_at_min,log_ratio_at_Rprime\n";
        for (std::size_t i = 0; i < synth.loss.log_ratio_at_min.size(); ++i)
            out << i << "," << format_double(synth.loss.log_ratio_at_min[i]) << ","
                << format_double(synth.loss.log_ratio_at_Rp[i]) << "\n";
        json rep;
        rep["loss"] = {{"rho_min", synth.loss.rho_min},
                       {"R0", synth.loss.R0},
                       {"bounded_at_cap", synth.loss.bounded_at_cap}};
        rep["bounded_flag"] = res.bounded_flagged;
        rep["growth_flag"] = res.growth_flagged;
        rep["certificate"] = certificate_json(fo, synth.N, synth.loss);
        write_json(cfg.out_dir + "/study_report.json", rep);
    });
}

int cmd_classify(const ExperimentConfig& cfg) {
    return guarded(cfg, [&] {
        AnalyticTarget tgt = make_target(cfg);
        ControlSetting setting = cfg.boundary == "neumann"
                                     ? ControlSetting::one_sided_neumann
                                     : (cfg.boundary == "dirichlet"
                                            ? ControlSetting::one_sided_dirichlet
                                            : ControlSetting::two_sided);
        auto v = classify_reachability(tgt, setting);
        fs::create_directories(cfg.out_dir);
        json rep;
        rep["verdict"] = v.verdict == Reachability::Reachable
                             ? "Reachable"
                             : (v.verdict == Reachability::Unreachable ? "Unreachable"
                                                                       : "Undetermined");
        rep["R_found"] = v.R_found;
        rep["R0_threshold"] = v.R0;
        rep["rect_margin"] = v.rect_margin;
        rep["reason"] = v.reason;
        write_json(cfg.out_dir + "/classify_report.json", rep);
    });
}

}  // namespace flatsteer
