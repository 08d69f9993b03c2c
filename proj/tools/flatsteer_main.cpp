// Batch front door: synth | simulate | verify | study | classify, driven by a
// JSON experiment config. Exit codes: 0 success, 2 config violation,
// 3 numerical failure (diagnostic in <out>/error.json).

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "flatsteer/errors.hpp"
#include "flatsteer/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"flatness-based boundary-control synthesis and verification"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    unsigned precision = 0;
    double tol = 0;
    int jobs = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--precision", precision, "mantissa bits for extended precision");
        sub->add_option("--tol", tol, "override verify tolerance");
        sub->add_option("--jobs", jobs, "parallel jobs for independent sweep entries");
    };
    auto* synth = app.add_subcommand("synth", "construct boundary controls");
    auto* simulate = app.add_subcommand("simulate", "replay controls through the solver");
    auto* verify = app.add_subcommand("verify", "full pipeline with tolerance gate");
    auto* study = app.add_subcommand("study", "loss/growth diagnostic tables");
    auto* classify = app.add_subcommand("classify", "reachability verdict for the target");
    for (auto* sub : {synth, simulate, verify, study, classify}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    flatsteer::ExperimentConfig cfg;
    try {
        cfg = flatsteer::load_config(config_path);
    } catch (const flatsteer::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return flatsteer::kExitConfig;
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (tol > 0) cfg.verify_tol = tol;
    if (precision > 0) cfg.precision_bits = precision;
    if (const char* env = std::getenv("FLATSTEER_PRECISION")) {
        unsigned bits = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
        if (bits >= 64) cfg.precision_bits = bits;
    }

    int code = 0;
    if (*synth) code = flatsteer::cmd_synth(cfg);
    if (*simulate) code = flatsteer::cmd_simulate(cfg);
    if (*verify) code = flatsteer::cmd_verify(cfg);
    if (*study) code = flatsteer::cmd_study(cfg);
    if (*classify) code = flatsteer::cmd_classify(cfg);
    if (code == flatsteer::kExitNumeric)
        std::cerr << "numerical failure; see " << cfg.out_dir << "/error.json\n";
    return code;
}
