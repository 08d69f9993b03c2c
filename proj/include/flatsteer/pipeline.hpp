#pragma once

#include <memory>
#include <string>

#include "flatsteer/config.hpp"
#include "flatsteer/control.hpp"
#include "flatsteer/flat_output.hpp"
#include "flatsteer/heat.hpp"

namespace flatsteer {

// Exit codes: 0 success, 2 config/schema violation, 3 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

struct SynthResult {
    std::shared_ptr<FlatOutput> even, odd;
    ControlSignal h_right;               // neumann/dirichlet control (or robin right)
    std::optional<ControlSignal> h_left; // robin left
    int N = 0;
    LossReport loss;
};

// Library-level pipeline steps (the CLI wraps these and maps Error slugs to
// exit codes; config-invalid -> 2, everything else -> 3).
SynthResult run_synth(const ExperimentConfig& cfg);
HeatField run_simulate(const ExperimentConfig& cfg, const SynthResult& synth);
ErrorNorms run_terminal_check(const ExperimentConfig& cfg, const HeatField& field);

// Command entry points: perform the step, write artifacts + report JSON under
// cfg.out_dir, return the exit code (catching numerical errors into
// error.json diagnostics).
int cmd_synth(const ExperimentConfig& cfg);
int cmd_simulate(const ExperimentConfig& cfg);
int cmd_verify(const ExperimentConfig& cfg);
int cmd_study(const ExperimentConfig& cfg);
int cmd_classify(const ExperimentConfig& cfg);

}  // namespace flatsteer
