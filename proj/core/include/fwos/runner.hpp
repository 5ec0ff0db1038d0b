#pragma once

#include <string>
#include <vector>

#include "fwos/config.hpp"

namespace fwos {

// Each command writes its artifacts (CSV curves/points, JSON summary with the
// fully resolved configuration embedded) under cfg.out_dir and returns the
// headline numbers for programmatic use.

struct SolveSummary {
    int n_points = 0;
    double relative_l2 = 0.0;
    double mean_steps = 0.0;
    double non_exited_rate = 0.0;
    double wall_seconds = 0.0;
    std::string points_csv;
    std::string summary_json;
};

struct TrainSummary {
    double relative_l2 = 0.0;
    long iterations = 0;
    double final_loss = 0.0;
    double non_exited_rate = 0.0;
    double sampling_seconds = 0.0;
    double training_seconds = 0.0;
    double wall_seconds = 0.0;
    std::string checkpoint_file;
    std::string summary_json;
};

struct ConvergencePoint {
    long n_traj = 0;
    double relative_l2 = 0.0;
};

struct ConvergenceSummary {
    std::vector<ConvergencePoint> curve;
    double slope = 0.0;
    bool slope_fitted = false;  // false when errors are degenerate (deterministic problem)
    double wall_seconds = 0.0;
    std::string summary_json;
};

struct AblationSummary {
    double error_with_replacement = 0.0;
    double error_without_replacement = 0.0;
    double wall_seconds = 0.0;
    std::string summary_json;
};

SolveSummary run_solve(const RunConfig& cfg);
TrainSummary run_train(const RunConfig& cfg);
ConvergenceSummary run_convergence(const RunConfig& cfg);
AblationSummary run_ablation(const RunConfig& cfg);
TrainSummary run_eval_checkpoint(const RunConfig& cfg);

// Applies cfg.workers to the process-wide thread pool (0 = hardware default).
void apply_workers(int workers);

}  // namespace fwos
