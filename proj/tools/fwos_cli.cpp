// Command-line driver: solve / train / convergence / ablation /
// eval-checkpoint, configured by a TOML run file with seed/worker overrides
// from flags or the FWOS_SEED / FWOS_WORKERS environment variables.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fwos/runner.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> out_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Run-configuration file (TOML)")->required();
    cmd->add_option("--seed", args.seed, "Override the random seed");
    cmd->add_option("--workers", args.workers, "Worker threads (0 = hardware)");
    cmd->add_option("--out", args.out_dir, "Output directory override");
}

fwos::RunConfig resolve(const CommonArgs& args) {
    fwos::RunConfig cfg = fwos::RunConfig::load(args.config_path);
    if (args.seed.has_value()) {
        cfg.seed = *args.seed;
        cfg.plan.seed = *args.seed;
    }
    if (args.workers.has_value()) cfg.workers = *args.workers;
    if (args.out_dir.has_value()) cfg.out_dir = *args.out_dir;
    return cfg;
}

void emit_error(const std::string& kind, const std::string& message) {
    nlohmann::json err;
    err["error"] = kind;
    err["message"] = message;
    std::fprintf(stderr, "%s\n", err.dump().c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fwos: Monte Carlo and neural-surrogate solvers for the fractional Poisson equation"};
    app.require_subcommand(1);

    CommonArgs solve_args, train_args, conv_args, abl_args, eval_args;
    CLI::App* solve_cmd = app.add_subcommand("solve", "Evaluate the FWoS estimator on test points");
    add_common(solve_cmd, solve_args);
    CLI::App* train_cmd = app.add_subcommand("train", "Train an FNWoS or BFNWoS surrogate");
    add_common(train_cmd, train_args);
    CLI::App* conv_cmd = app.add_subcommand("convergence", "Error-vs-trajectories curve with slope fit");
    add_common(conv_cmd, conv_args);
    CLI::App* abl_cmd = app.add_subcommand("ablation", "BFNWoS with vs. without buffer replacement");
    add_common(abl_cmd, abl_args);
    CLI::App* eval_cmd = app.add_subcommand("eval-checkpoint", "Evaluate a saved surrogate checkpoint");
    add_common(eval_cmd, eval_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        emit_error("usage", e.what());
        return e.get_exit_code();
    }

    try {
        if (solve_cmd->parsed()) {
            const auto s = fwos::run_solve(resolve(solve_args));
            std::printf("solve: %d points, relative_l2 = %.6g, mean_steps = %.3f, non_exited_rate = %.3g\n",
                        s.n_points, s.relative_l2, s.mean_steps, s.non_exited_rate);
            std::printf("wrote %s\n", s.summary_json.c_str());
        } else if (train_cmd->parsed()) {
            const auto s = fwos::run_train(resolve(train_args));
            std::printf("train: relative_l2 = %.6g after %ld iterations (sampling %.1fs, training %.1fs)\n",
                        s.relative_l2, s.iterations, s.sampling_seconds, s.training_seconds);
            std::printf("wrote %s\n", s.summary_json.c_str());
        } else if (conv_cmd->parsed()) {
            const auto s = fwos::run_convergence(resolve(conv_args));
            for (const auto& p : s.curve)
                std::printf("N = %-8ld relative_l2 = %.6g\n", p.n_traj, p.relative_l2);
            if (s.slope_fitted)
                std::printf("fitted slope: %.4f\n", s.slope);
            else
                std::printf("slope fit skipped (degenerate errors)\n");
            std::printf("wrote %s\n", s.summary_json.c_str());
        } else if (abl_cmd->parsed()) {
            const auto s = fwos::run_ablation(resolve(abl_args));
            std::printf("ablation: with replacement %.6g, without %.6g\n", s.error_with_replacement,
                        s.error_without_replacement);
            std::printf("wrote %s\n", s.summary_json.c_str());
        } else if (eval_cmd->parsed()) {
            const auto s = fwos::run_eval_checkpoint(resolve(eval_args));
            std::printf("eval-checkpoint: relative_l2 = %.6g (step %ld)\n", s.relative_l2, s.iterations);
            std::printf("wrote %s\n", s.summary_json.c_str());
        }
    } catch (const fwos::ConfigError& e) {
        emit_error("config", e.what());
        return 1;
    } catch (const std::exception& e) {
        emit_error("runtime", e.what());
        return 1;
    }
    return 0;
}
