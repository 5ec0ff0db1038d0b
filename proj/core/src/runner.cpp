#include "fwos/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "fwos/walker.hpp"

namespace fwos {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

// Runner-level stream tags, disjoint from the trainer's.
constexpr std::uint64_t kTagEvalPoints = 100;
constexpr std::uint64_t kTagSolve = 101;
constexpr std::uint64_t kTagConvergence = 103;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json node_to_json(const ConfigNode& n) {
    if (const auto* b = std::get_if<bool>(&n.value)) return *b;
    if (const auto* i = std::get_if<std::int64_t>(&n.value)) return *i;
    if (const auto* d = std::get_if<double>(&n.value)) return *d;
    if (const auto* s = std::get_if<std::string>(&n.value)) return *s;
    if (const auto* a = std::get_if<ConfigNode::Array>(&n.value)) {
        json arr = json::array();
        for (const auto& e : *a) arr.push_back(node_to_json(e));
        return arr;
    }
    if (const auto* t = std::get_if<ConfigNode::Table>(&n.value)) {
        json obj = json::object();
        for (const auto& [k, v] : *t) obj[k] = node_to_json(v);
        return obj;
    }
    return nullptr;
}

json base_summary(const RunConfig& cfg, const std::string& command, double wall_seconds) {
    const ConfigNode resolved = cfg.resolved_node();
    json out;
    out["command"] = command;
    out["seed"] = cfg.seed;
    out["workers"] = cfg.workers;
#ifdef _OPENMP
    out["workers_effective"] = omp_get_max_threads();
#else
    out["workers_effective"] = 1;
#endif
    out["wall_seconds"] = wall_seconds;
    out["config"] = node_to_json(resolved);
    out["config_toml"] = serialize_toml(resolved);
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream ofs(path);
    if (!ofs) throw std::runtime_error("cannot open '" + path + "' for writing");
    ofs << text;
    if (!ofs) throw std::runtime_error("write failed for '" + path + "'");
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    return (fs::path(cfg.out_dir) / name).string();
}

std::vector<Vec> load_points_csv(const std::string& path, int dim) {
    std::ifstream ifs(path);
    if (!ifs) throw std::runtime_error("cannot open points file '" + path + "'");
    std::vector<Vec> pts;
    std::string line;
    int line_no = 0;
    while (std::getline(ifs, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) {
                numeric = false;
                break;
            }
            vals.push_back(v);
        }
        if (!numeric) {
            if (line_no == 1) continue;  // header row
            throw std::runtime_error("points file '" + path + "': non-numeric row at line " +
                                     std::to_string(line_no));
        }
        if (static_cast<int>(vals.size()) != dim)
            throw std::runtime_error("points file '" + path + "': expected " + std::to_string(dim) +
                                     " columns at line " + std::to_string(line_no));
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = vals[i];
        pts.push_back(std::move(v));
    }
    if (pts.empty()) throw std::runtime_error("points file '" + path + "' contains no points");
    return pts;
}

std::vector<Vec> eval_points(const RunConfig& cfg, const Problem& problem) {
    if (!cfg.points_file.empty()) return load_points_csv(cfg.points_file, problem.dimension());
    Rng rng(StreamKey(cfg.seed).child(kTagEvalPoints));
    return problem.domain.sample_interior(cfg.eval_points, rng);
}

double surrogate_relative_l2(const Surrogate& net, const Problem& problem, const std::vector<Vec>& pts) {
    Matrix X(pts.size(), problem.dimension());
    for (size_t j = 0; j < pts.size(); ++j) X.row(j) = pts[j].transpose();
    const Vec pred = net.forward(X);
    std::vector<double> sq_err(pts.size()), sq_ref(pts.size());
    for (size_t j = 0; j < pts.size(); ++j) {
        const double u = problem.exact_u(pts[j]);
        sq_err[j] = (pred[j] - u) * (pred[j] - u);
        sq_ref[j] = u * u;
    }
    return std::sqrt(tree_sum(sq_err) / tree_sum(sq_ref));
}

void write_loss_csv(const RunConfig& cfg, const TrainResult& tr) {
    std::ostringstream csv;
    csv << "iter,lr,loss_interior,loss_boundary,loss_total\n";
    for (const auto& row : tr.log)
        csv << row.iter << ',' << fmt(row.lr) << ',' << fmt(row.loss_interior) << ',' << fmt(row.loss_boundary)
            << ',' << fmt(row.loss_total) << '\n';
    write_text(out_path(cfg, "loss.csv"), csv.str());

    std::ostringstream bs;
    bs << "iter,mean_traj_count,refined,replaced,traj,non_exited,walk_steps\n";
    for (const auto& r : tr.refreshes)
        bs << r.iter << ',' << fmt(r.mean_traj_count) << ',' << r.refined << ',' << r.replaced << ',' << r.traj
           << ',' << r.non_exited << ',' << r.walk_steps << '\n';
    write_text(out_path(cfg, "buffer_stats.csv"), bs.str());
}

}  // namespace

void apply_workers(int workers) {
#ifdef _OPENMP
    if (workers > 0) omp_set_num_threads(workers);
#else
    (void)workers;
#endif
}

SolveSummary run_solve(const RunConfig& cfg) {
    if (cfg.method != Method::Fwos) throw std::invalid_argument("solve requires method = \"fwos\"");
    apply_workers(cfg.workers);
    const auto t0 = Clock::now();

    const Problem problem = cfg.build_problem();
    const std::vector<Vec> pts = eval_points(cfg, problem);
    const int n = static_cast<int>(pts.size());
    const StreamKey solve_key = StreamKey(cfg.seed).child(kTagSolve);

    std::vector<double> estimates(n);
    std::vector<long long> steps(n);
    std::vector<int> capped(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (int j = 0; j < n; ++j) {
        const EstimateStats st = fwos_estimate_stats(problem, pts[j], cfg.fwos_n_traj, cfg.fwos_eps, cfg.fwos_k_cap,
                                                     solve_key.child(static_cast<std::uint64_t>(j)));
        estimates[j] = st.value;
        steps[j] = st.total_steps;
        capped[j] = st.non_exited;
    }

    const int dim = problem.dimension();
    std::ostringstream csv;
    for (int i = 0; i < dim; ++i) csv << 'x' << i << ',';
    csv << "estimate,exact,abs_error\n";
    std::vector<double> sq_err(n), sq_ref(n);
    long long total_steps = 0;
    long long total_capped = 0;
    for (int j = 0; j < n; ++j) {
        const double exact = problem.has_exact() ? problem.exact_u(pts[j]) : std::nan("");
        for (int i = 0; i < dim; ++i) csv << fmt(pts[j][i]) << ',';
        csv << fmt(estimates[j]) << ',' << fmt(exact) << ',' << fmt(std::fabs(estimates[j] - exact)) << '\n';
        sq_err[j] = (estimates[j] - exact) * (estimates[j] - exact);
        sq_ref[j] = exact * exact;
        total_steps += steps[j];
        total_capped += capped[j];
    }

    SolveSummary s;
    s.n_points = n;
    s.relative_l2 = problem.has_exact() ? std::sqrt(tree_sum(sq_err) / tree_sum(sq_ref)) : std::nan("");
    s.mean_steps = static_cast<double>(total_steps) / (static_cast<double>(n) * cfg.fwos_n_traj);
    s.non_exited_rate = static_cast<double>(total_capped) / (static_cast<double>(n) * cfg.fwos_n_traj);
    s.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();

    s.points_csv = out_path(cfg, "points.csv");
    write_text(s.points_csv, csv.str());

    json summary = base_summary(cfg, "solve", s.wall_seconds);
    summary["n_points"] = s.n_points;
    summary["relative_l2"] = s.relative_l2;
    summary["mean_steps"] = s.mean_steps;
    summary["non_exited_rate"] = s.non_exited_rate;
    s.summary_json = out_path(cfg, "summary.json");
    write_text(s.summary_json, summary.dump(1) + "\n");
    return s;
}

TrainSummary run_train(const RunConfig& cfg) {
    if (cfg.method == Method::Fwos) throw std::invalid_argument("train requires method = \"fnwos\" or \"bfnwos\"");
    apply_workers(cfg.workers);
    const auto t0 = Clock::now();

    const Problem problem = cfg.build_problem();
    const std::string ckpt = out_path(cfg, "checkpoint.json");
    const CheckpointHook hook = [&](long, const Surrogate& s, const OptimizerState& o) {
        save_checkpoint(s, o, ckpt);  // partial flush for resumability
    };

    TrainResult tr = cfg.method == Method::Fnwos ? train_fnwos(problem, cfg.plan, hook)
                                                 : train_bfnwos(problem, cfg.plan, hook);
    {
        OptimizerState final_state = OptimizerState::create(tr.net, cfg.plan.base_lr, cfg.plan.iterations);
        final_state.step = cfg.plan.iterations + 1;
        save_checkpoint(tr.net, final_state, ckpt);
    }
    write_loss_csv(cfg, tr);

    const std::vector<Vec> pts = eval_points(cfg, problem);
    TrainSummary s;
    s.relative_l2 = problem.has_exact() ? surrogate_relative_l2(tr.net, problem, pts) : std::nan("");
    s.iterations = cfg.plan.iterations;
    s.final_loss = tr.log.empty() ? std::nan("") : tr.log.back().loss_total;
    s.non_exited_rate =
        tr.sampling_traj > 0 ? static_cast<double>(tr.sampling_non_exited) / tr.sampling_traj : 0.0;
    s.sampling_seconds = tr.sampling_seconds;
    s.training_seconds = tr.training_seconds;
    s.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    s.checkpoint_file = ckpt;

    json summary = base_summary(cfg, "train", s.wall_seconds);
    summary["relative_l2"] = s.relative_l2;
    summary["iterations"] = s.iterations;
    summary["final_loss"] = s.final_loss;
    summary["non_exited_rate"] = s.non_exited_rate;
    summary["sampling_seconds"] = s.sampling_seconds;
    summary["training_seconds"] = s.training_seconds;
    summary["sampling_trajectories"] = tr.sampling_traj;
    summary["sampling_walk_steps"] = tr.sampling_walk_steps;
    summary["refresh_count"] = tr.refreshes.empty() ? 0 : static_cast<int>(tr.refreshes.size()) - 1;
    summary["eval_points"] = static_cast<int>(pts.size());
    s.summary_json = out_path(cfg, "summary.json");
    write_text(s.summary_json, summary.dump(1) + "\n");
    return s;
}

ConvergenceSummary run_convergence(const RunConfig& cfg) {
    if (cfg.method != Method::Fwos) throw std::invalid_argument("convergence requires method = \"fwos\"");
    if (cfg.n_list.size() < 3) throw std::invalid_argument("convergence: n_list needs at least 3 entries");
    for (size_t i = 1; i < cfg.n_list.size(); ++i)
        if (cfg.n_list[i] <= cfg.n_list[i - 1]) throw std::invalid_argument("convergence: n_list must be ascending");
    apply_workers(cfg.workers);
    const auto t0 = Clock::now();

    const Problem problem = cfg.build_problem();
    if (!problem.has_exact()) throw std::invalid_argument("convergence: benchmark lacks an exact solution");
    const std::vector<Vec> pts = eval_points(cfg, problem);
    const int n_pts = static_cast<int>(pts.size());
    const StreamKey conv_key = StreamKey(cfg.seed).child(kTagConvergence);

    ConvergenceSummary s;
    for (size_t ni = 0; ni < cfg.n_list.size(); ++ni) {
        const int n_traj = static_cast<int>(cfg.n_list[ni]);
        const StreamKey level_key = conv_key.child(ni);
        std::vector<double> sq_err(n_pts), sq_ref(n_pts);
#pragma omp parallel for schedule(dynamic, 1)
        for (int j = 0; j < n_pts; ++j) {
            const double est = fwos_estimate(problem, pts[j], n_traj, cfg.fwos_eps, cfg.fwos_k_cap,
                                             level_key.child(static_cast<std::uint64_t>(j)));
            const double u = problem.exact_u(pts[j]);
            sq_err[j] = (est - u) * (est - u);
            sq_ref[j] = u * u;
        }
        s.curve.push_back({cfg.n_list[ni], std::sqrt(tree_sum(sq_err) / tree_sum(sq_ref))});
    }

    // Log-log least-squares slope; skipped when errors are degenerate.
    bool degenerate = false;
    for (const auto& p : s.curve)
        if (!(p.relative_l2 > 1e-14)) degenerate = true;
    if (!degenerate) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(s.curve.size());
        for (const auto& p : s.curve) {
            const double x = std::log10(static_cast<double>(p.n_traj));
            const double y = std::log10(p.relative_l2);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        s.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        s.slope_fitted = true;
    }
    s.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();

    std::ostringstream csv;
    csv << "n_traj,relative_l2\n";
    for (const auto& p : s.curve) csv << p.n_traj << ',' << fmt(p.relative_l2) << '\n';
    write_text(out_path(cfg, "convergence.csv"), csv.str());

    json summary = base_summary(cfg, "convergence", s.wall_seconds);
    summary["slope"] = s.slope;
    summary["slope_fitted"] = s.slope_fitted;
    json curve = json::array();
    for (const auto& p : s.curve) curve.push_back({{"n_traj", p.n_traj}, {"relative_l2", p.relative_l2}});
    summary["curve"] = curve;
    s.summary_json = out_path(cfg, "summary.json");
    write_text(s.summary_json, summary.dump(1) + "\n");
    return s;
}

AblationSummary run_ablation(const RunConfig& cfg) {
    if (cfg.method != Method::Bfnwos) throw std::invalid_argument("ablation requires method = \"bfnwos\"");
    apply_workers(cfg.workers);
    const auto t0 = Clock::now();

    const Problem problem = cfg.build_problem();
    const std::vector<Vec> pts = eval_points(cfg, problem);

    const TrainResult with = train_bfnwos(problem, cfg.plan);
    const TrainResult without = train_bfnwos_no_replacement(problem, cfg.plan);

    AblationSummary s;
    s.error_with_replacement = surrogate_relative_l2(with.net, problem, pts);
    s.error_without_replacement = surrogate_relative_l2(without.net, problem, pts);
    s.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();

    std::ostringstream csv;
    csv << "arm,relative_l2\n";
    csv << "with_replacement," << fmt(s.error_with_replacement) << '\n';
    csv << "without_replacement," << fmt(s.error_without_replacement) << '\n';
    write_text(out_path(cfg, "ablation.csv"), csv.str());

    json summary = base_summary(cfg, "ablation", s.wall_seconds);
    summary["error_with_replacement"] = s.error_with_replacement;
    summary["error_without_replacement"] = s.error_without_replacement;
    summary["ratio"] = s.error_with_replacement / s.error_without_replacement;
    s.summary_json = out_path(cfg, "summary.json");
    write_text(s.summary_json, summary.dump(1) + "\n");
    return s;
}

TrainSummary run_eval_checkpoint(const RunConfig& cfg) {
    if (cfg.checkpoint_path.empty())
        throw std::invalid_argument("eval-checkpoint: set [eval] checkpoint = \"<path>\"");
    apply_workers(cfg.workers);
    const auto t0 = Clock::now();

    const Problem problem = cfg.build_problem();
    auto [net, opt] = load_checkpoint(cfg.checkpoint_path);
    if (net.input_dim() != problem.dimension())
        throw std::runtime_error("eval-checkpoint: checkpoint input dimension " + std::to_string(net.input_dim()) +
                                 " does not match problem dimension " + std::to_string(problem.dimension()));
    const std::vector<Vec> pts = eval_points(cfg, problem);

    TrainSummary s;
    s.relative_l2 = surrogate_relative_l2(net, problem, pts);
    s.iterations = opt.step;
    s.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    s.checkpoint_file = cfg.checkpoint_path;

    json summary = base_summary(cfg, "eval-checkpoint", s.wall_seconds);
    summary["relative_l2"] = s.relative_l2;
    summary["checkpoint"] = cfg.checkpoint_path;
    summary["checkpoint_step"] = opt.step;
    summary["eval_points"] = static_cast<int>(pts.size());
    s.summary_json = out_path(cfg, "summary.json");
    write_text(s.summary_json, summary.dump(1) + "\n");
    return s;
}

}  // namespace fwos
