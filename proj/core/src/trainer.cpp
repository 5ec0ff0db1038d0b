#include "fwos/trainer.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fwos {

namespace {

// Sub-stream tags; FNWoS and BFNWoS share the points/targets layout so that
// with matching (N, K) their supervision sets coincide stream-for-stream.
constexpr std::uint64_t kTagPoints = 1;
constexpr std::uint64_t kTagTargets = 2;
constexpr std::uint64_t kTagNet = 3;
constexpr std::uint64_t kTagBoundary = 4;
constexpr std::uint64_t kTagBatch = 5;
constexpr std::uint64_t kTagRefresh = 6;
constexpr std::uint64_t kTagPool = 7;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Indices 0..total-1 with the first `count` positions Fisher-Yates shuffled;
// prefix = selection without replacement, the tail remains available.
std::vector<int> shuffled_prefix(int total, int count, Rng& rng) {
    std::vector<int> idx(total);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < count && i < total - 1; ++i) {
        const int j = i + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(total - i));
        std::swap(idx[i], idx[j]);
    }
    return idx;
}

struct SupervisionStats {
    long traj = 0;
    long non_exited = 0;
    long long walk_steps = 0;
};

// Shared target generation: FNWoS passes frozen == nullptr (plain estimator,
// capped trajectories fall back to g); buffer initialization passes the
// frozen network for truncated-path completion.
std::vector<BufferEntry> make_supervision(const Problem& problem, const TrainPlan& plan, int count, int n_traj,
                                          int cap, const SurrogateFn* frozen, StreamKey root,
                                          SupervisionStats* stats) {
    Rng rng_points(root.child(kTagPoints));
    const std::vector<Vec> points = problem.domain.sample_interior(count, rng_points);
    const StreamKey targets_key = root.child(kTagTargets);

    std::vector<BufferEntry> entries(count);
    std::vector<long long> steps(count, 0);
    std::vector<int> capped(count, 0);
#pragma omp parallel for schedule(dynamic, 1)
    for (int j = 0; j < count; ++j) {
        const StreamKey key = targets_key.child(static_cast<std::uint64_t>(j));
        EstimateStats est;
        if (frozen != nullptr) {
            est = fwos_truncated_stats(problem, points[j], n_traj, cap, plan.eps, *frozen, key);
        } else {
            est = fwos_estimate_stats(problem, points[j], n_traj, plan.eps, cap, key);
        }
        entries[j] = BufferEntry{points[j], est.value, n_traj};
        steps[j] = est.total_steps;
        capped[j] = est.non_exited;
    }
    if (stats != nullptr) {
        for (int j = 0; j < count; ++j) {
            stats->traj += n_traj;
            stats->non_exited += capped[j];
            stats->walk_steps += steps[j];
        }
    }
    return entries;
}

Matrix points_to_matrix(const std::vector<Vec>& pts) {
    Matrix X(pts.size(), pts.empty() ? 0 : pts.front().size());
    for (size_t i = 0; i < pts.size(); ++i) X.row(i) = pts[i].transpose();
    return X;
}

struct BoundaryBatch {
    Matrix X;
    Vec g;
};

BoundaryBatch draw_boundary(const Problem& problem, int m_b, Rng& rng) {
    BoundaryBatch out;
    if (m_b == 0) {
        out.X = Matrix(0, problem.dimension());
        out.g = Vec(0);
        return out;
    }
    const std::vector<Vec> pts = problem.domain.sample_boundary(m_b, rng);
    out.X = points_to_matrix(pts);
    out.g = Vec(m_b);
    for (int i = 0; i < m_b; ++i) out.g[i] = problem.g(pts[i]);
    return out;
}

TrainResult train_bfnwos_impl(const Problem& problem_in, const TrainPlan& plan, const CheckpointHook& hook,
                              bool allow_replacement) {
    plan.validate();
    Problem problem = problem_in;
    const StreamKey root(plan.seed);
    const int m_b = plan.boundary_batch();
    const int m_i = plan.interior_batch();
    if (m_b > 0 && problem.domain.kind() != Domain::Kind::Ball && problem.domain.kind() != Domain::Kind::Box) {
        Rng pool_rng(root.child(kTagPool));
        problem.domain.prepare_boundary_pool(plan.boundary_pool_factor * m_b, pool_rng);
    }

    TrainResult res;
    res.net = Surrogate(problem.dimension(), plan.width, plan.depth, root.child(kTagNet).value());
    Surrogate frozen = res.net;  // hard copy, updated at each refresh
    SurrogateFn frozen_fn = frozen.scalar_fn();

    auto t0 = Clock::now();
    SupervisionStats init_stats;
    std::vector<BufferEntry> buffer = make_supervision(problem, plan, plan.buffer_size(), plan.n_traj_init,
                                                       plan.k_cap_init, &frozen_fn, root, &init_stats);
    res.sampling_seconds += seconds_since(t0);
    res.sampling_traj += init_stats.traj;
    res.sampling_non_exited += init_stats.non_exited;
    res.sampling_walk_steps += init_stats.walk_steps;
    res.initial_supervision = buffer;
    {
        RefreshStats rs;
        rs.iter = -1;
        rs.refined = 0;
        rs.replaced = 0;
        rs.traj = init_stats.traj;
        rs.non_exited = init_stats.non_exited;
        rs.walk_steps = init_stats.walk_steps;
        rs.mean_traj_count = static_cast<double>(plan.n_traj_init);
        res.refreshes.push_back(rs);
    }

    OptimizerState opt = OptimizerState::create(res.net, plan.base_lr, plan.iterations);
    long refresh_count = 0;
    for (long k = 0; k <= plan.iterations; ++k) {
        if (k % plan.refresh_interval == 0 && k > plan.warmup) {
            frozen = res.net;
            frozen_fn = frozen.scalar_fn();
            RefreshStats rs;
            t0 = Clock::now();
            refresh_buffer(buffer, problem, plan, frozen_fn,
                           root.child(kTagRefresh).child(static_cast<std::uint64_t>(refresh_count)), &rs,
                           allow_replacement);
            res.sampling_seconds += seconds_since(t0);
            rs.iter = k;
            res.sampling_traj += rs.traj;
            res.sampling_non_exited += rs.non_exited;
            res.sampling_walk_steps += rs.walk_steps;
            res.refreshes.push_back(rs);
            ++refresh_count;
        }

        t0 = Clock::now();
        Rng batch_rng(root.child(kTagBatch).child(static_cast<std::uint64_t>(k)));
        const std::vector<int> idx = shuffled_prefix(plan.buffer_size(), m_i, batch_rng);
        Matrix X_int(m_i, problem.dimension());
        Vec Y_int(m_i);
        for (int j = 0; j < m_i; ++j) {
            X_int.row(j) = buffer[idx[j]].point.transpose();
            Y_int[j] = buffer[idx[j]].target;
        }
        Rng bdy_rng(root.child(kTagBoundary).child(static_cast<std::uint64_t>(k)));
        const BoundaryBatch bdy = draw_boundary(problem, m_b, bdy_rng);

        const LossGrad lg = loss_and_grad(res.net, X_int, Y_int, bdy.X, bdy.g, plan.beta);
        res.log.push_back({k, opt.current_lr(), lg.interior, lg.boundary, lg.loss});
        adam_step(res.net, opt, lg.grads);
        res.training_seconds += seconds_since(t0);
        if (hook && (k + 1) % 1000 == 0) hook(k, res.net, opt);
    }
    res.supervision = std::move(buffer);
    return res;
}

}  // namespace

int TrainPlan::boundary_batch() const { return static_cast<int>(std::lround(2.0 * m * p_boundary)); }
int TrainPlan::interior_batch() const { return 2 * m - boundary_batch(); }
int TrainPlan::refine_count() const { return static_cast<int>(std::lround(m * p_refine)); }
int TrainPlan::replace_count() const { return m - refine_count(); }
int TrainPlan::buffer_size() const { return 10 * m; }

void TrainPlan::validate() const {
    if (m < 1) throw std::invalid_argument("plan: m must be positive");
    if (iterations < 0) throw std::invalid_argument("plan: iterations must be non-negative");
    if (warmup < 0) throw std::invalid_argument("plan: warmup must be non-negative");
    if (refresh_interval < 1) throw std::invalid_argument("plan: refresh interval must be positive");
    if (!(p_boundary >= 0.0) || !(p_boundary < 1.0)) throw std::invalid_argument("plan: P_B must lie in [0,1)");
    if (!(p_refine >= 0.0) || !(p_refine <= 1.0)) throw std::invalid_argument("plan: P_buf must lie in [0,1]");
    if (n_traj < 1 || n_traj_init < 1) throw std::invalid_argument("plan: trajectory counts must be positive");
    if (k_cap < 1 || k_cap_init < 1) throw std::invalid_argument("plan: step caps must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("plan: eps must be positive");
    if (!(beta >= 0.0)) throw std::invalid_argument("plan: beta must be non-negative");
    if (beta > 0.0 && boundary_batch() < 1)
        throw std::invalid_argument("plan: beta > 0 needs a nonempty boundary batch (raise m or P_B)");
    if (interior_batch() < 1) throw std::invalid_argument("plan: interior batch is empty");
    if (width < 1 || depth < 0) throw std::invalid_argument("plan: bad network architecture");
    if (!(base_lr > 0.0)) throw std::invalid_argument("plan: base learning rate must be positive");
    if (refine_count() + replace_count() > buffer_size())
        throw std::invalid_argument("plan: refine + replace exceeds buffer size");
}

std::vector<BufferEntry> init_buffer(const Problem& problem, const TrainPlan& plan, const SurrogateFn& frozen,
                                     StreamKey key, RefreshStats* stats) {
    plan.validate();
    SupervisionStats ss;
    auto buffer =
        make_supervision(problem, plan, plan.buffer_size(), plan.n_traj_init, plan.k_cap_init, &frozen, key, &ss);
    if (stats != nullptr) {
        stats->iter = -1;
        stats->traj = ss.traj;
        stats->non_exited = ss.non_exited;
        stats->walk_steps = ss.walk_steps;
        stats->mean_traj_count = static_cast<double>(plan.n_traj_init);
    }
    return buffer;
}

void refresh_buffer(std::vector<BufferEntry>& buffer, const Problem& problem, const TrainPlan& plan,
                    const SurrogateFn& frozen, StreamKey key, RefreshStats* stats, bool allow_replacement) {
    const int total = static_cast<int>(buffer.size());
    const int b1 = plan.refine_count();
    const int b2 = allow_replacement ? plan.replace_count() : 0;
    if (b1 + b2 > total) throw std::invalid_argument("refresh_buffer: refine + replace exceeds buffer size");

    // Refinement and replacement index sets are drawn disjointly: one shuffle,
    // first B1 slots refined, next B2 slots replaced.
    Rng select_rng(key.child(0));
    const std::vector<int> idx = shuffled_prefix(total, b1 + b2, select_rng);

    const StreamKey refine_key = key.child(1);
    std::vector<long long> steps(b1 + b2, 0);
    std::vector<int> capped(b1 + b2, 0);
#pragma omp parallel for schedule(dynamic, 1)
    for (int s = 0; s < b1; ++s) {
        const int slot = idx[s];
        BufferEntry& e = buffer[slot];
        const EstimateStats est = fwos_truncated_stats(problem, e.point, plan.n_traj, plan.k_cap, plan.eps, frozen,
                                                       refine_key.child(static_cast<std::uint64_t>(slot)));
        e.target = (static_cast<double>(e.traj_count) * e.target + static_cast<double>(plan.n_traj) * est.value) /
                   static_cast<double>(e.traj_count + plan.n_traj);
        e.traj_count += plan.n_traj;
        steps[s] = est.total_steps;
        capped[s] = est.non_exited;
    }

    if (b2 > 0) {
        Rng point_rng(key.child(2));
        const std::vector<Vec> fresh = problem.domain.sample_interior(b2, point_rng);
        const StreamKey replace_key = key.child(3);
#pragma omp parallel for schedule(dynamic, 1)
        for (int s = 0; s < b2; ++s) {
            const int slot = idx[b1 + s];
            const EstimateStats est = fwos_truncated_stats(problem, fresh[s], plan.n_traj, plan.k_cap, plan.eps,
                                                           frozen, replace_key.child(static_cast<std::uint64_t>(slot)));
            buffer[slot] = BufferEntry{fresh[s], est.value, plan.n_traj};
            steps[b1 + s] = est.total_steps;
            capped[b1 + s] = est.non_exited;
        }
    }

    if (stats != nullptr) {
        stats->refined = b1;
        stats->replaced = b2;
        for (int s = 0; s < b1 + b2; ++s) {
            stats->traj += plan.n_traj;
            stats->non_exited += capped[s];
            stats->walk_steps += steps[s];
        }
        double fre_sum = 0.0;
        for (const auto& e : buffer) fre_sum += static_cast<double>(e.traj_count);
        stats->mean_traj_count = fre_sum / static_cast<double>(total);
    }
}

TrainResult train_fnwos(const Problem& problem_in, const TrainPlan& plan, const CheckpointHook& hook) {
    plan.validate();
    Problem problem = problem_in;
    const StreamKey root(plan.seed);
    const int m_b = plan.boundary_batch();
    const int m_i = plan.interior_batch();
    if (m_b > 0 && problem.domain.kind() != Domain::Kind::Ball && problem.domain.kind() != Domain::Kind::Box) {
        Rng pool_rng(root.child(kTagPool));
        problem.domain.prepare_boundary_pool(plan.boundary_pool_factor * m_b, pool_rng);
    }

    TrainResult res;
    auto t0 = Clock::now();
    SupervisionStats target_stats;
    res.supervision =
        make_supervision(problem, plan, m_i, plan.n_traj, plan.k_cap, nullptr, root, &target_stats);
    res.sampling_seconds += seconds_since(t0);
    res.sampling_traj = target_stats.traj;
    res.sampling_non_exited = target_stats.non_exited;
    res.sampling_walk_steps = target_stats.walk_steps;
    res.initial_supervision = res.supervision;

    Matrix X_int(m_i, problem.dimension());
    Vec Y_int(m_i);
    for (int j = 0; j < m_i; ++j) {
        X_int.row(j) = res.supervision[j].point.transpose();
        Y_int[j] = res.supervision[j].target;
    }

    res.net = Surrogate(problem.dimension(), plan.width, plan.depth, root.child(kTagNet).value());
    OptimizerState opt = OptimizerState::create(res.net, plan.base_lr, plan.iterations);
    for (long k = 0; k <= plan.iterations; ++k) {
        t0 = Clock::now();
        Rng bdy_rng(root.child(kTagBoundary).child(static_cast<std::uint64_t>(k)));
        const BoundaryBatch bdy = draw_boundary(problem, m_b, bdy_rng);
        const LossGrad lg = loss_and_grad(res.net, X_int, Y_int, bdy.X, bdy.g, plan.beta);
        res.log.push_back({k, opt.current_lr(), lg.interior, lg.boundary, lg.loss});
        adam_step(res.net, opt, lg.grads);
        res.training_seconds += seconds_since(t0);
        if (hook && (k + 1) % 1000 == 0) hook(k, res.net, opt);
    }
    return res;
}

TrainResult train_bfnwos(const Problem& problem, const TrainPlan& plan, const CheckpointHook& hook) {
    return train_bfnwos_impl(problem, plan, hook, true);
}

TrainResult train_bfnwos_no_replacement(const Problem& problem, const TrainPlan& plan, const CheckpointHook& hook) {
    return train_bfnwos_impl(problem, plan, hook, false);
}

}  // namespace fwos
