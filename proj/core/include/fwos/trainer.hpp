#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fwos/surrogate.hpp"
#include "fwos/walker.hpp"

namespace fwos {

// Full hyperparameter record for one training run. The paper-facing symbols:
// T = iterations, C = warmup, L = refresh_interval, batch = 2m split by
// P_B, buffer of size 10m refreshed in refine/replace splits of m by P_buf,
// N/K trajectories and caps for refreshes, N_init/K_init for buffer
// initialization (FNWoS target generation uses N and k_cap as well).
struct TrainPlan {
    long iterations = 1000;          // T: optimizer steps k = 0..T inclusive
    long warmup = 1;                 // C: no refresh until k > C
    long refresh_interval = 1000000; // L
    int m = 512;
    double p_boundary = 0.1;  // P_B
    double p_refine = 0.6;    // P_buf
    int n_traj = 100;         // N
    int n_traj_init = 1;      // N_init
    int k_cap = 1000;         // K
    int k_cap_init = 1000;    // K_init
    double eps = 1e-4;
    double beta = 10.0;
    std::uint64_t seed = 0;

    int width = 256;
    int depth = 6;
    double base_lr = 1e-3;

    int boundary_pool_factor = 50;  // composite domains pre-pool factor * m_B points

    int boundary_batch() const;  // m_B = round(2m * P_B)
    int interior_batch() const;  // m_I = 2m - m_B
    int refine_count() const;    // B1 = round(m * P_buf)
    int replace_count() const;   // B2 = m - B1
    int buffer_size() const;     // B = 10m
    void validate() const;
};

struct BufferEntry {
    Vec point;
    double target = 0.0;
    long traj_count = 0;  // total trajectories folded into target (fre)
};

struct TrainLogRow {
    long iter = 0;
    double lr = 0.0;
    double loss_interior = 0.0;
    double loss_boundary = 0.0;
    double loss_total = 0.0;
};

struct RefreshStats {
    long iter = -1;  // -1 marks buffer initialization
    double mean_traj_count = 0.0;
    int refined = 0;
    int replaced = 0;
    long traj = 0;
    long non_exited = 0;
    long long walk_steps = 0;
};

struct TrainResult {
    Surrogate net;
    std::vector<TrainLogRow> log;
    std::vector<RefreshStats> refreshes;
    std::vector<BufferEntry> supervision;          // FNWoS: fixed target set; BFNWoS: final buffer
    std::vector<BufferEntry> initial_supervision;  // snapshot right after target generation
    long sampling_traj = 0;
    long sampling_non_exited = 0;
    long long sampling_walk_steps = 0;
    double sampling_seconds = 0.0;
    double training_seconds = 0.0;
};

using CheckpointHook = std::function<void(long iter, const Surrogate&, const OptimizerState&)>;

// Algorithm: precompute FWoS targets for m_I interior points once, then T+1
// Adam steps on the fixed interior set plus a resampled boundary batch.
TrainResult train_fnwos(const Problem& problem, const TrainPlan& plan, const CheckpointHook& hook = {});

// Buffered variant: targets live in a 10m-entry buffer initialized with
// (N_init, K_init) truncated estimates, refined/replaced every L iterations
// using the frozen network for truncated-path completion.
TrainResult train_bfnwos(const Problem& problem, const TrainPlan& plan, const CheckpointHook& hook = {});
// Ablation arm: same with the replacement branch disabled (B2 treated as 0).
TrainResult train_bfnwos_no_replacement(const Problem& problem, const TrainPlan& plan,
                                        const CheckpointHook& hook = {});

std::vector<BufferEntry> init_buffer(const Problem& problem, const TrainPlan& plan, const SurrogateFn& frozen,
                                     StreamKey key, RefreshStats* stats = nullptr);
void refresh_buffer(std::vector<BufferEntry>& buffer, const Problem& problem, const TrainPlan& plan,
                    const SurrogateFn& frozen, StreamKey key, RefreshStats* stats = nullptr,
                    bool allow_replacement = true);

}  // namespace fwos
