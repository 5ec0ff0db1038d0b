#pragma once

#include <functional>
#include <span>

#include "fwos/geometry.hpp"
#include "fwos/rng.hpp"
#include "fwos/sampler.hpp"

namespace fwos {

using ScalarField = std::function<double(const Vec&)>;
using SurrogateFn = std::function<double(const Vec&)>;

// Fractional Poisson problem: (-Laplace)^{alpha/2} u = f in Omega, u = g on
// the complement. g must be evaluable anywhere in the epsilon-shell and the
// exterior; exact_u is an optional benchmark oracle.
struct Problem {
    double alpha;
    Domain domain;
    ScalarField f;
    ScalarField g;
    ScalarField exact_u;  // empty when no closed form is known

    Problem(double alpha_, Domain domain_, ScalarField f_, ScalarField g_, ScalarField exact = {})
        : alpha(alpha_), domain(std::move(domain_)), f(std::move(f_)), g(std::move(g_)), exact_u(std::move(exact)) {
        if (!(alpha > 0.0) || !(alpha < 2.0)) throw std::domain_error("Problem: alpha must lie in (0,2)");
        if (!(static_cast<double>(domain.dimension()) > alpha))
            throw std::domain_error("Problem: requires domain dimension > alpha");
    }

    int dimension() const { return domain.dimension(); }
    bool has_exact() const { return static_cast<bool>(exact_u); }
};

// One trajectory: accumulated source sum, stopping point, step count, and
// whether the walk stopped by reaching the shell/exterior (vs. the step cap).
struct WalkOutcome {
    double source_sum = 0.0;
    Vec terminal;
    int steps = 0;
    bool exited = false;
};

WalkOutcome walk(const Problem& problem, const Vec& x0, double eps, int k_cap, Rng& rng);
WalkOutcome walk(const Problem& problem, const StepKernel& kernel, const Vec& x0, double eps, int k_cap, Rng& rng);

struct EstimateStats {
    double value = 0.0;
    long long total_steps = 0;
    int non_exited = 0;
    int n_traj = 0;
};

// Plain FWoS estimator: mean over trajectories of source_sum + g(terminal).
// Trajectories that hit the step cap still evaluate g at the terminal point;
// the count of such trajectories is surfaced in the stats.
double fwos_estimate(const Problem& problem, const Vec& x, int n_traj, double eps, int k_cap, StreamKey key);
EstimateStats fwos_estimate_stats(const Problem& problem, const Vec& x, int n_traj, double eps, int k_cap,
                                  StreamKey key);

// Truncated estimator: at most k_trunc steps, then either g (shell/exterior)
// or the frozen surrogate (still interior) completes the trajectory.
double fwos_truncated(const Problem& problem, const Vec& x, int n_traj, int k_trunc, double eps,
                      const SurrogateFn& frozen, StreamKey key);
EstimateStats fwos_truncated_stats(const Problem& problem, const Vec& x, int n_traj, int k_trunc, double eps,
                                   const SurrogateFn& frozen, StreamKey key);

// Relative l2 error over uniform interior samples: ||u_hat - u|| / ||u||.
double relative_l2(const ScalarField& u_hat, const Problem& problem, int n_points, StreamKey key);
// Indexed variant for estimators that need a decorrelated stream per point.
double relative_l2(const std::function<double(const Vec&, int)>& u_hat, const Problem& problem, int n_points,
                   StreamKey key);

// Pairwise summation with a fixed association order, so reductions do not
// depend on how work was scheduled.
double tree_sum(std::span<const double> values);

}  // namespace fwos
