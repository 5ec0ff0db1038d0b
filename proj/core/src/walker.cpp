#include "fwos/walker.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fwos {

double tree_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const size_t half = values.size() / 2;
    return tree_sum(values.first(half)) + tree_sum(values.subspan(half));
}

WalkOutcome walk(const Problem& problem, const StepKernel& kernel, const Vec& x0, double eps, int k_cap, Rng& rng) {
    if (!(eps > 0.0)) throw std::invalid_argument("walk: eps must be positive");
    if (k_cap < 1) throw std::invalid_argument("walk: k_cap must be positive");

    WalkOutcome out;
    out.terminal = x0;
    double r = problem.domain.dist_to_boundary(out.terminal);
    if (r <= eps) {
        out.exited = true;
        return out;
    }
    while (true) {
        if (out.steps == k_cap) return out;  // capped while strictly interior
        const StepSample st = kernel.step(out.terminal, r, rng);
        const double rho = (st.source_radius / r) * (st.source_radius / r);
        out.source_sum += kernel.omega(r) * problem.f(st.source_point) * kernel.w_from_ratio(rho);
        out.terminal = st.next_center;
        ++out.steps;
        r = problem.domain.dist_to_boundary(out.terminal);
        if (r <= eps) {
            out.exited = true;
            return out;
        }
    }
}

WalkOutcome walk(const Problem& problem, const Vec& x0, double eps, int k_cap, Rng& rng) {
    const StepKernel kernel(problem.dimension(), problem.alpha);
    return walk(problem, kernel, x0, eps, k_cap, rng);
}

namespace {

// Shared trajectory fan-out: per-trajectory sub-streams and a fixed-order
// reduction make the result independent of the worker count.
EstimateStats estimate_core(const Problem& problem, const Vec& x, int n_traj, double eps, int k_cap,
                            const SurrogateFn* frozen, StreamKey key) {
    if (n_traj < 1) throw std::invalid_argument("estimator: n_traj must be positive");
    if (!problem.domain.contains(x)) throw std::invalid_argument("estimator: query point must be interior");
    const StepKernel kernel(problem.dimension(), problem.alpha);

    std::vector<double> samples(n_traj);
    std::vector<long long> steps(n_traj);
    std::vector<unsigned char> capped(n_traj);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_traj; ++i) {
        Rng rng(key.child(static_cast<std::uint64_t>(i)));
        const WalkOutcome o = walk(problem, kernel, x, eps, k_cap, rng);
        double completion;
        if (o.exited || frozen == nullptr) {
            completion = problem.g(o.terminal);
        } else {
            completion = (*frozen)(o.terminal);
        }
        samples[i] = o.source_sum + completion;
        steps[i] = o.steps;
        capped[i] = o.exited ? 0 : 1;
    }

    EstimateStats st;
    st.n_traj = n_traj;
    st.value = tree_sum(samples) / static_cast<double>(n_traj);
    for (int i = 0; i < n_traj; ++i) {
        st.total_steps += steps[i];
        st.non_exited += capped[i];
    }
    return st;
}

}  // namespace

EstimateStats fwos_estimate_stats(const Problem& problem, const Vec& x, int n_traj, double eps, int k_cap,
                                  StreamKey key) {
    return estimate_core(problem, x, n_traj, eps, k_cap, nullptr, key);
}

double fwos_estimate(const Problem& problem, const Vec& x, int n_traj, double eps, int k_cap, StreamKey key) {
    return fwos_estimate_stats(problem, x, n_traj, eps, k_cap, key).value;
}

EstimateStats fwos_truncated_stats(const Problem& problem, const Vec& x, int n_traj, int k_trunc, double eps,
                                   const SurrogateFn& frozen, StreamKey key) {
    if (!frozen) throw std::invalid_argument("fwos_truncated: frozen surrogate must be callable");
    return estimate_core(problem, x, n_traj, eps, k_trunc, &frozen, key);
}

double fwos_truncated(const Problem& problem, const Vec& x, int n_traj, int k_trunc, double eps,
                      const SurrogateFn& frozen, StreamKey key) {
    return fwos_truncated_stats(problem, x, n_traj, k_trunc, eps, frozen, key).value;
}

double relative_l2(const std::function<double(const Vec&, int)>& u_hat, const Problem& problem, int n_points,
                   StreamKey key) {
    if (!problem.has_exact()) throw std::logic_error("relative_l2: problem has no exact solution");
    if (n_points < 1) throw std::invalid_argument("relative_l2: n_points must be positive");
    Rng rng(key.child(0));
    const std::vector<Vec> pts = problem.domain.sample_interior(n_points, rng);

    std::vector<double> sq_err(n_points), sq_ref(n_points);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n_points; ++j) {
        const double u = problem.exact_u(pts[j]);
        const double v = u_hat(pts[j], j);
        sq_err[j] = (v - u) * (v - u);
        sq_ref[j] = u * u;
    }
    const double denom = tree_sum(sq_ref);
    if (denom == 0.0) throw std::runtime_error("relative_l2: exact solution vanishes on all samples");
    return std::sqrt(tree_sum(sq_err) / denom);
}

double relative_l2(const ScalarField& u_hat, const Problem& problem, int n_points, StreamKey key) {
    return relative_l2(std::function<double(const Vec&, int)>([&](const Vec& x, int) { return u_hat(x); }), problem,
                       n_points, key);
}

}  // namespace fwos
