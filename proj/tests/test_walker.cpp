#include <doctest.h>

#include <cmath>

#include "fwos/problems.hpp"
#include "fwos/walker.hpp"

using namespace fwos;

namespace {

Problem zero_source_problem(int d, double alpha, double boundary_value) {
    return Problem(alpha, Domain::unit_ball(d), [](const Vec&) { return 0.0; },
                   [boundary_value](const Vec&) { return boundary_value; });
}

}  // namespace

TEST_CASE("zero source keeps the accumulator at zero") {
    const Problem p = zero_source_problem(4, 1.1, 3.0);
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        const WalkOutcome o = walk(p, Vec::Zero(4), 1e-4, 1000, rng);
        CHECK(o.source_sum == 0.0);
        CHECK(o.exited);
        CHECK(o.steps >= 1);
    }
}

TEST_CASE("immediate shell stop") {
    const Problem p = zero_source_problem(3, 0.7, 0.0);
    Rng rng(2);
    Vec x0 = Vec::Zero(3);
    x0[0] = 0.9995;  // dist to boundary = 5e-4 < eps
    const WalkOutcome o = walk(p, x0, 1e-3, 1000, rng);
    CHECK(o.steps == 0);
    CHECK(o.exited);
    CHECK((o.terminal - x0).norm() == 0.0);
}

TEST_CASE("walk outcome invariants under a tight cap") {
    const Problem p = zero_source_problem(10, 1.6, 0.0);
    Rng rng(3);
    int capped = 0;
    for (int i = 0; i < 200; ++i) {
        const WalkOutcome o = walk(p, Vec::Zero(10), 1e-6, 3, rng);
        CHECK(o.steps <= 3);
        if (!o.exited) {
            ++capped;
            CHECK(o.steps == 3);
            CHECK(p.domain.dist_to_boundary(o.terminal) > 1e-6);
        }
    }
    CHECK(capped > 0);  // alpha = 1.6 walks rarely exit within 3 steps
}

TEST_CASE("constant boundary data is reproduced exactly") {
    const Problem p = zero_source_problem(5, 0.9, 2.5);
    const double est = fwos_estimate(p, Vec::Zero(5), 64, 1e-4, 1000, StreamKey(7));
    CHECK(est == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("estimator is deterministic in the stream key") {
    const BenchmarkId id{BenchmarkKind::BallPoly, 6, 1.3};
    const Problem p = make_problem(id);
    Vec x = Vec::Zero(6);
    x[1] = 0.4;
    const double a = fwos_estimate(p, x, 500, 1e-4, 1000, StreamKey(99));
    const double b = fwos_estimate(p, x, 500, 1e-4, 1000, StreamKey(99));
    const double c = fwos_estimate(p, x, 500, 1e-4, 1000, StreamKey(100));
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("estimator rejects exterior query points") {
    const Problem p = zero_source_problem(3, 1.0, 0.0);
    Vec x = Vec::Zero(3);
    x[0] = 1.5;
    CHECK_THROWS_AS(fwos_estimate(p, x, 10, 1e-4, 100, StreamKey(0)), std::invalid_argument);
}

TEST_CASE("unbiasedness at the center of the 2D benchmark ball") {
    // u(0) = 1 for the polynomial fixture; 4-sigma statistical gate.
    for (double alpha : {0.5, 1.5}) {
        CAPTURE(alpha);
        const BenchmarkId id{BenchmarkKind::BallPoly, 2, alpha};
        const Problem p = make_problem(id);
        const int n = 100000;
        const StreamKey key = StreamKey(404).child(static_cast<uint64_t>(alpha * 10));
        // Accumulate mean and variance of single-trajectory results.
        const StepKernel kernel(2, alpha);
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            Rng rng(key.child(i));
            const WalkOutcome o = walk(p, kernel, Vec::Zero(2), 1e-4, 10000, rng);
            const double s = o.source_sum + p.g(o.terminal);
            sum += s;
            sum_sq += s * s;
        }
        const double mean = sum / n;
        const double stderr_mean = std::sqrt((sum_sq / n - mean * mean) / n);
        CHECK(std::fabs(mean - 1.0) < 4.0 * stderr_mean);
    }
}

TEST_CASE("mean step count grows with alpha and stays finite") {
    const int n_walks = 2000;
    double prev_mean = 0.0;
    for (double alpha : {0.4, 1.0, 1.6}) {
        const BenchmarkId id{BenchmarkKind::BallPoly, 10, alpha};
        const Problem p = make_problem(id);
        Rng prng(55);
        const auto starts = p.domain.sample_interior(n_walks, prng);
        const StepKernel kernel(10, alpha);
        long long steps = 0;
        const StreamKey key(777);
        for (int i = 0; i < n_walks; ++i) {
            Rng rng(key.child(i));
            steps += walk(p, kernel, starts[i], 1e-4, 10000, rng).steps;
        }
        const double mean = static_cast<double>(steps) / n_walks;
        CAPTURE(alpha);
        CHECK(mean > prev_mean);
        CHECK(mean < 10000.0);
        prev_mean = mean;
    }
    // Long-trajectory regime: hundreds of steps on average by alpha = 1.6.
    CHECK(prev_mean > 100.0);
}

TEST_CASE("truncated estimator reduces to the plain one when the cap never binds") {
    const BenchmarkId id{BenchmarkKind::BallPoly, 4, 0.6};
    const Problem p = make_problem(id);
    Vec x = Vec::Zero(4);
    x[0] = 0.2;
    const SurrogateFn junk = [](const Vec&) { return 123.0; };
    const StreamKey key(5150);
    const double plain = fwos_estimate(p, x, 400, 1e-4, 100000, key);
    const double truncated = fwos_truncated(p, x, 400, 100000, 1e-4, junk, key);
    CHECK(plain == truncated);  // bit-identical under a shared stream
}

TEST_CASE("truncated estimator falls back to g or the surrogate by exit state") {
    const Problem p = zero_source_problem(10, 1.7, 0.0);
    const SurrogateFn marker = [](const Vec&) { return 42.0; };
    // k_trunc = 1 with alpha = 1.7 on the 10D ball: most walks stay interior,
    // so most trajectories are completed by the surrogate.
    const EstimateStats st = fwos_truncated_stats(p, Vec::Zero(10), 200, 1, 1e-4, marker, StreamKey(31337));
    CHECK(st.non_exited > 100);
    const double expected = 42.0 * st.non_exited / 200.0;  // g contributes zero
    CHECK(st.value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("oracle-completed truncated estimator is unbiased (tower property)") {
    const BenchmarkId id{BenchmarkKind::BallPoly, 10, 1.6};
    const Problem p = make_problem(id);
    const SurrogateFn oracle = p.exact_u;
    const int n_points = 200;
    const int n_traj = 2000;
    Rng prng(8);
    const auto pts = p.domain.sample_interior(n_points, prng);
    std::vector<double> sq_err(n_points), sq_ref(n_points);
    const StreamKey key(2718);
#pragma omp parallel for schedule(dynamic, 1)
    for (int j = 0; j < n_points; ++j) {
        const double est = fwos_truncated(p, pts[j], n_traj, 1, 1e-4, oracle, key.child(j));
        const double u = p.exact_u(pts[j]);
        sq_err[j] = (est - u) * (est - u);
        sq_ref[j] = u * u;
    }
    const double rel = std::sqrt(tree_sum(sq_err) / tree_sum(sq_ref));
    CHECK(rel < 2e-2);
}

TEST_CASE("relative_l2 basics") {
    const BenchmarkId id{BenchmarkKind::BallPoly, 3, 1.0};
    const Problem p = make_problem(id);
    CHECK(relative_l2(p.exact_u, p, 2000, StreamKey(1)) == 0.0);
    const ScalarField doubled = [&p](const Vec& x) { return 2.0 * p.exact_u(x); };
    CHECK(relative_l2(doubled, p, 2000, StreamKey(1)) == doctest::Approx(1.0).epsilon(1e-12));
    const Problem no_exact = zero_source_problem(3, 1.0, 0.0);
    CHECK_THROWS_AS(relative_l2(doubled, no_exact, 10, StreamKey(1)), std::logic_error);
}

TEST_CASE("non-exited trajectories are rare at the default cap") {
    const BenchmarkId id{BenchmarkKind::BallPoly, 10, 1.6};
    const Problem p = make_problem(id);
    Rng prng(13);
    const auto pts = p.domain.sample_interior(20, prng);
    long long capped = 0, total = 0;
    for (int j = 0; j < 20; ++j) {
        const EstimateStats st = fwos_estimate_stats(p, pts[j], 100, 1e-4, 10000, StreamKey(60).child(j));
        capped += st.non_exited;
        total += st.n_traj;
    }
    CHECK(static_cast<double>(capped) / total < 1e-3);
}

TEST_CASE("tree_sum is associative-order fixed") {
    std::vector<double> v;
    Rng rng(4);
    for (int i = 0; i < 1000; ++i) v.push_back(rng.gaussian());
    const double a = tree_sum(v);
    const double b = tree_sum(v);
    CHECK(a == b);
}
