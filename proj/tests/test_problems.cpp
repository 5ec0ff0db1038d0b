#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fwos/problems.hpp"
#include "fwos/specfun.hpp"
#include "fwos/walker.hpp"

using namespace fwos;

TEST_CASE("benchmark names round-trip") {
    for (auto kind : {BenchmarkKind::BallPoly, BenchmarkKind::DiskIndicator, BenchmarkKind::CubeRational,
                      BenchmarkKind::GaussianIrregular})
        CHECK(benchmark_from_name(benchmark_name(kind)) == kind);
    CHECK_THROWS_AS(benchmark_from_name("nope"), std::invalid_argument);
}

TEST_CASE("polynomial ball fixture values") {
    for (int d : {2, 10, 50}) {
        for (double alpha : {0.4, 1.2, 1.9}) {
            const Problem p = make_problem({BenchmarkKind::BallPoly, d, alpha});
            CHECK(p.exact_u(Vec::Zero(d)) == doctest::Approx(1.0).epsilon(1e-14));
            Vec edge = Vec::Zero(d);
            edge[0] = 0.999999;
            CHECK(p.exact_u(edge) > 0.0);
            edge[0] = 1.5;
            CHECK(p.exact_u(edge) == 0.0);
            CHECK(p.g(edge) == 0.0);
        }
    }
    // f(0) = 2 Gamma(2.5) Gamma(1.5) / Gamma(1) = 3 pi / 4 for d = 2, alpha = 1.
    const Problem p21 = make_problem({BenchmarkKind::BallPoly, 2, 1.0});
    CHECK(p21.f(Vec::Zero(2)) == doctest::Approx(0.75 * std::numbers::pi).epsilon(1e-12));
    CHECK_THROWS_AS(make_problem({BenchmarkKind::BallPoly, 1, 1.5}), std::invalid_argument);
}

TEST_CASE("cube and gaussian fixtures at the origin") {
    const Problem cube = make_problem({BenchmarkKind::CubeRational, 10, 0.8});
    CHECK(cube.exact_u(Vec::Zero(10)) == doctest::Approx(10.0).epsilon(1e-13));
    CHECK(cube.g(Vec::Zero(10)) == doctest::Approx(10.0).epsilon(1e-13));
    const Problem gauss = make_problem({BenchmarkKind::GaussianIrregular, 3, 1.2});
    CHECK(gauss.exact_u(Vec::Zero(3)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("disk fixture forces dimension 2 and splits on the half-plane") {
    CHECK_THROWS_AS(make_problem({BenchmarkKind::DiskIndicator, 3, 0.5}), std::invalid_argument);
    const Problem p = make_problem({BenchmarkKind::DiskIndicator, 2, 0.5});
    Vec x(2);
    x << 0.3, 0.1;
    CHECK(p.f(x) == 1.0);
    x << -0.3, 0.1;
    CHECK(p.f(x) == 0.0);
}

TEST_CASE("disk series basics") {
    // Vanishes at the rim, symmetric in theta.
    for (double alpha : {0.5, 1.5}) {
        CHECK(exact_disk_series(1.0, 0.7, alpha, 40, 41) == 0.0);
        CHECK(exact_disk_series(1.2, 0.0, alpha, 40, 41) == 0.0);
        for (double r : {0.2, 0.5, 0.8}) {
            for (double th : {0.3, 1.1, 2.9}) {
                CHECK(exact_disk_series(r, th, alpha, 40, 41) ==
                      doctest::Approx(exact_disk_series(r, -th, alpha, 40, 41)).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("disk series self-convergence in the truncation") {
    const double v60 = exact_disk_series(0.5, 0.3, 1.5, 60, 61);
    const double v40 = exact_disk_series(0.5, 0.3, 1.5, 40, 41);
    CHECK(std::fabs(v60 - v40) < 1e-8);
}

TEST_CASE("disk exact_u equals the standalone series") {
    const BenchmarkId id{BenchmarkKind::DiskIndicator, 2, 1.5, 60, 61};
    const Problem p = make_problem(id);
    Vec x(2);
    x << 0.35, -0.2;
    const double r = x.norm();
    const double th = std::atan2(x[1], x[0]);
    CHECK(p.exact_u(x) == doctest::Approx(exact_disk_series(r, th, 1.5, 60, 61)).epsilon(1e-14));
}

TEST_CASE("fixture data stays finite across the preset grid") {
    // Every (d, alpha) pair used by the shipped presets, including d = 1000.
    struct Case {
        BenchmarkKind kind;
        int d;
        double alpha;
    };
    const Case cases[] = {
        {BenchmarkKind::BallPoly, 10, 0.4},   {BenchmarkKind::BallPoly, 10, 1.9},
        {BenchmarkKind::BallPoly, 50, 0.4},   {BenchmarkKind::BallPoly, 50, 1.9},
        {BenchmarkKind::DiskIndicator, 2, 0.5}, {BenchmarkKind::DiskIndicator, 2, 1.5},
        {BenchmarkKind::CubeRational, 10, 0.4}, {BenchmarkKind::CubeRational, 10, 1.9},
        {BenchmarkKind::CubeRational, 100, 0.8}, {BenchmarkKind::CubeRational, 500, 0.4},
        {BenchmarkKind::CubeRational, 1000, 0.8}, {BenchmarkKind::GaussianIrregular, 3, 0.4},
        {BenchmarkKind::GaussianIrregular, 3, 1.6},
    };
    for (const auto& c : cases) {
        CAPTURE(benchmark_name(c.kind));
        CAPTURE(c.d);
        CAPTURE(c.alpha);
        const Problem p = make_problem({c.kind, c.d, c.alpha});
        Rng rng(1000 + c.d);
        // Interior samples plus shell/exterior offsets for g.
        const int n = c.d >= 500 ? 20000 : 100000;
        const auto pts = p.domain.sample_interior(n, rng);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int i = 0; i < n; ++i) {
            const double fv = p.f(pts[i]);
            const double gv = p.g(pts[i] * 1.01);
            const double uv = p.exact_u(pts[i]);
            if (!std::isfinite(fv) || !std::isfinite(gv) || !std::isfinite(uv)) {
                FAIL_CHECK("non-finite fixture value");
            }
        }
    }
}

TEST_CASE("Feynman-Kac consistency of the 2D polynomial fixture") {
    // fwos_estimate at random interior points matches exact_u within 4
    // standard errors at N = 10^4 (statistical identity check).
    const Problem p = make_problem({BenchmarkKind::BallPoly, 2, 1.0});
    Rng prng(17);
    const auto pts = p.domain.sample_interior(20, prng);
    const StepKernel kernel(2, 1.0);
    int failures = 0;
    for (size_t j = 0; j < pts.size(); ++j) {
        const int n = 10000;
        double sum = 0.0, sum_sq = 0.0;
        const StreamKey key = StreamKey(900).child(j);
        for (int i = 0; i < n; ++i) {
            Rng rng(key.child(i));
            const WalkOutcome o = walk(p, kernel, pts[j], 1e-4, 10000, rng);
            const double s = o.source_sum + p.g(o.terminal);
            sum += s;
            sum_sq += s * s;
        }
        const double mean = sum / n;
        const double se = std::sqrt((sum_sq / n - mean * mean) / n);
        if (std::fabs(mean - p.exact_u(pts[j])) > 4.0 * se + 1e-4) ++failures;
    }
    CHECK(failures <= 1);  // 4-sigma: ~0 expected, allow a single outlier
}

TEST_CASE("irregular stand-in domains are usable") {
    const Domain blob = blob_domain(3);
    CHECK(blob.dimension() == 3);
    CHECK(blob.contains(Vec::Zero(3)));
    const Domain shell = shell_domain(3);
    Vec inside_hole = Vec::Zero(3);
    inside_hole[0] = 0.45;
    CHECK_FALSE(shell.contains(inside_hole));
    Vec ring = Vec::Zero(3);
    ring[0] = -0.6;
    CHECK(shell.contains(ring));
}
