#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "fwos/rng.hpp"
#include "fwos/surrogate.hpp"

using namespace fwos;

namespace {

Matrix random_batch(int n, int d, Rng& rng, double scale = 1.0) {
    Matrix X(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) X(i, j) = scale * (2.0 * rng.uniform01() - 1.0);
    return X;
}

std::string temp_file(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("gelu fixed point and derivative") {
    CHECK(gelu(0.0) == 0.0);
    CHECK(gelu(10.0) == doctest::Approx(10.0).epsilon(1e-12));
    for (double x : {-2.0, -0.3, 0.1, 1.7}) {
        const double h = 1e-6;
        const double fd = (gelu(x + h) - gelu(x - h)) / (2.0 * h);
        CHECK(gelu_prime(x) == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("init is deterministic per seed") {
    const Surrogate a(7, 16, 2, 42), b(7, 16, 2, 42), c(7, 16, 2, 43);
    CHECK(a.params().w_in == b.params().w_in);
    CHECK(a.params().w_blk[1] == b.params().w_blk[1]);
    CHECK(a.params().w_in != c.params().w_in);
    CHECK(a.params().b_in.isZero());
    CHECK(a.params().b_out == 0.0);
}

TEST_CASE("init output is finite in very high dimension") {
    const Surrogate s(1000, 64, 3, 1);
    Rng rng(2);
    const Matrix X = random_batch(4, 1000, rng);
    const Vec y = s.forward(X);
    for (int i = 0; i < 4; ++i) CHECK(std::isfinite(y[i]));
}

TEST_CASE("zero parameters give the zero map") {
    Surrogate s(3, 8, 2, 0);
    s.params() = ParamSet::zeros(3, 8, 2);
    Rng rng(3);
    const Vec y = s.forward(random_batch(5, 3, rng));
    for (int i = 0; i < 5; ++i) CHECK(y[i] == 0.0);
}

TEST_CASE("batch forward equals scalar forward") {
    const Surrogate s(4, 12, 3, 9);
    Rng rng(4);
    const Matrix X = random_batch(6, 4, rng);
    const Vec y = s.forward(X);
    for (int i = 0; i < 6; ++i) {
        const double yi = s.forward1(X.row(i).transpose());
        CHECK(y[i] == doctest::Approx(yi).epsilon(1e-15));
    }
    CHECK_THROWS_AS(s.forward(random_batch(2, 5, rng)), std::invalid_argument);
}

TEST_CASE("loss vanishes at the global minimum") {
    const Surrogate s(3, 8, 2, 11);
    Rng rng(5);
    const Matrix X_int = random_batch(10, 3, rng);
    const Matrix X_bdy = random_batch(4, 3, rng);
    const Vec Y_int = s.forward(X_int);
    const Vec G_bdy = s.forward(X_bdy);
    const LossGrad lg = loss_and_grad(s, X_int, Y_int, X_bdy, G_bdy, 2.0);
    CHECK(lg.loss == 0.0);
    bool all_zero = true;
    const_cast<Gradients&>(lg.grads).for_each([&](double& g) { all_zero = all_zero && g == 0.0; });
    CHECK(all_zero);
}

TEST_CASE("analytic gradients match central finite differences") {
    Surrogate s(3, 8, 2, 123);
    Rng rng(6);
    const Matrix X_int = random_batch(12, 3, rng);
    const Matrix X_bdy = random_batch(5, 3, rng);
    Vec Y_int(12), G_bdy(5);
    for (int i = 0; i < 12; ++i) Y_int[i] = rng.gaussian();
    for (int i = 0; i < 5; ++i) G_bdy[i] = rng.gaussian();
    const double beta = 3.0;

    const LossGrad lg = loss_and_grad(s, X_int, Y_int, X_bdy, G_bdy, beta);

    // Probe a spread of parameters across every group.
    auto loss_at = [&]() { return loss_and_grad(s, X_int, Y_int, X_bdy, G_bdy, beta).loss; };
    auto probe = [&](double& param, double analytic) {
        const double h = 1e-5;
        const double saved = param;
        param = saved + h;
        const double up = loss_at();
        param = saved - h;
        const double down = loss_at();
        param = saved;
        const double fd = (up - down) / (2.0 * h);
        CHECK(analytic == doctest::Approx(fd).epsilon(1e-5));
    };

    probe(s.params().w_in(0, 0), lg.grads.w_in(0, 0));
    probe(s.params().w_in(7, 2), lg.grads.w_in(7, 2));
    probe(s.params().b_in(3), lg.grads.b_in(3));
    probe(s.params().w_blk[0](1, 5), lg.grads.w_blk[0](1, 5));
    probe(s.params().w_blk[1](6, 0), lg.grads.w_blk[1](6, 0));
    probe(s.params().b_blk[0](2), lg.grads.b_blk[0](2));
    probe(s.params().b_blk[1](7), lg.grads.b_blk[1](7));
    probe(s.params().w_out(0, 4), lg.grads.w_out(0, 4));
    probe(s.params().b_out, lg.grads.b_out);
    for (int k = 0; k < 12; ++k) {
        Rng pick(1000 + k);
        const int r = static_cast<int>(pick.next_u64() % 8);
        const int c = static_cast<int>(pick.next_u64() % 8);
        const int blk = static_cast<int>(pick.next_u64() % 2);
        probe(s.params().w_blk[blk](r, c), lg.grads.w_blk[blk](r, c));
    }
}

TEST_CASE("beta = 0 ignores the boundary batch") {
    const Surrogate s(2, 6, 1, 77);
    Rng rng(7);
    const Matrix X_int = random_batch(8, 2, rng);
    Vec Y_int(8);
    for (int i = 0; i < 8; ++i) Y_int[i] = rng.gaussian();
    const Matrix X_a = random_batch(3, 2, rng);
    const Matrix X_b = random_batch(5, 2, rng);
    const LossGrad a = loss_and_grad(s, X_int, Y_int, X_a, Vec::Zero(3), 0.0);
    const LossGrad b = loss_and_grad(s, X_int, Y_int, X_b, Vec::Ones(5), 0.0);
    const LossGrad c = loss_and_grad(s, X_int, Y_int, Matrix(0, 2), Vec(0), 0.0);
    CHECK(a.loss == b.loss);
    CHECK(a.loss == c.loss);
    CHECK(a.grads.w_in == c.grads.w_in);
    CHECK_THROWS_AS(loss_and_grad(s, X_int, Y_int, Matrix(0, 2), Vec(0), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(loss_and_grad(s, Matrix(0, 2), Vec(0), X_a, Vec::Zero(3), 0.0), std::invalid_argument);
}

TEST_CASE("first Adam step with unit gradients") {
    Surrogate s(2, 4, 1, 88);
    const ParamSet before = s.params();
    OptimizerState opt = OptimizerState::create(s, 1e-3, 0);  // no decay
    Gradients g = ParamSet::zeros(2, 4, 1);
    g.for_each([](double& x) { x = 1.0; });
    adam_step(s, opt, g);
    // Bias-corrected m-hat = v-hat = 1, so the delta is -lr / (1 + eps).
    const double expected_delta = -1e-3 / (1.0 + opt.eps_adam);
    CHECK(s.params().w_in(0, 0) - before.w_in(0, 0) == doctest::Approx(expected_delta).epsilon(1e-12));
    CHECK(s.params().b_out - before.b_out == doctest::Approx(expected_delta).epsilon(1e-12));
    CHECK(opt.step == 1);
}

TEST_CASE("zero gradient leaves parameters unchanged") {
    Surrogate s(2, 4, 1, 89);
    const ParamSet before = s.params();
    OptimizerState opt = OptimizerState::create(s, 1e-3, 100);
    adam_step(s, opt, ParamSet::zeros(2, 4, 1));
    CHECK(s.params().w_in == before.w_in);
    CHECK(s.params().w_out == before.w_out);
}

TEST_CASE("learning-rate schedule reaches 0.01 base at step T") {
    const long T = 12345;
    Surrogate s(2, 4, 1, 90);
    OptimizerState opt = OptimizerState::create(s, 1e-3, T);
    opt.step = T;
    CHECK(opt.current_lr() == doctest::Approx(0.01 * 1e-3).epsilon(1e-12));
    opt.step = 0;
    CHECK(opt.current_lr() == 1e-3);
}

TEST_CASE("checkpoint round trip is bit-exact") {
    Surrogate s(5, 16, 3, 321);
    OptimizerState opt = OptimizerState::create(s, 1e-3, 5000);
    // Push the state away from the initial values.
    Rng rng(10);
    Gradients g = ParamSet::zeros(5, 16, 3);
    for (int it = 0; it < 3; ++it) {
        g.for_each([&](double& x) { x = rng.gaussian(); });
        adam_step(s, opt, g);
    }
    const std::string path = temp_file("fwos_ckpt_test.json");
    save_checkpoint(s, opt, path);
    auto [s2, opt2] = load_checkpoint(path);

    CHECK(s2.params().w_in == s.params().w_in);
    CHECK(s2.params().w_blk[2] == s.params().w_blk[2]);
    CHECK(s2.params().b_out == s.params().b_out);
    CHECK(opt2.step == opt.step);
    CHECK(opt2.m.w_in == opt.m.w_in);
    CHECK(opt2.v.b_blk[1] == opt.v.b_blk[1]);
    CHECK(opt2.current_lr() == opt.current_lr());

    Rng xr(11);
    const Matrix X = random_batch(7, 5, xr);
    const Vec y1 = s.forward(X);
    const Vec y2 = s2.forward(X);
    for (int i = 0; i < 7; ++i) CHECK(y1[i] == y2[i]);
    std::filesystem::remove(path);
}

TEST_CASE("checkpoint of an untrained net reloads with the base lr") {
    const Surrogate s(3, 8, 1, 5);
    const OptimizerState opt = OptimizerState::create(s, 2.5e-4, 1000);
    const std::string path = temp_file("fwos_ckpt_fresh.json");
    save_checkpoint(s, opt, path);
    auto [s2, opt2] = load_checkpoint(path);
    CHECK(opt2.step == 0);
    CHECK(opt2.current_lr() == 2.5e-4);
    std::filesystem::remove(path);
}

TEST_CASE("checkpoint dimension mismatch is an explicit error") {
    const Surrogate s(3, 8, 1, 6);
    const OptimizerState opt = OptimizerState::create(s, 1e-3, 10);
    const std::string path = temp_file("fwos_ckpt_bad.json");
    save_checkpoint(s, opt, path);
    // Corrupt the declared width.
    {
        std::ifstream ifs(path);
        std::string text((std::istreambuf_iterator<char>(ifs)), std::istreambuf_iterator<char>());
        const auto pos = text.find("\"width\": 8");
        REQUIRE(pos != std::string::npos);
        text.replace(pos, 10, "\"width\": 9");
        std::ofstream ofs(path);
        ofs << text;
    }
    CHECK_THROWS_AS(load_checkpoint(path), std::runtime_error);
    CHECK_THROWS_AS(load_checkpoint("/nonexistent/path.json"), std::runtime_error);
    std::filesystem::remove(path);
}

TEST_CASE("regression to a constant converges") {
    // Width-64 net fits a constant target within 2000 Adam steps.
    const int d = 4;
    Surrogate s(d, 64, 2, 2025);
    OptimizerState opt = OptimizerState::create(s, 1e-3, 2000);
    Rng rng(12);
    const Matrix X = random_batch(128, d, rng);
    const Vec target = Vec::Constant(128, 0.7);
    for (int it = 0; it <= 2000; ++it) {
        const LossGrad lg = loss_and_grad(s, X, target, Matrix(0, d), Vec(0), 0.0);
        adam_step(s, opt, lg.grads);
    }
    const Vec y = s.forward(X);
    for (int i = 0; i < 128; ++i) CHECK(std::fabs(y[i] - 0.7) < 1e-3);
}
