#include "fwos/surrogate.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fwos/rng.hpp"

namespace fwos {

using nlohmann::json;

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * (1.0 / std::numbers::sqrt2))); }

double gelu_prime(double x) {
    const double phi_cdf = 0.5 * (1.0 + std::erf(x * (1.0 / std::numbers::sqrt2)));
    const double phi_pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    return phi_cdf + x * phi_pdf;
}

ParamSet ParamSet::zeros(int input_dim, int width, int depth) {
    ParamSet p;
    p.w_in = Matrix::Zero(width, input_dim);
    p.b_in = Vec::Zero(width);
    p.w_blk.assign(depth, Matrix::Zero(width, width));
    p.b_blk.assign(depth, Vec::Zero(width));
    p.w_out = Eigen::RowVectorXd::Zero(width);
    p.b_out = 0.0;
    return p;
}

void ParamSet::for_each(const std::function<void(double&)>& fn) {
    auto run = [&](double* data, long n) {
        for (long i = 0; i < n; ++i) fn(data[i]);
    };
    run(w_in.data(), w_in.size());
    run(b_in.data(), b_in.size());
    for (auto& w : w_blk) run(w.data(), w.size());
    for (auto& b : b_blk) run(b.data(), b.size());
    run(w_out.data(), w_out.size());
    fn(b_out);
}

bool ParamSet::same_shape(const ParamSet& o) const {
    if (w_in.rows() != o.w_in.rows() || w_in.cols() != o.w_in.cols()) return false;
    if (b_in.size() != o.b_in.size() || w_blk.size() != o.w_blk.size()) return false;
    for (size_t k = 0; k < w_blk.size(); ++k) {
        if (w_blk[k].rows() != o.w_blk[k].rows() || w_blk[k].cols() != o.w_blk[k].cols()) return false;
        if (b_blk[k].size() != o.b_blk[k].size()) return false;
    }
    return w_out.size() == o.w_out.size();
}

bool ParamSet::all_finite() const {
    bool ok = true;
    const_cast<ParamSet*>(this)->for_each([&](double& x) { ok = ok && std::isfinite(x); });
    return ok;
}

namespace {

// Lockstep elementwise traversal of parameter, moment, and gradient sets.
template <typename Fn>
void zip4(ParamSet& p, ParamSet& m, ParamSet& v, const ParamSet& g, Fn fn) {
    auto run = [&](double* pp, double* pm, double* pv, const double* pg, long n) {
        for (long i = 0; i < n; ++i) fn(pp[i], pm[i], pv[i], pg[i]);
    };
    run(p.w_in.data(), m.w_in.data(), v.w_in.data(), g.w_in.data(), p.w_in.size());
    run(p.b_in.data(), m.b_in.data(), v.b_in.data(), g.b_in.data(), p.b_in.size());
    for (size_t k = 0; k < p.w_blk.size(); ++k) {
        run(p.w_blk[k].data(), m.w_blk[k].data(), v.w_blk[k].data(), g.w_blk[k].data(), p.w_blk[k].size());
        run(p.b_blk[k].data(), m.b_blk[k].data(), v.b_blk[k].data(), g.b_blk[k].data(), p.b_blk[k].size());
    }
    run(p.w_out.data(), m.w_out.data(), v.w_out.data(), g.w_out.data(), p.w_out.size());
    fn(p.b_out, m.b_out, v.b_out, g.b_out);
}

void fill_uniform(Matrix& w, double bound, Rng& rng) {
    for (Eigen::Index r = 0; r < w.rows(); ++r)
        for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = bound * (2.0 * rng.uniform01() - 1.0);
}

}  // namespace

Surrogate::Surrogate(int input_dim, int width, int depth, std::uint64_t seed)
    : input_dim_(input_dim), width_(width), depth_(depth) {
    if (input_dim < 1 || width < 1 || depth < 0) throw std::invalid_argument("Surrogate: bad architecture");
    params_ = ParamSet::zeros(input_dim, width, depth);
    Rng rng(StreamKey(seed).child(0x6e65740aULL));
    fill_uniform(params_.w_in, 1.0 / std::sqrt(static_cast<double>(input_dim)), rng);
    const double blk_bound = 1.0 / std::sqrt(static_cast<double>(width));
    for (int k = 0; k < depth; ++k) fill_uniform(params_.w_blk[k], blk_bound, rng);
    Matrix w_out_tmp(1, width);
    fill_uniform(w_out_tmp, blk_bound, rng);
    params_.w_out = w_out_tmp.row(0);
}

Vec Surrogate::forward(const Matrix& X) const {
    if (X.cols() != input_dim_) throw std::invalid_argument("forward: input dimension mismatch");
    Matrix h = X * params_.w_in.transpose();
    h.rowwise() += params_.b_in.transpose();
    for (int k = 0; k < depth_; ++k) {
        Matrix z = h * params_.w_blk[k].transpose();
        z.rowwise() += params_.b_blk[k].transpose();
        h += z.unaryExpr([](double t) { return gelu(t); });
    }
    Vec y = h * params_.w_out.transpose();
    y.array() += params_.b_out;
    return y;
}

double Surrogate::forward1(const Vec& x) const {
    if (x.size() != input_dim_) throw std::invalid_argument("forward1: input dimension mismatch");
    Vec h = params_.w_in * x + params_.b_in;
    for (int k = 0; k < depth_; ++k) {
        Vec z = params_.w_blk[k] * h + params_.b_blk[k];
        h += z.unaryExpr([](double t) { return gelu(t); });
    }
    return params_.w_out.dot(h) + params_.b_out;
}

std::function<double(const Vec&)> Surrogate::scalar_fn() const {
    Surrogate copy = *this;
    return [copy = std::move(copy)](const Vec& x) { return copy.forward1(x); };
}

namespace {

// Reverse pass for one batch with per-row output weights already folded into
// d_y; accumulates into grads.
void backprop_batch(const ParamSet& p, int depth, const Matrix& X, const Vec& d_y, Gradients& grads) {
    const Eigen::Index n = X.rows();
    std::vector<Matrix> h(depth + 1), z(depth);
    h[0] = X * p.w_in.transpose();
    h[0].rowwise() += p.b_in.transpose();
    for (int k = 0; k < depth; ++k) {
        z[k] = h[k] * p.w_blk[k].transpose();
        z[k].rowwise() += p.b_blk[k].transpose();
        h[k + 1] = h[k] + z[k].unaryExpr([](double t) { return gelu(t); });
    }

    grads.w_out += d_y.transpose() * h[depth];
    grads.b_out += d_y.sum();
    Matrix dh = d_y * p.w_out;  // n x width
    for (int k = depth - 1; k >= 0; --k) {
        const Matrix dz = dh.cwiseProduct(z[k].unaryExpr([](double t) { return gelu_prime(t); }));
        grads.w_blk[k] += dz.transpose() * h[k];
        grads.b_blk[k] += dz.colwise().sum().transpose();
        dh += dz * p.w_blk[k];
    }
    grads.w_in += dh.transpose() * X;
    grads.b_in += dh.colwise().sum().transpose();
    (void)n;
}

}  // namespace

LossGrad loss_and_grad(const Surrogate& s, const Matrix& X_int, const Vec& Y_int, const Matrix& X_bdy,
                       const Vec& G_bdy, double beta) {
    if (X_int.rows() == 0) throw std::invalid_argument("loss_and_grad: interior batch must be nonempty");
    if (X_int.rows() != Y_int.size()) throw std::invalid_argument("loss_and_grad: interior batch shape mismatch");
    if (X_bdy.rows() != G_bdy.size()) throw std::invalid_argument("loss_and_grad: boundary batch shape mismatch");
    if (X_bdy.rows() == 0 && beta != 0.0)
        throw std::invalid_argument("loss_and_grad: boundary batch empty but beta != 0");

    LossGrad out;
    out.grads = ParamSet::zeros(s.input_dim(), s.width(), s.depth());

    const Vec y_int = s.forward(X_int);
    const Vec r_int = y_int - Y_int;
    const double m_i = static_cast<double>(X_int.rows());
    out.interior = r_int.squaredNorm() / m_i;
    backprop_batch(s.params(), s.depth(), X_int, Vec(2.0 / m_i * r_int), out.grads);

    if (X_bdy.rows() > 0 && beta != 0.0) {
        const Vec y_bdy = s.forward(X_bdy);
        const Vec r_bdy = y_bdy - G_bdy;
        const double m_b = static_cast<double>(X_bdy.rows());
        out.boundary = r_bdy.squaredNorm() / m_b;
        backprop_batch(s.params(), s.depth(), X_bdy, Vec(2.0 * beta / m_b * r_bdy), out.grads);
    }
    out.loss = out.interior + beta * out.boundary;
    return out;
}

OptimizerState OptimizerState::create(const Surrogate& s, double base_lr_, long total_iterations) {
    OptimizerState st;
    st.base_lr = base_lr_;
    st.decay_factor = total_iterations > 0 ? std::pow(0.01, 1.0 / static_cast<double>(total_iterations)) : 1.0;
    st.m = ParamSet::zeros(s.input_dim(), s.width(), s.depth());
    st.v = ParamSet::zeros(s.input_dim(), s.width(), s.depth());
    return st;
}

double OptimizerState::current_lr() const {
    return base_lr * std::pow(decay_factor, static_cast<double>(step));
}

void adam_step(Surrogate& s, OptimizerState& opt, const Gradients& grads) {
    if (!s.params().same_shape(grads) || !s.params().same_shape(opt.m))
        throw std::invalid_argument("adam_step: shape mismatch");
    const double lr = opt.current_lr();
    ++opt.step;
    const double bc1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.step));
    const double bc2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.step));
    const double b1 = opt.beta1, b2 = opt.beta2, eps = opt.eps_adam;
    zip4(s.params(), opt.m, opt.v, grads, [&](double& p, double& m, double& v, double g) {
        m = b1 * m + (1.0 - b1) * g;
        v = b2 * v + (1.0 - b2) * g * g;
        p -= lr * (m / bc1) / (std::sqrt(v / bc2) + eps);
    });
}

namespace {

constexpr const char* kFormatName = "fwos-checkpoint";
constexpr int kFormatVersion = 1;

std::string dhex(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%a", x);
    return buf;
}

double parse_hex(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw std::runtime_error("checkpoint: malformed float literal '" + s + "'");
    return v;
}

json matrix_to_json(const Matrix& w) {
    json arr = json::array();
    for (Eigen::Index r = 0; r < w.rows(); ++r)
        for (Eigen::Index c = 0; c < w.cols(); ++c) arr.push_back(dhex(w(r, c)));
    return arr;
}

json vec_to_json(const Vec& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(dhex(v[i]));
    return arr;
}

void json_to_matrix(const json& arr, Matrix& w) {
    if (static_cast<long>(arr.size()) != w.size())
        throw std::runtime_error("checkpoint: parameter array length does not match declared architecture");
    long i = 0;
    for (Eigen::Index r = 0; r < w.rows(); ++r)
        for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = parse_hex(arr[i++].get<std::string>());
}

void json_to_vec(const json& arr, Vec& v) {
    if (static_cast<long>(arr.size()) != v.size())
        throw std::runtime_error("checkpoint: parameter array length does not match declared architecture");
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = parse_hex(arr[i].get<std::string>());
}

json param_set_to_json(const ParamSet& p) {
    json out;
    out["w_in"] = matrix_to_json(p.w_in);
    out["b_in"] = vec_to_json(p.b_in);
    json blocks_w = json::array(), blocks_b = json::array();
    for (const auto& w : p.w_blk) blocks_w.push_back(matrix_to_json(w));
    for (const auto& b : p.b_blk) blocks_b.push_back(vec_to_json(b));
    out["w_blk"] = blocks_w;
    out["b_blk"] = blocks_b;
    Matrix w_out_m = p.w_out;
    out["w_out"] = matrix_to_json(w_out_m);
    out["b_out"] = dhex(p.b_out);
    return out;
}

void json_to_param_set(const json& in, ParamSet& p) {
    json_to_matrix(in.at("w_in"), p.w_in);
    json_to_vec(in.at("b_in"), p.b_in);
    if (in.at("w_blk").size() != p.w_blk.size() || in.at("b_blk").size() != p.b_blk.size())
        throw std::runtime_error("checkpoint: block count does not match declared depth");
    for (size_t k = 0; k < p.w_blk.size(); ++k) {
        json_to_matrix(in.at("w_blk")[k], p.w_blk[k]);
        json_to_vec(in.at("b_blk")[k], p.b_blk[k]);
    }
    Matrix w_out_m(1, p.w_out.size());
    json_to_matrix(in.at("w_out"), w_out_m);
    p.w_out = w_out_m.row(0);
    p.b_out = parse_hex(in.at("b_out").get<std::string>());
}

}  // namespace

void save_checkpoint(const Surrogate& s, const OptimizerState& opt, const std::string& path) {
    json out;
    out["format"] = kFormatName;
    out["version"] = kFormatVersion;
    out["arch"] = {{"input_dim", s.input_dim()}, {"width", s.width()}, {"depth", s.depth()}};
    out["optimizer"] = {{"step", opt.step},         {"base_lr", dhex(opt.base_lr)},
                        {"decay_factor", dhex(opt.decay_factor)}, {"beta1", dhex(opt.beta1)},
                        {"beta2", dhex(opt.beta2)}, {"eps_adam", dhex(opt.eps_adam)}};
    out["params"] = param_set_to_json(s.params());
    out["moments_m"] = param_set_to_json(opt.m);
    out["moments_v"] = param_set_to_json(opt.v);

    std::ofstream ofs(path);
    if (!ofs) throw std::runtime_error("save_checkpoint: cannot open '" + path + "' for writing");
    ofs << out.dump(1) << "\n";
    if (!ofs) throw std::runtime_error("save_checkpoint: write failed for '" + path + "'");
}

std::pair<Surrogate, OptimizerState> load_checkpoint(const std::string& path) {
    std::ifstream ifs(path);
    if (!ifs) throw std::runtime_error("load_checkpoint: cannot open '" + path + "'");
    json in;
    try {
        ifs >> in;
    } catch (const json::exception& e) {
        throw std::runtime_error("load_checkpoint: malformed JSON in '" + path + "': " + e.what());
    }
    if (in.value("format", "") != kFormatName) throw std::runtime_error("load_checkpoint: unrecognized format");
    if (in.value("version", -1) != kFormatVersion)
        throw std::runtime_error("load_checkpoint: unsupported format version");

    const json& arch = in.at("arch");
    const int input_dim = arch.at("input_dim").get<int>();
    const int width = arch.at("width").get<int>();
    const int depth = arch.at("depth").get<int>();
    if (input_dim < 1 || width < 1 || depth < 0) throw std::runtime_error("load_checkpoint: invalid architecture");

    Surrogate s(input_dim, width, depth, 0);
    json_to_param_set(in.at("params"), s.params());

    OptimizerState opt;
    const json& o = in.at("optimizer");
    opt.step = o.at("step").get<long>();
    opt.base_lr = parse_hex(o.at("base_lr").get<std::string>());
    opt.decay_factor = parse_hex(o.at("decay_factor").get<std::string>());
    opt.beta1 = parse_hex(o.at("beta1").get<std::string>());
    opt.beta2 = parse_hex(o.at("beta2").get<std::string>());
    opt.eps_adam = parse_hex(o.at("eps_adam").get<std::string>());
    opt.m = ParamSet::zeros(input_dim, width, depth);
    opt.v = ParamSet::zeros(input_dim, width, depth);
    json_to_param_set(in.at("moments_m"), opt.m);
    json_to_param_set(in.at("moments_v"), opt.v);
    return {std::move(s), std::move(opt)};
}

}  // namespace fwos
