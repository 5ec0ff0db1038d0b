#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace fwos {

using Vec = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

double gelu(double x);
double gelu_prime(double x);

// Parameter container shared by the network, its gradients, and the Adam
// moment accumulators: one input lift, `depth` residual blocks, one head.
struct ParamSet {
    Matrix w_in;                 // width x input_dim
    Vec b_in;                    // width
    std::vector<Matrix> w_blk;   // width x width, one per residual block
    std::vector<Vec> b_blk;      // width
    Eigen::RowVectorXd w_out;    // 1 x width
    double b_out = 0.0;

    static ParamSet zeros(int input_dim, int width, int depth);
    void for_each(const std::function<void(double&)>& fn);
    bool same_shape(const ParamSet& other) const;
    bool all_finite() const;
};

using Gradients = ParamSet;

// Residual MLP surrogate v_theta:
//   h0 = W_in x + b_in,  h_{k+1} = h_k + GELU(W_k h_k + b_k),  y = W_out h_D + b_out.
class Surrogate {
  public:
    Surrogate() = default;
    Surrogate(int input_dim, int width, int depth, std::uint64_t seed);

    int input_dim() const { return input_dim_; }
    int width() const { return width_; }
    int depth() const { return depth_; }

    // Rows of X are points; returns one value per row.
    Vec forward(const Matrix& X) const;
    double forward1(const Vec& x) const;
    std::function<double(const Vec&)> scalar_fn() const;

    ParamSet& params() { return params_; }
    const ParamSet& params() const { return params_; }

  private:
    int input_dim_ = 0, width_ = 0, depth_ = 0;
    ParamSet params_;
};

struct LossGrad {
    double loss = 0.0;      // interior + beta * boundary
    double interior = 0.0;  // mean squared interior residual
    double boundary = 0.0;  // mean squared boundary residual (0 if batch empty)
    Gradients grads;
};

// Composite regression loss: mean squared interior residual plus beta times
// the mean squared boundary residual. Returns the loss and its exact
// reverse-mode gradient for every parameter.
LossGrad loss_and_grad(const Surrogate& s, const Matrix& X_int, const Vec& Y_int, const Matrix& X_bdy,
                       const Vec& G_bdy, double beta);

// Adam with a per-step multiplicative learning-rate decay:
// lr(t) = base_lr * decay_factor^t, with decay_factor = 0.01^{1/T} reaching
// 0.01 * base_lr at the final iteration.
struct OptimizerState {
    long step = 0;
    double base_lr = 1e-3;
    double decay_factor = 1.0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps_adam = 1e-8;
    ParamSet m, v;

    static OptimizerState create(const Surrogate& s, double base_lr, long total_iterations);
    double current_lr() const;
};

void adam_step(Surrogate& s, OptimizerState& opt, const Gradients& grads);

// Self-describing JSON checkpoint; floating-point payloads are stored as C99
// hex literals so the round trip is bit-exact.
void save_checkpoint(const Surrogate& s, const OptimizerState& opt, const std::string& path);
std::pair<Surrogate, OptimizerState> load_checkpoint(const std::string& path);

}  // namespace fwos
