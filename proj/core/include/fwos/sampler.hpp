#pragma once

#include <Eigen/Core>

#include "fwos/rng.hpp"

namespace fwos {

using Vec = Eigen::VectorXd;

// One ball-to-ball transition: the next walk center (jump J > r) and the
// interior source evaluation point (radius gamma < r), both in uniform
// directions drawn independently.
struct StepSample {
    Vec next_center;
    Vec source_point;
    double jump_length = 0.0;
    double source_radius = 0.0;
    double ball_radius = 0.0;
};

// Uniform direction on S^{d-1} by normalizing a standard Gaussian vector.
Vec sample_direction(int d, Rng& rng);

// Jump distance J = r / sqrt(Iinv(1 - xi; alpha/2, 1 - alpha/2)); always > r.
double jump_distance(double r, double alpha, double xi);

// Source radius gamma = xi^{1/alpha} * r; always in (0, r).
double source_radius(double r, double alpha, double xi);

// Normalized weight omega_r = r^alpha B((d-alpha)/2, alpha/2) / (alpha 2^{alpha-1} Gamma(alpha/2)^2).
double weight_omega(double r, int d, double alpha);

// Kernel W centered at the ball center: 1 - I(gamma^2/r^2; (d-alpha)/2, alpha/2).
double kernel_w(double gamma, double r, int d, double alpha);

StepSample make_step(const Vec& center, double r, double alpha, Rng& rng);

// Per-(d, alpha) constants hoisted out of the walk loop: log-Beta
// normalizations for both incomplete-Beta shapes and the omega prefactor.
class StepKernel {
  public:
    StepKernel(int d, double alpha);

    int dim() const { return d_; }
    double alpha() const { return alpha_; }

    double omega(double r) const;
    double w_from_ratio(double gamma_sq_over_r_sq) const;
    double jump(double r, double xi) const;
    double gamma(double r, double xi) const;
    StepSample step(const Vec& center, double r, Rng& rng) const;

  private:
    int d_;
    double alpha_;
    double inv_alpha_;
    double ln_beta_jump_;    // B(alpha/2, 1 - alpha/2)
    double ln_beta_kernel_;  // B((d-alpha)/2, alpha/2)
    double omega_coeff_;     // omega_r = omega_coeff_ * r^alpha
};

}  // namespace fwos
