#include "fwos/sampler.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fwos/specfun.hpp"

namespace fwos {

using specfun::detail::inv_reg_inc_beta_ln;
using specfun::detail::reg_inc_beta_ln;

Vec sample_direction(int d, Rng& rng) {
    if (d < 1) throw std::invalid_argument("sample_direction: dimension must be positive");
    Vec v(d);
    double norm2;
    do {
        for (int j = 0; j < d; ++j) v[j] = rng.gaussian();
        norm2 = v.squaredNorm();
    } while (norm2 == 0.0);
    return v / std::sqrt(norm2);
}

StepKernel::StepKernel(int d, double alpha) : d_(d), alpha_(alpha) {
    if (d < 1) throw std::domain_error("StepKernel: dimension must be positive");
    if (!(alpha > 0.0) || !(alpha < 2.0)) throw std::domain_error("StepKernel: alpha must lie in (0,2)");
    if (!(static_cast<double>(d) > alpha)) throw std::domain_error("StepKernel: requires d > alpha");
    inv_alpha_ = 1.0 / alpha;
    ln_beta_jump_ = specfun::ln_beta(0.5 * alpha, 1.0 - 0.5 * alpha);
    ln_beta_kernel_ = specfun::ln_beta(0.5 * (d - alpha), 0.5 * alpha);
    omega_coeff_ = std::exp(ln_beta_kernel_ - std::log(alpha) - (alpha - 1.0) * std::numbers::ln2 -
                            2.0 * specfun::ln_gamma(0.5 * alpha));
}

double StepKernel::omega(double r) const { return omega_coeff_ * std::pow(r, alpha_); }

double StepKernel::w_from_ratio(double rho) const {
    return 1.0 - reg_inc_beta_ln(rho, 0.5 * (d_ - alpha_), 0.5 * alpha_, ln_beta_kernel_);
}

double StepKernel::jump(double r, double xi) const {
    const double root = inv_reg_inc_beta_ln(1.0 - xi, 0.5 * alpha_, 1.0 - 0.5 * alpha_, ln_beta_jump_);
    return r / std::sqrt(root);
}

double StepKernel::gamma(double r, double xi) const { return std::pow(xi, inv_alpha_) * r; }

StepSample StepKernel::step(const Vec& center, double r, Rng& rng) const {
    if (!(r > 0.0)) throw std::invalid_argument("step: radius must be positive");
    StepSample s;
    s.ball_radius = r;
    // Draw order mirrors the walk loop: source radius, source direction,
    // jump length, jump direction.
    s.source_radius = gamma(r, rng.uniform_open01());
    s.source_point = center + s.source_radius * sample_direction(d_, rng);
    s.jump_length = jump(r, rng.uniform_open01());
    s.next_center = center + s.jump_length * sample_direction(d_, rng);
    return s;
}

double jump_distance(double r, double alpha, double xi) {
    if (!(r > 0.0)) throw std::domain_error("jump_distance: radius must be positive");
    if (!(alpha > 0.0) || !(alpha < 2.0)) throw std::domain_error("jump_distance: alpha must lie in (0,2)");
    if (!(xi > 0.0) || !(xi < 1.0)) throw std::domain_error("jump_distance: xi must lie in (0,1)");
    return r / std::sqrt(specfun::inv_reg_inc_beta(1.0 - xi, 0.5 * alpha, 1.0 - 0.5 * alpha));
}

double source_radius(double r, double alpha, double xi) {
    if (!(r > 0.0)) throw std::domain_error("source_radius: radius must be positive");
    if (!(alpha > 0.0) || !(alpha < 2.0)) throw std::domain_error("source_radius: alpha must lie in (0,2)");
    if (!(xi > 0.0) || !(xi < 1.0)) throw std::domain_error("source_radius: xi must lie in (0,1)");
    return std::pow(xi, 1.0 / alpha) * r;
}

double weight_omega(double r, int d, double alpha) {
    if (!(r > 0.0)) throw std::domain_error("weight_omega: radius must be positive");
    return StepKernel(d, alpha).omega(r);
}

double kernel_w(double gamma, double r, int d, double alpha) {
    if (!(r > 0.0) || gamma < 0.0 || gamma > r) throw std::domain_error("kernel_w: requires 0 <= gamma <= r");
    const double rho = (gamma / r) * (gamma / r);
    return StepKernel(d, alpha).w_from_ratio(rho);
}

StepSample make_step(const Vec& center, double r, double alpha, Rng& rng) {
    return StepKernel(static_cast<int>(center.size()), alpha).step(center, r, rng);
}

}  // namespace fwos
