#pragma once

#include <stdexcept>

namespace fwos::specfun {

// Series evaluations report their own convergence; callers must check (or use
// require()) before trusting the value.
struct SpecFunResult {
    double value = 0.0;
    bool converged = false;
    int terms_used = 0;

    double require() const {
        if (!converged) throw std::runtime_error("special-function series did not converge");
        return value;
    }
};

// ln Gamma(x), x > 0.
double ln_gamma(double x);

// Euler Beta function B(a, b), a, b > 0.
double beta(double a, double b);
double ln_beta(double a, double b);

// Regularized incomplete Beta I(x; a, b) on [0, 1]; I(0)=0 and I(1)=1 exactly.
double reg_inc_beta(double x, double a, double b);

// Inverse of I(.; a, b): returns x with I(x; a, b) = p.
double inv_reg_inc_beta(double p, double a, double b);

// Gauss hypergeometric 2F1(a, b; c; z) by direct series, c > 0, z in [0, 1).
SpecFunResult hyp2f1(double a, double b, double c, double z);

// Confluent hypergeometric 1F1(a; b; z), b > 0. Negative z goes through the
// Kummer transform exp(z) * 1F1(b-a; b; -z) to avoid cancellation.
SpecFunResult hyp1f1(double a, double b, double z);

// Jacobi polynomial P_n^{(a,b)}(x) by the ascending three-term recurrence.
double jacobi_p(int n, double a, double b, double x);

namespace detail {
// Continued-fraction core with the log-Beta normalization precomputed by the
// caller; hot-loop entry for the samplers.
double reg_inc_beta_ln(double x, double a, double b, double ln_beta_ab);
double inv_reg_inc_beta_ln(double p, double a, double b, double ln_beta_ab);
}  // namespace detail

}  // namespace fwos::specfun
