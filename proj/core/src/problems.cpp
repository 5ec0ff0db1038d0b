#include "fwos/problems.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fwos/specfun.hpp"

namespace fwos {

namespace {

using specfun::hyp1f1;
using specfun::hyp2f1;
using specfun::ln_gamma;

double ln_binom(double a, double b) {
    // Generalized binomial C(a, b) = Gamma(a+1) / (Gamma(b+1) Gamma(a-b+1)).
    return ln_gamma(a + 1.0) - ln_gamma(b + 1.0) - ln_gamma(a - b + 1.0);
}

// Coefficients of the disk series do not depend on the evaluation point, so
// they are tabulated once per (alpha, n_max, l_max).
class DiskSeries {
  public:
    DiskSeries(double alpha, int n_max, int l_max) : alpha_(alpha), n_max_(n_max), l_max_(l_max) {
        if (n_max < 0 || l_max < 0) throw std::domain_error("disk series: truncation bounds must be non-negative");
        prefactor_ = std::exp(-alpha * std::numbers::ln2 - 2.0 * ln_gamma(1.0 + 0.5 * alpha));
        const double a2 = 0.5 * alpha;
        for (int l = 1; l <= l_max; l += 2) {
            std::vector<double> row(n_max + 1);
            for (int n = 0; n <= n_max; ++n) {
                const int sign_exp = (l + 1) / 2 + n + 1;
                const double sign = (sign_exp % 2 == 0) ? 1.0 : -1.0;
                const double num = 2.0 * n + a2 + l + 1.0;
                const double ln_den = std::log(std::numbers::pi) + std::log(n + 0.5 * l) + std::log(a2 + 1.0) +
                                      ln_binom(n + a2 + 0.5 * l + 1.0, n + 0.5 * l) + ln_binom(a2 + n, n);
                row[n] = sign * num * std::exp(-ln_den);
            }
            coeff_.push_back(std::move(row));
        }
    }

    double eval(double r, double theta) const {
        const double w = 1.0 - r * r;
        if (w <= 0.0) return 0.0;
        const double a2 = 0.5 * alpha_;
        double sum = 0.5;
        const double x = 2.0 * r * r - 1.0;
        double r_pow = r;  // r^l, advanced by r^2 per odd l
        size_t li = 0;
        for (int l = 1; l <= l_max_; l += 2, ++li) {
            const auto& row = coeff_[li];
            // Ascending Jacobi recurrence for P_n^{(alpha/2, l)}(x), all n at once.
            double acc = row[0];
            if (n_max_ >= 1) {
                const double a = a2, b = static_cast<double>(l);
                double p_prev = 1.0;
                double p_cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
                acc += row[1] * p_cur;
                for (int n = 2; n <= n_max_; ++n) {
                    const double s = 2.0 * n + a + b;
                    const double c1 = 2.0 * n * (n + a + b) * (s - 2.0);
                    const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
                    const double c3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
                    const double p_next = (c2 * p_cur - c3 * p_prev) / c1;
                    p_prev = p_cur;
                    p_cur = p_next;
                    acc += row[n] * p_cur;
                }
            }
            sum += acc * std::cos(l * theta) * r_pow;
            r_pow *= r * r;
        }
        return prefactor_ * std::pow(w, a2) * sum;
    }

  private:
    double alpha_, prefactor_;
    int n_max_, l_max_;
    std::vector<std::vector<double>> coeff_;
};

}  // namespace

BenchmarkKind benchmark_from_name(const std::string& name) {
    if (name == "ball_poly") return BenchmarkKind::BallPoly;
    if (name == "disk_indicator") return BenchmarkKind::DiskIndicator;
    if (name == "cube_rational") return BenchmarkKind::CubeRational;
    if (name == "gaussian_irregular") return BenchmarkKind::GaussianIrregular;
    throw std::invalid_argument("unknown benchmark '" + name + "'");
}

std::string benchmark_name(BenchmarkKind kind) {
    switch (kind) {
        case BenchmarkKind::BallPoly: return "ball_poly";
        case BenchmarkKind::DiskIndicator: return "disk_indicator";
        case BenchmarkKind::CubeRational: return "cube_rational";
        case BenchmarkKind::GaussianIrregular: return "gaussian_irregular";
    }
    return "?";
}

double exact_disk_series(double r, double theta, double alpha, int n_max, int l_max) {
    return DiskSeries(alpha, n_max, l_max).eval(r, theta);
}

Domain blob_domain(int dim) {
    if (dim < 2) throw std::invalid_argument("blob_domain: needs dimension >= 2");
    Vec c1 = Vec::Zero(dim);
    Vec c2 = Vec::Zero(dim);
    c2[0] = 0.8;
    Vec c3 = Vec::Zero(dim);
    c3[1] = 0.7;
    c3[0] = 0.25;
    return Domain::join({Domain::ball(c1, 1.0), Domain::ball(c2, 0.6), Domain::ball(c3, 0.5)});
}

Domain shell_domain(int dim) {
    if (dim < 2) throw std::invalid_argument("shell_domain: needs dimension >= 2");
    Vec c = Vec::Zero(dim);
    Vec off = Vec::Zero(dim);
    off[0] = 0.45;
    return Domain::carve(Domain::ball(c, 1.0), Domain::ball(off, 0.4));
}

Problem make_problem(const BenchmarkId& id) {
    switch (id.kind) {
        case BenchmarkKind::BallPoly: return make_problem(id, Domain::unit_ball(id.dimension));
        case BenchmarkKind::DiskIndicator: return make_problem(id, Domain::unit_ball(2));
        case BenchmarkKind::CubeRational: return make_problem(id, Domain::unit_cube(id.dimension));
        case BenchmarkKind::GaussianIrregular: return make_problem(id, blob_domain(id.dimension));
    }
    throw std::logic_error("unreachable");
}

Problem make_problem(const BenchmarkId& id, Domain domain) {
    const double alpha = id.alpha;
    const int d = id.dimension;
    if (!(alpha > 0.0) || !(alpha < 2.0)) throw std::invalid_argument("benchmark: alpha must lie in (0,2)");
    if (!(static_cast<double>(d) > alpha)) throw std::invalid_argument("benchmark: requires dimension > alpha");
    if (domain.dimension() != d) throw std::invalid_argument("benchmark: domain dimension mismatch");

    switch (id.kind) {
        case BenchmarkKind::BallPoly: {
            const double c_f =
                std::exp(alpha * std::numbers::ln2 + ln_gamma(0.5 * alpha + 2.0) + ln_gamma(0.5 * (alpha + d)) -
                         ln_gamma(0.5 * d));
            const double slope = 1.0 + alpha / d;
            const double power = 1.0 + 0.5 * alpha;
            ScalarField f = [c_f, slope](const Vec& x) { return c_f * (1.0 - slope * x.squaredNorm()); };
            ScalarField g = [](const Vec&) { return 0.0; };
            ScalarField u = [power](const Vec& x) {
                const double w = 1.0 - x.squaredNorm();
                return w > 0.0 ? std::pow(w, power) : 0.0;
            };
            return Problem(alpha, std::move(domain), std::move(f), std::move(g), std::move(u));
        }
        case BenchmarkKind::DiskIndicator: {
            if (d != 2) throw std::invalid_argument("disk_indicator: dimension must be 2");
            auto series = std::make_shared<DiskSeries>(alpha, id.n_max, id.l_max);
            ScalarField f = [](const Vec& x) { return x[0] > 0.0 ? 1.0 : 0.0; };
            ScalarField g = [](const Vec&) { return 0.0; };
            ScalarField u = [series](const Vec& x) {
                return series->eval(x.norm(), std::atan2(x[1], x[0]));
            };
            return Problem(alpha, std::move(domain), std::move(f), std::move(g), std::move(u));
        }
        case BenchmarkKind::CubeRational: {
            const double a_f = d * std::exp(alpha * std::numbers::ln2 + ln_gamma(0.5 * (alpha + d)) +
                                            ln_gamma(0.5 * (alpha + 3.0)) - ln_gamma(1.5) - ln_gamma(0.5 * d));
            const double half_d = 0.5 * d;
            ScalarField f = [a_f, alpha, half_d](const Vec& x) {
                const double t = x.squaredNorm();
                const double z = t / (1.0 + t);
                const double hyp = hyp2f1(0.5 * (alpha + 3.0), -0.5 * alpha, half_d, z).require();
                return a_f * std::pow(1.0 + t, -0.5 * (alpha + 3.0)) * hyp;
            };
            ScalarField u = [d](const Vec& x) { return d * std::pow(1.0 + x.squaredNorm(), -1.5); };
            return Problem(alpha, std::move(domain), std::move(f), ScalarField(u), ScalarField(u));
        }
        case BenchmarkKind::GaussianIrregular: {
            const double b_f =
                std::exp(alpha * std::numbers::ln2 + ln_gamma(0.5 * (alpha + d)) - ln_gamma(0.5 * d));
            const double half_d = 0.5 * d;
            const double a_hyp = 0.5 * (alpha + d);
            ScalarField f = [b_f, a_hyp, half_d](const Vec& x) {
                return b_f * hyp1f1(a_hyp, half_d, -x.squaredNorm()).require();
            };
            ScalarField u = [](const Vec& x) { return std::exp(-x.squaredNorm()); };
            return Problem(alpha, std::move(domain), std::move(f), ScalarField(u), ScalarField(u));
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace fwos
