#include "fwos/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fwos {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr long kMaxRejections = 1000000;
}  // namespace

struct Domain::Node {
    Kind kind;
    int dim = 0;
    Vec center;
    double radius = 0.0;
    Vec lo, hi;
    std::vector<NodePtr> children;

    double inside_dist(const Vec& x) const {
        switch (kind) {
            case Kind::Ball:
                return radius - (x - center).norm();
            case Kind::Box: {
                // Exact box distance, inside positive.
                double max_q = -kInf;
                double out_sq = 0.0;
                for (int i = 0; i < dim; ++i) {
                    const double q = std::max(lo[i] - x[i], x[i] - hi[i]);
                    max_q = std::max(max_q, q);
                    if (q > 0.0) out_sq += q * q;
                }
                return max_q <= 0.0 ? -max_q : -std::sqrt(out_sq);
            }
            case Kind::Union: {
                double d = -kInf;
                for (const auto& c : children) d = std::max(d, c->inside_dist(x));
                return d;
            }
            case Kind::Intersect: {
                double d = kInf;
                for (const auto& c : children) d = std::min(d, c->inside_dist(x));
                return d;
            }
            case Kind::Complement:
                return -children.front()->inside_dist(x);
        }
        return 0.0;
    }

    void bbox(Vec& blo, Vec& bhi) const {
        switch (kind) {
            case Kind::Ball:
                blo = center.array() - radius;
                bhi = center.array() + radius;
                return;
            case Kind::Box:
                blo = lo;
                bhi = hi;
                return;
            case Kind::Union: {
                blo = Vec::Constant(dim, kInf);
                bhi = Vec::Constant(dim, -kInf);
                for (const auto& c : children) {
                    Vec clo, chi;
                    c->bbox(clo, chi);
                    blo = blo.cwiseMin(clo);
                    bhi = bhi.cwiseMax(chi);
                }
                return;
            }
            case Kind::Intersect: {
                blo = Vec::Constant(dim, -kInf);
                bhi = Vec::Constant(dim, kInf);
                for (const auto& c : children) {
                    Vec clo, chi;
                    c->bbox(clo, chi);
                    blo = blo.cwiseMax(clo);
                    bhi = bhi.cwiseMin(chi);
                }
                return;
            }
            case Kind::Complement:
                blo = Vec::Constant(dim, -kInf);
                bhi = Vec::Constant(dim, kInf);
                return;
        }
    }
};

Domain::Domain(NodePtr root, int dim) : root_(std::move(root)), dim_(dim) {}

Domain Domain::ball(Vec center, double radius) {
    if (center.size() < 1) throw std::invalid_argument("ball: dimension must be positive");
    if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be positive");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Ball;
    n->dim = static_cast<int>(center.size());
    n->center = std::move(center);
    n->radius = radius;
    return Domain(n, n->dim);
}

Domain Domain::unit_ball(int dim) { return ball(Vec::Zero(dim), 1.0); }

Domain Domain::hypercube(Vec lo, Vec hi) {
    if (lo.size() != hi.size() || lo.size() < 1) throw std::invalid_argument("hypercube: bad corner dimensions");
    if (!((lo.array() < hi.array()).all())) throw std::invalid_argument("hypercube: requires lo < hi componentwise");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Box;
    n->dim = static_cast<int>(lo.size());
    n->lo = std::move(lo);
    n->hi = std::move(hi);
    return Domain(n, n->dim);
}

Domain Domain::unit_cube(int dim) { return hypercube(Vec::Zero(dim), Vec::Ones(dim)); }

Domain Domain::join(std::vector<Domain> parts) {
    if (parts.empty()) throw std::invalid_argument("join: needs at least one part");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Union;
    n->dim = parts.front().dimension();
    for (const auto& p : parts) {
        if (p.dimension() != n->dim) throw std::invalid_argument("join: dimension mismatch");
        n->children.push_back(p.root_);
    }
    return Domain(n, n->dim);
}

Domain Domain::meet(std::vector<Domain> parts) {
    if (parts.empty()) throw std::invalid_argument("meet: needs at least one part");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Intersect;
    n->dim = parts.front().dimension();
    for (const auto& p : parts) {
        if (p.dimension() != n->dim) throw std::invalid_argument("meet: dimension mismatch");
        n->children.push_back(p.root_);
    }
    return Domain(n, n->dim);
}

Domain Domain::complement(const Domain& d) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Complement;
    n->dim = d.dimension();
    n->children.push_back(d.root_);
    return Domain(n, n->dim);
}

Domain Domain::carve(const Domain& base, const Domain& cut) {
    return meet({base, complement(cut)});
}

Domain::Kind Domain::kind() const { return root_->kind; }

double Domain::dist_to_boundary(const Vec& x) const {
    if (x.size() != dim_) throw std::invalid_argument("dist_to_boundary: dimension mismatch");
    return root_->inside_dist(x);
}

void Domain::bounding_box(Vec& lo, Vec& hi) const {
    root_->bbox(lo, hi);
    if (!lo.allFinite() || !hi.allFinite()) throw std::runtime_error("domain is unbounded");
}

double Domain::diameter() const {
    Vec lo, hi;
    bounding_box(lo, hi);
    return (hi - lo).norm();
}

std::vector<Vec> Domain::sample_interior(int n, Rng& rng) const {
    if (n < 1) throw std::invalid_argument("sample_interior: n must be positive");
    std::vector<Vec> out;
    out.reserve(n);
    switch (root_->kind) {
        case Kind::Ball: {
            for (int i = 0; i < n; ++i) {
                Vec v(dim_);
                double norm2;
                do {
                    for (int j = 0; j < dim_; ++j) v[j] = rng.gaussian();
                    norm2 = v.squaredNorm();
                } while (norm2 == 0.0);
                const double u = rng.uniform01();
                v *= root_->radius * std::pow(u, 1.0 / dim_) / std::sqrt(norm2);
                out.push_back(root_->center + v);
            }
            return out;
        }
        case Kind::Box: {
            for (int i = 0; i < n; ++i) {
                Vec v(dim_);
                for (int j = 0; j < dim_; ++j)
                    v[j] = root_->lo[j] + (root_->hi[j] - root_->lo[j]) * rng.uniform01();
                out.push_back(std::move(v));
            }
            return out;
        }
        default: {
            Vec lo, hi;
            bounding_box(lo, hi);
            long rejections = 0;
            while (static_cast<int>(out.size()) < n) {
                Vec v(dim_);
                for (int j = 0; j < dim_; ++j) v[j] = lo[j] + (hi[j] - lo[j]) * rng.uniform01();
                if (contains(v)) {
                    out.push_back(std::move(v));
                    rejections = 0;
                } else if (++rejections >= kMaxRejections) {
                    throw std::runtime_error("sample_interior: rejection sampling failed (degenerate domain)");
                }
            }
            return out;
        }
    }
}

std::vector<Vec> Domain::sample_boundary(int n, Rng& rng) const {
    if (n < 1) throw std::invalid_argument("sample_boundary: n must be positive");
    std::vector<Vec> out;
    out.reserve(n);
    switch (root_->kind) {
        case Kind::Ball: {
            for (int i = 0; i < n; ++i) {
                Vec v(dim_);
                double norm2;
                do {
                    for (int j = 0; j < dim_; ++j) v[j] = rng.gaussian();
                    norm2 = v.squaredNorm();
                } while (norm2 == 0.0);
                out.push_back(root_->center + v * (root_->radius / std::sqrt(norm2)));
            }
            return out;
        }
        case Kind::Box: {
            // Face choice weighted by face area (two faces per axis).
            const Vec ext = root_->hi - root_->lo;
            Vec weights(dim_);
            for (int j = 0; j < dim_; ++j) {
                double area = 1.0;
                for (int i = 0; i < dim_; ++i)
                    if (i != j) area *= ext[i];
                weights[j] = 2.0 * area;
            }
            const double total = weights.sum();
            for (int i = 0; i < n; ++i) {
                double u = rng.uniform01() * total;
                int axis = dim_ - 1;
                for (int j = 0; j < dim_; ++j) {
                    if (u < weights[j]) {
                        axis = j;
                        break;
                    }
                    u -= weights[j];
                }
                const bool high = rng.uniform01() < 0.5;
                Vec v(dim_);
                for (int j = 0; j < dim_; ++j)
                    v[j] = root_->lo[j] + ext[j] * rng.uniform01();
                v[axis] = high ? root_->hi[axis] : root_->lo[axis];
                out.push_back(std::move(v));
            }
            return out;
        }
        default: {
            if (!has_boundary_pool())
                throw std::runtime_error("sample_boundary: composite domain has no boundary pool (call prepare_boundary_pool)");
            const auto& pool = *boundary_pool_;
            if (n > static_cast<int>(pool.size()))
                throw std::runtime_error("sample_boundary: boundary pool exhausted");
            // Without replacement within one call: partial Fisher-Yates over indices.
            std::vector<int> idx(pool.size());
            for (size_t i = 0; i < pool.size(); ++i) idx[i] = static_cast<int>(i);
            for (int i = 0; i < n; ++i) {
                const int j = i + static_cast<int>(rng.uniform01() * (pool.size() - i));
                std::swap(idx[i], idx[std::min<size_t>(j, pool.size() - 1)]);
                out.push_back(pool[idx[i]]);
            }
            return out;
        }
    }
}

void Domain::prepare_boundary_pool(int pool_size, Rng& rng) {
    if (root_->kind == Kind::Ball || root_->kind == Kind::Box) return;  // direct sampling available
    if (pool_size < 1) throw std::invalid_argument("prepare_boundary_pool: size must be positive");
    Vec lo, hi;
    bounding_box(lo, hi);
    const double diam = (hi - lo).norm();
    const double shell = 0.05 * diam;
    const double tol = 1e-7 * diam;
    const double h = 1e-6 * diam;

    auto pool = std::make_shared<std::vector<Vec>>();
    pool->reserve(pool_size);
    long attempts = 0;
    const long max_attempts = kMaxRejections;
    Vec grad(dim_);
    while (static_cast<int>(pool->size()) < pool_size) {
        if (++attempts > max_attempts)
            throw std::runtime_error("prepare_boundary_pool: pool exhaustion (could not locate boundary)");
        Vec x(dim_);
        for (int j = 0; j < dim_; ++j) x[j] = lo[j] + (hi[j] - lo[j]) * rng.uniform01();
        double d = root_->inside_dist(x);
        if (std::fabs(d) > shell) continue;
        // Newton projection onto the zero level set along the FD normal.
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
            if (std::fabs(d) < tol) {
                ok = true;
                break;
            }
            for (int j = 0; j < dim_; ++j) {
                Vec xp = x, xm = x;
                xp[j] += h;
                xm[j] -= h;
                grad[j] = (root_->inside_dist(xp) - root_->inside_dist(xm)) / (2.0 * h);
            }
            const double g2 = grad.squaredNorm();
            if (g2 < 1e-12) break;
            x -= grad * (d / g2);
            d = root_->inside_dist(x);
        }
        if (ok) pool->push_back(std::move(x));
    }
    boundary_pool_ = std::move(pool);
}

}  // namespace fwos
