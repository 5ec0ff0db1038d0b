#pragma once

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "fwos/rng.hpp"

namespace fwos {

using Vec = Eigen::VectorXd;

// Bounded open domain described by an exact or composed signed-distance
// function. Distances are reported "inside positive": dist_to_boundary(x) > 0
// iff x is strictly interior, and for composites the value is a conservative
// lower bound on the true distance — exactly what the walker needs, since it
// only requires a radius r with B_r(x) inside the domain.
class Domain {
  public:
    enum class Kind { Ball, Box, Union, Intersect, Complement };

    static Domain ball(Vec center, double radius);
    static Domain unit_ball(int dim);
    static Domain hypercube(Vec lo, Vec hi);
    static Domain unit_cube(int dim);  // (0,1)^d
    static Domain join(std::vector<Domain> parts);       // union
    static Domain meet(std::vector<Domain> parts);       // intersection
    static Domain complement(const Domain& d);
    static Domain carve(const Domain& base, const Domain& cut);  // base minus cut

    int dimension() const { return dim_; }
    Kind kind() const;

    double dist_to_boundary(const Vec& x) const;
    bool contains(const Vec& x) const { return dist_to_boundary(x) > 0.0; }

    // Diagonal of the axis-aligned bounding box; throws for unbounded trees.
    double diameter() const;
    void bounding_box(Vec& lo, Vec& hi) const;

    std::vector<Vec> sample_interior(int n, Rng& rng) const;

    // Uniform boundary samples for ball/box. Composite domains draw from a
    // pool built once via prepare_boundary_pool (projection of near-boundary
    // rejection samples along the finite-difference SDF normal).
    std::vector<Vec> sample_boundary(int n, Rng& rng) const;
    void prepare_boundary_pool(int pool_size, Rng& rng);
    bool has_boundary_pool() const { return boundary_pool_ && !boundary_pool_->empty(); }
    int boundary_pool_size() const { return boundary_pool_ ? static_cast<int>(boundary_pool_->size()) : 0; }

  private:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    Domain(NodePtr root, int dim);
    const Node& root() const { return *root_; }

    NodePtr root_;
    int dim_ = 0;
    std::shared_ptr<std::vector<Vec>> boundary_pool_;
};

}  // namespace fwos
