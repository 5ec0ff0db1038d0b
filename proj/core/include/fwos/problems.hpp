#pragma once

#include <string>

#include "fwos/walker.hpp"

namespace fwos {

enum class BenchmarkKind { BallPoly, DiskIndicator, CubeRational, GaussianIrregular };

BenchmarkKind benchmark_from_name(const std::string& name);
std::string benchmark_name(BenchmarkKind kind);

struct BenchmarkId {
    BenchmarkKind kind = BenchmarkKind::BallPoly;
    int dimension = 10;
    double alpha = 0.5;
    // Series truncation for the disk fixture's exact solution.
    int n_max = 60;
    int l_max = 61;
};

// Wires the benchmark's source term, boundary data and exact solution onto
// its canonical domain (unit ball, unit disk, unit cube, or an analytic
// irregular stand-in).
Problem make_problem(const BenchmarkId& id);
// Same data on a caller-supplied domain (gaussian_irregular works on any
// bounded domain; the others require their canonical geometry).
Problem make_problem(const BenchmarkId& id, Domain domain);

// Truncated double series for the disk fixture's exact solution at polar
// coordinates (r, theta); odd angular indices only.
double exact_disk_series(double r, double theta, double alpha, int n_max, int l_max);

// Analytic signed-distance stand-ins for the irregular 3D domains: a
// union-of-balls blob and a ball-minus-ball shell.
Domain blob_domain(int dim);
Domain shell_domain(int dim);

}  // namespace fwos
