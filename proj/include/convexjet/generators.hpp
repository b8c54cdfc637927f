#pragma once

#include <cstdint>

#include "convexjet/hypersurface.hpp"
#include "convexjet/types.hpp"

namespace convexjet {
namespace gen {

/// f(x,y) = sqrt(x^2 + exp(-2y)) with its exact gradient.
double corner_f(double x, double y);
Vector corner_grad(double x, double y);

/// Jets of corner_f at { (0,k), (1/k,k) : k = 1..k_max }.
JetDataset example_1_2(int k_max);

/// The log-graph family: points (s, log|s|) for |s| in {1..k_max, 1/2..1/k_max}.
/// E1: f = |x|, G = (sign x, 0).     E2: corner_f jets at the same points.
/// E3: E2 embedded in R^3 at z = 0.  E4: E1 plus a strip lattice |x| >= 1.
JetDataset example_1_6(int variant, int k_max);

/// Jets of |x|^2/2 at `count` uniform points in [-1,1]^dim.
JetDataset quadratic(int dim, int count, std::uint64_t seed);

/// Jets of log(sum exp(x_j)) at uniform points in [-1,1]^dim.
JetDataset logsumexp(int dim, int count, std::uint64_t seed);

/// Jets of corner_f at uniform points in [-2,2] x [-1,2] (box truncation).
JetDataset sqrt_exp_2d(int count, std::uint64_t seed);

/// corner_f jets in R^3 sampled on the plane z = 0: span of gradient
/// differences has dimension 2 and is orthogonal to e3.
JetDataset sqrt_exp_3d(int count, std::uint64_t seed);

/// Jets of K * sqrt(1 + |x - c|^2): gradient norm strictly below K.
JetDataset bounded_gradient(int dim, int count, double K, std::uint64_t seed);

/// Unit circle/sphere points with N(x) = x. dim 2: uniform angles;
/// dim 3: Fibonacci spiral.
NormalDataset sphere_normals(int n, int dim);

/// Edge midpoints of the square [-1,1]^2 with outward edge normals.
NormalDataset square_normals();

}  // namespace gen
}  // namespace convexjet
