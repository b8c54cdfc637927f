#pragma once

#include <cstdint>
#include <optional>

#include "convexjet/grid.hpp"

namespace convexjet {

/// Affine minorant: value at y is <s, y> + b.
struct Plane {
    Vector s;
    double b = 0.0;

    double eval(const Vector& y) const { return s.dot(y) + b; }
};

struct BiconjugateResult {
    GridFunction H;              ///< discrete convex envelope at the nodes
    std::vector<Plane> planes;   ///< supporting planes, one per distinct facet met
};

/// Discrete convex envelope of grid data through the double Legendre-Fenchel
/// transform. In one dimension the linear-time hull transform is exact; in
/// higher dimensions each node's support value is computed exactly by a small
/// LP over the lifted nodes (the dual transform evaluated at the optimal
/// slope rather than on a fixed slope mesh).
///
/// dual_radius restricts conjugate slopes to |s|_inf <= dual_radius, which
/// bounds every reported plane slope and hence Lip of the max-of-planes model.
BiconjugateResult biconjugate(const GridFunction& g, std::optional<double> dual_radius = std::nullopt,
                              std::uint64_t seed = 0);

}  // namespace convexjet
