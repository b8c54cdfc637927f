#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace convexjet {

/// Low-dimensional linear programming by Seidel's randomized incremental
/// method. Built for the support/envelope problems of this library: at most
/// 5 variables, many constraints.
///
/// maximize c·u  subject to  row·u <= rhs for each row, and lo <= u <= hi.
/// The variable box must be bounded; it guarantees a bounded optimum.
class SeidelLP {
  public:
    static constexpr int kMaxDim = 5;
    using Row = std::array<double, kMaxDim + 1>;  ///< coefficients then rhs

    /// eps: absolute feasibility slack. Constraint order is taken as given;
    /// callers shuffle (and may front-load likely-active rows).
    static bool solve(int dim, const std::vector<Row>& rows, const std::array<double, kMaxDim>& c,
                      const std::array<double, kMaxDim>& lo, const std::array<double, kMaxDim>& hi,
                      double eps, std::array<double, kMaxDim>& out);

    /// Pivot column of a violated row (largest coefficient magnitude).
    static int pick_pivot(int dim, const Row& r);

    /// Eliminates variable p of r via the equality of pivot_row; the result
    /// has dim-1 coefficients followed by the rhs at position dim-1.
    static Row reduce(int dim, const Row& pivot_row, int p, const Row& r);
};

}  // namespace convexjet
