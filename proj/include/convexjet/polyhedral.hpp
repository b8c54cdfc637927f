#pragma once

#include "convexjet/subspace.hpp"
#include "convexjet/types.hpp"

namespace convexjet {

/// Finite max of affine pieces: eval(x) = max_i (<a_i, x> + b_i).
struct PolyhedralConvex {
    struct Piece {
        Vector a;
        double b = 0.0;
    };
    int dim = 0;
    std::vector<Piece> pieces;

    double eval(const Vector& x) const {
        double best = -std::numeric_limits<double>::infinity();
        for (const Piece& p : pieces) best = std::max(best, p.a.dot(x) + p.b);
        return best;
    }

    /// Max gradient norm over pieces.
    double slope_bound() const {
        double k = 0.0;
        for (const Piece& p : pieces) k = std::max(k, p.a.norm());
        return k;
    }
};

/// Minimal convex extension m(x) = max_i (f_i + <g_i, x - x_i>) of a dataset
/// that passed the convexity check. Piece i carries slope g_i and offset
/// f_i - <g_i, x_i>; identical pieces are merged.
PolyhedralConvex build_minimal(const JetDataset& ds, const Tolerances& tol = {});

/// Value and the indices of pieces active (within the scaled activity
/// threshold) at x. The subdifferential at x is the hull of active slopes.
std::pair<double, std::vector<int>> eval_with_active_set(const PolyhedralConvex& m, const Vector& x,
                                                         const Tolerances& tol = {});

/// Splitting m = c ∘ P_Y + <v, ·> with Y the span of slope differences,
/// v the common Y⊥ slope component, and c polyhedral over Y coordinates.
struct Decomposition {
    Subspace Y;
    Vector v;             ///< v ⊥ Y
    PolyhedralConvex c;   ///< over Y coordinates (dim = Y.dim())
    double K = 0.0;       ///< max |a_i| over the original pieces
};

Decomposition decompose(const PolyhedralConvex& m, const Tolerances& tol = {});

/// Linear minorant data for c: c(y) - <shift, y> >= alpha |y| + beta on Y.
/// alpha > 0 certifies coercivity of the recentered c.
struct CoercivityMinorant {
    double alpha = 0.0;
    double beta = 0.0;
    Vector shift;  ///< in Y coordinates
};

/// Largest inscribed-ball radius (alpha) and center (shift) of the slope hull
/// of c, found by sphere sampling with local refinement, then certified by
/// re-evaluation; beta = min offset. Throws NotCoercive when the hull has
/// empty interior in Y.
CoercivityMinorant coercivity_minorant(const Decomposition& dec);

struct NotCoercive : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace convexjet
