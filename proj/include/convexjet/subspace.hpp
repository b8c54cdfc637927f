#pragma once

#include "convexjet/types.hpp"

namespace convexjet {

/// Linear subspace of R^n held as an orthonormal column basis (possibly empty).
struct Subspace {
    int ambient_dim = 0;
    Matrix basis;  ///< ambient_dim x k, orthonormal columns

    int dim() const { return static_cast<int>(basis.cols()); }

    static Subspace zero(int ambient) { return Subspace{ambient, Matrix::Zero(ambient, 0)}; }
    static Subspace full(int ambient) { return Subspace{ambient, Matrix::Identity(ambient, ambient)}; }

    /// Coordinates of v in this basis (length k).
    Vector coords(const Vector& v) const { return basis.transpose() * v; }
    /// Ambient vector from basis coordinates.
    Vector from_coords(const Vector& c) const {
        return dim() == 0 ? Vector(Vector::Zero(ambient_dim)) : Vector(basis * c);
    }
};

/// Orthogonal projection of v onto S. Idempotent; never increases the norm.
Vector project(const Subspace& s, const Vector& v);

/// Orthonormal basis of span{g_i - g_0 : i} for the dataset's gradients.
/// Rank is decided by singular values >= tol_rank * (largest singular value).
Subspace span_of_differences(const JetDataset& ds, const Tolerances& tol = {});

/// Span of an explicit list of vectors, same rank rule.
Subspace span_of(const std::vector<Vector>& vs, int ambient_dim, const Tolerances& tol = {});

/// Orthonormal basis of T ∩ S^⊥. Requires S ⊆ T (checked).
Subspace orthocomplement_in(const Subspace& s, const Subspace& t, const Tolerances& tol = {});

/// True when every basis vector of S lies in T within tol.
bool contains(const Subspace& t, const Subspace& s, double tol = 1e-9);

}  // namespace convexjet
