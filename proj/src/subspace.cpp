#include "convexjet/subspace.hpp"

#include <Eigen/SVD>

namespace convexjet {

Vector project(const Subspace& s, const Vector& v) {
    if (v.size() != s.ambient_dim) throw std::invalid_argument("project: dimension mismatch");
    if (s.dim() == 0) return Vector::Zero(s.ambient_dim);
    return s.basis * (s.basis.transpose() * v);
}

namespace {

// Orthonormal column span of M with relative singular-value cutoff.
// Columns are sign-normalized (first non-negligible entry positive) so the
// returned basis is deterministic.
Subspace svd_span(const Matrix& m, int ambient, double tol_rank) {
    if (m.cols() == 0) return Subspace::zero(ambient);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    double smax = sv.size() > 0 ? sv(0) : 0.0;
    double cut = tol_rank * (smax > 0 ? smax : 1.0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) >= cut) ++rank;
    Matrix basis = svd.matrixU().leftCols(rank);
    for (int c = 0; c < rank; ++c) {
        for (int r = 0; r < ambient; ++r) {
            if (std::abs(basis(r, c)) > 1e-12) {
                if (basis(r, c) < 0) basis.col(c) = -basis.col(c);
                break;
            }
        }
    }
    return Subspace{ambient, basis};
}

}  // namespace

Subspace span_of(const std::vector<Vector>& vs, int ambient_dim, const Tolerances& tol) {
    Matrix m(ambient_dim, static_cast<Eigen::Index>(vs.size()));
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (vs[i].size() != ambient_dim) throw std::invalid_argument("span_of: dimension mismatch");
        m.col(static_cast<Eigen::Index>(i)) = vs[i];
    }
    return svd_span(m, ambient_dim, tol.tol_rank);
}

Subspace span_of_differences(const JetDataset& ds, const Tolerances& tol) {
    if (ds.empty()) throw std::invalid_argument("span_of_differences: empty dataset");
    std::vector<Vector> diffs;
    diffs.reserve(ds.size() - 1);
    for (std::size_t i = 1; i < ds.size(); ++i) diffs.push_back(ds[i].g - ds[0].g);
    return span_of(diffs, ds.dim(), tol);
}

bool contains(const Subspace& t, const Subspace& s, double tol) {
    if (t.ambient_dim != s.ambient_dim) return false;
    for (int c = 0; c < s.dim(); ++c) {
        Vector b = s.basis.col(c);
        if ((b - project(t, b)).norm() > tol) return false;
    }
    return true;
}

Subspace orthocomplement_in(const Subspace& s, const Subspace& t, const Tolerances& tol) {
    if (s.ambient_dim != t.ambient_dim) throw std::invalid_argument("orthocomplement_in: ambient mismatch");
    if (!contains(t, s, 1e2 * tol.tol_rank))
        throw std::invalid_argument("orthocomplement_in: S is not contained in T");
    if (t.dim() == 0 || s.dim() == t.dim()) return Subspace::zero(t.ambient_dim);
    // Project T's basis onto S^⊥ and re-orthonormalize.
    Matrix residual = t.basis;
    if (s.dim() > 0) residual -= s.basis * (s.basis.transpose() * t.basis);
    std::vector<Vector> cols;
    for (int c = 0; c < residual.cols(); ++c) cols.push_back(residual.col(c));
    Subspace out = span_of(cols, t.ambient_dim, tol);
    if (out.dim() != t.dim() - s.dim())
        throw std::runtime_error("orthocomplement_in: numerical rank mismatch");
    return out;
}

}  // namespace convexjet
