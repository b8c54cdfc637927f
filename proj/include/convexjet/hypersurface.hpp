#pragma once

#include "convexjet/extender.hpp"

namespace convexjet {

/// Points with prescribed outward unit normals.
struct NormalDataset {
    int dim = 0;
    struct Entry {
        Vector x;
        Vector n;  ///< unit
    };
    std::vector<Entry> entries;

    void add(const Vector& x, const Vector& n) {
        if (dim == 0) dim = static_cast<int>(x.size());
        if (x.size() != dim || n.size() != dim)
            throw std::invalid_argument("NormalDataset::add: dimension mismatch");
        if (std::abs(n.norm() - 1.0) > 1e-9)
            throw std::invalid_argument("NormalDataset::add: normal must be unit length");
        entries.push_back({x, n});
    }
};

struct NormalConditionsReport {
    bool pass = false;
    std::vector<std::pair<int, int>> halfspace_violations;  ///< (i, j): <N_j, x_i - x_j> > 0
    double r_inf = 0.0;                                     ///< min_i <N_i, x_i>
    bool origin_ok = false;                                 ///< r_inf > 0
    bool gradient_ok = true;                                ///< induced-jet equality-case check
    std::vector<Cw1Report::Item> warnings;
};

/// Supporting-halfspace, origin-containment, and induced equality-case checks.
NormalConditionsReport check_normal_conditions(const NormalDataset& nd, const Tolerances& tol = {});

/// Scaled jet of the reconstruction: origin jet (0, 0, 0) plus
/// (x_i, 1, (2/r) N_i) with r = 0.9 * r_inf.
JetDataset build_surface_jet(const NormalDataset& nd, const Tolerances& tol = {});

/// Polyline (2-D) or triangle mesh (3-D) of a level set of the model.
struct SurfaceMesh {
    int dim = 0;
    std::vector<Vector> vertices;
    std::vector<Vector> normals;            ///< per-vertex, normalized subgradients
    std::vector<std::vector<int>> facets;   ///< segments (2 ids) or triangles (3 ids)
    bool clipped = false;                   ///< body reaches the query box
    bool unbounded_dirs = false;            ///< dim X < n: cylinder-like body

    /// Each interior edge of a 3-D mesh must be shared by exactly two facets.
    bool watertight() const;
};

/// Marching-cells extraction of { F = level } over the box, with vertices
/// refined along cell edges to |F - level| <= 1e-6. 3-D cells are split into
/// six tetrahedra on a consistent lattice, so the mesh is watertight.
SurfaceMesh extract_levelset(const ExtensionModel& model, double level, const Vector& box_lo,
                             const Vector& box_hi, int resolution);

struct SurfaceReport {
    double max_level_residual = 0.0;   ///< max_i |F(x_i) - level|
    double max_normal_angle_deg = 0.0; ///< angle between subgradient and N_i
    double origin_value = 0.0;         ///< F(0)
    double interior_margin = 0.0;      ///< level - F(0)
    bool pass = false;
};

SurfaceReport verify_surface(const SurfaceMesh& mesh, const NormalDataset& nd, const ExtensionModel& model,
                             double level = 1.0);

}  // namespace convexjet
