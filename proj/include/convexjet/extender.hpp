#pragma once

#include <optional>

#include "convexjet/envelope.hpp"
#include "convexjet/grid.hpp"
#include "convexjet/validator.hpp"

namespace convexjet {

/// Jet data pushed into X coordinates: points a_i = coords(P_X x_i),
/// values h_i = f_i - <v*, x_i>, gradients dh_i = coords(g_i - v*).
/// Jets projecting onto the same point must agree and are merged.
struct ProjectedData {
    std::vector<Vector> a;
    std::vector<double> h;
    std::vector<Vector> dh;
    std::vector<std::vector<int>> sources;  ///< dataset indices merged into each datum

    std::size_t size() const { return a.size(); }
};

struct ProjectionCollision : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// dec must be the decomposition of the minimal extension of ds plus the
/// plan's added jets (its Y is the build subspace X, its v is v*).
ProjectedData project_data(const JetDataset& ds, const Decomposition& dec,
                           const std::optional<AugmentationPlan>& plan, const Tolerances& tol = {});

/// Inverse-fourth-power Shepard blend of first-order Taylor polynomials.
/// Matches values and gradients at the data points and is smooth elsewhere.
class ShepardInterpolant {
  public:
    explicit ShepardInterpolant(const ProjectedData& p) : p_(p) {}

    /// value and gradient at y
    std::pair<double, Vector> operator()(const Vector& y) const;

  private:
    ProjectedData p_;
};

enum class MajorantMode {
    SmoothMax,     ///< max(h~, h) + 2*delta
    PaperLiteral,  ///< h~ + sqrt((h - h~)^2 + delta^2) + 2*delta
};

struct MajorantChecks {
    double max_value_err = 0.0;
    double max_grad_err = 0.0;
    int snapped_data = 0;
};

/// Grid samples of a function g >= h := c with g = h and (discretely)
/// grad g = dh at snapped data nodes; delta is a smooth squared-distance
/// surrogate vanishing on the data. Throws when a snapped datum fails the
/// jet-match check or when the grid does not cover the data.
GridFunction build_majorant(const ProjectedData& p, const PolyhedralConvex& c, const GridSpec& spec,
                            MajorantMode mode, double k_bound, const Tolerances& tol,
                            MajorantChecks* checks = nullptr);

struct BuildReport {
    double max_value_residual = 0.0;
    double max_grad_residual = 0.0;
    double h_grid = 0.0;
    double k_bound = 0.0;
    std::size_t plane_count = 0;
};

/// Dual-plane model of the extension F(x) = max_planes(<s, coords(P_X x)> + b) + <v*, x>.
/// Data planes come first so subgradients at the data resolve to the
/// prescribed gradients under lowest-index tie-breaking; the guard (the
/// reduced minimal extension) keeps F >= m everywhere.
struct ExtensionModel {
    Subspace X;
    Vector v_star;
    std::vector<Plane> planes;
    int n_data_planes = 0;
    PolyhedralConvex guard;  ///< ambient minimal extension of the augmented jet
    double lip_bound = 0.0;
    BuildReport report;
    GridSpec grid;

    /// value and a subgradient (ambient); deterministic lowest-index tie-break
    std::pair<double, Vector> eval(const Vector& x) const;
};

struct BuildError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Assembles planes (data planes, guard pieces, envelope planes), clips every
/// non-data plane so none exceeds a datum, and measures residuals at the data.
ExtensionModel assemble_model(const BiconjugateResult& bi, const ProjectedData& p, const Decomposition& dec,
                              const PolyhedralConvex& m_guard, const JetDataset& ds_star,
                              std::optional<double> dual_radius, const Tolerances& tol = {});

struct BuildOptions {
    std::vector<int> grid_counts;            ///< per X axis; default 65 each
    std::optional<double> dual_radius;       ///< explicit slope box
    bool lipschitz_auto = false;             ///< dual radius = 3 * max|g| policy
    MajorantMode mode = MajorantMode::SmoothMax;
    bool widen_to_full = false;
    std::optional<Subspace> x_basis;
    std::uint64_t seed = 0;
    Tolerances tol;
};

struct BuildResult {
    ValidationReport validation;
    std::optional<ExtensionModel> model;  ///< empty when validation rejected
    JetDataset augmented;                 ///< dataset actually extended (with plan jets)
};

/// Validate, augment when the span is widened, and build the evaluable model.
BuildResult build_extension(const JetDataset& ds, const BuildOptions& opt = {});

}  // namespace convexjet
