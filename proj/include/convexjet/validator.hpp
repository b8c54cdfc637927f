#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "convexjet/polyhedral.hpp"
#include "convexjet/subspace.hpp"
#include "convexjet/types.hpp"

namespace convexjet {

/// Pairwise supporting-plane slacks: D(i,j) = f_i - f_j - <g_j, x_i - x_j>.
/// D(i,i) = 0 exactly. Convexity of the jet means D >= 0 entrywise.
struct ConvexityReport {
    struct Violation {
        int i = 0, j = 0;
        double slack = 0.0;
    };
    Matrix D;
    std::vector<Violation> violations;
    bool pass() const { return violations.empty(); }
};

ConvexityReport check_convexity(const JetDataset& ds, const Tolerances& tol = {});

/// Equality-case gradient compatibility: an active pair (slack at the
/// activity threshold) with distinct gradients is a hard failure; pairs in
/// the near-active band with a large gradient gap are conditioning warnings.
struct Cw1Report {
    struct Item {
        int i = 0, j = 0;
        double slack = 0.0, grad_gap = 0.0;
    };
    bool pass = true;
    std::vector<Item> failures;
    std::vector<Item> warnings;
};

Cw1Report check_cw1(const JetDataset& ds, const Matrix& D, const Tolerances& tol = {});

/// V = { x : eps <w, x - apex> >= |P_Y(x - apex)| }.
struct ConeSpec {
    Vector apex;
    Vector axis;  ///< unit
    double eps = 0.0;
    Subspace lateral;  ///< Y; axis ⊥ Y

    bool contains(const Vector& x) const {
        Vector d = x - apex;
        return eps * axis.dot(d) >= project(lateral, d).norm();
    }
};

struct ConeReport {
    bool pass = true;
    std::vector<int> offending;
};

/// Pass iff no data point lies in the cone (strict inequality, no margin).
ConeReport check_cone_empty(const ConeSpec& cone, const JetDataset& ds);

/// Extra jets forcing essential coercivity in the directions X ∩ Y⊥:
/// q_j = p_j + T w_j with value m(q_j) + 1 and gradient v + eps*alpha*w_j.
struct AugmentationPlan {
    std::vector<ConeSpec> cones;
    double T = 0.0;
    double alpha = 0.0;
    double eps = 0.0;
    Vector v_eff;  ///< gradient base point (drift + recentering shift)
    std::vector<Jet> added_jets;

    bool empty() const { return added_jets.empty(); }
};

struct NoConeFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Builds the plan for Y = dec.Y ⊊ X. Cone axes are an orthonormal basis of
/// X ∩ Y⊥; apexes are placed beyond the data along each axis; T is the max of
/// the two selection inequalities inflated by 10%.
AugmentationPlan find_augmentation(const JetDataset& ds, const Subspace& x_space, const Decomposition& dec,
                                   const Tolerances& tol = {}, std::uint64_t seed = 0);

/// Margin families guaranteeing that the augmented jet stays jointly convex
/// with unit slack, plus the span condition on the augmented gradients.
struct NewDataReport {
    double min_margin = std::numeric_limits<double>::infinity();
    double margin_added_over_data = std::numeric_limits<double>::infinity();   ///< family (1)
    double margin_data_over_added = std::numeric_limits<double>::infinity();   ///< family (2)
    double margin_added_pairwise = std::numeric_limits<double>::infinity();    ///< family (3)
    bool span_ok = true;
    bool pass = true;
};

NewDataReport check_new_data(const JetDataset& ds, const AugmentationPlan& plan, const PolyhedralConvex& m,
                             const Subspace& x_space, const Tolerances& tol = {});

/// Chain of data pairs whose projections onto X converge while gradients stay
/// apart and the points escape along X⊥ — the finite signature of a corner in
/// a direction the chosen X cannot make coercive.
struct CornerTrend {
    bool found = false;
    std::vector<std::pair<int, int>> chain;
};

CornerTrend detect_corner_trend(const JetDataset& ds, const Matrix& D, const Subspace& x_space,
                                const Tolerances& tol = {});

enum class Verdict { Extendible, ExtendibleAfterAugmentation, Rejected };

struct ValidationReport {
    Verdict verdict = Verdict::Rejected;
    std::vector<std::string> failed_conditions;
    std::vector<Cw1Report::Item> warnings;
    std::optional<AugmentationPlan> plan;
    Subspace chosen_X;
    NewDataReport new_data;
};

/// Full finite-data extendibility decision. chosen_X defaults to the span of
/// gradient differences; a caller-supplied X must contain it.
ValidationReport validate(const JetDataset& ds, const std::optional<Subspace>& x_space = std::nullopt,
                          const Tolerances& tol = {}, std::uint64_t seed = 0);

}  // namespace convexjet
