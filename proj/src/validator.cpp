#include "convexjet/validator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace convexjet {

ConvexityReport check_convexity(const JetDataset& ds, const Tolerances& tol) {
    if (ds.empty()) throw std::invalid_argument("check_convexity: empty dataset");
    const int n = static_cast<int>(ds.size());
    ConvexityReport rep;
    rep.D = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const Jet& a = ds[i];
            const Jet& b = ds[j];
            double cross = b.g.dot(a.x - b.x);
            double slack = a.f - b.f - cross;
            rep.D(i, j) = slack;
            double scale = std::abs(a.f) + std::abs(b.f) + std::abs(cross);
            if (slack < -tol.activity(scale)) rep.violations.push_back({i, j, slack});
        }
    }
    return rep;
}

namespace {

double pair_scale(const JetDataset& ds, const Matrix&, int i, int j) {
    const Jet& a = ds[i];
    const Jet& b = ds[j];
    return std::abs(a.f) + std::abs(b.f) + std::abs(b.g.dot(a.x - b.x));
}

}  // namespace

Cw1Report check_cw1(const JetDataset& ds, const Matrix& D, const Tolerances& tol) {
    Cw1Report rep;
    const int n = static_cast<int>(ds.size());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double gap = (ds[i].g - ds[j].g).norm();
            if (gap <= tol.tol_grad) continue;
            double scale = pair_scale(ds, D, i, j);
            double act = tol.activity(scale);
            double slack = D(i, j);
            if (slack <= act) {
                rep.failures.push_back({i, j, slack, gap});
            } else if (slack <= 1e-6 * (1.0 + scale) && gap > 0.5) {
                rep.warnings.push_back({i, j, slack, gap});
            }
        }
    }
    rep.pass = rep.failures.empty();
    return rep;
}

ConeReport check_cone_empty(const ConeSpec& cone, const JetDataset& ds) {
    ConeReport rep;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (cone.contains(ds[i].x)) {
            rep.pass = false;
            rep.offending.push_back(static_cast<int>(i));
        }
    }
    return rep;
}

CornerTrend detect_corner_trend(const JetDataset& ds, const Matrix& D, const Subspace& x_space,
                                const Tolerances& tol) {
    CornerTrend out;
    const int n = static_cast<int>(ds.size());
    if (x_space.dim() >= x_space.ambient_dim || n < 6) return out;  // no X⊥ to escape along

    double max_gap = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) max_gap = std::max(max_gap, (ds[i].g - ds[j].g).norm());
    double gap_floor = std::max(100.0 * tol.tol_grad, 0.05 * max_gap);

    double diameter = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) diameter = std::max(diameter, (ds[i].x - ds[j].x).norm());

    struct Cand {
        int i, j;
        double pd, slack, quot, gap, perp;
        Vector mid;
    };
    std::vector<Cand> cands;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double gap = (ds[i].g - ds[j].g).norm();
            if (gap <= gap_floor) continue;
            Vector dx = ds[i].x - ds[j].x;
            double pd = project(x_space, dx).norm();
            if (pd <= 1e-300) continue;
            double slack = std::max(0.0, std::min(D(i, j), D(j, i)));
            double perp_i = (ds[i].x - project(x_space, ds[i].x)).norm();
            double perp_j = (ds[j].x - project(x_space, ds[j].x)).norm();
            Vector mid = project(x_space, 0.5 * (ds[i].x + ds[j].x));
            cands.push_back({i, j, pd, slack, slack / pd, gap, std::max(perp_i, perp_j), mid});
        }
    }
    if (cands.size() < 3) return out;
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.pd > b.pd; });

    // Greedy chain: projected pair distance shrinking geometrically.
    for (std::size_t start = 0; start < cands.size(); ++start) {
        std::vector<const Cand*> chain{&cands[start]};
        for (std::size_t k = start + 1; k < cands.size(); ++k) {
            if (cands[k].pd <= 0.8 * chain.back()->pd) chain.push_back(&cands[k]);
        }
        if (chain.size() < 3) continue;
        const Cand& first = *chain.front();
        const Cand& last = *chain.back();
        if (first.pd < 4.0 * last.pd) continue;  // not enough convergence
        double gap_min = 1e300, gap_max = 0, q_min = 1e300, q_max = 0;
        double perp_min = 1e300, perp_max = 0, mid_spread = 0;
        for (const Cand* c : chain) {
            gap_min = std::min(gap_min, c->gap);
            gap_max = std::max(gap_max, c->gap);
            q_min = std::min(q_min, c->quot);
            q_max = std::max(q_max, c->quot);
            perp_min = std::min(perp_min, c->perp);
            perp_max = std::max(perp_max, c->perp);
            mid_spread = std::max(mid_spread, (c->mid - first.mid).norm());
        }
        if (gap_min < 0.5 * gap_max) continue;       // gradient gap must not decay
        if (q_min < 0.05 * q_max) continue;          // slack must scale with the pair distance
        if (mid_spread > 4.0 * first.pd) continue;   // pairs must converge to one place in X
        double escape = perp_max - perp_min;
        if (escape < std::max(0.5 * first.pd, 1e-6 + 0.02 * diameter)) continue;  // needs X⊥ escape
        out.found = true;
        for (const Cand* c : chain) out.chain.push_back({c->i, c->j});
        return out;
    }
    return out;
}

namespace {

// Evaluates the minimal extension through its decomposition: exact identity.
double eval_m(const Decomposition& dec, const Vector& x) {
    return dec.c.eval(dec.Y.coords(x)) + dec.v.dot(x);
}

}  // namespace

AugmentationPlan find_augmentation(const JetDataset& ds, const Subspace& x_space, const Decomposition& dec,
                                   const Tolerances& tol, std::uint64_t seed) {
    if (dec.Y.dim() >= x_space.dim())
        throw std::invalid_argument("find_augmentation: Y = X, no augmentation required");
    if (!contains(x_space, dec.Y, 1e-7))
        throw std::invalid_argument("find_augmentation: X does not contain Y");

    double alpha;
    double beta;
    Vector shift;  // Y coordinates
    if (dec.Y.dim() == 0) {
        // m is affine along Y = {0}; any positive slope scale works for the
        // margin algebra. Cap by 2K when the data has gradients at all.
        alpha = dec.K > 0 ? std::min(1.0, 2.0 * dec.K) : 1.0;
        beta = std::numeric_limits<double>::infinity();
        for (const auto& p : dec.c.pieces) beta = std::min(beta, p.b);
        shift = Vector::Zero(0);
    } else {
        CoercivityMinorant cm = coercivity_minorant(dec);  // throws NotCoercive
        alpha = cm.alpha;
        beta = cm.beta;
        shift = cm.shift;
    }

    AugmentationPlan plan;
    plan.alpha = alpha;
    plan.v_eff = dec.v + dec.Y.from_coords(shift);

    Subspace w_space = orthocomplement_in(dec.Y, x_space, tol);
    const int m_axes = w_space.dim();

    Vector centroid = Vector::Zero(ds.dim());
    for (const Jet& j : ds.jets()) centroid += j.x;
    centroid /= static_cast<double>(ds.size());
    double radius = 1.0;
    for (const Jet& j : ds.jets()) radius = std::max(radius, (j.x - centroid).norm());

    std::mt19937_64 rng(seed ^ 0xc2b2ae3d27d4eb4full);
    std::uniform_real_distribution<double> jitter(0.0, 0.5);

    double eps = 0.5;
    for (int a = 0; a < m_axes; ++a) {
        Vector w = w_space.basis.col(a);
        bool placed = false;
        for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
            Vector axis = (attempt % 2 == 0) ? w : Vector(-w);
            double reach = (2.0 + attempt / 2 + (attempt > 1 ? jitter(rng) : 0.0)) * radius;
            double b_hi = -std::numeric_limits<double>::infinity();
            for (const Jet& j : ds.jets()) b_hi = std::max(b_hi, axis.dot(j.x - centroid));
            Vector apex = centroid + (b_hi + reach) * axis;
            double e = eps;
            for (int h = 0; h < 8; ++h, e *= 0.5) {
                ConeSpec cone{apex, axis, e, dec.Y};
                if (check_cone_empty(cone, ds).pass) {
                    plan.cones.push_back(cone);
                    placed = true;
                    eps = std::min(eps, e);
                    break;
                }
            }
        }
        if (!placed) throw NoConeFound("find_augmentation: cone search budget exhausted");
    }
    // One aperture for the whole plan: the smallest that worked everywhere.
    plan.eps = eps;
    for (auto& cone : plan.cones) {
        cone.eps = eps;
        if (!check_cone_empty(cone, ds).pass) throw NoConeFound("find_augmentation: shared aperture failed");
    }

    // T from the two selection inequalities, in the recentered frame
    // c~ = c - <shift,.>, v_eff = v + shift:  m = c~ ∘ P_Y + <v_eff, .>.
    auto c_tilde = [&](const Vector& p) { return eval_m(dec, p) - plan.v_eff.dot(p); };
    double t1_rhs = -std::numeric_limits<double>::infinity();
    for (const auto& cone : plan.cones) {
        double py = project(dec.Y, cone.apex).norm();
        t1_rhs = std::max(t1_rhs, alpha * py + c_tilde(cone.apex));
    }
    double t_needed = (2.0 - beta + t1_rhs) / (eps * alpha);
    for (std::size_t i = 0; i < plan.cones.size(); ++i) {
        for (std::size_t j = 0; j < plan.cones.size(); ++j) {
            if (i == j) continue;
            const Vector& pi = plan.cones[i].apex;
            const Vector& pj = plan.cones[j].apex;
            double rhs = 1.0 + c_tilde(pj) - c_tilde(pi) + eps * alpha * plan.cones[j].axis.dot(pi - pj);
            t_needed = std::max(t_needed, rhs / (eps * alpha));
        }
    }
    plan.T = 1.1 * std::max(t_needed, 1.0);

    double sep_tol = tol.tol_pt * (1.0 + ds.scale());
    for (int tries = 0; tries < 32; ++tries) {
        plan.added_jets.clear();
        for (const auto& cone : plan.cones) {
            Jet q;
            q.x = cone.apex + plan.T * cone.axis;
            q.f = eval_m(dec, q.x) + 1.0;
            q.g = plan.v_eff + eps * alpha * cone.axis;
            plan.added_jets.push_back(q);
        }
        bool distinct = true;
        for (std::size_t i = 0; i < plan.added_jets.size() && distinct; ++i) {
            for (std::size_t j = i + 1; j < plan.added_jets.size(); ++j)
                if ((plan.added_jets[i].x - plan.added_jets[j].x).norm() <= sep_tol) distinct = false;
            for (const Jet& d : ds.jets())
                if ((plan.added_jets[i].x - d.x).norm() <= sep_tol) distinct = false;
        }
        if (distinct) return plan;
        plan.T *= 1.01;
    }
    throw NoConeFound("find_augmentation: could not separate added points");
}

NewDataReport check_new_data(const JetDataset& ds, const AugmentationPlan& plan, const PolyhedralConvex& m,
                             const Subspace& x_space, const Tolerances& tol) {
    NewDataReport rep;
    if (plan.empty()) {
        rep.pass = true;
        return rep;
    }
    for (const Jet& q : plan.added_jets) {
        for (const Jet& x : ds.jets()) {
            rep.margin_added_over_data =
                std::min(rep.margin_added_over_data, q.f - x.f - x.g.dot(q.x - x.x));
            rep.margin_data_over_added =
                std::min(rep.margin_data_over_added, x.f - q.f - q.g.dot(x.x - q.x));
        }
    }
    for (std::size_t i = 0; i < plan.added_jets.size(); ++i) {
        for (std::size_t j = 0; j < plan.added_jets.size(); ++j) {
            if (i == j) continue;
            const Jet& a = plan.added_jets[i];
            const Jet& b = plan.added_jets[j];
            rep.margin_added_pairwise =
                std::min(rep.margin_added_pairwise, a.f - b.f - b.g.dot(a.x - b.x));
        }
    }
    rep.min_margin = std::min({rep.margin_added_over_data, rep.margin_data_over_added,
                               rep.margin_added_pairwise});

    JetDataset augmented = ds;
    for (const Jet& q : plan.added_jets) augmented.add(q, tol);
    Subspace span = span_of_differences(augmented, tol);
    rep.span_ok = span.dim() == x_space.dim() && contains(x_space, span, 1e-7);

    (void)m;
    rep.pass = rep.min_margin >= 1.0 - std::max(tol.tol_eq, 1e-9) && rep.span_ok;
    return rep;
}

ValidationReport validate(const JetDataset& ds, const std::optional<Subspace>& x_space, const Tolerances& tol,
                          std::uint64_t seed) {
    if (ds.empty()) throw std::invalid_argument("validate: empty dataset");
    ValidationReport rep;

    Subspace y = span_of_differences(ds, tol);
    if (x_space.has_value()) {
        if (x_space->ambient_dim != ds.dim()) throw std::invalid_argument("validate: X dimension mismatch");
        rep.chosen_X = *x_space;
        if (!contains(rep.chosen_X, y, 1e-7))
            rep.failed_conditions.push_back("span: Y = span{g_i - g_j} is not contained in X");
    } else {
        rep.chosen_X = y;
    }

    ConvexityReport conv = check_convexity(ds, tol);
    if (!conv.pass()) rep.failed_conditions.push_back("convexity: supporting-plane inequality violated");

    if (conv.pass()) {
        Cw1Report cw1 = check_cw1(ds, conv.D, tol);
        rep.warnings = cw1.warnings;
        if (!cw1.pass)
            rep.failed_conditions.push_back("equality-case: active pair with mismatched gradients (CW1)");

        CornerTrend trend = detect_corner_trend(ds, conv.D, rep.chosen_X, tol);
        if (trend.found)
            rep.failed_conditions.push_back(
                "corner trend: projected pairs converge with persistent gradient gap while escaping X-perp");
    }

    if (!rep.failed_conditions.empty()) {
        rep.verdict = Verdict::Rejected;
        return rep;
    }

    if (y.dim() == rep.chosen_X.dim()) {
        rep.verdict = Verdict::Extendible;
        return rep;
    }

    try {
        PolyhedralConvex m = build_minimal(ds, tol);
        Decomposition dec = decompose(m, tol);
        AugmentationPlan plan = find_augmentation(ds, rep.chosen_X, dec, tol, seed);
        rep.new_data = check_new_data(ds, plan, m, rep.chosen_X, tol);
        if (!rep.new_data.pass) {
            rep.failed_conditions.push_back("new-data margins: augmented jet fails the unit-slack bound");
            rep.verdict = Verdict::Rejected;
            return rep;
        }
        rep.plan = std::move(plan);
        rep.verdict = Verdict::ExtendibleAfterAugmentation;
    } catch (const NoConeFound& e) {
        rep.failed_conditions.push_back(std::string("cone search: ") + e.what());
        rep.verdict = Verdict::Rejected;
    } catch (const NotCoercive& e) {
        rep.failed_conditions.push_back(std::string("coercivity: ") + e.what());
        rep.verdict = Verdict::Rejected;
    }
    return rep;
}

}  // namespace convexjet
