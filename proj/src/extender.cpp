#include "convexjet/extender.hpp"

#include <algorithm>
#include <cmath>

#include "convexjet/utils.hpp"

namespace convexjet {

ProjectedData project_data(const JetDataset& ds, const Decomposition& dec,
                           const std::optional<AugmentationPlan>& plan, const Tolerances& tol) {
    const Subspace& x_space = dec.Y;
    const Vector& v_star = dec.v;

    std::vector<Jet> all(ds.jets().begin(), ds.jets().end());
    if (plan && !plan->empty())
        all.insert(all.end(), plan->added_jets.begin(), plan->added_jets.end());

    ProjectedData p;
    double scale = ds.scale();
    for (std::size_t i = 0; i < all.size(); ++i) {
        const Jet& j = all[i];
        Vector gr = j.g - v_star;
        if ((gr - x_space.basis * (x_space.basis.transpose() * gr)).norm() > 1e-6 * (1.0 + dec.K))
            throw ProjectionCollision("project_data: gradient leaves X, rank misdetection");
        Vector a = x_space.coords(j.x);
        double h = j.f - v_star.dot(j.x);
        Vector dh = x_space.coords(gr);

        bool merged = false;
        for (std::size_t k = 0; k < p.a.size(); ++k) {
            if ((p.a[k] - a).norm() <= tol.tol_pt * (1.0 + scale)) {
                if (std::abs(p.h[k] - h) <= 1e-9 * (1.0 + std::abs(h)) &&
                    (p.dh[k] - dh).norm() <= tol.tol_grad * (1.0 + dec.K)) {
                    p.sources[k].push_back(static_cast<int>(i));
                    merged = true;
                    break;
                }
                throw ProjectionCollision("project_data: points collide under P_X with conflicting jets");
            }
        }
        if (!merged) {
            p.a.push_back(a);
            p.h.push_back(h);
            p.dh.push_back(dh);
            p.sources.push_back({static_cast<int>(i)});
        }
    }
    return p;
}

std::pair<double, Vector> ShepardInterpolant::operator()(const Vector& y) const {
    const std::size_t n = p_.size();
    const int d = static_cast<int>(y.size());
    if (n == 1) {
        double t = p_.h[0] + p_.dh[0].dot(y - p_.a[0]);
        return {t, p_.dh[0]};
    }

    double rmin = std::numeric_limits<double>::infinity();
    std::size_t imin = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = (y - p_.a[i]).norm();
        if (r < rmin) {
            rmin = r;
            imin = i;
        }
    }
    if (rmin <= 1e-13) return {p_.h[imin] + p_.dh[imin].dot(y - p_.a[imin]), p_.dh[imin]};

    // weights (rmin/r_i)^4 keep the sum well scaled near the data
    double wsum = 0.0, vsum = 0.0;
    Vector num_grad = Vector::Zero(d);
    Vector wgrad_sum = Vector::Zero(d);
    for (std::size_t i = 0; i < n; ++i) {
        Vector diff = y - p_.a[i];
        double r2 = diff.squaredNorm();
        double q = rmin * rmin / r2;
        double w = q * q;  // (rmin/r)^4
        double taylor = p_.h[i] + p_.dh[i].dot(diff);
        Vector wg = (-4.0 * w / r2) * diff;
        wsum += w;
        vsum += w * taylor;
        num_grad += wg * taylor + w * p_.dh[i];
        wgrad_sum += wg;
    }
    double val = vsum / wsum;
    Vector grad = (num_grad - val * wgrad_sum) / wsum;
    return {val, grad};
}

GridFunction build_majorant(const ProjectedData& p, const PolyhedralConvex& c, const GridSpec& spec,
                            MajorantMode mode, double k_bound, const Tolerances& tol,
                            MajorantChecks* checks) {
    const int d = spec.dim();
    if (c.dim != d) throw std::invalid_argument("build_majorant: dimension mismatch");
    for (const Vector& a : p.a)
        if (!spec.covers(a)) throw std::invalid_argument("build_majorant: grid does not cover the data");

    ShepardInterpolant shepard(p);
    GridFunction g;
    g.spec = spec;
    g.values.assign(spec.size(), 0.0);

    parallel_blocks(spec.size(), 256, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            Vector y = spec.node(i);
            double h = c.eval(y);
            double ht = shepard(y).first;
            double delta = 0.0;
            {
                double inv_sum = 0.0;
                bool on_data = false;
                for (const Vector& a : p.a) {
                    double r2 = (y - a).squaredNorm();
                    if (r2 <= 1e-26) {
                        on_data = true;
                        break;
                    }
                    inv_sum += 1.0 / r2;
                }
                if (!on_data && inv_sum > 0) delta = 1.0 / inv_sum;
            }
            double v;
            if (mode == MajorantMode::SmoothMax)
                v = std::max(ht, h) + 2.0 * delta;
            else
                v = ht + std::sqrt((h - ht) * (h - ht) + delta * delta) + 2.0 * delta;
            g.values[i] = v;
        }
    });

    // Jet-match verification at snapped data nodes.
    MajorantChecks local;
    double snap_tol = 1e-9 * (1.0 + spec.h_grid);
    for (std::size_t k = 0; k < p.size(); ++k) {
        int idx[8];
        bool snapped = true;
        for (int a = 0; a < d; ++a) {
            int i = spec.find(a, p.a[k](a), snap_tol);
            if (i < 0) {
                snapped = false;
                break;
            }
            idx[a] = i;
        }
        if (!snapped) continue;
        ++local.snapped_data;
        std::size_t flat = spec.flat_index(idx);
        local.max_value_err = std::max(local.max_value_err, std::abs(g.values[flat] - p.h[k]));

        for (int a = 0; a < d; ++a) {
            if (idx[a] == 0 || idx[a] + 1 == static_cast<int>(spec.axes[a].size())) continue;
            int lo_idx[8], hi_idx[8];
            std::copy(idx, idx + d, lo_idx);
            std::copy(idx, idx + d, hi_idx);
            --lo_idx[a];
            ++hi_idx[a];
            double dx = spec.axes[a][hi_idx[a]] - spec.axes[a][lo_idx[a]];
            double diff = (g.values[spec.flat_index(hi_idx)] - g.values[spec.flat_index(lo_idx)]) / dx;
            local.max_grad_err = std::max(local.max_grad_err, std::abs(diff - p.dh[k](a)));
        }
    }
    if (checks) *checks = local;

    double value_gate = 1e-7 * (1.0 + k_bound + spec.h_grid);
    double grad_gate = std::max(0.1, 20.0 * spec.h_grid) * (1.0 + k_bound);
    if (local.max_value_err > value_gate || local.max_grad_err > grad_gate)
        throw BuildError("build_majorant: jet-match check failed at a data node (value err " +
                         std::to_string(local.max_value_err) + ", grad err " +
                         std::to_string(local.max_grad_err) + ")");
    (void)tol;
    return g;
}

std::pair<double, Vector> ExtensionModel::eval(const Vector& x) const {
    if (x.size() != X.ambient_dim) throw std::invalid_argument("ExtensionModel::eval: dimension mismatch");
    Vector y = X.coords(x);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < planes.size(); ++i) {
        double v = planes[i].eval(y);
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    double value = best + v_star.dot(x);
    Vector sub = X.from_coords(planes[arg].s) + v_star;
    return {value, sub};
}

ExtensionModel assemble_model(const BiconjugateResult& bi, const ProjectedData& p, const Decomposition& dec,
                              const PolyhedralConvex& m_guard, const JetDataset& ds_star,
                              std::optional<double> dual_radius, const Tolerances& tol) {
    ExtensionModel model;
    model.X = dec.Y;
    model.v_star = dec.v;
    model.guard = m_guard;
    model.grid = bi.H.spec;

    for (std::size_t k = 0; k < p.size(); ++k) {
        Plane t;
        t.s = p.dh[k];
        t.b = p.h[k] - p.dh[k].dot(p.a[k]);
        model.planes.push_back(t);
    }
    model.n_data_planes = static_cast<int>(model.planes.size());
    for (const auto& piece : dec.c.pieces) model.planes.push_back({piece.a, piece.b});
    for (const Plane& pl : bi.planes) model.planes.push_back(pl);

    // No plane may exceed a datum: clip intercepts against every data jet.
    for (std::size_t i = static_cast<std::size_t>(model.n_data_planes); i < model.planes.size(); ++i) {
        Plane& pl = model.planes[i];
        for (std::size_t k = 0; k < p.size(); ++k) {
            double excess = pl.eval(p.a[k]) - p.h[k];
            if (excess > 0) pl.b -= excess;
        }
    }

    double d_dim = static_cast<double>(model.X.dim());
    model.lip_bound = dual_radius ? (*dual_radius) * std::sqrt(std::max(1.0, d_dim)) + model.v_star.norm()
                                  : [&] {
                                        double s = 0.0;
                                        for (const Plane& pl : model.planes) s = std::max(s, pl.s.norm());
                                        return s + model.v_star.norm();
                                    }();

    model.report.h_grid = bi.H.spec.h_grid;
    model.report.k_bound = dec.K;
    model.report.plane_count = model.planes.size();

    double h_step = bi.H.spec.h_grid > 0 ? bi.H.spec.h_grid : 1e-3;
    for (const Jet& j : ds_star.jets()) {
        auto [val, sub] = model.eval(j.x);
        model.report.max_value_residual = std::max(model.report.max_value_residual, std::abs(val - j.f));
        Vector num(j.x.size());
        for (int a = 0; a < j.x.size(); ++a) {
            Vector xp = j.x, xm = j.x;
            xp(a) += h_step;
            xm(a) -= h_step;
            num(a) = (model.eval(xp).first - model.eval(xm).first) / (2.0 * h_step);
        }
        model.report.max_grad_residual = std::max(model.report.max_grad_residual, (num - j.g).norm());
        (void)sub;
    }
    if (model.report.max_value_residual > 10.0 * h_step * (1.0 + dec.K))
        throw BuildError("assemble_model: data value residual " +
                         std::to_string(model.report.max_value_residual) + " exceeds the build gate");
    (void)tol;
    return model;
}

namespace {

GridSpec make_build_grid(const ProjectedData& p, const std::vector<int>& counts) {
    const int d = static_cast<int>(p.a.front().size());
    Vector lo(d), hi(d);
    for (int a = 0; a < d; ++a) {
        double mn = p.a[0](a), mx = p.a[0](a);
        for (const Vector& q : p.a) {
            mn = std::min(mn, q(a));
            mx = std::max(mx, q(a));
        }
        double extent = mx - mn;
        if (extent <= 0) extent = std::max(1.0, std::abs(mn));
        double h = extent / std::max(counts[a] - 9, 1);
        lo(a) = mn - 4.0 * h;
        hi(a) = mx + 4.0 * h;
    }
    GridSpec spec = GridSpec::box(lo, hi, counts);

    // Snap data coordinates into the axes while the grid stays desk-sized.
    std::size_t budget = d <= 2 ? 400 : 48;
    for (int a = 0; a < d; ++a) {
        if (spec.axes[a].size() + p.size() > budget) continue;
        for (const Vector& q : p.a) spec.insert(a, q(a), 1e-9 * (1.0 + spec.h_grid));
    }
    return spec;
}

}  // namespace

BuildResult build_extension(const JetDataset& ds, const BuildOptions& opt) {
    BuildResult out;
    std::optional<Subspace> x_choice = opt.x_basis;
    if (opt.widen_to_full) x_choice = Subspace::full(ds.dim());

    out.validation = validate(ds, x_choice, opt.tol, opt.seed);
    out.augmented = ds;
    if (out.validation.verdict == Verdict::Rejected) return out;
    if (out.validation.plan)
        for (const Jet& q : out.validation.plan->added_jets) out.augmented.add(q, opt.tol);

    PolyhedralConvex m_star = build_minimal(out.augmented, opt.tol);
    Decomposition dec = decompose(m_star, opt.tol);
    if (dec.Y.dim() != out.validation.chosen_X.dim() || !contains(out.validation.chosen_X, dec.Y, 1e-6))
        throw BuildError("build_extension: augmented span does not match the chosen X");

    ProjectedData p = project_data(ds, dec, out.validation.plan, opt.tol);

    if (dec.Y.dim() == 0) {
        // Affine case: one plane, no grid.
        ExtensionModel model;
        model.X = dec.Y;
        model.v_star = dec.v;
        model.guard = m_star;
        Plane pl;
        pl.s = Vector::Zero(0);
        pl.b = p.h[0];
        model.planes.push_back(pl);
        model.n_data_planes = 1;
        model.lip_bound = model.v_star.norm();
        model.report.k_bound = dec.K;
        for (const Jet& j : out.augmented.jets()) {
            double val = pl.b + model.v_star.dot(j.x);
            model.report.max_value_residual =
                std::max(model.report.max_value_residual, std::abs(val - j.f));
        }
        out.model = std::move(model);
        return out;
    }
    if (dec.Y.dim() > 4) throw BuildError("build_extension: envelope grids above dimension 4 are unsupported");

    std::vector<int> counts = opt.grid_counts;
    if (counts.empty()) counts.assign(dec.Y.dim(), dec.Y.dim() >= 3 ? 21 : 65);
    if (static_cast<int>(counts.size()) != dec.Y.dim())
        throw std::invalid_argument("build_extension: grid_counts size must match dim X");

    std::optional<double> radius = opt.dual_radius;
    if (opt.lipschitz_auto && !radius) radius = 3.0 * ds.gradient_bound();
    if (radius) {
        double need = 0.0;
        for (const Vector& dh : p.dh) need = std::max(need, dh.lpNorm<Eigen::Infinity>());
        if (*radius < need) radius = need * (1.0 + 1e-9);  // keep the data planes feasible
    }

    GridSpec spec = make_build_grid(p, counts);
    GridFunction majorant = build_majorant(p, dec.c, spec, opt.mode, dec.K, opt.tol);
    BiconjugateResult bi = biconjugate(majorant, radius, opt.seed);
    out.model = assemble_model(bi, p, dec, m_star, out.augmented, radius, opt.tol);
    return out;
}

}  // namespace convexjet
