#include "convexjet/polyhedral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "convexjet/linprog.hpp"
#include "convexjet/validator.hpp"

namespace convexjet {

PolyhedralConvex build_minimal(const JetDataset& ds, const Tolerances& tol) {
    if (ds.empty()) throw std::invalid_argument("build_minimal: empty dataset");
    auto conv = check_convexity(ds, tol);
    if (!conv.violations.empty())
        throw std::invalid_argument("build_minimal: dataset violates the convexity inequalities");

    PolyhedralConvex m;
    m.dim = ds.dim();
    for (const Jet& j : ds.jets()) {
        Vector a = j.g;
        double b = j.f - j.g.dot(j.x);
        bool dup = false;
        for (const auto& p : m.pieces) {
            if ((p.a - a).norm() <= 1e-12 * (1.0 + a.norm()) && std::abs(p.b - b) <= 1e-12 * (1.0 + std::abs(b))) {
                dup = true;
                break;
            }
        }
        if (!dup) m.pieces.push_back({a, b});
    }
    return m;
}

std::pair<double, std::vector<int>> eval_with_active_set(const PolyhedralConvex& m, const Vector& x,
                                                         const Tolerances& tol) {
    double best = -std::numeric_limits<double>::infinity();
    double scale = 0.0;
    std::vector<double> vals(m.pieces.size());
    for (std::size_t i = 0; i < m.pieces.size(); ++i) {
        vals[i] = m.pieces[i].a.dot(x) + m.pieces[i].b;
        best = std::max(best, vals[i]);
        scale = std::max(scale, std::abs(vals[i]));
    }
    double act = tol.activity(scale);
    std::vector<int> active;
    for (std::size_t i = 0; i < m.pieces.size(); ++i)
        if (best - vals[i] <= act) active.push_back(static_cast<int>(i));
    return {best, active};
}

Decomposition decompose(const PolyhedralConvex& m, const Tolerances& tol) {
    if (m.pieces.empty()) throw std::invalid_argument("decompose: no pieces");
    std::vector<Vector> diffs;
    for (std::size_t i = 1; i < m.pieces.size(); ++i) diffs.push_back(m.pieces[i].a - m.pieces[0].a);
    Subspace y = span_of(diffs, m.dim, tol);

    Decomposition dec;
    dec.Y = y;
    dec.v = m.pieces[0].a - project(y, m.pieces[0].a);
    dec.K = m.slope_bound();

    // Every slope must share the same Y⊥ component; disagreement signals a
    // misdetected rank.
    for (const auto& p : m.pieces) {
        Vector vi = p.a - project(y, p.a);
        if ((vi - dec.v).norm() > 1e3 * tol.tol_rank * (1.0 + dec.K))
            throw std::runtime_error("decompose: inconsistent orthogonal slope components");
    }

    dec.c.dim = y.dim();
    for (const auto& p : m.pieces) dec.c.pieces.push_back({y.coords(p.a), p.b});
    return dec;
}

namespace {

// Support function of the slope set in direction d (Y coordinates).
double support(const PolyhedralConvex& c, const Vector& d) {
    double h = -std::numeric_limits<double>::infinity();
    for (const auto& p : c.pieces) h = std::max(h, p.a.dot(d));
    return h;
}

std::vector<Vector> sphere_sample(int dim, int count, std::uint64_t seed) {
    std::vector<Vector> dirs;
    dirs.reserve(count);
    if (dim == 1) {
        dirs.push_back(Vector::Constant(1, 1.0));
        dirs.push_back(Vector::Constant(1, -1.0));
        return dirs;
    }
    if (dim == 2) {
        for (int i = 0; i < count; ++i) {
            double t = 2.0 * std::numbers::pi * i / count;
            Vector d(2);
            d << std::cos(t), std::sin(t);
            dirs.push_back(d);
        }
        return dirs;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    for (int i = 0; i < count; ++i) {
        Vector d(dim);
        do {
            for (int j = 0; j < dim; ++j) d(j) = nd(rng);
        } while (d.norm() < 1e-6);
        dirs.push_back(d.normalized());
    }
    return dirs;
}

// A few steps of projected subgradient descent on phi(d) = h(d) - <u, d>
// over the unit sphere, from start d0.
Vector refine_direction(const PolyhedralConvex& c, const Vector& u, Vector d) {
    int dim = static_cast<int>(d.size());
    double step = 0.5;
    for (int it = 0; it < 60; ++it) {
        double best = -std::numeric_limits<double>::infinity();
        Vector sbest = Vector::Zero(dim);
        for (const auto& p : c.pieces) {
            double v = p.a.dot(d);
            if (v > best) {
                best = v;
                sbest = p.a;
            }
        }
        Vector grad = sbest - u;
        grad -= grad.dot(d) * d;  // tangential part
        if (grad.norm() < 1e-14) break;
        Vector cand = (d - step * grad.normalized()).normalized();
        double phi_d = support(c, d) - u.dot(d);
        double phi_c = support(c, cand) - u.dot(cand);
        if (phi_c < phi_d) d = cand;
        else step *= 0.5;
        if (step < 1e-10) break;
    }
    return d;
}

}  // namespace

CoercivityMinorant coercivity_minorant(const Decomposition& dec) {
    int k = dec.Y.dim();
    if (k < 1) throw std::invalid_argument("coercivity_minorant: dim Y must be >= 1");
    const PolyhedralConvex& c = dec.c;

    CoercivityMinorant out;
    out.beta = std::numeric_limits<double>::infinity();
    for (const auto& p : c.pieces) out.beta = std::min(out.beta, p.b);

    double kbound = 0.0;
    for (const auto& p : c.pieces) kbound = std::max(kbound, p.a.norm());
    kbound = std::max(kbound, 1e-12);

    if (k == 1) {
        double smax = -std::numeric_limits<double>::infinity(), smin = std::numeric_limits<double>::infinity();
        for (const auto& p : c.pieces) {
            smax = std::max(smax, p.a(0));
            smin = std::min(smin, p.a(0));
        }
        out.alpha = 0.5 * (smax - smin);
        out.shift = Vector::Constant(1, 0.5 * (smax + smin));
        if (out.alpha <= 0) throw NotCoercive("coercivity_minorant: slope hull has empty interior");
        return out;
    }

    // Largest ball inside the slope hull: maximize rho subject to
    // <d, u> + rho <= h(d) over sampled unit directions d.
    const int n_dirs = 4096;
    auto dirs = sphere_sample(k, n_dirs, 0x9e3779b97f4a7c15ull);

    std::vector<SeidelLP::Row> rows;
    rows.reserve(dirs.size());
    for (const Vector& d : dirs) {
        SeidelLP::Row r{};
        for (int j = 0; j < k; ++j) r[j] = d(j);
        r[k] = 1.0;
        r[k + 1] = support(c, d);
        rows.push_back(r);
    }
    std::array<double, SeidelLP::kMaxDim> obj{}, lo{}, hi{};
    obj[k] = 1.0;
    for (int j = 0; j < k; ++j) {
        lo[j] = -2.0 * kbound;
        hi[j] = 2.0 * kbound;
    }
    lo[k] = -4.0 * kbound;
    hi[k] = 2.0 * kbound;
    std::array<double, SeidelLP::kMaxDim> u{};
    std::mt19937_64 rng(12345);
    std::shuffle(rows.begin(), rows.end(), rng);
    if (!SeidelLP::solve(k + 1, rows, obj, lo, hi, 1e-12 * (1.0 + kbound), u))
        throw NotCoercive("coercivity_minorant: inscribed-ball LP infeasible");

    Vector shift(k);
    for (int j = 0; j < k; ++j) shift(j) = u[j];

    // Certify: re-evaluate the margin on a fresh sample plus locally refined
    // worst directions; keep the certified minimum.
    double alpha = u[k];
    auto cert = sphere_sample(k, n_dirs, 0x853c49e6748fea9bull);
    std::vector<std::pair<double, Vector>> worst;
    for (const Vector& d : cert) {
        double phi = support(c, d) - shift.dot(d);
        alpha = std::min(alpha, phi);
        worst.push_back({phi, d});
    }
    std::partial_sort(worst.begin(), worst.begin() + std::min<std::size_t>(8, worst.size()), worst.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < std::min<std::size_t>(8, worst.size()); ++i) {
        Vector d = refine_direction(c, shift, worst[i].second);
        alpha = std::min(alpha, support(c, d) - shift.dot(d));
    }

    out.alpha = alpha;
    out.shift = shift;
    if (!(out.alpha > 0)) throw NotCoercive("coercivity_minorant: slope hull has empty interior");
    return out;
}

}  // namespace convexjet
