#include "convexjet/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "convexjet/linprog.hpp"
#include "convexjet/utils.hpp"

namespace convexjet {

namespace {

// ---------------------------------------------------------------------------
// 1-D: exact linear-time transform via the lower hull of the graph.
// ---------------------------------------------------------------------------

BiconjugateResult biconjugate_1d(const GridFunction& g, std::optional<double> dual_radius) {
    const auto& xs = g.spec.axes[0];
    const std::size_t n = xs.size();
    BiconjugateResult out;
    out.H.spec = g.spec;
    out.H.values.assign(n, 0.0);

    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i < n; ++i) {
        while (hull.size() >= 2) {
            std::size_t j = hull[hull.size() - 1], k = hull[hull.size() - 2];
            // pop j when slope(k,j) >= slope(j,i)
            if ((g[j] - g[k]) * (xs[i] - xs[j]) >= (g[i] - g[j]) * (xs[j] - xs[k]))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(i);
    }

    std::vector<Plane> planes;
    for (std::size_t t = 0; t + 1 < hull.size(); ++t) {
        std::size_t a = hull[t], b = hull[t + 1];
        double s = (g[b] - g[a]) / (xs[b] - xs[a]);
        Plane p;
        p.s = Vector::Constant(1, s);
        p.b = g[a] - s * xs[a];
        planes.push_back(p);
    }
    if (planes.empty()) {  // single hull vertex
        Plane p;
        p.s = Vector::Zero(1);
        p.b = g[hull[0]];
        planes.push_back(p);
    }

    if (dual_radius) {
        double L = *dual_radius;
        std::vector<Plane> kept;
        for (const Plane& p : planes)
            if (std::abs(p.s(0)) <= L) kept.push_back(p);
        for (double s : {-L, L}) {
            Plane p;
            p.s = Vector::Constant(1, s);
            p.b = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; ++i) p.b = std::min(p.b, g[i] - s * xs[i]);
            kept.push_back(p);
        }
        planes = std::move(kept);
        Vector y(1);
        for (std::size_t i = 0; i < n; ++i) {
            y(0) = xs[i];
            double best = -std::numeric_limits<double>::infinity();
            for (const Plane& p : planes) best = std::max(best, p.eval(y));
            out.H[i] = best;
        }
    } else {
        std::size_t t = 0;
        for (std::size_t i = 0; i < n; ++i) {
            while (t + 1 < hull.size() && xs[hull[t + 1]] < xs[i]) ++t;
            if (t + 1 < hull.size()) {
                std::size_t a = hull[t], b = hull[t + 1];
                double w = (xs[i] - xs[a]) / (xs[b] - xs[a]);
                out.H[i] = (1.0 - w) * g[a] + w * g[b];
            } else {
                out.H[i] = g[hull.back()];
            }
        }
    }
    out.planes = std::move(planes);
    return out;
}

// ---------------------------------------------------------------------------
// d >= 2: per-node support LP over the lifted grid points.
// ---------------------------------------------------------------------------

struct NodePlane {
    std::array<double, 5> u{};           // s..., t
    std::array<std::uint32_t, 5> tight{};  // constraint indices that pivoted
    int n_tight = 0;
    bool valid = false;
};

std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

BiconjugateResult biconjugate_nd(const GridFunction& g, std::optional<double> dual_radius,
                                 std::uint64_t seed) {
    const GridSpec& spec = g.spec;
    const int d = spec.dim();
    const int D = d + 1;
    const std::size_t n = spec.size();

    double gmin = g.values[0], gmax = g.values[0], gabs = 0.0;
    for (double v : g.values) {
        gmin = std::min(gmin, v);
        gmax = std::max(gmax, v);
        gabs = std::max(gabs, std::abs(v));
    }

    std::array<double, SeidelLP::kMaxDim> lo{}, hi{};
    double coord_max = 0.0;
    for (int a = 0; a < d; ++a) {
        double la;
        if (dual_radius) {
            la = *dual_radius;
        } else {
            double hmin = std::max(spec.min_spacing(a), 1e-3 * std::max(spec.h_grid, 1e-12));
            la = (gmax - gmin) / hmin + 1.0;
        }
        lo[a] = -la;
        hi[a] = la;
        coord_max = std::max(coord_max,
                             std::max(std::abs(spec.axes[a].front()), std::abs(spec.axes[a].back())));
    }
    double t_bound = gabs + 1.0;
    for (int a = 0; a < d; ++a) t_bound += hi[a] * (coord_max + 1.0);
    lo[d] = -t_bound;
    hi[d] = t_bound;

    const double eps = 1e-11 * (1.0 + gabs);

    // Precompute node coordinates once (cache-friendly constraint scans).
    std::vector<double> coords(n * d);
    {
        int idx[8];
        for (std::size_t i = 0; i < n; ++i) {
            spec.multi_index(i, idx);
            for (int a = 0; a < d; ++a) coords[i * d + a] = spec.axes[a][idx[a]];
        }
    }

    // One global scan permutation; each node starts at its own offset.
    std::vector<std::uint32_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
    std::mt19937_64 rng(seed ^ 0x6a09e667f3bcc908ull);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<NodePlane> result(n);

    auto fill_row = [&](std::uint32_t ci, SeidelLP::Row& r) {
        for (int a = 0; a < d; ++a) r[a] = coords[static_cast<std::size_t>(ci) * d + a];
        r[d] = 1.0;
        r[d + 1] = g.values[ci];
    };

    auto solve_node = [&](std::size_t node, const NodePlane* warm) {
        std::array<double, SeidelLP::kMaxDim> c{};
        for (int a = 0; a < d; ++a) c[a] = coords[node * d + a];
        c[d] = 1.0;

        std::array<double, SeidelLP::kMaxDim> u{};
        for (int j = 0; j < D; ++j) u[j] = (c[j] >= 0) ? hi[j] : lo[j];

        NodePlane np;
        std::size_t offset = splitmix(seed ^ node) % n;

        // Visit the warm-start candidates first, then everything once.
        std::vector<std::uint32_t> visited_prefix;
        visited_prefix.reserve(n + 8);
        auto process = [&](std::uint32_t ci) {
            SeidelLP::Row rk;
            fill_row(ci, rk);
            double lhs = 0.0;
            for (int j = 0; j < D; ++j) lhs += rk[j] * u[j];
            if (lhs <= rk[D] + eps) {
                visited_prefix.push_back(ci);
                return;
            }
            // Solve the prefix LP restricted to rk's boundary.
            int p = SeidelLP::pick_pivot(D, rk);
            if (std::abs(rk[p]) < 1e-300) {
                visited_prefix.push_back(ci);
                return;
            }
            std::vector<SeidelLP::Row> sub;
            sub.reserve(visited_prefix.size() + 2);
            SeidelLP::Row tmp;
            for (std::uint32_t pi : visited_prefix) {
                fill_row(pi, tmp);
                sub.push_back(SeidelLP::reduce(D, rk, p, tmp));
            }
            SeidelLP::Row bx{};
            bx[p] = 1.0;
            bx[D] = hi[p];
            sub.push_back(SeidelLP::reduce(D, rk, p, bx));
            bx[p] = -1.0;
            bx[D] = -lo[p];
            sub.push_back(SeidelLP::reduce(D, rk, p, bx));

            std::array<double, SeidelLP::kMaxDim> csub{}, losub{}, hisub{}, usub{};
            double inv = 1.0 / rk[p];
            int t = 0;
            for (int j = 0; j < D; ++j) {
                if (j == p) continue;
                csub[t] = c[j] - c[p] * rk[j] * inv;
                losub[t] = lo[j];
                hisub[t] = hi[j];
                ++t;
            }
            if (SeidelLP::solve(D - 1, sub, csub, losub, hisub, eps, usub)) {
                double acc = rk[D];
                t = 0;
                for (int j = 0; j < D; ++j) {
                    if (j == p) continue;
                    u[j] = usub[t++];
                    acc -= rk[j] * u[j];
                }
                u[p] = acc * inv;
            }
            if (np.n_tight < 5) np.tight[np.n_tight++] = ci;
            visited_prefix.push_back(ci);
        };

        if (warm && warm->valid)
            for (int k = 0; k < warm->n_tight; ++k) process(warm->tight[k]);
        process(static_cast<std::uint32_t>(node));  // own constraint binds at hull-touch nodes
        for (std::size_t i = 0; i < n; ++i) process(order[(offset + i) % n]);

        np.u = u;
        np.valid = true;
        result[node] = np;
    };

    parallel_blocks(n, 64, [&](std::size_t b, std::size_t e) {
        const NodePlane* warm = nullptr;
        for (std::size_t i = b; i < e; ++i) {
            solve_node(i, warm);
            warm = &result[i];
        }
    });

    BiconjugateResult out;
    out.H.spec = spec;
    out.H.values.assign(n, 0.0);

    // Deduplicate planes in node order (deterministic).
    std::map<std::array<long long, 5>, std::size_t> seen;
    const double qs = 1e-9 * (1.0 + gabs + hi[0]);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& u = result[i].u;
        double val = 0.0;
        for (int a = 0; a < d; ++a) val += u[a] * coords[i * d + a];
        val += u[d];
        out.H[i] = std::min(val, g.values[i]);

        std::array<long long, 5> key{};
        for (int j = 0; j < D; ++j) key[j] = llround(u[j] / qs);
        if (seen.emplace(key, out.planes.size()).second) {
            Plane p;
            p.s = Vector(d);
            for (int a = 0; a < d; ++a) p.s(a) = u[a];
            p.b = u[d];
            out.planes.push_back(p);
        }
    }
    return out;
}

}  // namespace

BiconjugateResult biconjugate(const GridFunction& g, std::optional<double> dual_radius, std::uint64_t seed) {
    if (g.values.size() != g.spec.size()) throw std::invalid_argument("biconjugate: value/spec size mismatch");
    for (double v : g.values)
        if (!std::isfinite(v)) throw std::invalid_argument("biconjugate: non-finite grid value");
    if (dual_radius && !(*dual_radius > 0)) throw std::invalid_argument("biconjugate: dual_radius must be positive");
    if (g.spec.dim() == 1) return biconjugate_1d(g, dual_radius);
    return biconjugate_nd(g, dual_radius, seed);
}

}  // namespace convexjet
