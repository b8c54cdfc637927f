#include "convexjet/hypersurface.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace convexjet {

NormalConditionsReport check_normal_conditions(const NormalDataset& nd, const Tolerances& tol) {
    if (nd.entries.empty()) throw std::invalid_argument("check_normal_conditions: empty dataset");
    NormalConditionsReport rep;
    const int n = static_cast<int>(nd.entries.size());

    double scale = 0.0;
    for (const auto& e : nd.entries) scale = std::max(scale, e.x.lpNorm<Eigen::Infinity>());
    double band = std::max(tol.tol_pos * (1.0 + scale), 32.0 * 2.22e-16 * (1.0 + scale));

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double v = nd.entries[j].n.dot(nd.entries[i].x - nd.entries[j].x);
            if (v > band) rep.halfspace_violations.push_back({i, j});
        }
    }

    rep.r_inf = std::numeric_limits<double>::infinity();
    for (const auto& e : nd.entries) rep.r_inf = std::min(rep.r_inf, e.n.dot(e.x));
    rep.origin_ok = rep.r_inf > 0;

    if (rep.origin_ok && rep.halfspace_violations.empty()) {
        JetDataset jets(nd.dim);
        double r = 0.9 * rep.r_inf;
        jets.add({Vector::Zero(nd.dim), 0.0, Vector::Zero(nd.dim)}, tol);
        for (const auto& e : nd.entries) jets.add({e.x, 1.0, (2.0 / r) * e.n}, tol);
        ConvexityReport conv = check_convexity(jets, tol);
        Cw1Report cw1 = check_cw1(jets, conv.D, tol);
        rep.gradient_ok = conv.pass() && cw1.pass;
        rep.warnings = cw1.warnings;
    }

    rep.pass = rep.halfspace_violations.empty() && rep.origin_ok && rep.gradient_ok;
    return rep;
}

JetDataset build_surface_jet(const NormalDataset& nd, const Tolerances& tol) {
    NormalConditionsReport rep = check_normal_conditions(nd, tol);
    if (!rep.origin_ok)
        throw std::invalid_argument("build_surface_jet: inf <N(y), y> <= 0, origin not strictly inside");
    if (!rep.pass) throw std::invalid_argument("build_surface_jet: normal conditions failed");

    double r = 0.9 * rep.r_inf;
    JetDataset jets(nd.dim);
    jets.add({Vector::Zero(nd.dim), 0.0, Vector::Zero(nd.dim)}, tol);
    for (const auto& e : nd.entries) jets.add({e.x, 1.0, (2.0 / r) * e.n}, tol);

    ConvexityReport conv = check_convexity(jets, tol);
    if (!conv.pass()) throw std::runtime_error("build_surface_jet: induced jet is not convex-compatible");
    return jets;
}

namespace {

Vector bisect_edge(const ExtensionModel& model, Vector inside, Vector outside, double level) {
    double fi = model.eval(inside).first;
    for (int it = 0; it < 80; ++it) {
        Vector mid = 0.5 * (inside + outside);
        double fm = model.eval(mid).first;
        if (std::abs(fm - level) <= 1e-6) return mid;
        if ((fm <= level) == (fi <= level)) {
            inside = mid;
            fi = fm;
        } else {
            outside = mid;
        }
    }
    return 0.5 * (inside + outside);
}

}  // namespace

bool SurfaceMesh::watertight() const {
    if (dim != 3) return true;
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& f : facets) {
        for (std::size_t k = 0; k < f.size(); ++k) {
            int a = f[k], b = f[(k + 1) % f.size()];
            edge_count[{std::min(a, b), std::max(a, b)}]++;
        }
    }
    for (const auto& [e, c] : edge_count)
        if (c != 2) return false;
    return true;
}

SurfaceMesh extract_levelset(const ExtensionModel& model, double level, const Vector& box_lo,
                             const Vector& box_hi, int resolution) {
    const int n = model.X.ambient_dim;
    if (n != 2 && n != 3)
        throw std::invalid_argument("extract_levelset: mesh extraction supports ambient dimension 2 or 3");
    if (resolution < 3) throw std::invalid_argument("extract_levelset: resolution too small");

    SurfaceMesh mesh;
    mesh.dim = n;
    mesh.unbounded_dirs = model.X.dim() < n;

    const int r = resolution;
    std::vector<double> step(n), base(n);
    for (int a = 0; a < n; ++a) {
        base[a] = box_lo(a);
        step[a] = (box_hi(a) - box_lo(a)) / (r - 1);
    }

    auto corner = [&](const std::array<int, 3>& idx) {
        Vector x(n);
        for (int a = 0; a < n; ++a) x(a) = base[a] + step[a] * idx[a];
        return x;
    };
    auto corner_id = [&](const std::array<int, 3>& idx) {
        long long id = 0;
        for (int a = n - 1; a >= 0; --a) id = id * r + idx[a];
        return id;
    };

    // Sample F on the lattice.
    std::size_t total = 1;
    for (int a = 0; a < n; ++a) total *= r;
    std::vector<double> f(total);
    std::vector<bool> inside(total);
    {
        std::array<int, 3> idx{0, 0, 0};
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::size_t rem = flat;
            for (int a = 0; a < n; ++a) {
                idx[a] = static_cast<int>(rem % r);
                rem /= r;
            }
            f[flat] = model.eval(corner(idx)).first;
            inside[flat] = f[flat] <= level;
            bool on_boundary = false;
            for (int a = 0; a < n; ++a)
                if (idx[a] == 0 || idx[a] == r - 1) on_boundary = true;
            if (on_boundary && inside[flat]) mesh.clipped = true;
        }
    }
    bool any_in = false, any_out = false;
    for (std::size_t i = 0; i < total; ++i) (inside[i] ? any_in : any_out) = true;
    if (!any_in || !any_out)
        throw std::runtime_error("extract_levelset: level not within the sampled range");

    auto flat_of = [&](const std::array<int, 3>& idx) {
        std::size_t fl = 0;
        for (int a = n - 1; a >= 0; --a) fl = fl * r + idx[a];
        return fl;
    };

    std::map<std::pair<long long, long long>, int> edge_vertex;
    auto vertex_on_edge = [&](const std::array<int, 3>& ia, const std::array<int, 3>& ib) {
        long long ka = corner_id(ia), kb = corner_id(ib);
        auto key = std::make_pair(std::min(ka, kb), std::max(ka, kb));
        auto it = edge_vertex.find(key);
        if (it != edge_vertex.end()) return it->second;
        Vector pa = corner(ia), pb = corner(ib);
        bool a_in = inside[flat_of(ia)];
        Vector v = a_in ? bisect_edge(model, pa, pb, level) : bisect_edge(model, pb, pa, level);
        int id = static_cast<int>(mesh.vertices.size());
        mesh.vertices.push_back(v);
        Vector sub = model.eval(v).second;
        double norm = sub.norm();
        mesh.normals.push_back(norm > 1e-14 ? Vector(sub / norm) : sub);
        edge_vertex.emplace(key, id);
        return id;
    };

    if (n == 2) {
        for (int i = 0; i + 1 < r; ++i) {
            for (int j = 0; j + 1 < r; ++j) {
                std::array<std::array<int, 3>, 4> c = {{{i, j, 0}, {i + 1, j, 0}, {i + 1, j + 1, 0}, {i, j + 1, 0}}};
                int mask = 0;
                for (int k = 0; k < 4; ++k)
                    if (inside[flat_of(c[k])]) mask |= 1 << k;
                if (mask == 0 || mask == 15) continue;
                auto edge = [&](int k) { return vertex_on_edge(c[k], c[(k + 1) % 4]); };
                auto seg = [&](int e0, int e1) { mesh.facets.push_back({edge(e0), edge(e1)}); };
                switch (mask) {
                    case 1: case 14: seg(3, 0); break;
                    case 2: case 13: seg(0, 1); break;
                    case 4: case 11: seg(1, 2); break;
                    case 8: case 7:  seg(2, 3); break;
                    case 3: case 12: seg(3, 1); break;
                    case 6: case 9:  seg(0, 2); break;
                    case 5: case 10: {
                        // saddle: split by the cell center
                        Vector ctr(2);
                        ctr << base[0] + step[0] * (i + 0.5), base[1] + step[1] * (j + 0.5);
                        bool ctr_in = model.eval(ctr).first <= level;
                        bool diag_in = inside[flat_of(c[0])];
                        if (ctr_in == diag_in) {
                            seg(3, 0);
                            seg(1, 2);
                        } else {
                            seg(0, 1);
                            seg(2, 3);
                        }
                        break;
                    }
                    default: break;
                }
            }
        }
        return mesh;
    }

    // 3-D: six tetrahedra per lattice cell (Kuhn subdivision: consistent
    // face diagonals across neighboring cells).
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int i = 0; i + 1 < r; ++i) {
        for (int j = 0; j + 1 < r; ++j) {
            for (int k = 0; k + 1 < r; ++k) {
                std::array<int, 3> origin{i, j, k};
                for (const auto& perm : perms) {
                    std::array<std::array<int, 3>, 4> t;
                    t[0] = origin;
                    for (int v = 1; v < 4; ++v) {
                        t[v] = t[v - 1];
                        t[v][perm[v - 1]] += 1;
                    }
                    int mask = 0;
                    for (int v = 0; v < 4; ++v)
                        if (inside[flat_of(t[v])]) mask |= 1 << v;
                    if (mask == 0 || mask == 15) continue;

                    auto tri = [&](int a0, int b0, int a1, int b1, int a2, int b2) {
                        int v0 = vertex_on_edge(t[a0], t[b0]);
                        int v1 = vertex_on_edge(t[a1], t[b1]);
                        int v2 = vertex_on_edge(t[a2], t[b2]);
                        if (v0 == v1 || v1 == v2 || v0 == v2) return;
                        // orient the triangle with the outward subgradient
                        Vector e1 = mesh.vertices[v1] - mesh.vertices[v0];
                        Vector e2 = mesh.vertices[v2] - mesh.vertices[v0];
                        Vector nrm(3);
                        nrm << e1(1) * e2(2) - e1(2) * e2(1), e1(2) * e2(0) - e1(0) * e2(2),
                            e1(0) * e2(1) - e1(1) * e2(0);
                        if (nrm.dot(mesh.normals[v0]) < 0) std::swap(v1, v2);
                        mesh.facets.push_back({v0, v1, v2});
                    };

                    int in_count = ((mask & 1) != 0) + ((mask & 2) != 0) + ((mask & 4) != 0) + ((mask & 8) != 0);
                    if (in_count == 1 || in_count == 3) {
                        int lone = -1;
                        for (int v = 0; v < 4; ++v) {
                            bool vin = (mask >> v) & 1;
                            if ((in_count == 1 && vin) || (in_count == 3 && !vin)) lone = v;
                        }
                        int others[3], w = 0;
                        for (int v = 0; v < 4; ++v)
                            if (v != lone) others[w++] = v;
                        tri(lone, others[0], lone, others[1], lone, others[2]);
                    } else {  // two in, two out: quad across four edges
                        int ins[2], outs[2], wi = 0, wo = 0;
                        for (int v = 0; v < 4; ++v) {
                            if ((mask >> v) & 1) ins[wi++] = v;
                            else outs[wo++] = v;
                        }
                        int e00 = vertex_on_edge(t[ins[0]], t[outs[0]]);
                        int e01 = vertex_on_edge(t[ins[0]], t[outs[1]]);
                        int e10 = vertex_on_edge(t[ins[1]], t[outs[0]]);
                        int e11 = vertex_on_edge(t[ins[1]], t[outs[1]]);
                        auto tri_ids = [&](int v0, int v1, int v2) {
                            if (v0 == v1 || v1 == v2 || v0 == v2) return;
                            Vector e1 = mesh.vertices[v1] - mesh.vertices[v0];
                            Vector e2 = mesh.vertices[v2] - mesh.vertices[v0];
                            Vector nrm(3);
                            nrm << e1(1) * e2(2) - e1(2) * e2(1), e1(2) * e2(0) - e1(0) * e2(2),
                                e1(0) * e2(1) - e1(1) * e2(0);
                            int a = v1, b = v2;
                            if (nrm.dot(mesh.normals[v0]) < 0) std::swap(a, b);
                            mesh.facets.push_back({v0, a, b});
                        };
                        tri_ids(e00, e01, e11);
                        tri_ids(e00, e11, e10);
                    }
                }
            }
        }
    }
    return mesh;
}

SurfaceReport verify_surface(const SurfaceMesh& mesh, const NormalDataset& nd, const ExtensionModel& model,
                             double level) {
    SurfaceReport rep;
    for (const auto& e : nd.entries) {
        auto [val, sub] = model.eval(e.x);
        rep.max_level_residual = std::max(rep.max_level_residual, std::abs(val - level));
        double cosang = sub.dot(e.n) / std::max(sub.norm(), 1e-300);
        cosang = std::clamp(cosang, -1.0, 1.0);
        rep.max_normal_angle_deg =
            std::max(rep.max_normal_angle_deg, std::acos(cosang) * 180.0 / std::numbers::pi);
    }
    rep.origin_value = model.eval(Vector::Zero(model.X.ambient_dim)).first;
    rep.interior_margin = level - rep.origin_value;
    rep.pass = rep.max_level_residual <= 1e-6 && rep.max_normal_angle_deg <= 5.0 &&
               rep.interior_margin > 1e-6;
    (void)mesh;
    return rep;
}

}  // namespace convexjet
