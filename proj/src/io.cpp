#include "convexjet/io.hpp"

#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace convexjet {
namespace io {

using nlohmann::json;

namespace {

json vec_to_json(const Vector& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Vector vec_from_json(const json& a) {
    Vector v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<int>(i)) = a[i].get<double>();
    return v;
}

json load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return j;
}

void save(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << std::setprecision(17) << j.dump(1) << "\n";
}

}  // namespace

JetDataset read_jets(const std::string& path, const Tolerances& tol) {
    json j = load(path);
    if (!j.contains("dim") || !j.contains("jets")) throw std::runtime_error(path + ": missing dim/jets");
    JetDataset ds(j["dim"].get<int>());
    std::size_t rec = 0;
    for (const auto& item : j["jets"]) {
        if (!item.contains("x") || !item.contains("f") || !item.contains("g"))
            throw std::runtime_error(path + ": jet record " + std::to_string(rec) + " missing x/f/g");
        ds.add({vec_from_json(item["x"]), item["f"].get<double>(), vec_from_json(item["g"])}, tol);
        ++rec;
    }
    return ds;
}

void write_jets(const std::string& path, const JetDataset& ds) {
    json j;
    j["dim"] = ds.dim();
    j["jets"] = json::array();
    for (const Jet& jet : ds.jets())
        j["jets"].push_back({{"x", vec_to_json(jet.x)}, {"f", jet.f}, {"g", vec_to_json(jet.g)}});
    save(path, j);
}

NormalDataset read_normals(const std::string& path) {
    json j = load(path);
    if (!j.contains("dim") || !j.contains("jets")) throw std::runtime_error(path + ": missing dim/jets");
    NormalDataset nd;
    nd.dim = j["dim"].get<int>();
    std::size_t rec = 0;
    for (const auto& item : j["jets"]) {
        if (!item.contains("x") || !item.contains("n"))
            throw std::runtime_error(path + ": normal record " + std::to_string(rec) + " missing x/n");
        nd.add(vec_from_json(item["x"]), vec_from_json(item["n"]));
        ++rec;
    }
    return nd;
}

void write_normals(const std::string& path, const NormalDataset& nd) {
    json j;
    j["dim"] = nd.dim;
    j["jets"] = json::array();
    for (const auto& e : nd.entries) j["jets"].push_back({{"x", vec_to_json(e.x)}, {"n", vec_to_json(e.n)}});
    save(path, j);
}

namespace {

json plan_to_json(const AugmentationPlan& plan) {
    json p;
    p["T"] = plan.T;
    p["alpha"] = plan.alpha;
    p["eps"] = plan.eps;
    p["v_eff"] = vec_to_json(plan.v_eff);
    p["cones"] = json::array();
    for (const auto& c : plan.cones)
        p["cones"].push_back({{"apex", vec_to_json(c.apex)}, {"axis", vec_to_json(c.axis)}, {"eps", c.eps}});
    p["added_jets"] = json::array();
    for (const auto& q : plan.added_jets)
        p["added_jets"].push_back({{"x", vec_to_json(q.x)}, {"f", q.f}, {"g", vec_to_json(q.g)}});
    return p;
}

json subspace_to_json(const Subspace& s) {
    json b = json::array();
    for (int c = 0; c < s.dim(); ++c) b.push_back(vec_to_json(s.basis.col(c)));
    return json{{"ambient_dim", s.ambient_dim}, {"basis", b}};
}

Subspace subspace_from_json(const json& j) {
    Subspace s;
    s.ambient_dim = j["ambient_dim"].get<int>();
    const auto& b = j["basis"];
    s.basis = Matrix(s.ambient_dim, b.size());
    for (std::size_t c = 0; c < b.size(); ++c) s.basis.col(static_cast<int>(c)) = vec_from_json(b[c]);
    return s;
}

}  // namespace

std::string validation_to_json(const ValidationReport& rep) {
    json j;
    switch (rep.verdict) {
        case Verdict::Extendible: j["verdict"] = "extendible"; break;
        case Verdict::ExtendibleAfterAugmentation: j["verdict"] = "extendible_after_augmentation"; break;
        case Verdict::Rejected: j["verdict"] = "rejected"; break;
    }
    j["failed_conditions"] = rep.failed_conditions;
    j["warnings"] = json::array();
    for (const auto& w : rep.warnings)
        j["warnings"].push_back({{"i", w.i}, {"j", w.j}, {"slack", w.slack}, {"grad_gap", w.grad_gap}});
    j["chosen_x"] = subspace_to_json(rep.chosen_X);
    if (rep.plan) {
        j["plan"] = plan_to_json(*rep.plan);
        j["new_data_margins"] = {{"min_margin", rep.new_data.min_margin},
                                 {"added_over_data", rep.new_data.margin_added_over_data},
                                 {"data_over_added", rep.new_data.margin_data_over_added},
                                 {"added_pairwise", rep.new_data.margin_added_pairwise},
                                 {"span_ok", rep.new_data.span_ok}};
    }
    return j.dump(1);
}

void write_validation(const std::string& path, const ValidationReport& rep) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << validation_to_json(rep) << "\n";
}

std::string base64_encode(const std::vector<double>& data) {
    static const char* tbl = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    const unsigned char* bytes = reinterpret_cast<const unsigned char*>(data.data());
    std::size_t n = data.size() * sizeof(double);
    std::string out;
    out.reserve((n + 2) / 3 * 4);
    for (std::size_t i = 0; i < n; i += 3) {
        unsigned v = bytes[i] << 16;
        if (i + 1 < n) v |= bytes[i + 1] << 8;
        if (i + 2 < n) v |= bytes[i + 2];
        out.push_back(tbl[(v >> 18) & 63]);
        out.push_back(tbl[(v >> 12) & 63]);
        out.push_back(i + 1 < n ? tbl[(v >> 6) & 63] : '=');
        out.push_back(i + 2 < n ? tbl[v & 63] : '=');
    }
    return out;
}

std::vector<double> base64_decode(const std::string& text) {
    auto val = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    std::vector<unsigned char> bytes;
    bytes.reserve(text.size() / 4 * 3);
    unsigned acc = 0;
    int bits = 0;
    for (char c : text) {
        int v = val(c);
        if (v < 0) continue;
        acc = (acc << 6) | static_cast<unsigned>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            bytes.push_back(static_cast<unsigned char>((acc >> bits) & 0xff));
        }
    }
    if (bytes.size() % sizeof(double) != 0) throw std::runtime_error("base64: truncated double table");
    std::vector<double> out(bytes.size() / sizeof(double));
    std::memcpy(out.data(), bytes.data(), bytes.size());
    return out;
}

void write_model(const std::string& path, const ExtensionModel& model) {
    json j;
    j["x"] = subspace_to_json(model.X);
    j["v_star"] = vec_to_json(model.v_star);
    j["lip_bound"] = model.lip_bound;
    j["n_data_planes"] = model.n_data_planes;
    j["residuals"] = {{"max_value", model.report.max_value_residual},
                      {"max_gradient", model.report.max_grad_residual},
                      {"h_grid", model.report.h_grid},
                      {"k_bound", model.report.k_bound}};
    j["grid_axes"] = json::array();
    for (const auto& axis : model.grid.axes) j["grid_axes"].push_back(axis);
    j["grid_h"] = model.grid.h_grid;
    j["guard"] = json::array();
    for (const auto& piece : model.guard.pieces)
        j["guard"].push_back({{"a", vec_to_json(piece.a)}, {"b", piece.b}});
    j["guard_dim"] = model.guard.dim;

    // plane table: per plane, dim(X) slope coords then the intercept
    std::vector<double> table;
    const int d = model.X.dim();
    table.reserve(model.planes.size() * (d + 1));
    for (const Plane& p : model.planes) {
        for (int a = 0; a < d; ++a) table.push_back(p.s(a));
        table.push_back(p.b);
    }
    j["plane_count"] = model.planes.size();
    j["planes_b64"] = base64_encode(table);
    save(path, j);
}

ExtensionModel read_model(const std::string& path) {
    json j = load(path);
    ExtensionModel model;
    model.X = subspace_from_json(j["x"]);
    model.v_star = vec_from_json(j["v_star"]);
    model.lip_bound = j["lip_bound"].get<double>();
    model.n_data_planes = j["n_data_planes"].get<int>();
    model.report.max_value_residual = j["residuals"]["max_value"].get<double>();
    model.report.max_grad_residual = j["residuals"]["max_gradient"].get<double>();
    model.report.h_grid = j["residuals"]["h_grid"].get<double>();
    model.report.k_bound = j["residuals"]["k_bound"].get<double>();
    for (const auto& axis : j["grid_axes"]) model.grid.axes.push_back(axis.get<std::vector<double>>());
    model.grid.h_grid = j["grid_h"].get<double>();
    model.guard.dim = j["guard_dim"].get<int>();
    for (const auto& piece : j["guard"])
        model.guard.pieces.push_back({vec_from_json(piece["a"]), piece["b"].get<double>()});

    const int d = model.X.dim();
    auto table = base64_decode(j["planes_b64"].get<std::string>());
    std::size_t count = j["plane_count"].get<std::size_t>();
    if (table.size() != count * (d + 1)) throw std::runtime_error(path + ": plane table size mismatch");
    for (std::size_t i = 0; i < count; ++i) {
        Plane p;
        p.s = Vector(d);
        for (int a = 0; a < d; ++a) p.s(a) = table[i * (d + 1) + a];
        p.b = table[i * (d + 1) + d];
        model.planes.push_back(p);
    }
    model.report.plane_count = model.planes.size();
    return model;
}

void write_eval_csv(const std::string& path, const ExtensionModel& model, const std::vector<Vector>& points) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << std::setprecision(17);
    const int n = model.X.ambient_dim;
    for (int a = 0; a < n; ++a) out << "x" << a << ",";
    out << "value";
    for (int a = 0; a < n; ++a) out << ",sub" << a;
    out << "\n";
    for (const Vector& x : points) {
        auto [val, sub] = model.eval(x);
        for (int a = 0; a < n; ++a) out << x(a) << ",";
        out << val;
        for (int a = 0; a < n; ++a) out << "," << sub(a);
        out << "\n";
    }
}

void write_grid_csv(const std::string& path, const GridFunction& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << std::setprecision(17);
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        Vector y = g.spec.node(i);
        for (int a = 0; a < y.size(); ++a) out << y(a) << ",";
        out << g.values[i] << "\n";
    }
}

void write_mesh(const std::string& path, const SurfaceMesh& mesh) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << std::setprecision(12);
    if (mesh.dim == 3) {
        out << "# convexjet level-set mesh\n";
        for (const auto& v : mesh.vertices) out << "v " << v(0) << " " << v(1) << " " << v(2) << "\n";
        for (const auto& n : mesh.normals) out << "vn " << n(0) << " " << n(1) << " " << n(2) << "\n";
        for (const auto& f : mesh.facets) {
            out << "f";
            for (int id : f) out << " " << id + 1 << "//" << id + 1;
            out << "\n";
        }
    } else {
        out << "x,y,nx,ny,segment\n";
        int seg = 0;
        for (const auto& f : mesh.facets) {
            for (int id : f) {
                out << mesh.vertices[id](0) << "," << mesh.vertices[id](1) << "," << mesh.normals[id](0)
                    << "," << mesh.normals[id](1) << "," << seg << "\n";
            }
            ++seg;
        }
    }
}

}  // namespace io
}  // namespace convexjet
