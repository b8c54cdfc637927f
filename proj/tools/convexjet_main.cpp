// convexjet: validate, extend, and query C1 convex extensions of 1-jet data,
// and reconstruct convex hypersurfaces from prescribed normals.
//
// Exit codes: 0 success/extendible, 1 I/O or usage error,
//             2 extendible after augmentation, 3 rejected.

#include <CLI11.hpp>
#include <iostream>

#include "convexjet/generators.hpp"
#include "convexjet/io.hpp"

using namespace convexjet;

namespace {

struct CommonOpts {
    double tol_eq = -1.0, tol_grad = -1.0;
    std::vector<int> grid;
    double dual_radius = -1.0;
    bool lipschitz = false;
    bool widen_to_full = false;
    std::string x_basis_path;
    std::uint64_t seed = 0;

    Tolerances tolerances() const {
        Tolerances t;
        if (tol_eq > 0) t.tol_eq = tol_eq;
        if (tol_grad > 0) t.tol_grad = tol_grad;
        return t;
    }

    BuildOptions build_options(int /*dim*/) const {
        BuildOptions opt;
        opt.grid_counts = grid;
        if (dual_radius > 0) opt.dual_radius = dual_radius;
        opt.lipschitz_auto = lipschitz;
        opt.widen_to_full = widen_to_full;
        opt.seed = seed;
        opt.tol = tolerances();
        if (!x_basis_path.empty()) {
            JetDataset basis = io::read_jets(x_basis_path);
            std::vector<Vector> vs;
            for (const Jet& j : basis.jets()) vs.push_back(j.g);
            opt.x_basis = span_of(vs, basis.dim(), opt.tol);
        }
        return opt;
    }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--tol-eq", o.tol_eq, "activity threshold override");
    cmd->add_option("--tol-grad", o.tol_grad, "gradient threshold override");
    cmd->add_option("--grid", o.grid, "grid node count per X axis");
    cmd->add_option("--dual-radius", o.dual_radius, "explicit dual slope box radius");
    cmd->add_flag("--lipschitz", o.lipschitz, "dual truncation at 3*max|g|");
    cmd->add_flag("--widen-to-full", o.widen_to_full, "choose X = R^n instead of the gradient span");
    cmd->add_option("--x-basis", o.x_basis_path, "jet file whose gradients span X");
    cmd->add_option("--seed", o.seed, "random seed");
}

int verdict_exit(Verdict v) {
    switch (v) {
        case Verdict::Extendible: return 0;
        case Verdict::ExtendibleAfterAugmentation: return 2;
        case Verdict::Rejected: return 3;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"convex 1-jet extension toolkit"};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen_cmd = app.add_subcommand("gen", "emit a named example dataset");
    std::string gen_name, gen_out = "dataset.json";
    int k_max = 10, gen_dim = 2, gen_count = 20, gen_n = 32;
    double gen_k_bound = 1.0;
    std::uint64_t gen_seed = 7;
    gen_cmd->add_option("name", gen_name,
                        "example-1.2 | example-1.6-E1..E4 | quadratic | logsumexp | sqrtexp | "
                        "sqrtexp-3d | bounded-k | sphere-normals | square-normals")
        ->required();
    gen_cmd->add_option("--k-max", k_max, "truncation index");
    gen_cmd->add_option("--dim", gen_dim, "ambient dimension");
    gen_cmd->add_option("--count", gen_count, "sample count");
    gen_cmd->add_option("--n", gen_n, "number of normals");
    gen_cmd->add_option("--K", gen_k_bound, "gradient bound");
    gen_cmd->add_option("--seed", gen_seed, "random seed");
    gen_cmd->add_option("--out", gen_out, "output path");

    // ---- validate ----
    auto* val_cmd = app.add_subcommand("validate", "decide extendibility of a jet file");
    std::string val_in, val_out = "validation.json";
    CommonOpts val_opts;
    val_cmd->add_option("input", val_in)->required();
    val_cmd->add_option("--out", val_out, "report path");
    add_common(val_cmd, val_opts);

    // ---- extend ----
    auto* ext_cmd = app.add_subcommand("extend", "build an evaluable extension model");
    std::string ext_in, ext_out = "model.json", ext_report = "";
    CommonOpts ext_opts;
    ext_cmd->add_option("input", ext_in)->required();
    ext_cmd->add_option("--out", ext_out, "model path");
    ext_cmd->add_option("--report", ext_report, "also write the validation report here");
    add_common(ext_cmd, ext_opts);

    // ---- eval ----
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a model at the points of a jet file");
    std::string eval_model, eval_points, eval_out = "eval.csv";
    eval_cmd->add_option("model", eval_model)->required();
    eval_cmd->add_option("points", eval_points, "jet file supplying query points")->required();
    eval_cmd->add_option("--out", eval_out);

    // ---- surface ----
    auto* surf_cmd = app.add_subcommand("surface", "reconstruct a convex body from normals");
    std::string surf_in, surf_out = "surface.obj", surf_model_out = "";
    int surf_res = 129;
    double surf_level = 1.0, surf_box = 0.0;
    CommonOpts surf_opts;
    surf_cmd->add_option("input", surf_in, "normals file")->required();
    surf_cmd->add_option("--out", surf_out, "mesh path (.obj 3-D, .csv 2-D)");
    surf_cmd->add_option("--model-out", surf_model_out, "also save the extension model");
    surf_cmd->add_option("--resolution", surf_res, "marching resolution per axis");
    surf_cmd->add_option("--level", surf_level);
    surf_cmd->add_option("--box", surf_box, "half-width of the query box (default: auto)");
    add_common(surf_cmd, surf_opts);

    // ---- verify ----
    auto* ver_cmd = app.add_subcommand("verify", "check a model against its source jets");
    std::string ver_model, ver_jets;
    ver_cmd->add_option("model", ver_model)->required();
    ver_cmd->add_option("jets", ver_jets)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_cmd->parsed()) {
            if (gen_name == "example-1.2") io::write_jets(gen_out, gen::example_1_2(k_max));
            else if (gen_name == "example-1.6-E1") io::write_jets(gen_out, gen::example_1_6(1, k_max));
            else if (gen_name == "example-1.6-E2") io::write_jets(gen_out, gen::example_1_6(2, k_max));
            else if (gen_name == "example-1.6-E3") io::write_jets(gen_out, gen::example_1_6(3, k_max));
            else if (gen_name == "example-1.6-E4") io::write_jets(gen_out, gen::example_1_6(4, k_max));
            else if (gen_name == "quadratic") io::write_jets(gen_out, gen::quadratic(gen_dim, gen_count, gen_seed));
            else if (gen_name == "logsumexp") io::write_jets(gen_out, gen::logsumexp(gen_dim, gen_count, gen_seed));
            else if (gen_name == "sqrtexp") io::write_jets(gen_out, gen::sqrt_exp_2d(gen_count, gen_seed));
            else if (gen_name == "sqrtexp-3d") io::write_jets(gen_out, gen::sqrt_exp_3d(gen_count, gen_seed));
            else if (gen_name == "bounded-k")
                io::write_jets(gen_out, gen::bounded_gradient(gen_dim, gen_count, gen_k_bound, gen_seed));
            else if (gen_name == "sphere-normals") io::write_normals(gen_out, gen::sphere_normals(gen_n, gen_dim));
            else if (gen_name == "square-normals") io::write_normals(gen_out, gen::square_normals());
            else {
                std::cerr << "unknown example id: " << gen_name << "\n";
                return 1;
            }
            return 0;
        }

        if (val_cmd->parsed()) {
            JetDataset ds = io::read_jets(val_in, val_opts.tolerances());
            BuildOptions opt = val_opts.build_options(ds.dim());
            std::optional<Subspace> x;
            if (opt.widen_to_full) x = Subspace::full(ds.dim());
            else if (opt.x_basis) x = opt.x_basis;
            ValidationReport rep = validate(ds, x, opt.tol, opt.seed);
            io::write_validation(val_out, rep);
            std::cout << io::validation_to_json(rep) << "\n";
            return verdict_exit(rep.verdict);
        }

        if (ext_cmd->parsed()) {
            JetDataset ds = io::read_jets(ext_in, ext_opts.tolerances());
            BuildResult res = build_extension(ds, ext_opts.build_options(ds.dim()));
            if (!ext_report.empty()) io::write_validation(ext_report, res.validation);
            if (!res.model) {
                std::cerr << io::validation_to_json(res.validation) << "\n";
                return 3;
            }
            io::write_model(ext_out, *res.model);
            std::cout << "model written to " << ext_out << " (planes " << res.model->planes.size()
                      << ", max value residual " << res.model->report.max_value_residual
                      << ", max gradient residual " << res.model->report.max_grad_residual << ")\n";
            return verdict_exit(res.validation.verdict);
        }

        if (eval_cmd->parsed()) {
            ExtensionModel model = io::read_model(eval_model);
            JetDataset pts = io::read_jets(eval_points);
            std::vector<Vector> xs;
            for (const Jet& j : pts.jets()) xs.push_back(j.x);
            io::write_eval_csv(eval_out, model, xs);
            return 0;
        }

        if (surf_cmd->parsed()) {
            NormalDataset nd = io::read_normals(surf_in);
            auto cond = check_normal_conditions(nd, surf_opts.tolerances());
            if (!cond.pass) {
                std::cerr << "normal conditions failed (r_inf = " << cond.r_inf << ", halfspace violations "
                          << cond.halfspace_violations.size() << ")\n";
                return 3;
            }
            JetDataset jets = build_surface_jet(nd, surf_opts.tolerances());
            BuildOptions opt = surf_opts.build_options(nd.dim);
            opt.widen_to_full = true;  // the body needs coercivity in every direction
            BuildResult res = build_extension(jets, opt);
            if (!res.model) {
                std::cerr << io::validation_to_json(res.validation) << "\n";
                return 3;
            }
            if (!surf_model_out.empty()) io::write_model(surf_model_out, *res.model);
            double half = surf_box;
            if (half <= 0) {
                for (const auto& e : nd.entries) half = std::max(half, e.x.lpNorm<Eigen::Infinity>());
                half *= 1.5;
            }
            Vector lo = Vector::Constant(nd.dim, -half), hi = Vector::Constant(nd.dim, half);
            SurfaceMesh mesh = extract_levelset(*res.model, surf_level, lo, hi, surf_res);
            io::write_mesh(surf_out, mesh);
            SurfaceReport rep = verify_surface(mesh, nd, *res.model, surf_level);
            std::cout << "mesh written to " << surf_out << " (vertices " << mesh.vertices.size()
                      << ", facets " << mesh.facets.size() << ", watertight "
                      << (mesh.watertight() ? "yes" : "no") << ", max level residual "
                      << rep.max_level_residual << ", max normal angle " << rep.max_normal_angle_deg
                      << " deg)\n";
            return rep.pass ? 0 : 3;
        }

        if (ver_cmd->parsed()) {
            ExtensionModel model = io::read_model(ver_model);
            JetDataset ds = io::read_jets(ver_jets);
            double max_val = 0.0, max_grad = 0.0;
            double h = model.report.h_grid > 0 ? model.report.h_grid : 1e-3;
            for (const Jet& j : ds.jets()) {
                auto [val, sub] = model.eval(j.x);
                (void)sub;
                max_val = std::max(max_val, std::abs(val - j.f));
                Vector num(j.x.size());
                for (int a = 0; a < j.x.size(); ++a) {
                    Vector xp = j.x, xm = j.x;
                    xp(a) += h;
                    xm(a) -= h;
                    num(a) = (model.eval(xp).first - model.eval(xm).first) / (2.0 * h);
                }
                max_grad = std::max(max_grad, (num - j.g).norm());
            }
            double k = ds.gradient_bound();
            bool ok_val = max_val <= 5.0 * h * (1.0 + k);
            bool ok_grad = max_grad <= std::max(0.1, 20.0 * h);
            std::cout << "value residual    " << max_val << (ok_val ? "  PASS" : "  FAIL") << "\n"
                      << "gradient residual " << max_grad << (ok_grad ? "  PASS" : "  FAIL") << "\n";
            return ok_val && ok_grad ? 0 : 3;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
