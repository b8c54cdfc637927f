#include "convexjet/generators.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace convexjet {
namespace gen {

double corner_f(double x, double y) { return std::sqrt(x * x + std::exp(-2.0 * y)); }

Vector corner_grad(double x, double y) {
    double f = corner_f(x, y);
    Vector g(2);
    g << x / f, -std::exp(-2.0 * y) / f;
    return g;
}

JetDataset example_1_2(int k_max) {
    if (k_max < 1) throw std::invalid_argument("example_1_2: k_max must be >= 1");
    JetDataset ds(2);
    for (int k = 1; k <= k_max; ++k) {
        Vector xk(2), zk(2);
        xk << 0.0, static_cast<double>(k);
        zk << 1.0 / k, static_cast<double>(k);
        ds.add({xk, corner_f(xk(0), xk(1)), corner_grad(xk(0), xk(1))});
        ds.add({zk, corner_f(zk(0), zk(1)), corner_grad(zk(0), zk(1))});
    }
    return ds;
}

namespace {

std::vector<double> log_graph_abscissae(int k_max) {
    std::vector<double> xs;
    for (int k = 1; k <= k_max; ++k) xs.push_back(static_cast<double>(k));
    for (int k = 2; k <= k_max; ++k) xs.push_back(1.0 / k);
    return xs;
}

}  // namespace

JetDataset example_1_6(int variant, int k_max) {
    if (k_max < 2) throw std::invalid_argument("example_1_6: k_max must be >= 2");
    auto xs = log_graph_abscissae(k_max);

    if (variant == 1 || variant == 4) {
        JetDataset ds(2);
        for (double s : xs) {
            for (double sign : {1.0, -1.0}) {
                Vector p(2), g(2);
                p << sign * s, std::log(s);
                g << sign, 0.0;
                ds.add({p, s, g});
            }
        }
        if (variant == 4) {
            // strip lattice |x| >= 1
            for (double ax : {1.0, 1.5, 2.0, 3.0}) {
                for (int yi = -3; yi <= 3; ++yi) {
                    for (double sign : {1.0, -1.0}) {
                        Vector p(2), g(2);
                        p << sign * ax, static_cast<double>(yi);
                        g << sign, 0.0;
                        ds.add({p, ax, g});
                    }
                }
            }
        }
        return ds;
    }
    if (variant == 2) {
        JetDataset ds(2);
        for (double s : xs) {
            for (double sign : {1.0, -1.0}) {
                Vector p(2);
                p << sign * s, std::log(s);
                ds.add({p, corner_f(p(0), p(1)), corner_grad(p(0), p(1))});
            }
        }
        return ds;
    }
    if (variant == 3) {
        JetDataset ds(3);
        for (double s : xs) {
            for (double sign : {1.0, -1.0}) {
                Vector p(3), g(3);
                p << sign * s, std::log(s), 0.0;
                Vector g2 = corner_grad(p(0), p(1));
                g << g2(0), g2(1), 0.0;
                ds.add({p, corner_f(p(0), p(1)), g});
            }
        }
        return ds;
    }
    throw std::invalid_argument("example_1_6: variant must be 1..4");
}

JetDataset quadratic(int dim, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    JetDataset ds(dim);
    while (static_cast<int>(ds.size()) < count) {
        Vector x(dim);
        for (int a = 0; a < dim; ++a) x(a) = u(rng);
        ds.add({x, 0.5 * x.squaredNorm(), x});
    }
    return ds;
}

JetDataset logsumexp(int dim, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    JetDataset ds(dim);
    while (static_cast<int>(ds.size()) < count) {
        Vector x(dim);
        for (int a = 0; a < dim; ++a) x(a) = u(rng);
        double m = x.maxCoeff();
        double s = 0.0;
        for (int a = 0; a < dim; ++a) s += std::exp(x(a) - m);
        double f = m + std::log(s);
        Vector g(dim);
        for (int a = 0; a < dim; ++a) g(a) = std::exp(x(a) - m) / s;
        ds.add({x, f, g});
    }
    return ds;
}

JetDataset sqrt_exp_2d(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(-1.0, 2.0);
    JetDataset ds(2);
    while (static_cast<int>(ds.size()) < count) {
        double x = ux(rng), y = uy(rng);
        Vector p(2);
        p << x, y;
        ds.add({p, corner_f(x, y), corner_grad(x, y)});
    }
    return ds;
}

JetDataset sqrt_exp_3d(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(-1.0, 2.0);
    JetDataset ds(3);
    while (static_cast<int>(ds.size()) < count) {
        double x = ux(rng), y = uy(rng);
        Vector p(3), g(3);
        p << x, y, 0.0;
        Vector g2 = corner_grad(x, y);
        g << g2(0), g2(1), 0.0;
        ds.add({p, corner_f(x, y), g});
    }
    return ds;
}

JetDataset bounded_gradient(int dim, int count, double K, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0), uc(-0.5, 0.5);
    Vector c(dim);
    for (int a = 0; a < dim; ++a) c(a) = uc(rng);
    JetDataset ds(dim);
    while (static_cast<int>(ds.size()) < count) {
        Vector x(dim);
        for (int a = 0; a < dim; ++a) x(a) = u(rng);
        Vector r = x - c;
        double root = std::sqrt(1.0 + r.squaredNorm());
        ds.add({x, K * root, Vector(K * r / root)});
    }
    return ds;
}

NormalDataset sphere_normals(int n, int dim) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("sphere_normals: dim must be 2 or 3");
    NormalDataset nd;
    nd.dim = dim;
    if (dim == 2) {
        for (int i = 0; i < n; ++i) {
            double t = 2.0 * std::numbers::pi * i / n;
            Vector x(2);
            x << std::cos(t), std::sin(t);
            nd.add(x, x);
        }
        return nd;
    }
    const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));  // golden angle
    for (int i = 0; i < n; ++i) {
        double z = 1.0 - 2.0 * (i + 0.5) / n;
        double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
        double t = ga * i;
        Vector x(3);
        x << rad * std::cos(t), rad * std::sin(t), z;
        x.normalize();
        nd.add(x, x);
    }
    return nd;
}

NormalDataset square_normals() {
    NormalDataset nd;
    nd.dim = 2;
    Vector x(2), n(2);
    x << 1, 0;  n << 1, 0;  nd.add(x, n);
    x << -1, 0; n << -1, 0; nd.add(x, n);
    x << 0, 1;  n << 0, 1;  nd.add(x, n);
    x << 0, -1; n << 0, -1; nd.add(x, n);
    return nd;
}

}  // namespace gen
}  // namespace convexjet
