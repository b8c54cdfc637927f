#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "convexjet/generators.hpp"
#include "convexjet/polyhedral.hpp"

using namespace convexjet;

namespace {

Vector vec1(double a) {
    Vector v(1);
    v << a;
    return v;
}

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

JetDataset abs_jets_1d() {
    JetDataset ds(1);
    ds.add({vec1(-1), 1.0, vec1(-1)});
    ds.add({vec1(1), 1.0, vec1(1)});
    return ds;
}

}  // namespace

TEST_CASE("single jet gives an affine minimal extension") {
    JetDataset ds(2);
    ds.add({vec2(0.5, -0.25), 2.0, vec2(1.0, 3.0)});
    PolyhedralConvex m = build_minimal(ds);
    REQUIRE(m.pieces.size() == 1);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int i = 0; i < 100; ++i) {
        Vector x = vec2(u(rng), u(rng));
        double expect = 2.0 + ds[0].g.dot(x - ds[0].x);
        CHECK(m.eval(x) == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("|x| jets rebuild |x|") {
    PolyhedralConvex m = build_minimal(abs_jets_1d());
    CHECK(m.eval(vec1(0.0)) == doctest::Approx(0.0));
    CHECK(m.eval(vec1(2.0)) == doctest::Approx(2.0));
    CHECK(m.eval(vec1(-0.3)) == doctest::Approx(0.3));

    auto [v0, act0] = eval_with_active_set(m, vec1(0.0));
    CHECK(v0 == doctest::Approx(0.0));
    CHECK(act0.size() == 2);
    auto [v2, act2] = eval_with_active_set(m, vec1(2.0));
    CHECK(v2 == doctest::Approx(2.0));
    REQUIRE(act2.size() == 1);
    CHECK(m.pieces[act2[0]].a(0) == doctest::Approx(1.0));
}

TEST_CASE("minimal extension of quadratic samples stays below the function") {
    JetDataset ds = gen::quadratic(2, 20, 99);
    PolyhedralConvex m = build_minimal(ds);
    for (int i = 0; i < 50; ++i) {
        for (int j = 0; j < 50; ++j) {
            Vector x = vec2(-1.0 + 2.0 * i / 49.0, -1.0 + 2.0 * j / 49.0);
            CHECK(m.eval(x) <= 0.5 * x.squaredNorm() + 1e-12);
        }
    }
    for (const Jet& j : ds.jets()) CHECK(std::abs(m.eval(j.x) - j.f) < 1e-12);
}

TEST_CASE("non-convex data is refused") {
    JetDataset ds(1);
    ds.add({vec1(0), 0.0, vec1(0)});
    ds.add({vec1(1), -1.0, vec1(0)});
    CHECK_THROWS(build_minimal(ds));
}

TEST_CASE("both slopes are active between the two branches of the log-graph data") {
    JetDataset ds = gen::example_1_6(1, 5);
    PolyhedralConvex m = build_minimal(ds);
    auto [val, act] = eval_with_active_set(m, vec2(0.0, 0.0));
    CHECK(val == doctest::Approx(0.0));
    REQUIRE(act.size() == 2);
    double s0 = m.pieces[act[0]].a(0), s1 = m.pieces[act[1]].a(0);
    CHECK(std::abs(s0 + s1) < 1e-12);
    CHECK(std::abs(std::abs(s0) - 1.0) < 1e-12);
}

TEST_CASE("decomposition of an affine extension") {
    JetDataset ds(2);
    ds.add({vec2(1, 2), 5.0, vec2(3, 4)});
    Decomposition dec = decompose(build_minimal(ds));
    CHECK(dec.Y.dim() == 0);
    CHECK((dec.v - vec2(3, 4)).norm() < 1e-14);
    REQUIRE(dec.c.pieces.size() == 1);
    CHECK(dec.c.pieces[0].b == doctest::Approx(5.0 - vec2(3, 4).dot(vec2(1, 2))));
}

TEST_CASE("decomposition of |x| is trivial") {
    Decomposition dec = decompose(build_minimal(abs_jets_1d()));
    CHECK(dec.Y.dim() == 1);
    CHECK(dec.v.norm() < 1e-14);
    CHECK(dec.K == doctest::Approx(1.0));
}

TEST_CASE("planar corner data in R^3 decomposes orthogonally to e3") {
    JetDataset ds = gen::sqrt_exp_3d(30, 21);
    Decomposition dec = decompose(build_minimal(ds));
    REQUIRE(dec.Y.dim() == 2);
    for (int c = 0; c < 2; ++c) CHECK(std::abs(dec.Y.basis(2, c)) < 1e-8);
    CHECK(dec.v.norm() < 1e-8);
}

TEST_CASE("reconstruction identity and Lipschitz bounds") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int dim = 1; dim <= 3; ++dim) {
        JetDataset ds = gen::logsumexp(dim, 15, 1000 + dim);
        PolyhedralConvex m = build_minimal(ds);
        Decomposition dec = decompose(m);
        double scale = 1.0 + std::abs(m.eval(Vector::Zero(dim)));
        for (int i = 0; i < 10000 / dim; ++i) {
            Vector x(dim);
            for (int a = 0; a < dim; ++a) x(a) = u(rng);
            double rebuilt = dec.c.eval(dec.Y.coords(x)) + dec.v.dot(x);
            CHECK(std::abs(m.eval(x) - rebuilt) <= 1e-9 * scale);
        }
        CHECK(dec.v.norm() <= dec.K + 1e-12);
        for (int i = 0; i < 500; ++i) {
            Vector x(dim), y(dim);
            for (int a = 0; a < dim; ++a) {
                x(a) = u(rng);
                y(a) = u(rng);
            }
            CHECK(std::abs(m.eval(x) - m.eval(y)) <= (dec.K + 1e-9) * (x - y).norm());
        }
    }
}

TEST_CASE("adding a constant to the offsets changes neither Y nor v") {
    JetDataset ds = gen::quadratic(2, 12, 5);
    PolyhedralConvex m = build_minimal(ds);
    Decomposition d0 = decompose(m);
    for (auto& p : m.pieces) p.b += 17.5;
    Decomposition d1 = decompose(m);
    CHECK(d0.Y.dim() == d1.Y.dim());
    CHECK((d0.v - d1.v).norm() < 1e-12);
    CHECK((d0.Y.basis - d1.Y.basis).norm() < 1e-12);
}

TEST_CASE("coercivity minorant of |x|") {
    Decomposition dec = decompose(build_minimal(abs_jets_1d()));
    CoercivityMinorant cm = coercivity_minorant(dec);
    CHECK(cm.alpha == doctest::Approx(1.0));
    CHECK(cm.beta == doctest::Approx(0.0));
    CHECK(cm.shift.norm() < 1e-12);
}

TEST_CASE("coercivity minorant of the max-norm slope cross") {
    Decomposition dec;
    dec.Y = Subspace::full(2);
    dec.c.dim = 2;
    dec.c.pieces = {{vec2(1, 0), 0.0}, {vec2(-1, 0), 0.0}, {vec2(0, 1), 0.0}, {vec2(0, -1), 0.0}};
    dec.v = Vector::Zero(2);
    dec.K = 1.0;
    CoercivityMinorant cm = coercivity_minorant(dec);
    CHECK(std::abs(cm.alpha - 1.0 / std::sqrt(2.0)) < 1e-3);
    CHECK(cm.beta == doctest::Approx(0.0));
}

TEST_CASE("flat slope hull in a 2-D Y is not coercive") {
    Decomposition dec;
    dec.Y = Subspace::full(2);
    dec.c.dim = 2;
    dec.c.pieces = {{vec2(1, 0), 0.0}, {vec2(2, 0), 0.0}};
    dec.v = Vector::Zero(2);
    dec.K = 2.0;
    CHECK_THROWS_AS(coercivity_minorant(dec), NotCoercive);
}

TEST_CASE("recentred minorant handles one-sided slopes") {
    Decomposition dec;
    dec.Y = Subspace::full(1);
    dec.c.dim = 1;
    dec.c.pieces = {{vec1(1), 0.5}, {vec1(3), -0.25}};
    dec.v = Vector::Zero(1);
    dec.K = 3.0;
    CoercivityMinorant cm = coercivity_minorant(dec);
    CHECK(cm.alpha == doctest::Approx(1.0));
    CHECK(cm.shift(0) == doctest::Approx(2.0));
    // sampled minorant inequality on rays
    for (double radius : {1.0, 10.0, 100.0}) {
        for (double sign : {-1.0, 1.0}) {
            Vector y = vec1(sign * radius);
            double lhs = dec.c.eval(y) - cm.shift.dot(y);
            CHECK(lhs >= cm.alpha * radius + cm.beta - 1e-6);
        }
    }
}
