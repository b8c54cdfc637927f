#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "convexjet/subspace.hpp"

using namespace convexjet;

namespace {

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

Vector vec3(double a, double b, double c) {
    Vector v(3);
    v << a, b, c;
    return v;
}

JetDataset jets_from_gradients(const std::vector<Vector>& gs) {
    JetDataset ds(static_cast<int>(gs.front().size()));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (const Vector& g : gs) {
        Vector x(g.size());
        for (int a = 0; a < g.size(); ++a) x(a) = u(rng);
        ds.add({x, 0.0, g});
    }
    return ds;
}

}  // namespace

TEST_CASE("span of opposite axis gradients is the axis") {
    JetDataset ds = jets_from_gradients({vec2(1, 0), vec2(-1, 0)});
    Subspace y = span_of_differences(ds);
    CHECK(y.dim() == 1);
    CHECK(std::abs(std::abs(y.basis(0, 0)) - 1.0) < 1e-12);
    CHECK(std::abs(y.basis(1, 0)) < 1e-12);
}

TEST_CASE("single jet spans nothing") {
    JetDataset ds = jets_from_gradients({vec2(0.3, -0.4)});
    CHECK(span_of_differences(ds).dim() == 0);
}

TEST_CASE("gradients of |x|^2/2 at general-position points span R^3") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    JetDataset ds(3);
    for (int i = 0; i < 10; ++i) {
        Vector x(3);
        x << u(rng), u(rng), u(rng);
        ds.add({x, 0.5 * x.squaredNorm(), x});
    }
    // independent rank oracle: Gram determinant of three difference vectors
    Matrix diffs(3, 3);
    for (int c = 0; c < 3; ++c) diffs.col(c) = ds[c + 1].g - ds[0].g;
    Matrix gram = diffs.transpose() * diffs;
    REQUIRE(std::abs(gram.determinant()) > 1e-8);

    CHECK(span_of_differences(ds).dim() == 3);
}

TEST_CASE("projection onto an axis") {
    Subspace s{2, Matrix::Identity(2, 1)};
    Vector p = project(s, vec2(3, 4));
    CHECK(p(0) == doctest::Approx(3.0));
    CHECK(p(1) == doctest::Approx(0.0));
}

TEST_CASE("projection onto the zero subspace vanishes") {
    Subspace s = Subspace::zero(3);
    CHECK(project(s, vec3(1, 2, 3)).norm() == doctest::Approx(0.0));
}

TEST_CASE("projection is idempotent and 1-Lipschitz on random subspaces") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    std::vector<Vector> gens;
    Vector a(4), b(4);
    for (int i = 0; i < 4; ++i) {
        a(i) = nd(rng);
        b(i) = nd(rng);
    }
    Subspace s = span_of({a, b}, 4);
    REQUIRE(s.dim() == 2);
    for (int trial = 0; trial < 200; ++trial) {
        Vector v(4);
        for (int i = 0; i < 4; ++i) v(i) = nd(rng);
        Vector p = project(s, v);
        CHECK((project(s, p) - p).norm() < 1e-12);
        CHECK(p.norm() <= v.norm() + 1e-12);
        for (int c = 0; c < s.dim(); ++c)
            CHECK(std::abs((v - p).dot(s.basis.col(c))) < 1e-12);
    }
}

TEST_CASE("orthocomplement within a space") {
    SUBCASE("axis inside the plane") {
        Subspace s{2, Matrix::Identity(2, 1)};
        Subspace t = Subspace::full(2);
        Subspace c = orthocomplement_in(s, t);
        REQUIRE(c.dim() == 1);
        CHECK(std::abs(c.basis(0, 0)) < 1e-12);
        CHECK(std::abs(std::abs(c.basis(1, 0)) - 1.0) < 1e-12);
    }
    SUBCASE("equal spaces give zero") {
        Subspace t = Subspace::full(2);
        CHECK(orthocomplement_in(t, t).dim() == 0);
    }
    SUBCASE("hand-computed Gram-Schmidt case") {
        Vector d(3), e(3);
        d << 1, 1, 0;
        e << 0, 0, 1;
        Subspace s = span_of({d}, 3);
        Subspace t = span_of({d, e}, 3);
        Subspace c = orthocomplement_in(s, t);
        REQUIRE(c.dim() == 1);
        CHECK(std::abs(c.basis(2, 0)) == doctest::Approx(1.0));
    }
    SUBCASE("S outside T is rejected") {
        Subspace s{3, Matrix::Identity(3, 1)};
        Vector e3v(3);
        e3v << 0, 0, 1;
        Subspace t = span_of({e3v}, 3);
        CHECK_THROWS(orthocomplement_in(s, t));
    }
}

TEST_CASE("differences lie in the detected span") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
        int dim = 2 + static_cast<int>(rng() % 3);
        int rank = 1 + static_cast<int>(rng() % dim);
        Matrix gen(dim, rank);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < rank; ++j) gen(i, j) = nd(rng);
        JetDataset ds(dim);
        for (int i = 0; i < 12; ++i) {
            Vector coef(rank), x(dim);
            for (int j = 0; j < rank; ++j) coef(j) = nd(rng);
            for (int j = 0; j < dim; ++j) x(j) = nd(rng);
            ds.add({x, 0.0, Vector(gen * coef)});
        }
        Subspace y = span_of_differences(ds);
        for (std::size_t i = 0; i < ds.size(); ++i)
            for (std::size_t j = 0; j < ds.size(); ++j) {
                Vector diff = ds[i].g - ds[j].g;
                CHECK((diff - project(y, diff)).norm() < 1e-8 * (1.0 + diff.norm()));
            }
    }
}

TEST_CASE("dataset deduplicates identical points and rejects conflicts") {
    JetDataset ds(2);
    ds.add({vec2(0, 0), 1.0, vec2(1, 0)});
    ds.add({vec2(0, 0), 1.0, vec2(1, 0)});
    CHECK(ds.size() == 1);
    CHECK_THROWS(ds.add({vec2(0, 0), 2.0, vec2(1, 0)}));
    CHECK_THROWS(ds.add({vec2(1, std::numeric_limits<double>::quiet_NaN()), 0.0, vec2(0, 0)}));
}
