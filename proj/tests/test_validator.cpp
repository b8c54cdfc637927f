#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "convexjet/generators.hpp"
#include "convexjet/validator.hpp"

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

}  // namespace

TEST_CASE("exact samples of |x|^2/2 have no convexity violations") {
    JetDataset ds = gen::quadratic(3, 20, 42);
    ConvexityReport rep = check_convexity(ds);
    CHECK(rep.pass());
    for (std::size_t i = 0; i < ds.size(); ++i) CHECK(rep.D(i, i) == 0.0);
}

TEST_CASE("a forced violation is located with its slack") {
    JetDataset ds(1);
    ds.add({vec1(0), 0.0, vec1(0)});
    ds.add({vec1(1), -1.0, vec1(0)});
    ConvexityReport rep = check_convexity(ds);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].i == 1);
    CHECK(rep.violations[0].j == 0);
    CHECK(rep.violations[0].slack == doctest::Approx(-1.0));
}

TEST_CASE("the corner-at-infinity sample is convex-compatible") {
    JetDataset ds = gen::example_1_2(30);
    CHECK(ds.size() == 60);
    CHECK(check_convexity(ds).pass());
}

TEST_CASE("collinear affine data passes the equality-case check") {
    JetDataset ds(1);
    ds.add({vec1(0), 0.0, vec1(1)});
    ds.add({vec1(1), 1.0, vec1(1)});
    ConvexityReport conv = check_convexity(ds);
    CHECK(check_cw1(ds, conv.D).pass);
}

TEST_CASE("an active pair with mismatched gradients fails") {
    JetDataset ds(1);
    ds.add({vec1(0), 0.0, vec1(0)});
    ds.add({vec1(1), 0.0, vec1(1)});
    ConvexityReport conv = check_convexity(ds);
    CHECK(conv.D(1, 0) == 0.0);
    Cw1Report rep = check_cw1(ds, conv.D);
    CHECK_FALSE(rep.pass);
    REQUIRE_FALSE(rep.failures.empty());
    CHECK(rep.failures[0].i == 1);
    CHECK(rep.failures[0].j == 0);
}

TEST_CASE("the corner sample warns instead of failing") {
    JetDataset ds = gen::example_1_2(30);
    ConvexityReport conv = check_convexity(ds);
    Cw1Report rep = check_cw1(ds, conv.D);
    CHECK(rep.pass);
    int deep = 0;
    for (const auto& w : rep.warnings) {
        CHECK(w.grad_gap > 0.5);
        if (w.slack < 1e-8) ++deep;
    }
    CHECK(deep >= 10);  // the k >= 20 vertical pairs in both orders
}

TEST_CASE("cone emptiness") {
    Subspace y = span_of({vec2(1, 0)}, 2);
    ConeSpec cone{vec2(0, 10), vec2(0, 1), 0.5, y};
    SUBCASE("data strip below the apex") {
        JetDataset ds(2);
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> u(-1, 1);
        for (int i = 0; i < 20; ++i) ds.add({vec2(3.0 * u(rng), u(rng)), 0.0, vec2(i * 0.01, 0)});
        CHECK(check_cone_empty(cone, ds).pass);
    }
    SUBCASE("a point on the axis inside the cone") {
        JetDataset ds(2);
        ds.add({vec2(0, 11), 0.0, vec2(0, 0)});
        ConeReport rep = check_cone_empty(cone, ds);
        CHECK_FALSE(rep.pass);
        REQUIRE(rep.offending.size() == 1);
        CHECK(rep.offending[0] == 0);
    }
    SUBCASE("log-graph data avoids a shallow cone above it") {
        JetDataset ds = gen::example_1_6(1, 10);
        CHECK(ds.size() == 38);
        ConeSpec shallow{vec2(0, 2), vec2(0, 1), 0.1, y};
        // direct evaluation oracle over all points
        bool any_inside = false;
        for (const Jet& j : ds.jets()) {
            Vector d = j.x - shallow.apex;
            if (0.1 * d(1) >= std::abs(d(0))) any_inside = true;
        }
        REQUIRE_FALSE(any_inside);
        CHECK(check_cone_empty(shallow, ds).pass);
    }
}

namespace {

JetDataset parabola_on_line() {
    // f(x,y) = x^2 sampled on the line y = 0
    JetDataset ds(2);
    for (double t : {-1.0, -0.5, 0.0, 0.5, 1.0}) ds.add({vec2(t, 0), t * t, vec2(2 * t, 0)});
    return ds;
}

}  // namespace

TEST_CASE("augmentation of line data with one missing direction") {
    JetDataset ds = parabola_on_line();
    PolyhedralConvex m = build_minimal(ds);
    Decomposition dec = decompose(m);
    REQUIRE(dec.Y.dim() == 1);
    AugmentationPlan plan = find_augmentation(ds, Subspace::full(2), dec);
    REQUIRE(plan.cones.size() == 1);
    CHECK(std::abs(plan.cones[0].axis(0)) < 1e-12);
    CHECK(std::abs(std::abs(plan.cones[0].axis(1)) - 1.0) < 1e-12);
    REQUIRE(plan.added_jets.size() == 1);
    double bump = plan.added_jets[0].g(1) - plan.v_eff(1);
    CHECK(std::abs(std::abs(bump) - plan.eps * plan.alpha) < 1e-12);

    NewDataReport rep = check_new_data(ds, plan, m, Subspace::full(2));
    CHECK(rep.pass);
    CHECK(rep.min_margin >= 1.0 - 1e-9);
    CHECK(rep.span_ok);
}

TEST_CASE("augmentation rejects Y = X") {
    JetDataset ds = parabola_on_line();
    Decomposition dec = decompose(build_minimal(ds));
    CHECK_THROWS_AS(find_augmentation(ds, dec.Y, dec), std::invalid_argument);
}

TEST_CASE("halving T below the bound breaks a margin") {
    JetDataset ds = parabola_on_line();
    PolyhedralConvex m = build_minimal(ds);
    Decomposition dec = decompose(m);
    AugmentationPlan plan = find_augmentation(ds, Subspace::full(2), dec);
    AugmentationPlan tampered = plan;
    tampered.T *= 0.25;
    tampered.added_jets.clear();
    for (const auto& cone : tampered.cones) {
        Jet q;
        q.x = cone.apex + tampered.T * cone.axis;
        q.f = m.eval(q.x) + 1.0;
        q.g = tampered.v_eff + tampered.eps * tampered.alpha * cone.axis;
        tampered.added_jets.push_back(q);
    }
    NewDataReport rep = check_new_data(ds, tampered, m, Subspace::full(2));
    CHECK(rep.min_margin < 1.0 - 1e-9);
}

TEST_CASE("an empty plan passes vacuously") {
    JetDataset ds = parabola_on_line();
    PolyhedralConvex m = build_minimal(ds);
    NewDataReport rep = check_new_data(ds, AugmentationPlan{}, m, span_of_differences(ds));
    CHECK(rep.pass);
}

TEST_CASE("validate: single jet is extendible") {
    JetDataset ds(2);
    ds.add({vec2(0.1, 0.2), 1.0, vec2(0, 0)});
    ValidationReport rep = validate(ds);
    CHECK(rep.verdict == Verdict::Extendible);
}

TEST_CASE("validate: equality-case violation is rejected") {
    JetDataset ds(1);
    ds.add({vec1(0), 0.0, vec1(0)});
    ds.add({vec1(1), 0.0, vec1(1)});
    ValidationReport rep = validate(ds);
    CHECK(rep.verdict == Verdict::Rejected);
    REQUIRE_FALSE(rep.failed_conditions.empty());
}

TEST_CASE("validate: log-graph data under span-only X is rejected, widened it augments") {
    JetDataset ds = gen::example_1_6(1, 10);
    ValidationReport narrow = validate(ds);
    CHECK(narrow.verdict == Verdict::Rejected);

    ValidationReport wide = validate(ds, Subspace::full(2));
    REQUIRE(wide.verdict == Verdict::ExtendibleAfterAugmentation);
    REQUIRE(wide.plan.has_value());
    CHECK(wide.plan->cones.size() == 1);
    CHECK(wide.new_data.min_margin >= 1.0 - 1e-9);
    // the added jet sits above the data with a small vertical gradient component
    const Jet& q = wide.plan->added_jets[0];
    CHECK(std::abs(q.g(0)) < 1e-9);
    CHECK(q.g(1) != 0.0);
}

TEST_CASE("validate: the corner trend does not fire when escape happens inside X") {
    ValidationReport rep = validate(gen::example_1_2(30));
    CHECK(rep.verdict == Verdict::Extendible);
    CHECK_FALSE(rep.warnings.empty());

    ValidationReport planar = validate(gen::sqrt_exp_3d(30, 9));
    CHECK(planar.verdict == Verdict::Extendible);
}

TEST_CASE("corner trend detector distinguishes the two corner families") {
    JetDataset e1 = gen::example_1_6(1, 10);
    ConvexityReport conv1 = check_convexity(e1);
    CHECK(detect_corner_trend(e1, conv1.D, span_of_differences(e1)).found);

    // same pair geometry but the quotient decays: detector must stay quiet
    JetDataset ex12 = gen::example_1_2(30);
    ConvexityReport conv2 = check_convexity(ex12);
    Vector e1axis(2);
    e1axis << 1, 0;
    CHECK_FALSE(detect_corner_trend(ex12, conv2.D, span_of({e1axis}, 2)).found);
}

TEST_CASE("verdict is invariant under rigid motions and affine shifts") {
    std::mt19937_64 rng(123);
    std::normal_distribution<double> nd;
    auto transform = [&](const JetDataset& ds) {
        // Householder reflection composed with a rotation-free shift
        Vector w(2);
        w << nd(rng), nd(rng);
        w.normalize();
        Matrix q = Matrix::Identity(2, 2) - 2.0 * w * w.transpose();
        Vector t(2), u(2);
        t << nd(rng), nd(rng);
        u << nd(rng), nd(rng);
        double a = nd(rng);
        JetDataset out(2);
        for (const Jet& j : ds.jets()) {
            Vector x = q * j.x + t;
            out.add({x, j.f + a + u.dot(x), Vector(q * j.g + u)});
        }
        return out;
    };
    for (const JetDataset& base : {gen::quadratic(2, 15, 8), gen::example_1_6(1, 6)}) {
        JetDataset moved = transform(base);
        ConvexityReport c0 = check_convexity(base), c1 = check_convexity(moved);
        CHECK((c0.D - c1.D).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(validate(base).verdict == validate(moved).verdict);
    }
}
