#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "core/classifier.hpp"
#include "core/models.hpp"
#include "core/rootsys.hpp"
#include "oracles.hpp"

using namespace chamber;

namespace {

const double kSqrt2 = std::sqrt(2.0);

Vector randomize_interior(const PolyhedralModel& model, std::mt19937& rng,
                          double spread = 0.25) {
    std::normal_distribution<double> gauss;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Vector x = model.initial_point();
        for (int c = 0; c < x.size(); ++c) x[c] += spread * gauss(rng);
        if (model.domain().gaps(x).minCoeff() > 1e-3) return x;
    }
    return model.initial_point();
}

}  // namespace

TEST_CASE("nearest-neighbor chain: construction and drift oracle") {
    auto model = build_rost_vares(3, std::make_shared<LogBarrier>(0.4));
    CHECK(model.num_faces() == 2);
    CHECK(model.dimension() == 3);
    CHECK((model.initial_point() - (Vector(3) << 0, 1, 2).finished()).norm() == 0);

    // Hand evaluation: with phi = -gamma log on the particle gaps the drift
    // at (0,1,2) is gamma * (-1, 0, 1).
    Vector x(3);
    x << 0, 1, 2;
    CHECK((model.drift(x) - 0.4 * (Vector(3) << -1, 0, 1).finished()).norm() <
          1e-12);

    // Per-coordinate chain formula at random interior points.
    std::mt19937 rng(61);
    auto phi_deriv = [](double v) { return -0.4 / v; };
    for (int trial = 0; trial < 20; ++trial) {
        const Vector p = randomize_interior(model, rng);
        const Vector want = oracles::rost_vares_drift(phi_deriv, p);
        CHECK((model.drift(p) - want).norm() <= 1e-8 * (1.0 + want.norm()));
    }

    CHECK_THROWS_AS(build_rost_vares(1, std::make_shared<ZeroPotential>()),
                    Error);
}

TEST_CASE("nearest-neighbor chain with a generic potential") {
    // The sqrt(2) argument scaling must reproduce phi'(x_{i+1} - x_i) terms
    // for any contract implementer, not only log barriers.
    auto phi = std::make_shared<HyperbolicLogSinh>(0.7);
    auto model = build_rost_vares(4, phi);
    std::mt19937 rng(67);
    auto phi_deriv = [&](double v) { return deriv(*phi, v); };
    for (int trial = 0; trial < 20; ++trial) {
        const Vector p = randomize_interior(model, rng);
        const Vector want = oracles::rost_vares_drift(phi_deriv, p);
        CHECK((model.drift(p) - want).norm() <= 1e-8 * (1.0 + want.norm()));
    }
    // Two-particle reflected gap: a single weak face.
    auto weak = build_rost_vares(2, std::make_shared<ZeroPotential>());
    CHECK(weak.num_faces() == 1);
    CHECK(classify_model(weak)[0].result->cls == BoundaryClass::Weak);
}

TEST_CASE("wishart radii: faces, classes and drift oracle") {
    auto model = build_wishart_radii(2, 3.0);
    CHECK(model.num_faces() == 2 + 1 + 1);  // axes, difference, sum
    CHECK(model.dimension() == 2);

    std::mt19937 rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector p = randomize_interior(model, rng);
        const Vector want = oracles::wishart_drift(3.0, p);
        CHECK((model.drift(p) - want).norm() <= 1e-8 * (1.0 + want.norm()));
    }

    // delta = n + 1: axis gamma = 1/2, the smallest radius never vanishes.
    const auto rows = classify_model(model);
    for (const auto& row : rows) {
        if (row.label.rfind("axis", 0) == 0)
            CHECK(row.result->cls == BoundaryClass::Strong);
        if (row.label.rfind("diff", 0) == 0)
            CHECK(row.result->cls == BoundaryClass::Strong);
    }

    // delta in (n, n+1): axis walls become reachable.
    for (const auto& row : classify_model(build_wishart_radii(2, 2.5)))
        if (row.label.rfind("axis", 0) == 0)
            CHECK(row.result->cls == BoundaryClass::Middle);

    // Difference walls are Strong for every admissible delta.
    for (double delta : {2.0, 2.5, 3.0, 4.5})
        for (const auto& row : classify_model(build_wishart_radii(2, delta)))
            if (row.label.rfind("diff", 0) == 0)
                CHECK(row.result->cls == BoundaryClass::Strong);

    // delta = n: the axis barrier degenerates to pure reflection.
    for (const auto& row : classify_model(build_wishart_radii(2, 2.0)))
        if (row.label.rfind("axis", 0) == 0)
            CHECK(row.result->cls == BoundaryClass::Weak);

    CHECK_THROWS_AS(build_wishart_radii(2, 1.5), Error);
    CHECK_THROWS_AS(build_wishart_radii(1, 3.0), Error);
}

TEST_CASE("wishart drift oracle for n = 3") {
    auto model = build_wishart_radii(3, 3.7);
    std::mt19937 rng(73);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector p = randomize_interior(model, rng);
        const Vector want = oracles::wishart_drift(3.7, p);
        CHECK((model.drift(p) - want).norm() <= 1e-8 * (1.0 + want.norm()));
    }
}

TEST_CASE("trigonometric chain: faces, wrap-around and drift oracle") {
    auto two = build_trigonometric(2, 0.5);
    CHECK(two.num_faces() == 2);  // direct gap and wrap-around

    auto model = build_trigonometric(3, 0.45);
    CHECK(model.num_faces() == 6);
    CHECK(model.domain().gaps(model.initial_point()).minCoeff() > 0.1);

    // The wrap-around faces carry negative offsets.
    int negative_offsets = 0;
    for (const Face& f : model.domain().faces())
        if (f.offset < 0) {
            ++negative_offsets;
            CHECK(f.offset == doctest::Approx(-M_PI * kSqrt2));
        }
    CHECK(negative_offsets == 3);

    // Both the direct and the wrap-around barrier act on every pair, so the
    // pair coefficient is gamma (twice the single-face gamma/2 term).
    std::mt19937 rng(79);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector p = randomize_interior(model, rng);
        const Vector want = oracles::trig_drift(0.45, p);
        CHECK((model.drift(p) - want).norm() <= 1e-8 * (1.0 + want.norm()));
    }

    // Finite-difference confirmation on the face/potential decomposition.
    auto phi_total = [&](const Vector& y) {
        double v = 0.0;
        for (int i = 0; i < model.num_faces(); ++i)
            v += eval(model.potential_for_face(i),
                      model.domain().gap(y, i));
        return v;
    };
    const Vector p0 = model.initial_point();
    const Vector fd = -oracles::finite_difference_gradient(phi_total, p0);
    CHECK((model.drift(p0) - fd).norm() <= 1e-5 * (1.0 + fd.norm()));

    for (const auto& row : classify_model(build_trigonometric(3, 0.5)))
        CHECK(row.result->cls == BoundaryClass::Strong);
    for (const auto& row : classify_model(build_trigonometric(3, 0.3)))
        CHECK(row.result->cls == BoundaryClass::Middle);
}

TEST_CASE("hyperbolic chain: faces, saturation and drift oracle") {
    auto model = build_hyperbolic(3, 0.7);
    CHECK(model.num_faces() == 3);
    for (const auto& row : classify_model(model))
        CHECK(row.result->cls == BoundaryClass::Strong);
    for (const auto& row : classify_model(build_hyperbolic(2, 0.3)))
        CHECK(row.result->cls == BoundaryClass::Middle);

    std::mt19937 rng(83);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector p = randomize_interior(model, rng);
        const Vector want = oracles::hyperbolic_drift(0.7, p);
        CHECK((model.drift(p) - want).norm() <= 1e-8 * (1.0 + want.norm()));
    }

    // At large separations each pairwise face term saturates at gamma*sqrt(2).
    Vector far(3);
    far << 0, 20, 40;
    for (int i = 0; i < model.num_faces(); ++i) {
        const Face& f = model.domain().face(i);
        const double u = f.normal.dot(far) - f.offset;
        const double term =
            (f.normal * deriv(model.potential_for_face(i), u)).norm();
        CHECK(term == doctest::Approx(0.7 * kSqrt2).epsilon(1e-8));
    }
}

TEST_CASE("difference-face drift terms coincide across the zoo") {
    // Matching gamma: nearest-neighbor log chain, Dunkl A, and the Wishart
    // difference walls produce identical per-face contributions.
    const double gamma = 0.5;
    auto rv = build_rost_vares(3, std::make_shared<LogBarrier>(gamma));
    auto dunkl = dunkl_model(standard_root_system(RootFamily::A, 2, {gamma}));
    auto wishart = build_wishart_radii(3, 3.0);

    auto face_term = [](const PolyhedralModel& m, const std::string& label,
                        const Vector& x) {
        for (int i = 0; i < m.num_faces(); ++i)
            if (m.domain().face(i).label == label) {
                const Face& f = m.domain().face(i);
                const double u = f.normal.dot(x) - f.offset;
                return Vector(-f.normal * deriv(m.potential_for_face(i), u));
            }
        throw std::runtime_error("face not found: " + label);
    };

    std::mt19937 rng(89);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 20; ++trial) {
        Vector x(3);
        x << 0.3 + std::abs(gauss(rng)), 2.0 + std::abs(gauss(rng)),
            4.5 + std::abs(gauss(rng));
        const Vector a = face_term(rv, "gap_2_3", x);
        const Vector c = face_term(wishart, "diff_2_3", x);
        CHECK((a - c).norm() < 1e-12 * (1.0 + a.norm()));

        // The Dunkl chamber orders coordinates decreasingly; compare through
        // the coordinate-reversal isometry.
        Vector y(3);
        y << x[2], x[1], x[0];
        const Vector b = face_term(dunkl, "alpha(1,-1,0)", y);
        Vector b_reversed(3);
        b_reversed << b[2], b[1], b[0];
        CHECK((a - b_reversed).norm() < 1e-12 * (1.0 + a.norm()));
    }
}

TEST_CASE("custom models: validation paths") {
    auto zero = std::make_shared<ZeroPotential>();

    SUBCASE("half-line with a log barrier") {
        auto model = build_half_line(std::make_shared<LogBarrier>(0.7), 1.0);
        CHECK(model.dimension() == 1);
        CHECK(model.num_faces() == 1);
        CHECK(classify_model(model)[0].result->cls == BoundaryClass::Strong);
    }

    SUBCASE("orthant with pure reflection") {
        std::vector<CustomFaceSpec> faces(2);
        faces[0] = {Vector::Unit(2, 0), 0.0, zero, "x"};
        faces[1] = {Vector::Unit(2, 1), 0.0, zero, "y"};
        Vector x0(2);
        x0 << 1, 1;
        auto model = build_custom("orthant", 2, faces, x0);
        CHECK(model.num_faces() == 2);
        for (const auto& row : classify_model(model))
            CHECK(row.result->cls == BoundaryClass::Weak);
    }

    SUBCASE("duplicate normals are rejected") {
        std::vector<CustomFaceSpec> faces(2);
        faces[0] = {Vector::Unit(2, 0), 0.0, zero, "a"};
        faces[1] = {Vector::Unit(2, 0), -1.0, zero, "b"};
        Vector x0(2);
        x0 << 1, 1;
        CHECK_THROWS_AS(build_custom("dup", 2, faces, x0), Error);
    }

    SUBCASE("non-unit normals rejected unless normalization is requested") {
        std::vector<CustomFaceSpec> faces(1);
        faces[0] = {2.0 * Vector::Unit(1, 0), 0.0,
                    std::make_shared<LogBarrier>(0.5), "w"};
        Vector x0(1);
        x0 << 1;
        CHECK_THROWS_AS(build_custom("raw", 1, faces, x0, {}, false), Error);

        auto model = build_custom("scaled", 1, faces, x0, {}, true);
        // phi(x.n - a) with n = 2 e1 equals phi(2 u) on the unit-normal gap,
        // so the drift at x must match the direct 2*phi'(2x) evaluation.
        const double x = 0.7;
        Vector p(1);
        p << x;
        CHECK(model.drift(p)[0] ==
              doctest::Approx(-2.0 * (-0.5 / (2.0 * x))).epsilon(1e-12));
    }

    SUBCASE("initial point must be strictly interior") {
        std::vector<CustomFaceSpec> faces(1);
        faces[0] = {Vector::Unit(1, 0), 0.0, zero, "w"};
        Vector x0(1);
        x0 << 0;
        CHECK_THROWS_AS(build_custom("boundary", 1, faces, x0), Error);
    }

    SUBCASE("monitored subsets are validated") {
        std::vector<CustomFaceSpec> faces(2);
        faces[0] = {Vector::Unit(2, 0), 0.0, zero, "x"};
        faces[1] = {Vector::Unit(2, 1), 0.0, zero, "y"};
        Vector x0(2);
        x0 << 1, 1;
        CHECK_THROWS_AS(
            build_custom("bad", 2, faces, x0, {FaceSubset({0, 5})}), Error);
    }
}
