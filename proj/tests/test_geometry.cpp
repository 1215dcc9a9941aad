#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "rimnull/geometry.hpp"

using namespace rimnull;

namespace {

// Bisection inverse of radial_from_angle, used as an independent oracle for
// the theta0 example.
double invert_radial(double rho_target, double f) {
    double lo = 0.0, hi = kPi - 1e-9;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (radial_from_angle(mid, f) < rho_target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("radial_from_angle examples") {
    CHECK(radial_from_angle(0.0, 6.75) == 0.0);
    CHECK(radial_from_angle(2.0 * std::atan(1.0), 6.75) == doctest::Approx(13.5).epsilon(1e-14));
    const double theta0 = invert_radial(9.0, 6.75);
    CHECK(radial_from_angle(theta0, 6.75) == doctest::Approx(9.0).epsilon(1e-12));
    CHECK_THROWS_AS(radial_from_angle(kPi, 6.75), std::domain_error);
    CHECK_THROWS_AS(radial_from_angle(-0.1, 6.75), std::domain_error);
}

TEST_CASE("angle/radial round trip") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(1e-6, 9.0);
    for (int i = 0; i < 200; ++i) {
        const double rho = u(rng);
        const double back = radial_from_angle(angle_from_radial(rho, 6.75), 6.75);
        CHECK(std::abs(back - rho) <= 1e-12 * rho);
    }
}

TEST_CASE("surface_point examples") {
    const Vec3 origin = surface_point(0.0, 1.234, 6.75);
    CHECK(origin.x == 0.0);
    CHECK(origin.y == 0.0);
    CHECK(origin.z == 0.0);

    const double f = 6.75;
    const Vec3 p = surface_point(2.0 * f, 0.0, f);
    CHECK(p.x == doctest::Approx(2.0 * f));
    CHECK(p.y == doctest::Approx(0.0));
    CHECK(p.z == doctest::Approx(f));

    const Vec3 q = surface_point(9.0, kPi / 2.0, 6.75);
    CHECK(std::abs(q.x) < 1e-12);
    CHECK(q.y == doctest::Approx(9.0));
    CHECK(q.z == doctest::Approx(3.0));  // 81 / 27
}

TEST_CASE("feed_vector examples") {
    const FeedRay vertex = feed_vector(0.0, 0.0, 6.75);
    CHECK(vertex.distance == doctest::Approx(6.75));
    CHECK(vertex.direction.x == doctest::Approx(0.0));
    CHECK(vertex.direction.y == doctest::Approx(0.0));
    CHECK(vertex.direction.z == doctest::Approx(-1.0));

    const double f = 6.75;
    CHECK(feed_vector(2.0 * f, 0.0, f).distance == doctest::Approx(2.0 * f));
    CHECK(feed_vector(9.0, 0.0, 6.75).distance == doctest::Approx(9.75));

    // The ray really points from the feed to the surface point.
    const Vec3 p = surface_point(5.0, 1.0, f);
    const FeedRay ray = feed_vector(5.0, 1.0, f);
    const Vec3 via_points = normalized({p.x, p.y, p.z - f});
    CHECK(std::abs(ray.direction.x - via_points.x) < 1e-14);
    CHECK(std::abs(ray.direction.y - via_points.y) < 1e-14);
    CHECK(std::abs(ray.direction.z - via_points.z) < 1e-14);
    CHECK(ray.distance == doctest::Approx(norm({p.x, p.y, p.z - f})));
}

TEST_CASE("rim layout, 18 m reference configuration") {
    const double freq = 1.5e9;
    const double lambda = kSpeedOfLight / freq;
    const DishGeometry geom = make_dish(18.0, 7.2, 0.5, 1.5);
    const RimLayout layout = build_rim_layout(geom, lambda);

    CHECK(layout.size() % 2 == 0);
    CHECK(layout.rings.size() == 5);

    // Element count within 2% of the 2756-segment reference and of the
    // continuum estimate (annulus area / side^2).
    CHECK(std::abs(static_cast<double>(layout.size()) - 2756.0) <= 0.02 * 2756.0);
    const double annulus = kPi * (9.0 * 9.0 - 8.5 * 8.5);
    const double continuum = annulus / (layout.element_side * layout.element_side);
    CHECK(std::abs(static_cast<double>(layout.size()) - continuum) <= 0.02 * continuum);

    // All elements strictly inside the annulus with half-a-side tolerance.
    for (std::size_t n = 0; n < layout.size(); ++n) {
        CHECK(layout.rho[n] >= 8.5 + 0.5 * layout.element_side - 1e-12);
        CHECK(layout.rho[n] <= 9.0 - 0.5 * layout.element_side + 1e-12);
        CHECK(layout.phi[n] >= 0.0);
        CHECK(layout.phi[n] < 2.0 * kPi);
    }

    // Total element area tracks the rim's surface area (slant included).
    double rim_surface = 0.0;
    const int steps = 20000;
    for (int i = 0; i < steps; ++i) {
        const double r = 8.5 + (i + 0.5) * 0.5 / steps;
        rim_surface += 2.0 * kPi * r * std::sqrt(1.0 + std::pow(r / (2.0 * 7.2), 2)) * 0.5 / steps;
    }
    double total_area = 0.0;
    for (const double a : layout.area) total_area += a;
    CHECK(std::abs(total_area - rim_surface) <= 0.05 * rim_surface);

    // Pairing covers every index once; pairs are circumferential neighbors
    // (same ring except where an odd ring count forces a seam pair).
    std::set<std::size_t> seen;
    std::size_t seam_pairs = 0;
    for (std::size_t p = 0; p < layout.pair_count(); ++p) {
        const auto [i, j] = layout.pair(p);
        CHECK(seen.insert(i).second);
        CHECK(seen.insert(j).second);
        const std::size_t ri = layout.ring_of(i), rj = layout.ring_of(j);
        if (ri == rj) {
            const double dphi = std::abs(layout.phi[j] - layout.phi[i]);
            const double step = 2.0 * kPi / static_cast<double>(layout.rings[ri].count);
            CHECK(std::min(dphi, 2.0 * kPi - dphi) == doctest::Approx(step).epsilon(1e-9));
        } else {
            CHECK(rj == ri + 1);
            ++seam_pairs;
        }
    }
    CHECK(seen.size() == layout.size());
    std::size_t odd_rings = 0;
    for (const auto& r : layout.rings) odd_rings += r.count % 2;
    CHECK(seam_pairs <= odd_rings);
}

TEST_CASE("rim layout, hand-enumerated small dish") {
    // D = 2 m, f = 0.75 m, 0.2 m rim, lambda = 0.2 m: two rings at
    // rho = 0.85 and 0.95 with floor(2 pi rho / 0.1) = 53 and 59 elements.
    const DishGeometry geom = make_dish(2.0, 0.75, 0.2, 1.0);
    const RimLayout layout = build_rim_layout(geom, 0.2);
    REQUIRE(layout.rings.size() == 2);
    CHECK(layout.rings[0].rho == doctest::Approx(0.85));
    CHECK(layout.rings[1].rho == doctest::Approx(0.95));
    CHECK(layout.rings[0].count == 53);
    CHECK(layout.rings[1].count == 59);
    CHECK(layout.size() == 112);
}

TEST_CASE("rim layout edge cases") {
    // Rim width equal to the element side: exactly one ring.
    const DishGeometry geom = make_dish(2.0, 0.75, 0.1, 1.0);
    const RimLayout one = build_rim_layout(geom, 0.2);
    CHECK(one.rings.size() == 1);

    // Rim narrower than one element: configuration error.
    const DishGeometry narrow = make_dish(2.0, 0.75, 0.05, 1.0);
    CHECK_THROWS_AS(build_rim_layout(narrow, 0.2), std::invalid_argument);
}

TEST_CASE("geometry invariants and validation") {
    const DishGeometry geom = make_dish(18.0, 7.2, 0.5, 1.5);
    CHECK(4.0 * geom.focal_length * std::tan(geom.theta0 / 2.0) == doctest::Approx(18.0));
    CHECK(geom.rho_inner() == doctest::Approx(8.5));
    CHECK(geom.theta1 < geom.theta0);
    CHECK_THROWS_AS(make_dish(-1.0, 1.0, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_dish(2.0, 0.75, 1.5, 1.0), std::invalid_argument);

    DishGeometry bad = geom;
    bad.feed_exponent = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = geom;
    bad.theta1 = geom.theta0 + 0.1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
