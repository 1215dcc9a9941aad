#include "rimnull/geometry.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rimnull {

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    if (n == 0.0) throw std::domain_error("normalized: zero vector");
    return {v.x / n, v.y / n, v.z / n};
}

double DishGeometry::rho_inner() const { return radial_from_angle(theta1, focal_length); }

void DishGeometry::validate() const {
    if (focal_length <= 0.0) throw std::invalid_argument("DishGeometry: focal length must be positive");
    if (feed_exponent <= 0.0) throw std::invalid_argument("DishGeometry: feed exponent must be positive");
    if (!(0.0 < theta1 && theta1 < theta0 && theta0 < kPi))
        throw std::invalid_argument("DishGeometry: need 0 < theta1 < theta0 < pi");
    const double d = 4.0 * focal_length * std::tan(theta0 / 2.0);
    if (std::abs(d - diameter) > 1e-9 * diameter)
        throw std::invalid_argument("DishGeometry: D = 4 f tan(theta0/2) violated");
}

DishGeometry make_dish(double diameter_m, double focal_length_m, double rim_width_m,
                       double feed_exponent, cdouble feed_amplitude) {
    if (diameter_m <= 0.0) throw std::invalid_argument("make_dish: diameter must be positive");
    if (rim_width_m <= 0.0 || rim_width_m >= diameter_m / 2.0)
        throw std::invalid_argument("make_dish: rim width must be in (0, D/2)");
    DishGeometry g;
    g.diameter = diameter_m;
    g.focal_length = focal_length_m;
    g.feed_exponent = feed_exponent;
    g.feed_amplitude = feed_amplitude;
    g.theta0 = angle_from_radial(diameter_m / 2.0, focal_length_m);
    g.theta1 = angle_from_radial(diameter_m / 2.0 - rim_width_m, focal_length_m);
    g.validate();
    return g;
}

double radial_from_angle(double theta_f, double focal_length) {
    if (!(theta_f >= 0.0 && theta_f < kPi))
        throw std::domain_error("radial_from_angle: theta_f must be in [0, pi)");
    return 2.0 * focal_length * std::tan(theta_f / 2.0);
}

double angle_from_radial(double rho, double focal_length) {
    if (rho < 0.0) throw std::domain_error("angle_from_radial: rho must be non-negative");
    return 2.0 * std::atan(rho / (2.0 * focal_length));
}

Vec3 surface_point(double rho, double phi, double focal_length) {
    if (rho < 0.0) throw std::domain_error("surface_point: rho must be non-negative");
    return {rho * std::cos(phi), rho * std::sin(phi), rho * rho / (4.0 * focal_length)};
}

FeedRay feed_vector(double rho, double phi, double focal_length) {
    if (rho < 0.0) throw std::domain_error("feed_vector: rho must be non-negative");
    const double s = rho * rho / (4.0 * focal_length) + focal_length;
    const Vec3 v{rho * std::cos(phi), rho * std::sin(phi),
                 rho * rho / (4.0 * focal_length) - focal_length};
    return {{v.x / s, v.y / s, v.z / s}, s};
}

std::size_t RimLayout::ring_of(std::size_t n) const {
    for (std::size_t r = rings.size(); r-- > 0;) {
        if (n >= rings[r].first) return r;
    }
    throw std::out_of_range("RimLayout::ring_of");
}

double RimLayout::mean_radius() const {
    if (rho.empty()) return 0.0;
    return std::accumulate(rho.begin(), rho.end(), 0.0) / static_cast<double>(rho.size());
}

RimLayout build_rim_layout(const DishGeometry& geom, double wavelength) {
    geom.validate();
    const double side = 0.5 * wavelength;
    const double rin = geom.rho_inner();
    const double rout = geom.rho_outer();
    // Relative slack absorbs the theta <-> rho round trip of the rim bounds.
    const auto n_rings = static_cast<std::size_t>(std::floor((rout - rin) / side + 1e-9));
    if (n_rings == 0)
        throw std::invalid_argument("build_rim_layout: rim narrower than one element");

    RimLayout layout;
    layout.element_side = side;
    for (std::size_t r = 0; r < n_rings; ++r) {
        const double rc = rin + 0.5 * side + static_cast<double>(r) * side;
        const auto count = static_cast<std::size_t>(std::floor(2.0 * kPi * rc / side));
        RimRing ring{rc, layout.size(), count};
        const double slant = std::sqrt(1.0 + std::pow(rc / (2.0 * geom.focal_length), 2));
        for (std::size_t i = 0; i < count; ++i) {
            layout.rho.push_back(rc);
            layout.phi.push_back(2.0 * kPi * static_cast<double>(i) / static_cast<double>(count));
            layout.area.push_back(side * side * slant);
        }
        layout.rings.push_back(ring);
    }
    if (layout.size() % 2 != 0) {
        layout.rho.pop_back();
        layout.phi.pop_back();
        layout.area.pop_back();
        layout.rings.back().count -= 1;
    }
    return layout;
}

}  // namespace rimnull
