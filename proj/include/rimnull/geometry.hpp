#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "rimnull/constants.hpp"

namespace rimnull {

// Prime-focus axisymmetric paraboloid z = rho^2/(4f) with the feed at (0,0,f).
// theta_f is measured from the axis of rotation; the reconfigurable rim spans
// theta_f in [theta1, theta0] and the fixed portion [0, theta1].
struct DishGeometry {
    double diameter = 0.0;       // D, meters
    double focal_length = 0.0;   // f, meters
    double theta1 = 0.0;         // rim of fixed portion, radians
    double theta0 = 0.0;         // rim of entire dish, radians
    double feed_exponent = 1.0;  // q
    cdouble feed_amplitude{1.0, 0.0};  // I0

    double rho_outer() const { return diameter / 2.0; }
    double rho_inner() const;  // rho(theta1)

    // Checks 0 < theta1 < theta0 < pi, f > 0, q > 0, D = 4 f tan(theta0/2).
    void validate() const;
};

// Standard prime-focus choice used when a scenario omits the focal length.
// Calibrated against the reference 18 m / 0.5 m-rim configuration, which is
// reproduced best at f/D = 0.4 (see README).
inline constexpr double kDefaultFOverD = 0.4;

// Builds a geometry from diameter, focal length and the radial width of the
// reconfigurable rim (rho(theta0) - rho(theta1)).
DishGeometry make_dish(double diameter_m, double focal_length_m, double rim_width_m,
                       double feed_exponent, cdouble feed_amplitude = {1.0, 0.0});

// rho = 2 f tan(theta_f / 2). Domain error for theta_f outside [0, pi).
double radial_from_angle(double theta_f, double focal_length);

// Inverse of radial_from_angle: theta_f = 2 atan(rho / (2 f)).
double angle_from_radial(double rho, double focal_length);

// Point on the reflector surface: (rho cos phi', rho sin phi', rho^2/4f).
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double norm(const Vec3& v);
Vec3 normalized(const Vec3& v);

Vec3 surface_point(double rho, double phi, double focal_length);

// Unit vector from the feed to the surface point plus the path length
// s = rho^2/4f + f.
struct FeedRay {
    Vec3 direction;   // s-hat
    double distance;  // s
};
FeedRay feed_vector(double rho, double phi, double focal_length);

// One concentric ring of rim elements.
struct RimRing {
    double rho = 0.0;          // ring center radius
    std::size_t first = 0;     // index of the ring's first element
    std::size_t count = 0;
};

// Discrete RIS element layout on the rim annulus. Elements are ordered
// ring-by-ring (inner to outer), by increasing phi' within a ring.
struct RimLayout {
    std::vector<double> rho;    // per element
    std::vector<double> phi;    // per element
    std::vector<double> area;   // per element, m^2 (slant-corrected unit cell)
    std::vector<RimRing> rings;
    double element_side = 0.0;  // 0.5 lambda at the design frequency

    std::size_t size() const { return rho.size(); }
    // Pair merging order: (0,1), (2,3), ... in element index order.
    std::pair<std::size_t, std::size_t> pair(std::size_t n) const { return {2 * n, 2 * n + 1}; }
    std::size_t pair_count() const { return size() / 2; }
    std::size_t ring_of(std::size_t n) const;

    double mean_radius() const;  // rho-bar
};

// Concentric-ring packing: rings of width 0.5*lambda starting at
// rho(theta1) + 0.25*lambda, floor(2 pi rho_ring / side) elements per ring.
// If the total count comes out odd the last element is dropped so that the
// pairing covers every index. Per-element area is side^2 scaled by the local
// surface slant sqrt(1 + (rho/2f)^2): the cells tile the projected annulus,
// so their physical area on the dish carries the slant factor.
RimLayout build_rim_layout(const DishGeometry& geom, double wavelength);

}  // namespace rimnull
