#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "rimnull/constants.hpp"
#include "rimnull/geometry.hpp"

namespace rimnull {

// One far-field direction to control, with its own wavenumber (the
// interference frequency). Mainlobe targets sit on boresight (psi = 0).
struct FarFieldTarget {
    enum class Kind { null, mainlobe };
    double psi = 0.0;   // zenith, radians, in [0, pi/2)
    double phi = 0.0;   // azimuth, radians
    double beta = 0.0;  // wavenumber, rad/m
    Kind kind = Kind::null;

    void validate() const;
};

bool same_direction(const FarFieldTarget& a, const FarFieldTarget& b);

// Complex 3-vector for fields and currents.
struct CVec3 {
    cdouble x{0.0, 0.0}, y{0.0, 0.0}, z{0.0, 0.0};
};

inline CVec3 operator*(const cdouble& s, const CVec3& v) { return {s * v.x, s * v.y, s * v.z}; }
inline CVec3 cross(const Vec3& a, const CVec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline cdouble dot(const CVec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(const CVec3& v);

// Common field prefactor. The physical leading factor of the radiation
// integral is -j omega mu0 / (4 pi); the far-field spherical spreading
// e^{-j beta r}/r is dropped since it is common to the fixed and
// reconfigurable contributions and cancels in every null condition. `scale`
// lets tests verify that invariance directly.
struct FieldScale {
    cdouble scale{1.0, 0.0};
    cdouble prefactor(double beta) const {
        return scale * cdouble(0.0, -1.0) * beta * kSpeedOfLight * 1e-7;
    }
};

// Feed magnetic field of the y-polarized feed model:
//   H = I0 (y-hat x s-hat)/|y-hat x s-hat| e^{-j beta s}/s cos^q(theta_f).
CVec3 feed_h_field(double rho, double phi, const DishGeometry& geom, double beta);

// PO surface current J0 = 2 n-hat x H with n-hat the feed-side unit normal.
CVec3 surface_current(double rho, double phi, const DishGeometry& geom, double beta);

// Co-pol unit vector for a y-polarized feed: component of y-hat orthogonal to
// r-hat, normalized. Singular at (psi, phi) = (pi/2, +-pi/2).
Vec3 copol_unit(double psi, double phi);

// Far-field unit vector for direction (psi, phi).
Vec3 far_field_unit(double psi, double phi);

// Per-element co-pol far-field contributions: entry n is
//   prefactor * (J0(s_n) . e_co) * e^{j beta r-hat . r'_n} * dS_n.
Eigen::VectorXcd e_vector(const FarFieldTarget& target, const RimLayout& layout,
                          const DishGeometry& geom, const FieldScale& scale = {});

// Midpoint-rule quadrature for the fixed-dish radiation integral, with node
// spacing <= lambda / nodes_per_wavelength in arc length both directions.
struct QuadratureSpec {
    double nodes_per_wavelength = 8.0;
};

// Precomputed quadrature over the fixed portion (theta_f in [0, theta1]) for
// one wavenumber; evaluation per direction is a single weighted phase sum in
// fixed node order, so results are bit-reproducible.
class FixedDishField {
  public:
    FixedDishField(const DishGeometry& geom, double beta, const QuadratureSpec& quad = {});

    cdouble eval(double psi, double phi, const FieldScale& scale = {}) const;

    double beta() const { return beta_; }
    std::size_t node_count() const { return px_.size(); }

  private:
    double beta_ = 0.0;
    std::vector<double> px_, py_, pz_;  // surface points
    std::vector<CVec3> jw_;             // current x quadrature weight
};

// Convenience single-shot evaluation of the fixed-dish co-pol field.
cdouble fixed_field(const FarFieldTarget& target, const DishGeometry& geom,
                    const FieldScale& scale = {}, const QuadratureSpec& quad = {});

// Self-convergence diagnostic: |dB change| of |E_f| when the quadrature
// density is doubled. Large values flag an under-resolved integral.
double fixed_field_doubling_delta_db(const FarFieldTarget& target, const DishGeometry& geom,
                                     const QuadratureSpec& quad = {});

// Interference-nulling linear system A w = y. Row 0 is the mainlobe row when
// present; null rows follow in target order. y = -[-delta Ef0, Ef1, ...]^T.
struct NullingSystem {
    Eigen::MatrixXcd A;
    Eigen::VectorXcd y;
    std::vector<FarFieldTarget> targets;  // same order as rows
    Eigen::VectorXcd fixed_field_values;  // E_f per row
    double delta = 0.0;
    bool has_mainlobe = false;

    Eigen::Index rows() const { return A.rows(); }
    Eigen::Index cols() const { return A.cols(); }
};

// Assembles the system for the given targets (at most one mainlobe target,
// all targets distinct in (psi, phi, beta)).
NullingSystem assemble_system(const std::vector<FarFieldTarget>& targets, double delta,
                              const RimLayout& layout, const DishGeometry& geom,
                              const FieldScale& scale = {}, const QuadratureSpec& quad = {});

}  // namespace rimnull
