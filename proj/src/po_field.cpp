#include "rimnull/po_field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace rimnull {

void FarFieldTarget::validate() const {
    if (!(psi >= 0.0 && psi < kPi / 2.0))
        throw std::invalid_argument("FarFieldTarget: psi must be in [0, pi/2)");
    if (!(beta > 0.0)) throw std::invalid_argument("FarFieldTarget: beta must be positive");
    if (kind == Kind::mainlobe && psi != 0.0)
        throw std::invalid_argument("FarFieldTarget: mainlobe target must have psi = 0");
}

bool same_direction(const FarFieldTarget& a, const FarFieldTarget& b) {
    return a.psi == b.psi && a.phi == b.phi && a.beta == b.beta;
}

double norm(const CVec3& v) {
    return std::sqrt(std::norm(v.x) + std::norm(v.y) + std::norm(v.z));
}

CVec3 feed_h_field(double rho, double phi, const DishGeometry& geom, double beta) {
    const FeedRay ray = feed_vector(rho, phi, geom.focal_length);
    // y-hat x s-hat
    const Vec3 u{ray.direction.z, 0.0, -ray.direction.x};
    const double un = norm(u);
    if (un < 1e-14) throw std::domain_error("feed_h_field: feed direction parallel to y-hat");
    const double t = rho / (2.0 * geom.focal_length);
    const double cos_theta_f = (1.0 - t * t) / (1.0 + t * t);
    const cdouble amp = geom.feed_amplitude *
                        std::polar(1.0 / ray.distance, -beta * ray.distance) *
                        std::pow(cos_theta_f, geom.feed_exponent);
    return {amp * (u.x / un), amp * (u.y / un), amp * (u.z / un)};
}

CVec3 surface_current(double rho, double phi, const DishGeometry& geom, double beta) {
    const CVec3 h = feed_h_field(rho, phi, geom, beta);
    const double inv2f = 1.0 / (2.0 * geom.focal_length);
    const Vec3 n = normalized({-rho * std::cos(phi) * inv2f, -rho * std::sin(phi) * inv2f, 1.0});
    return 2.0 * cdouble(1.0, 0.0) * cross(n, h);
}

Vec3 copol_unit(double psi, double phi) {
    const double sp = std::sin(psi), cp = std::cos(psi);
    const double sf = std::sin(phi), cf = std::cos(phi);
    const double d2 = 1.0 - sp * sp * sf * sf;
    if (d2 < 1e-24) throw std::domain_error("copol_unit: singular at psi=pi/2, phi=+-pi/2");
    const double d = std::sqrt(d2);
    return {-sp * sp * cf * sf / d, (cp * cp + sp * sp * cf * cf) / d, -cp * sp * sf / d};
}

Vec3 far_field_unit(double psi, double phi) {
    return {std::sin(psi) * std::cos(phi), std::sin(psi) * std::sin(phi), std::cos(psi)};
}

Eigen::VectorXcd e_vector(const FarFieldTarget& target, const RimLayout& layout,
                          const DishGeometry& geom, const FieldScale& scale) {
    target.validate();
    if (layout.size() == 0) throw std::invalid_argument("e_vector: empty layout");
    const Vec3 ec = copol_unit(target.psi, target.phi);
    const Vec3 r = far_field_unit(target.psi, target.phi);
    const cdouble pref = scale.prefactor(target.beta);
    Eigen::VectorXcd e(static_cast<Eigen::Index>(layout.size()));
    for (std::size_t n = 0; n < layout.size(); ++n) {
        const CVec3 j = surface_current(layout.rho[n], layout.phi[n], geom, target.beta);
        const Vec3 rp = surface_point(layout.rho[n], layout.phi[n], geom.focal_length);
        const double phase = target.beta * dot(r, rp);
        e(static_cast<Eigen::Index>(n)) =
            pref * dot(j, ec) * std::polar(1.0, phase) * layout.area[n];
    }
    return e;
}

FixedDishField::FixedDishField(const DishGeometry& geom, double beta, const QuadratureSpec& quad)
    : beta_(beta) {
    geom.validate();
    if (!(beta > 0.0)) throw std::invalid_argument("FixedDishField: beta must be positive");
    if (!(quad.nodes_per_wavelength >= 2.0))
        throw std::invalid_argument("FixedDishField: nodes_per_wavelength must be >= 2");
    const double lambda = 2.0 * kPi / beta;
    const double target_arc = lambda / quad.nodes_per_wavelength;
    const double rho1 = geom.rho_inner();
    const double inv2f = 1.0 / (2.0 * geom.focal_length);
    // Radial spacing conservative for the steepest slant (at rho1).
    const double slant_max = std::sqrt(1.0 + rho1 * inv2f * rho1 * inv2f);
    const auto n_rad = static_cast<std::size_t>(std::ceil(rho1 * slant_max / target_arc));
    const double drho = rho1 / static_cast<double>(n_rad);
    for (std::size_t i = 0; i < n_rad; ++i) {
        const double rc = (static_cast<double>(i) + 0.5) * drho;
        const double slant = std::sqrt(1.0 + rc * inv2f * rc * inv2f);
        const auto n_phi = std::max<std::size_t>(
            static_cast<std::size_t>(std::ceil(2.0 * kPi * rc / target_arc)), 4);
        const double dphi = 2.0 * kPi / static_cast<double>(n_phi);
        const double weight = slant * rc * drho * dphi;
        for (std::size_t m = 0; m < n_phi; ++m) {
            const double ph = (static_cast<double>(m) + 0.5) * dphi;
            const Vec3 p = surface_point(rc, ph, geom.focal_length);
            const CVec3 j = surface_current(rc, ph, geom, beta);
            px_.push_back(p.x);
            py_.push_back(p.y);
            pz_.push_back(p.z);
            jw_.push_back(weight * cdouble(1.0, 0.0) * j);
        }
    }
}

cdouble FixedDishField::eval(double psi, double phi, const FieldScale& scale) const {
    const Vec3 ec = copol_unit(psi, phi);
    const Vec3 r = far_field_unit(psi, phi);
    const double bx = beta_ * r.x, by = beta_ * r.y, bz = beta_ * r.z;
    cdouble acc{0.0, 0.0};
    const std::size_t n = px_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double phase = bx * px_[i] + by * py_[i] + bz * pz_[i];
        const cdouble g = dot(jw_[i], ec);
        acc += g * cdouble(std::cos(phase), std::sin(phase));
    }
    return scale.prefactor(beta_) * acc;
}

cdouble fixed_field(const FarFieldTarget& target, const DishGeometry& geom,
                    const FieldScale& scale, const QuadratureSpec& quad) {
    target.validate();
    return FixedDishField(geom, target.beta, quad).eval(target.psi, target.phi, scale);
}

double fixed_field_doubling_delta_db(const FarFieldTarget& target, const DishGeometry& geom,
                                     const QuadratureSpec& quad) {
    const cdouble a = fixed_field(target, geom, {}, quad);
    QuadratureSpec fine = quad;
    fine.nodes_per_wavelength *= 2.0;
    const cdouble b = fixed_field(target, geom, {}, fine);
    return std::abs(20.0 * std::log10(std::abs(b) / std::abs(a)));
}

NullingSystem assemble_system(const std::vector<FarFieldTarget>& targets, double delta,
                              const RimLayout& layout, const DishGeometry& geom,
                              const FieldScale& scale, const QuadratureSpec& quad) {
    if (targets.empty()) throw std::invalid_argument("assemble_system: no targets");
    for (const auto& t : targets) t.validate();
    for (std::size_t i = 0; i < targets.size(); ++i)
        for (std::size_t j = i + 1; j < targets.size(); ++j)
            if (same_direction(targets[i], targets[j]))
                throw std::invalid_argument("assemble_system: duplicate targets make the system degenerate");

    std::vector<FarFieldTarget> ordered;
    ordered.reserve(targets.size());
    std::size_t n_main = 0;
    for (const auto& t : targets)
        if (t.kind == FarFieldTarget::Kind::mainlobe) {
            ordered.push_back(t);
            ++n_main;
        }
    if (n_main > 1) throw std::invalid_argument("assemble_system: at most one mainlobe target");
    for (const auto& t : targets)
        if (t.kind == FarFieldTarget::Kind::null) ordered.push_back(t);

    NullingSystem sys;
    sys.targets = ordered;
    sys.delta = delta;
    sys.has_mainlobe = n_main == 1;
    const auto rows = static_cast<Eigen::Index>(ordered.size());
    sys.A.resize(rows, static_cast<Eigen::Index>(layout.size()));
    sys.y.resize(rows);
    sys.fixed_field_values.resize(rows);

    std::map<double, FixedDishField> fixed_by_beta;
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& t = ordered[static_cast<std::size_t>(i)];
        sys.A.row(i) = e_vector(t, layout, geom, scale).transpose();
        auto it = fixed_by_beta.find(t.beta);
        if (it == fixed_by_beta.end())
            it = fixed_by_beta.emplace(t.beta, FixedDishField(geom, t.beta, quad)).first;
        const cdouble ef = it->second.eval(t.psi, t.phi, scale);
        sys.fixed_field_values(i) = ef;
        sys.y(i) = t.kind == FarFieldTarget::Kind::mainlobe ? delta * ef : -ef;
    }
    return sys;
}

}  // namespace rimnull
