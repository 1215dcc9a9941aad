#include "rimnull/evaluation.hpp"

#include <cmath>
#include <stdexcept>

#include "rimnull/parallel.hpp"

namespace rimnull {

namespace {

double rel_db(double amplitude, double peak_amplitude) {
    if (amplitude <= 0.0 || peak_amplitude <= 0.0) return kGainFloorDb;
    return std::max(20.0 * std::log10(amplitude / peak_amplitude), kGainFloorDb);
}

}  // namespace

cdouble total_field(const FarFieldTarget& target, const Eigen::VectorXcd& w,
                    const RimLayout& layout, const DishGeometry& geom, const FieldScale& scale,
                    const QuadratureSpec& quad) {
    if (static_cast<std::size_t>(w.size()) != layout.size())
        throw std::invalid_argument("total_field: weight length != element count");
    const cdouble ef = fixed_field(target, geom, scale, quad);
    const Eigen::VectorXcd e = e_vector(target, layout, geom, scale);
    return ef + (e.array() * w.array()).sum();
}

double radiated_power_norm(const DishGeometry& geom) {
    return wave_impedance() * kPi * std::norm(geom.feed_amplitude) /
           (2.0 * geom.feed_exponent + 1.0);
}

double nominal_dbi(double e_co_abs, const DishGeometry& geom) {
    const double u = e_co_abs * e_co_abs / (2.0 * wave_impedance());
    return 10.0 * std::log10(4.0 * kPi * u / radiated_power_norm(geom));
}

PatternCut pattern_cut(double plane_phi, double psi_start, double psi_stop, double psi_step,
                       double beta, const std::vector<WeightSet>& weights,
                       const RimLayout& layout, const DishGeometry& geom,
                       const FieldScale& scale, const QuadratureSpec& quad) {
    if (!(psi_step > 0.0)) throw std::invalid_argument("pattern_cut: psi_step must be positive");
    if (!(psi_stop >= psi_start)) throw std::invalid_argument("pattern_cut: empty psi range");
    PatternCut cut;
    cut.plane_phi = plane_phi;
    cut.beta = beta;
    const auto n_samples =
        static_cast<std::size_t>(std::floor((psi_stop - psi_start) / psi_step + 0.5)) + 1;
    cut.psi.resize(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i)
        cut.psi[i] = psi_start + static_cast<double>(i) * psi_step;

    const FixedDishField fixed(geom, beta, quad);
    const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(layout.size()));

    std::vector<double> ref_amp(n_samples);
    std::vector<std::vector<double>> method_amp(weights.size(), std::vector<double>(n_samples));
    parallel_for(n_samples, [&](std::size_t i) {
        FarFieldTarget t{cut.psi[i], plane_phi, beta, FarFieldTarget::Kind::null};
        const cdouble ef = fixed.eval(t.psi, t.phi, scale);
        const Eigen::VectorXcd e = e_vector(t, layout, geom, scale);
        ref_amp[i] = std::abs(ef + (e.array() * ones.array()).sum());
        for (std::size_t m = 0; m < weights.size(); ++m)
            method_amp[m][i] = std::abs(ef + (e.array() * weights[m].w.array()).sum());
    });

    // Reference boresight: evaluated at psi = 0 even when the sweep starts
    // elsewhere, so normalization does not depend on the requested range.
    double peak = 0.0;
    if (!cut.psi.empty() && cut.psi.front() == 0.0) {
        peak = ref_amp.front();
    } else {
        FarFieldTarget t0{0.0, plane_phi, beta, FarFieldTarget::Kind::null};
        const Eigen::VectorXcd e0 = e_vector(t0, layout, geom, scale);
        peak = std::abs(fixed.eval(0.0, plane_phi, scale) + (e0.array() * ones.array()).sum());
    }
    cut.peak_dbi = nominal_dbi(peak / std::abs(scale.scale), geom);

    cut.reference_db.resize(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) cut.reference_db[i] = rel_db(ref_amp[i], peak);
    for (std::size_t m = 0; m < weights.size(); ++m) {
        cut.methods.push_back(weights[m].name);
        std::vector<double> db(n_samples);
        for (std::size_t i = 0; i < n_samples; ++i) db[i] = rel_db(method_amp[m][i], peak);
        cut.method_db.push_back(std::move(db));
    }
    return cut;
}

NullReport null_report(const NullingSystem& sys, const Eigen::VectorXcd& w) {
    if (w.size() != sys.cols()) throw std::invalid_argument("null_report: dimension mismatch");
    NullReport rep;
    rep.objective = objective(sys, w);
    const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(sys.cols());
    double boresight_ref = 0.0;
    if (sys.has_mainlobe) {
        const cdouble ef0 = sys.fixed_field_values(0);
        const cdouble aw0 = sys.A.row(0).cwiseProduct(w.transpose()).sum();
        rep.mainlobe_delta_db =
            20.0 * std::log10(std::max(std::abs(ef0 + aw0) / std::abs(ef0), 1e-20));
        boresight_ref = std::abs(ef0 + sys.A.row(0).sum());
    }
    for (Eigen::Index i = 0; i < sys.rows(); ++i) {
        const auto& t = sys.targets[static_cast<std::size_t>(i)];
        if (t.kind != FarFieldTarget::Kind::null) continue;
        NullTargetReport r;
        r.target = t;
        const cdouble awi = sys.A.row(i).cwiseProduct(w.transpose()).sum();
        const cdouble got = sys.fixed_field_values(i) + awi;
        const cdouble ref = sys.fixed_field_values(i) + sys.A.row(i).sum();
        r.suppression_db =
            std::min(20.0 * std::log10(std::abs(ref) / std::max(std::abs(got), 1e-300)),
                     -kGainFloorDb);
        r.residual = std::norm(awi - sys.y(i));
        r.gain_rel_boresight_db =
            boresight_ref > 0.0 ? rel_db(std::abs(got), boresight_ref) : 0.0;
        rep.targets.push_back(r);
    }
    return rep;
}

std::vector<ConvergenceRow> convergence_compare(const NullingSystem& sys,
                                                const std::vector<WeightSolution>& solutions) {
    const double threshold = 1e-6 * sys.y.squaredNorm();
    std::vector<ConvergenceRow> rows;
    for (const auto& sol : solutions) {
        ConvergenceRow row;
        row.method = sol.method;
        row.iterations = sol.iterations;
        row.final_objective = sol.objective();
        for (std::size_t k = 0; k < sol.objective_trace.size(); ++k) {
            if (sol.objective_trace[k] <= threshold) {
                row.iters_to_threshold = static_cast<long>(k);
                break;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace rimnull
