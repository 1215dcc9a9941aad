#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "rimnull/po_field.hpp"
#include "rimnull/solvers.hpp"

namespace rimnull {

// Gains below this floor are clamped so CSV output stays finite at
// machine-zero fields.
inline constexpr double kGainFloorDb = -400.0;

// Total co-pol field E_f + e^T w at one direction.
cdouble total_field(const FarFieldTarget& target, const Eigen::VectorXcd& w,
                    const RimLayout& layout, const DishGeometry& geom,
                    const FieldScale& scale = {}, const QuadratureSpec& quad = {});

// Feed power normalizer for nominal dBi: the cos^q feed integrated over the
// forward hemisphere gives P_rad = eta0 pi |I0|^2 / (2q + 1).
double radiated_power_norm(const DishGeometry& geom);

// Nominal gain 10 log10(4 pi U / P_rad) with U = |E|^2 / (2 eta0). Absolute
// levels are nominal (the spreading factor is dropped from E); differences
// between directions are meaningful.
double nominal_dbi(double e_co_abs, const DishGeometry& geom);

// A named weight set for pattern evaluation. The reference (w = 1) column is
// always produced and is not listed here.
struct WeightSet {
    std::string name;
    Eigen::VectorXcd w;
};

struct PatternCut {
    double plane_phi = 0.0;              // radians
    double beta = 0.0;
    std::vector<double> psi;             // radians, strictly increasing
    std::vector<double> reference_db;    // w = 1, relative to its boresight peak
    std::vector<std::string> methods;
    std::vector<std::vector<double>> method_db;  // same normalization as reference_db
    double peak_dbi = 0.0;               // nominal dBi of the reference boresight peak
};

// Far-field cut over psi at fixed azimuth plane. Direction samples run in
// parallel with slot writes, so output is independent of the thread count.
PatternCut pattern_cut(double plane_phi, double psi_start, double psi_stop, double psi_step,
                       double beta, const std::vector<WeightSet>& weights,
                       const RimLayout& layout, const DishGeometry& geom,
                       const FieldScale& scale = {}, const QuadratureSpec& quad = {});

struct NullTargetReport {
    FarFieldTarget target;
    double suppression_db = 0.0;  // gain(w = 1) - gain(w), dB, at the target
    double residual = 0.0;        // |A_i w - y_i|^2
    double gain_rel_boresight_db = 0.0;
};

struct NullReport {
    std::vector<NullTargetReport> targets;          // null rows only
    std::optional<double> mainlobe_delta_db;        // 20 log10 |E(0)| / |E_f(0)|
    double objective = 0.0;                         // ||A w - y||^2
};

// Per-target suppression and residuals for a weight vector against an
// assembled system (fields reused from the assembly, no re-integration).
NullReport null_report(const NullingSystem& sys, const Eigen::VectorXcd& w);

struct ConvergenceRow {
    std::string method;
    long iterations = 0;
    double final_objective = 0.0;
    long iters_to_threshold = -1;  // first k with f(w^k) <= 1e-6 ||y||^2
};

// Compares solver traces that share one system's objective definition.
std::vector<ConvergenceRow> convergence_compare(const NullingSystem& sys,
                                                const std::vector<WeightSolution>& solutions);

}  // namespace rimnull
