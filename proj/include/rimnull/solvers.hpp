#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rimnull/po_field.hpp"

namespace rimnull {

enum class WeightConstraint { unconstrained, unimodular, psk };

struct WeightSolution {
    std::string method;
    Eigen::VectorXcd w;
    WeightConstraint constraint = WeightConstraint::unconstrained;
    int psk_levels = 0;
    std::vector<double> objective_trace;  // f(w^k), k = 0.. (index 0 is the start point)
    std::vector<double> penalty_trace;    // c per iteration (EXPP only)
    long iterations = 0;
    bool converged = false;
    double snap_distance = 0.0;       // EXPP: max distance moved by the final PSK snap
    std::size_t zero_phase_events = 0;  // occurrences of the angle(0) = 0 convention

    double objective() const { return objective_trace.empty() ? 0.0 : objective_trace.back(); }
};

struct SolveOptions {
    double tol = 1e-10;    // relative objective change
    int tol_window = 50;   // consecutive iterations below tol
    long max_iter = 200000;
};

class SingularSystemError : public std::runtime_error {
  public:
    SingularSystemError(const std::string& what, double smallest_eigenvalue)
        : std::runtime_error(what), smallest_eigenvalue_(smallest_eigenvalue) {}
    double smallest_eigenvalue() const { return smallest_eigenvalue_; }

  private:
    double smallest_eigenvalue_;
};

// f(w) = ||A w - y||^2 and its gradient 2 A^H (A w - y) (real-pair gradient
// packed as a complex vector; the algorithms step along A^H (A w - y) with
// the factor 2 absorbed into the step size).
double objective(const NullingSystem& sys, const Eigen::VectorXcd& w);
Eigen::VectorXcd gradient(const NullingSystem& sys, const Eigen::VectorXcd& w);

// Largest eigenvalue of A A^H (equals the largest eigenvalue of A^H A).
double max_eigenvalue_aah(const NullingSystem& sys);

// Minimum-norm exact solution w* = A^H (A A^H)^{-1} y. Throws
// SingularSystemError when A A^H is numerically rank deficient.
WeightSolution solve_pseudoinverse(const NullingSystem& sys);

// Gradient projection (step 1/lambda_1(AA^H), projection onto |w_n| = 1).
WeightSolution solve_gp(const NullingSystem& sys, const SolveOptions& opts = {});

// Alternating projection between the affine set {Aw = y} and the unimodular
// set; shares the A A^H factorization with the pseudoinverse.
WeightSolution solve_ap(const NullingSystem& sys, const SolveOptions& opts = {});

// Closed-form near-optimal unimodular weights from the unconstrained optimum:
// adjacent columns are merged pairwise and each pair of phases solves
// cos(t1)+cos(t2) = Re(y_n), sin(t1)+sin(t2) = Im(y_n). The elementwise
// ratio defining y_n is a K-vector with near-equal entries; its arithmetic
// mean is used. Intended regime ||w*||_inf <= 1 (flagged outside it).
struct PairMergeResult {
    WeightSolution solution;
    bool out_of_regime = false;  // ||w*||_inf > 1
};
PairMergeResult pair_merge_closed_form(const NullingSystem& sys, const Eigen::VectorXcd& w_star);

// Exact Euclidean projection onto the convex hull of the M-PSK points
// {e^{j 2 pi k / M}}. Matches a 2-D QP oracle to machine precision.
cdouble project_psk_hull(cdouble w, int levels);
Eigen::VectorXcd project_psk_hull(const Eigen::VectorXcd& w, int levels);

// The closed-form projection as printed in its source (box clamp in the
// vertex-centered sector). It moves hull vertices inward (e.g. M=4, w=1 ->
// 0.7071) and can emit points outside the hull; kept as a diagnostic,
// never used on the solver path.
cdouble project_psk_hull_printed(cdouble w, int levels);

// Nearest M-PSK point, elementwise.
Eigen::VectorXcd snap_to_psk(const Eigen::VectorXcd& w, int levels);

// Majorant of the penalized objective F_c(w) = f(w) - c ||w||^2 at anchor wk:
//   g_c(w | wk) = f(w) - 2 c Re(wk^H (w - wk)) - c ||wk||^2.
double majorant_value(const Eigen::VectorXcd& w, const Eigen::VectorXcd& wk,
                      const NullingSystem& sys, double c);

// EXPP penalty schedule. Zero fields are auto-filled from lambda_1(A^H A):
// beta_step = 1.1 lambda_1, c_max = 0.55 lambda_1. The strict inequalities
// c_max > lambda_1 / 2 and beta_step > lambda_1 are enforced.
struct PenaltySchedule {
    double c_max = 0.0;
    double beta_step = 0.0;
    long ramp_iters = 1000;
};

// Extreme point pursuit for M-PSK weights: Nesterov-extrapolated one-step
// gradient on the majorant, projected onto the PSK hull, with c ramped
// linearly from 0 to c_max. The final iterate is snapped to M-PSK points and
// the snap distance reported.
WeightSolution solve_expp(const NullingSystem& sys, int levels, PenaltySchedule schedule = {},
                          SolveOptions opts = {1e-10, 50, 5000});

// Simulated-annealing baseline: one random single-element (or cluster) PSK
// move per step, Metropolis acceptance, geometric cooling. Fully seeded.
struct SaSchedule {
    double initial_temp_scale = 0.1;  // T0 = scale * f(w0)
    double cooling = 0.999;           // per-step factor
    long max_iter = 100000;
    int clusters = 0;                 // 0 = single-element moves
};
WeightSolution solve_sa_baseline(const NullingSystem& sys, int levels, std::uint64_t seed,
                                 const SaSchedule& schedule = {});

}  // namespace rimnull
