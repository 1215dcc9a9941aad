#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rimnull/po_field.hpp"

namespace rimnull {

// Zeroth-order Bessel function of the first kind, <= 1e-10 absolute error
// (power series up to |x| = 12, Hankel asymptotic expansion beyond).
double bessel_j0(double x);

// Sample correlation coefficient between two equally sized complex vectors:
//   (1/(N-1)) sum ((e1 - mu1)/sigma1)^* ((e2 - mu2)/sigma2).
cdouble corr_empirical(const Eigen::VectorXcd& e1, const Eigen::VectorXcd& e2);

// The (1/N) sum of elementwise ratios e2_n / e1_n.
cdouble corr_mean_ratio(const Eigen::VectorXcd& e1, const Eigen::VectorXcd& e2);

// Small-angle closed form J0(rho_bar sqrt(a^2 + b^2)) e^{-j d_beta f} with
//   a = b2 psi2 cos(phi2) - b1 psi1 cos(phi1),
//   b = b2 psi2 sin(phi2) - b1 psi1 sin(phi1).
cdouble corr_analytic(const FarFieldTarget& t1, const FarFieldTarget& t2, double rho_bar,
                      double focal_length);

// Closed-form approximate elementwise ratio e2_n / e1_n for one element.
cdouble ratio_cn(const FarFieldTarget& t1, const FarFieldTarget& t2, double rho_element,
                 double phi_element, double focal_length);

struct CorrelationReport {
    FarFieldTarget t1, t2;
    double rho_bar = 0.0;
    cdouble empirical{0.0, 0.0};
    cdouble mean_ratio{0.0, 0.0};
    cdouble analytic{0.0, 0.0};
    double abs_error = 0.0;      // |empirical - analytic|
    bool small_angle_ok = true;  // both zeniths within the ~5 deg regime
};

CorrelationReport correlation_report(const FarFieldTarget& t1, const FarFieldTarget& t2,
                                     const RimLayout& layout, const DishGeometry& geom,
                                     const FieldScale& scale = {});

// Eigenvalue bound check: ||e_i||^2 - ||E||_F <= lambda_i(AA^H) <=
// ||e_i||^2 + ||E||_F with E the off-diagonal part of AA^H. Requires
// near-equal row norms (within 2%); otherwise reported as skipped.
struct Lemma1Row {
    double row_norm_sq = 0.0;
    double eigenvalue = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool within = false;
};
struct Lemma1Report {
    bool premise_ok = false;
    double row_norm_spread = 0.0;  // max/min row norm - 1
    double off_diag_fro = 0.0;
    std::vector<Lemma1Row> rows;   // eigenvalues in decreasing order
    bool all_within() const;
};
Lemma1Report lemma1_bounds(const NullingSystem& sys);

// K = 2 closed form: eigenvalues of AA^H are ||e||^2 +- |e1^H e2|, and
// |e1^H e2| is approximated by N sigma^2 |C|.
struct K2Report {
    double lambda_direct[2] = {0.0, 0.0};  // decreasing
    double lambda_predicted[2] = {0.0, 0.0};
    double cond_aah_direct = 0.0;
    double cond_aah_predicted = 0.0;
    cdouble corr{0.0, 0.0};
    double norm_spread = 0.0;
};
K2Report k2_condition_relation(const Eigen::VectorXcd& e1, const Eigen::VectorXcd& e2);

// ||w*||_inf threshold below which a perfect unimodular solution is
// predicted: (sqrt(2 N^2 + 2 N + 1) + 1) / (N + 1), decreasing to sqrt(2).
double epsilon_threshold(std::size_t n_elements);

struct FeasibilityVerdict {
    double inf_norm = 0.0;
    double energy_lhs = 0.0;  // sum of |w*_n| over entries with |w*_n| < 1
    double energy_rhs = 0.0;  // sum over entries with |w*_n| > 1
    double epsilon_thresh = 0.0;
    bool predicted_feasible = false;  // inf_norm < epsilon (headline verdict)
    bool energy_criterion = false;    // energy_lhs >= energy_rhs
};
FeasibilityVerdict feasibility_predict(const Eigen::VectorXcd& w_star);

}  // namespace rimnull
