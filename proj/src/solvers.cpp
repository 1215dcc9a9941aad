#include "rimnull/solvers.hpp"

#include <cmath>
#include <random>

namespace rimnull {

namespace {

Eigen::MatrixXcd gram(const NullingSystem& sys) { return sys.A * sys.A.adjoint(); }

// Phases of eta with angle(0) = 0: zero entries project to 1 + 0j.
Eigen::VectorXcd unimodular_project(const Eigen::VectorXcd& eta, std::size_t* zero_events) {
    Eigen::VectorXcd w(eta.size());
    for (Eigen::Index n = 0; n < eta.size(); ++n) {
        const double a = std::abs(eta(n));
        if (a == 0.0) {
            w(n) = cdouble(1.0, 0.0);
            if (zero_events) ++*zero_events;
        } else {
            w(n) = eta(n) / a;
        }
    }
    return w;
}

// Relative-objective-change stopping rule shared by the iterative solvers.
class ConvergenceMonitor {
  public:
    ConvergenceMonitor(double tol, int window) : tol_(tol), window_(window) {}

    bool step(double f_prev, double f_now) {
        if (f_now == 0.0) return true;
        const double rel = std::abs(f_prev - f_now) / std::max(f_prev, 1e-300);
        streak_ = rel < tol_ ? streak_ + 1 : 0;
        return streak_ >= window_;
    }

  private:
    double tol_;
    int window_;
    int streak_ = 0;
};

Eigen::LLT<Eigen::MatrixXcd> checked_llt(const NullingSystem& sys) {
    const Eigen::MatrixXcd g = gram(sys);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    if (!(lmin > 1e-12 * lmax))
        throw SingularSystemError("A A^H is numerically rank deficient (smallest eigenvalue " +
                                      std::to_string(lmin) + ")",
                                  lmin);
    return Eigen::LLT<Eigen::MatrixXcd>(g);
}

}  // namespace

double objective(const NullingSystem& sys, const Eigen::VectorXcd& w) {
    if (w.size() != sys.cols()) throw std::invalid_argument("objective: dimension mismatch");
    return (sys.A * w - sys.y).squaredNorm();
}

Eigen::VectorXcd gradient(const NullingSystem& sys, const Eigen::VectorXcd& w) {
    if (w.size() != sys.cols()) throw std::invalid_argument("gradient: dimension mismatch");
    return 2.0 * (sys.A.adjoint() * (sys.A * w - sys.y));
}

double max_eigenvalue_aah(const NullingSystem& sys) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram(sys), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

WeightSolution solve_pseudoinverse(const NullingSystem& sys) {
    auto llt = checked_llt(sys);
    WeightSolution sol;
    sol.method = "pinv";
    sol.constraint = WeightConstraint::unconstrained;
    sol.w = sys.A.adjoint() * llt.solve(sys.y);
    sol.objective_trace = {objective(sys, sol.w)};
    sol.iterations = 0;
    sol.converged = true;
    return sol;
}

WeightSolution solve_gp(const NullingSystem& sys, const SolveOptions& opts) {
    const double lam1 = max_eigenvalue_aah(sys);
    const double alpha = 1.0 / lam1;
    WeightSolution sol;
    sol.method = "gp";
    sol.constraint = WeightConstraint::unimodular;
    Eigen::VectorXcd w = Eigen::VectorXcd::Ones(sys.cols());
    sol.objective_trace.reserve(static_cast<std::size_t>(opts.max_iter) + 1);
    sol.objective_trace.push_back(objective(sys, w));
    ConvergenceMonitor mon(opts.tol, opts.tol_window);
    for (long k = 0; k < opts.max_iter; ++k) {
        const Eigen::VectorXcd r = sys.A * w - sys.y;
        const Eigen::VectorXcd eta = w - alpha * (sys.A.adjoint() * r);
        w = unimodular_project(eta, &sol.zero_phase_events);
        const double f = objective(sys, w);
        sol.objective_trace.push_back(f);
        ++sol.iterations;
        if (mon.step(sol.objective_trace[sol.objective_trace.size() - 2], f)) {
            sol.converged = true;
            break;
        }
    }
    sol.w = w;
    return sol;
}

WeightSolution solve_ap(const NullingSystem& sys, const SolveOptions& opts) {
    auto llt = checked_llt(sys);
    WeightSolution sol;
    sol.method = "ap";
    sol.constraint = WeightConstraint::unimodular;
    Eigen::VectorXcd w = Eigen::VectorXcd::Ones(sys.cols());
    sol.objective_trace.reserve(static_cast<std::size_t>(opts.max_iter) + 1);
    sol.objective_trace.push_back(objective(sys, w));
    ConvergenceMonitor mon(opts.tol, opts.tol_window);
    for (long k = 0; k < opts.max_iter; ++k) {
        const Eigen::VectorXcd r = sys.A * w - sys.y;
        const Eigen::VectorXcd eta = w - sys.A.adjoint() * llt.solve(r);
        w = unimodular_project(eta, &sol.zero_phase_events);
        const double f = objective(sys, w);
        sol.objective_trace.push_back(f);
        ++sol.iterations;
        if (mon.step(sol.objective_trace[sol.objective_trace.size() - 2], f)) {
            sol.converged = true;
            break;
        }
    }
    sol.w = w;
    return sol;
}

PairMergeResult pair_merge_closed_form(const NullingSystem& sys, const Eigen::VectorXcd& w_star) {
    if (w_star.size() != sys.cols())
        throw std::invalid_argument("pair_merge_closed_form: dimension mismatch");
    if (sys.cols() % 2 != 0)
        throw std::invalid_argument("pair_merge_closed_form: element count must be even");
    PairMergeResult res;
    res.out_of_regime = w_star.lpNorm<Eigen::Infinity>() > 1.0 + 1e-12;
    WeightSolution& sol = res.solution;
    sol.method = "pair";
    sol.constraint = WeightConstraint::unimodular;
    sol.w.resize(sys.cols());
    const Eigen::Index pairs = sys.cols() / 2;
    for (Eigen::Index n = 0; n < pairs; ++n) {
        const Eigen::VectorXcd a1 = sys.A.col(2 * n);
        const Eigen::VectorXcd a2 = sys.A.col(2 * n + 1);
        const Eigen::VectorXcd merged = 0.5 * (a1 + a2);
        const Eigen::VectorXcd num = a1 * w_star(2 * n) + a2 * w_star(2 * n + 1);
        // Elementwise ratio is a K-vector with near-equal entries; consume
        // its arithmetic mean as the scalar y_n.
        cdouble yn{0.0, 0.0};
        Eigen::Index used = 0;
        for (Eigen::Index i = 0; i < merged.size(); ++i) {
            if (std::abs(merged(i)) > 0.0) {
                yn += num(i) / merged(i);
                ++used;
            }
        }
        if (used > 0) yn /= static_cast<double>(used);
        const double half = std::min(std::abs(yn) / 2.0, 1.0);
        const double base = std::abs(yn) == 0.0 ? 0.0 : std::arg(yn);
        const double off = std::acos(half);
        sol.w(2 * n) = std::polar(1.0, base + off);
        sol.w(2 * n + 1) = std::polar(1.0, base - off);
    }
    sol.objective_trace = {objective(sys, sol.w)};
    sol.iterations = 0;
    sol.converged = true;
    return res;
}

cdouble project_psk_hull(cdouble w, int levels) {
    if (levels < 2) throw std::invalid_argument("project_psk_hull: need M >= 2");
    if (levels == 2) {
        // Hull degenerates to the real segment [-1, 1].
        return {std::clamp(w.real(), -1.0, 1.0), 0.0};
    }
    const double sector = 2.0 * kPi / levels;
    const double theta = w == cdouble(0.0, 0.0) ? 0.0 : std::arg(w);
    const double m = std::floor((theta + kPi / levels) / sector);
    const cdouble wb = w * std::polar(1.0, -sector * m);
    const double c = std::cos(kPi / levels), s = std::sin(kPi / levels);
    // Inside iff both edge half-planes adjacent to vertex e^{j 2 pi m / M}
    // hold; interior points come back untouched.
    const cdouble up = wb * std::polar(1.0, -kPi / levels);
    const cdouble dn = wb * std::polar(1.0, kPi / levels);
    if (up.real() <= c && dn.real() <= c) return w;
    // Project onto the nearer edge, rotated to the vertical.
    const double sg = wb.imag() >= 0.0 ? 1.0 : -1.0;
    const cdouble u = sg > 0.0 ? up : dn;
    const cdouble out{c, std::clamp(u.imag(), -s, s)};
    return out * std::polar(1.0, sg * kPi / levels) * std::polar(1.0, sector * m);
}

Eigen::VectorXcd project_psk_hull(const Eigen::VectorXcd& w, int levels) {
    Eigen::VectorXcd out(w.size());
    for (Eigen::Index n = 0; n < w.size(); ++n) out(n) = project_psk_hull(w(n), levels);
    return out;
}

cdouble project_psk_hull_printed(cdouble w, int levels) {
    if (levels < 2) throw std::invalid_argument("project_psk_hull_printed: need M >= 2");
    const double sector = 2.0 * kPi / levels;
    const double theta = w == cdouble(0.0, 0.0) ? 0.0 : std::arg(w);
    const double m = std::floor((theta + kPi / levels) / sector);
    const cdouble wb = w * std::polar(1.0, -sector * m);
    const double re = std::clamp(wb.real(), 0.0, std::cos(kPi / levels));
    const double im = std::clamp(wb.imag(), -std::sin(kPi / levels), std::sin(kPi / levels));
    return std::polar(1.0, sector * m) * cdouble(re, im);
}

Eigen::VectorXcd snap_to_psk(const Eigen::VectorXcd& w, int levels) {
    const double sector = 2.0 * kPi / levels;
    Eigen::VectorXcd out(w.size());
    for (Eigen::Index n = 0; n < w.size(); ++n) {
        const double theta = w(n) == cdouble(0.0, 0.0) ? 0.0 : std::arg(w(n));
        out(n) = std::polar(1.0, sector * std::round(theta / sector));
    }
    return out;
}

double majorant_value(const Eigen::VectorXcd& w, const Eigen::VectorXcd& wk,
                      const NullingSystem& sys, double c) {
    const cdouble inner = wk.dot(w - wk);  // wk^H (w - wk)
    return objective(sys, w) - 2.0 * c * inner.real() - c * wk.squaredNorm();
}

WeightSolution solve_expp(const NullingSystem& sys, int levels, PenaltySchedule schedule,
                          SolveOptions opts) {
    if (levels < 2) throw std::invalid_argument("solve_expp: need M >= 2");
    const double lam1 = max_eigenvalue_aah(sys);
    if (schedule.beta_step == 0.0) schedule.beta_step = 1.1 * lam1;
    if (schedule.c_max == 0.0) schedule.c_max = 0.55 * lam1;
    if (!(schedule.c_max > lam1 / 2.0))
        throw std::invalid_argument("solve_expp: schedule requires c_max > lambda_1 / 2");
    if (!(schedule.beta_step > lam1))
        throw std::invalid_argument("solve_expp: schedule requires beta_step > lambda_1");
    if (schedule.ramp_iters < 1) schedule.ramp_iters = 1;

    WeightSolution sol;
    sol.method = "expp";
    sol.constraint = WeightConstraint::psk;
    sol.psk_levels = levels;
    Eigen::VectorXcd w = Eigen::VectorXcd::Ones(sys.cols());
    Eigen::VectorXcd w_prev = w;
    double xi_prev = 0.0;
    sol.objective_trace.reserve(static_cast<std::size_t>(opts.max_iter) + 2);
    sol.objective_trace.push_back(objective(sys, w));
    sol.penalty_trace.reserve(static_cast<std::size_t>(opts.max_iter) + 2);
    sol.penalty_trace.push_back(0.0);
    ConvergenceMonitor mon(opts.tol, opts.tol_window);
    for (long k = 0; k < opts.max_iter; ++k) {
        const double c =
            schedule.c_max * std::min(1.0, static_cast<double>(k) / schedule.ramp_iters);
        const double xi = (1.0 + std::sqrt(1.0 + 4.0 * xi_prev * xi_prev)) / 2.0;
        const double accel = (xi_prev - 1.0) / xi;
        const Eigen::VectorXcd z = w + accel * (w - w_prev);
        const Eigen::VectorXcd g = sys.A.adjoint() * (sys.A * z - sys.y) - c * w;
        w_prev = w;
        w = project_psk_hull(Eigen::VectorXcd(z - g / schedule.beta_step), levels);
        xi_prev = xi;
        const double f = objective(sys, w);
        sol.objective_trace.push_back(f);
        sol.penalty_trace.push_back(c);
        ++sol.iterations;
        if (c == schedule.c_max &&
            mon.step(sol.objective_trace[sol.objective_trace.size() - 2], f)) {
            sol.converged = true;
            break;
        }
    }
    const Eigen::VectorXcd snapped = snap_to_psk(w, levels);
    sol.snap_distance = (w - snapped).lpNorm<Eigen::Infinity>();
    sol.w = snapped;
    sol.objective_trace.push_back(objective(sys, sol.w));
    sol.penalty_trace.push_back(sol.penalty_trace.back());
    return sol;
}

WeightSolution solve_sa_baseline(const NullingSystem& sys, int levels, std::uint64_t seed,
                                 const SaSchedule& schedule) {
    if (levels < 2) throw std::invalid_argument("solve_sa_baseline: need M >= 2");
    const auto n = sys.cols();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<cdouble> level_values(static_cast<std::size_t>(levels));
    for (int k = 0; k < levels; ++k)
        level_values[static_cast<std::size_t>(k)] = std::polar(1.0, 2.0 * kPi * k / levels);

    WeightSolution sol;
    sol.method = "sa";
    sol.constraint = WeightConstraint::psk;
    sol.psk_levels = levels;
    Eigen::VectorXcd w = Eigen::VectorXcd::Ones(n);
    std::vector<int> level_idx(static_cast<std::size_t>(n), 0);
    Eigen::VectorXcd r = sys.A * w - sys.y;
    double f = r.squaredNorm();
    double temp = schedule.initial_temp_scale * f;

    const int clusters = std::clamp<int>(schedule.clusters, 0, static_cast<int>(n));
    std::uniform_int_distribution<Eigen::Index> pick_element(0, n - 1);
    std::uniform_int_distribution<int> pick_cluster(0, std::max(clusters - 1, 0));
    std::uniform_int_distribution<int> pick_offset(1, levels - 1);

    sol.objective_trace.reserve(static_cast<std::size_t>(schedule.max_iter) + 1);
    sol.objective_trace.push_back(f);
    Eigen::VectorXcd r_new(r.size());
    for (long step = 0; step < schedule.max_iter; ++step) {
        const int offset = pick_offset(rng);
        Eigen::Index first = 0, last = 0;  // [first, last)
        if (clusters > 0) {
            const int cl = pick_cluster(rng);
            first = n * cl / clusters;
            last = n * (cl + 1) / clusters;
        } else {
            first = pick_element(rng);
            last = first + 1;
        }
        r_new = r;
        const cdouble rot = level_values[static_cast<std::size_t>(offset)];
        for (Eigen::Index i = first; i < last; ++i)
            r_new += sys.A.col(i) * (w(i) * (rot - 1.0));
        const double f_new = r_new.squaredNorm();
        bool accept = f_new < f;
        if (!accept && temp > 0.0) accept = unit(rng) < std::exp(-(f_new - f) / temp);
        if (accept) {
            for (Eigen::Index i = first; i < last; ++i) {
                level_idx[static_cast<std::size_t>(i)] =
                    (level_idx[static_cast<std::size_t>(i)] + offset) % levels;
                w(i) = level_values[static_cast<std::size_t>(level_idx[static_cast<std::size_t>(i)])];
            }
            r.swap(r_new);
            f = f_new;
        }
        temp *= schedule.cooling;
        // Refresh the incremental residual periodically to cap drift.
        if ((step & 0xfff) == 0xfff) {
            r = sys.A * w - sys.y;
            f = r.squaredNorm();
        }
        sol.objective_trace.push_back(f);
        ++sol.iterations;
    }
    sol.w = w;
    sol.converged = true;
    return sol;
}

}  // namespace rimnull
