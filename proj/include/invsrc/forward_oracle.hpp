#pragma once

// Forward-in-time solvers for  u_t + L u = f  and  D^alpha_t u + L u = f  with
// L u = -u''(x) + eps u''(pi - x)  on (0, pi), Dirichlet boundary.
//
// These verify reconstructions: they evolve phi under a reconstructed f and
// check that u(., T) matches the terminal observation. The physical-space
// schemes are deliberately independent of the spectral machinery — they touch
// no eigenfunction code, only second-difference stencils.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "invsrc/field.hpp"
#include "invsrc/inverse_solver.hpp"
#include "invsrc/mittag_leffler.hpp"

namespace invsrc {

/// Uniform time grid t_m = m T / M.
struct TimeGrid {
    std::size_t steps;
    double horizon;

    TimeGrid(std::size_t m, double t) : steps(m), horizon(t) {
        if (steps < 10) throw std::invalid_argument("TimeGrid: fewer than 10 steps is meaningless");
        if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be positive");
    }
    double dt() const noexcept { return horizon / static_cast<double>(steps); }
};

/// Interior points x_j = j h, j = 1..N, h = pi/(N+1) on (0, pi).
struct SpaceGrid {
    std::size_t interior_points;

    explicit SpaceGrid(std::size_t n) : interior_points(n) {
        if (n < 3) throw std::invalid_argument("SpaceGrid: needs at least 3 interior points");
        if (n > 1024) throw std::invalid_argument("SpaceGrid: dense assembly is capped at N = 1024");
    }
    double spacing() const noexcept { return M_PI / static_cast<double>(interior_points + 1); }
    std::vector<double> nodes() const {
        std::vector<double> x(interior_points);
        for (std::size_t j = 0; j < interior_points; ++j) x[j] = spacing() * static_cast<double>(j + 1);
        return x;
    }
};

/// Exact per-mode evolution of the direct problem,
///   u_k(t) = f_k/lambda_k + (phi_k - f_k/lambda_k) E_{alpha,1}(-lambda_k t^alpha),
/// evaluated at each requested time.
inline std::vector<FieldSample> forward_modal(const EigenSystem& sys, const FieldSample& phi, const FieldSample& f,
                                              FractionalOrder alpha, double horizon, std::size_t l,
                                              std::span<const double> times) {
    if (l < 1) throw std::invalid_argument("forward_modal: mode count must be >= 1");
    if (!(horizon > 0.0)) throw std::invalid_argument("forward_modal: horizon must be positive");
    const std::vector<double> phi_coeffs = analyze(sys, phi, l);
    const std::vector<double> f_coeffs = analyze(sys, f, l);
    std::vector<FieldSample> out;
    out.reserve(times.size());
    std::vector<double> coeffs(l);
    for (double t : times) {
        if (t < 0.0) throw std::invalid_argument("forward_modal: negative time");
        for (std::size_t k = 1; k <= l; ++k) {
            const double steady = f_coeffs[k - 1] / sys.lambda(k);
            coeffs[k - 1] = steady + (phi_coeffs[k - 1] - steady) * decay_factor(alpha, sys.lambda(k), t);
        }
        out.push_back(synthesize(sys, coeffs));
    }
    return out;
}

namespace detail {

// L_h = A - eps R A, with A the (2,-1)/h^2 second-difference matrix and R the
// index reversal j -> N+1-j; sampling u''(pi - x) on the uniform grid is exact
// index reversal, no interpolation.
inline Eigen::MatrixXd involution_matrix(double eps, const SpaceGrid& grid) {
    const auto n = static_cast<Eigen::Index>(grid.interior_points);
    const double h = grid.spacing();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        a(j, j) = 2.0 / (h * h);
        if (j > 0) a(j, j - 1) = -1.0 / (h * h);
        if (j + 1 < n) a(j, j + 1) = -1.0 / (h * h);
    }
    if (eps == 0.0) return a;
    Eigen::MatrixXd coupled = a;
    for (Eigen::Index j = 0; j < n; ++j) coupled.row(j) -= eps * a.row(n - 1 - j);
    return coupled;
}

inline void check_grid_data(std::span<const double> phi, std::span<const double> f, const SpaceGrid& grid,
                            const char* what) {
    if (phi.size() != grid.interior_points || f.size() != grid.interior_points)
        throw std::invalid_argument(std::string(what) + ": data not aligned with the space grid");
}

// L1 convolution weights b_j = ((j+1)^{1-a} - j^{1-a}) / (Gamma(2-a) dt^a).
inline std::vector<double> l1_weights(double alpha, double dt, std::size_t steps) {
    std::vector<double> b(steps);
    const double scale = 1.0 / (std::tgamma(2.0 - alpha) * std::pow(dt, alpha));
    for (std::size_t j = 0; j < steps; ++j)
        b[j] = (std::pow(j + 1.0, 1.0 - alpha) - std::pow(static_cast<double>(j), 1.0 - alpha)) * scale;
    return b;
}

// Scalar L1 stepping for D^alpha v + lam v = g(t), v(0) = v0. Shares the
// weight formula with the PDE scheme; used to verify the discretization order
// on manufactured solutions.
inline double l1_scalar_evolve(double alpha, double lam, double v0, const std::function<double(double)>& g,
                               double horizon, std::size_t steps) {
    const double dt = horizon / static_cast<double>(steps);
    const std::vector<double> b = l1_weights(alpha, dt, steps);
    std::vector<double> v{v0};
    std::vector<double> diff;
    v.reserve(steps + 1);
    diff.reserve(steps);
    for (std::size_t m = 1; m <= steps; ++m) {
        double memory = 0.0;
        for (std::size_t j = 1; j < m; ++j) memory += b[j] * diff[m - j - 1];
        const double vn = (g(dt * static_cast<double>(m)) + b[0] * v[m - 1] - memory) / (b[0] + lam);
        diff.push_back(vn - v[m - 1]);
        v.push_back(vn);
    }
    return v.back();
}

} // namespace detail

/// Crank-Nicolson for u_t + L u = f: each step solves
///   (I + dt/2 L_h) u^{m+1} = (I - dt/2 L_h) u^m + dt f.
/// Second order in both h and dt. Returns u(., T) on the interior grid.
inline std::vector<double> forward_fd_heat(double eps, std::span<const double> phi, std::span<const double> f,
                                           const SpaceGrid& space, const TimeGrid& time) {
    if (!(std::abs(eps) < 1.0)) throw std::invalid_argument("forward_fd_heat: requires |eps| < 1");
    detail::check_grid_data(phi, f, space, "forward_fd_heat");
    const auto n = static_cast<Eigen::Index>(space.interior_points);
    const double dt = time.dt();
    const Eigen::MatrixXd lh = detail::involution_matrix(eps, space);
    const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n, n) + 0.5 * dt * lh;
    const Eigen::MatrixXd rhs_mat = Eigen::MatrixXd::Identity(n, n) - 0.5 * dt * lh;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
    if (lu.rcond() < 1e-15)
        throw std::runtime_error("forward_fd_heat: singular step matrix"); // cannot occur for |eps| < 1
    Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(phi.data(), n);
    const Eigen::VectorXd fv = Eigen::Map<const Eigen::VectorXd>(f.data(), n);
    Eigen::VectorXd rhs(n);
    for (std::size_t m = 0; m < time.steps; ++m) {
        rhs.noalias() = rhs_mat * u;
        rhs += dt * fv;
        u = lu.solve(rhs);
    }
    return {u.data(), u.data() + n};
}

/// Implicit L1 scheme for D^alpha_t u + L u = f, 0 < alpha < 1:
///   (b_0 I + L_h) u^m = f + b_0 u^{m-1} - sum_{j=1}^{m-1} b_j (u^{m-j} - u^{m-j-1}).
/// Accuracy O(dt^{2-alpha} + h^2) for solutions smooth in time.
/// alpha = 1 routes to forward_fd_heat.
inline std::vector<double> forward_l1_subdiffusion(double eps, std::span<const double> phi, std::span<const double> f,
                                                   FractionalOrder alpha, const SpaceGrid& space,
                                                   const TimeGrid& time) {
    if (alpha.value() == 1.0) return forward_fd_heat(eps, phi, f, space, time);
    if (!(std::abs(eps) < 1.0)) throw std::invalid_argument("forward_l1_subdiffusion: requires |eps| < 1");
    detail::check_grid_data(phi, f, space, "forward_l1_subdiffusion");
    const auto n = static_cast<Eigen::Index>(space.interior_points);
    const double dt = time.dt();
    const std::vector<double> b = detail::l1_weights(alpha.value(), dt, time.steps);
    const Eigen::MatrixXd lh = detail::involution_matrix(eps, space);
    const Eigen::MatrixXd lhs = b[0] * Eigen::MatrixXd::Identity(n, n) + lh;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
    Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(phi.data(), n);
    const Eigen::VectorXd fv = Eigen::Map<const Eigen::VectorXd>(f.data(), n);
    std::vector<Eigen::VectorXd> diffs;
    diffs.reserve(time.steps);
    Eigen::VectorXd memory(n), rhs(n);
    for (std::size_t m = 1; m <= time.steps; ++m) {
        memory.setZero();
        for (std::size_t j = 1; j < m; ++j) memory += b[j] * diffs[m - j - 1];
        rhs = fv + b[0] * u - memory;
        Eigen::VectorXd un = lu.solve(rhs);
        diffs.push_back(un - u);
        u.swap(un);
    }
    return {u.data(), u.data() + n};
}

namespace detail {

// Local 4-point cubic interpolation from a uniform source grid; both grids
// here are fine and the data smooth, so the stencil error sits far below the
// scheme error.
inline std::vector<double> cubic_resample(std::span<const double> xs, std::span<const double> ys,
                                          std::span<const double> xq) {
    if (xs.size() != ys.size() || xs.size() < 4)
        throw std::invalid_argument("cubic_resample: bad source data");
    const double h = xs[1] - xs[0];
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(xs.size());
    std::vector<double> out(xq.size());
    for (std::size_t i = 0; i < xq.size(); ++i) {
        std::ptrdiff_t j = static_cast<std::ptrdiff_t>((xq[i] - xs[0]) / h);
        j = std::clamp<std::ptrdiff_t>(j, 1, n - 3);
        const double t = (xq[i] - xs[static_cast<std::size_t>(j)]) / h;
        const double ym1 = ys[static_cast<std::size_t>(j - 1)], y0 = ys[static_cast<std::size_t>(j)],
                     y1 = ys[static_cast<std::size_t>(j + 1)], y2 = ys[static_cast<std::size_t>(j + 2)];
        out[i] = -t * (t - 1.0) * (t - 2.0) / 6.0 * ym1 + (t * t - 1.0) * (t - 2.0) / 2.0 * y0 -
                 t * (t + 1.0) * (t - 2.0) / 2.0 * y1 + t * (t * t - 1.0) / 6.0 * y2;
    }
    return out;
}

inline double grid_l2(std::span<const double> v, double h) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc * h);
}

} // namespace detail

struct VerificationReport {
    double terminal_rel_error = 0.0; // ||u_oracle(.,T) - psi||_2 / max(||phi||_2, 1)
    double tolerance = 0.0;
    bool pass = false;
    double epsilon = 0.0;
    double alpha = 1.0;
    std::size_t space_points = 0;
    std::size_t time_steps = 0;
};

/// Closes the inverse -> forward loop: evolves phi under the reconstructed
/// source with the physical-space oracle and reports the relative terminal
/// mismatch against psi. The solution's operator must live on (0, pi) with a
/// uniform quadrature grid. Pass f_override to verify a specific source field
/// (e.g. one built with a closed-form L(phi)); default is evaluate_f(sol).
inline VerificationReport verify_reconstruction(double eps, const ProblemData& data, const InverseSolution& sol,
                                                const SpaceGrid& space, const TimeGrid& time, double tolerance = 5e-3,
                                                const FieldSample* f_override = nullptr) {
    const QuadratureRule& quad = sol.op.quadrature;
    if (quad.kind != QuadratureKind::composite_simpson || std::abs(quad.lower) > 1e-14 ||
        std::abs(quad.upper - M_PI) > 1e-12)
        throw std::invalid_argument("verify_reconstruction: oracle requires an operator on (0, pi)");
    const FieldSample f_field = f_override ? *f_override : evaluate_f(sol);
    const std::vector<double> xg = space.nodes();
    const std::vector<double> phi_g = detail::cubic_resample(quad.nodes, data.phi.values, xg);
    const std::vector<double> psi_g = detail::cubic_resample(quad.nodes, data.psi.values, xg);
    const std::vector<double> f_g = detail::cubic_resample(quad.nodes, f_field.values, xg);

    std::vector<double> terminal;
    if (data.alpha.value() == 1.0)
        terminal = forward_fd_heat(eps, phi_g, f_g, space, time);
    else
        terminal = forward_l1_subdiffusion(eps, phi_g, f_g, data.alpha, space, time);

    const double h = space.spacing();
    std::vector<double> residual(terminal.size());
    for (std::size_t j = 0; j < terminal.size(); ++j) residual[j] = terminal[j] - psi_g[j];
    const double err = detail::grid_l2(residual, h) / std::max(detail::grid_l2(phi_g, h), 1.0);

    VerificationReport report;
    report.terminal_rel_error = err;
    report.tolerance = tolerance;
    report.pass = err <= tolerance;
    report.epsilon = eps;
    report.alpha = data.alpha.value();
    report.space_points = space.interior_points;
    report.time_steps = time.steps;
    return report;
}

} // namespace invsrc
