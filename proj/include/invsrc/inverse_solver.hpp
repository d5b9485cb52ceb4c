#pragma once

// Reconstruction of the pair (u, f) from initial data phi and terminal
// observation psi for  D^alpha_t u + L u = f,  u(.,0) = phi,  u(.,T) = psi.
//
// Per mode, with decay E_k = E_{alpha,1}(-lambda_k T^alpha):
//     C_k = (phi_k - psi_k) / (1 - E_k)
//     f_k = lambda_k (phi_k - C_k)
//     u_k(t) = f_k / lambda_k + C_k E_{alpha,1}(-lambda_k t^alpha)
// alpha = 1 reduces every decay factor to exp(-lambda t).

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "invsrc/field.hpp"
#include "invsrc/mittag_leffler.hpp"
#include "invsrc/operator_catalog.hpp"

namespace invsrc {

struct ProblemData {
    FieldSample phi;
    FieldSample psi;
    double horizon;        // T > 0
    FractionalOrder alpha; // (0, 1]
};

/// 1 - E_{alpha,1}(-lambda_k T^alpha) fell below the stability threshold:
/// lambda_k T^alpha is too small for the data to determine mode k.
class DegenerateDenominatorError : public std::runtime_error {
public:
    explicit DegenerateDenominatorError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Truncated reconstruction; evaluable to u(.,t) and f(.).
struct InverseSolution {
    EigenSystem op;
    std::size_t modes = 0; // truncation l
    std::vector<double> phi_coeffs;
    std::vector<double> c_coeffs;
    std::vector<double> f_coeffs;
    double horizon = 0.0;
    FractionalOrder alpha{1.0};
    FieldSample phi_field;
};

inline constexpr double kDenominatorFloor = 1e-12;

namespace detail {

inline InverseSolution solve_with_decay(const EigenSystem& sys, const ProblemData& data, std::size_t l,
                                        const std::vector<double>& terminal_decay) {
    InverseSolution sol{sys, l, analyze(sys, data.phi, l), {}, {}, data.horizon, data.alpha, data.phi};
    const std::vector<double> psi_coeffs = analyze(sys, data.psi, l);
    sol.c_coeffs.resize(l);
    sol.f_coeffs.resize(l);
    for (std::size_t k = 1; k <= l; ++k) {
        const double denom = 1.0 - terminal_decay[k - 1];
        if (denom < kDenominatorFloor)
            throw DegenerateDenominatorError("mode " + std::to_string(k) + ": 1 - E(-lambda T^alpha) = " +
                                             std::to_string(denom) + " is below " + std::to_string(kDenominatorFloor));
        sol.c_coeffs[k - 1] = (sol.phi_coeffs[k - 1] - psi_coeffs[k - 1]) / denom;
        sol.f_coeffs[k - 1] = sys.lambda(k) * (sol.phi_coeffs[k - 1] - sol.c_coeffs[k - 1]);
    }
    return sol;
}

} // namespace detail

inline InverseSolution solve(const EigenSystem& sys, const ProblemData& data, std::size_t l) {
    if (l < 1) throw std::invalid_argument("solve: mode count must be >= 1");
    if (!(data.horizon > 0.0)) throw std::invalid_argument("solve: horizon must be positive");
    require_aligned(sys.quadrature, data.phi, "solve(phi)");
    require_aligned(sys.quadrature, data.psi, "solve(psi)");
    require_finite(data.phi, "solve(phi)");
    require_finite(data.psi, "solve(psi)");
    std::vector<double> decay(l);
    for (std::size_t k = 1; k <= l; ++k) decay[k - 1] = decay_factor(data.alpha, sys.lambda(k), data.horizon);
    return detail::solve_with_decay(sys, data, l, decay);
}

/// Heat-equation path: identical algebra with exp(-lambda T) decay factors.
inline InverseSolution solve_heat(const EigenSystem& sys, const FieldSample& phi, const FieldSample& psi,
                                  double horizon, std::size_t l) {
    if (l < 1) throw std::invalid_argument("solve_heat: mode count must be >= 1");
    if (!(horizon > 0.0)) throw std::invalid_argument("solve_heat: horizon must be positive");
    ProblemData data{phi, psi, horizon, FractionalOrder(1.0)};
    require_aligned(sys.quadrature, phi, "solve_heat(phi)");
    require_aligned(sys.quadrature, psi, "solve_heat(psi)");
    std::vector<double> decay(l);
    for (std::size_t k = 1; k <= l; ++k) decay[k - 1] = std::exp(-sys.lambda(k) * horizon);
    return detail::solve_with_decay(sys, data, l, decay);
}

/// u(., t) = phi + sum_k C_k (E_{alpha,1}(-lambda_k t^alpha) - 1) e_k.
/// At t = 0 every series term vanishes identically and phi is returned exactly.
inline FieldSample evaluate_u(const InverseSolution& sol, double t) {
    if (!(t >= 0.0) || t > sol.horizon) throw std::invalid_argument("evaluate_u: t outside [0, T]");
    std::vector<double> coeffs(sol.modes);
    for (std::size_t k = 1; k <= sol.modes; ++k) {
        const double decay = decay_factor(sol.alpha, sol.op.lambda(k), t);
        coeffs[k - 1] = sol.c_coeffs[k - 1] * (decay - 1.0);
    }
    FieldSample series = synthesize(sol.op, coeffs);
    FieldSample out = sol.phi_field;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += series[i];
    return out;
}

/// Source term on the truncated span: synthesize(f_coeffs).
inline FieldSample evaluate_f(const InverseSolution& sol) {
    return synthesize(sol.op, sol.f_coeffs);
}

/// Source term with a closed-form image L(phi) supplied by the caller:
///   f = L(phi) - sum_{k<=l} lambda_k C_k e_k.
/// Keeps the full spectral content of L(phi) instead of truncating it at l.
inline FieldSample evaluate_f(const InverseSolution& sol, const FieldSample& analytic_lphi) {
    require_aligned(sol.op.quadrature, analytic_lphi, "evaluate_f");
    std::vector<double> coeffs(sol.modes);
    for (std::size_t k = 1; k <= sol.modes; ++k) coeffs[k - 1] = -sol.op.lambda(k) * sol.c_coeffs[k - 1];
    FieldSample series = synthesize(sol.op, coeffs);
    FieldSample out = analytic_lphi;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += series[i];
    return out;
}

struct HypothesisDiagnostic {
    std::vector<double> partial_sums; // S_k = sum_{j<=k} (1+lambda_j)^2 <field,e_j>^2
    bool stabilized = false;
};

/// Practical proxy for H^1 membership: partial sums of (1+lambda_k)^2 c_k^2
/// must stop growing. Stabilized when the last quarter of modes adds less
/// than 1e-3 relative.
inline HypothesisDiagnostic hypothesis_check(const EigenSystem& sys, const FieldSample& field, std::size_t l) {
    if (l < 2) throw std::invalid_argument("hypothesis_check: needs l >= 2");
    const std::vector<double> coeffs = analyze(sys, field, l);
    HypothesisDiagnostic diag;
    diag.partial_sums.resize(l);
    double acc = 0.0;
    for (std::size_t k = 1; k <= l; ++k) {
        const double factor = 1.0 + sys.lambda(k);
        acc += factor * factor * coeffs[k - 1] * coeffs[k - 1];
        diag.partial_sums[k - 1] = acc;
    }
    const std::size_t quarter = std::max<std::size_t>(1, l / 4);
    const double head = diag.partial_sums[l - 1 - quarter];
    const double tail = diag.partial_sums[l - 1];
    diag.stabilized = (tail == 0.0) || ((tail - head) < 1e-3 * tail);
    return diag;
}

} // namespace invsrc
