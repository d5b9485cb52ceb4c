#pragma once

// Catalog of self-adjoint positive operators with closed-form eigensystems.
//
// Shipped operators:
//   dirichlet_laplacian(a, b)   -u'' on (a,b), u(a)=u(b)=0
//                               lambda_k = (k pi/(b-a))^2,
//                               e_k = sqrt(2/(b-a)) sin(k pi (x-a)/(b-a))
//   involution(eps)             -u''(x) + eps u''(pi - x) on (0, pi), Dirichlet,
//                               |eps| < 1; lambda_k = (1 + (-1)^k eps) k^2,
//                               e_k = sqrt(2/pi) sin(k x)
//   harmonic_oscillator_1d      -u'' + x^2 u on R; lambda_k = 2(k-1) + 1,
//                               Hermite-function modes on a [-R, R] window
//
// Further catalog entries are listed for documentation and raise
// UnsupportedOperatorError: they lack closed-form eigenpairs or need more than
// one-dimensional quadrature.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "invsrc/field.hpp"
#include "invsrc/quadrature.hpp"

namespace invsrc {

enum class OperatorKind {
    dirichlet_laplacian,
    involution,
    harmonic_oscillator_1d,
    fractional_sturm_liouville,
    restricted_fractional_laplacian,
    landau_hamiltonian,
    anharmonic_oscillator,
    heisenberg_oscillator,
};

struct OperatorSpec {
    OperatorKind kind = OperatorKind::dirichlet_laplacian;
    double a = 0.0;
    double b = M_PI;
    double epsilon = 0.0;
    double window = 12.0;
    std::size_t window_nodes = 513;
    std::size_t grid_nodes = 2049;

    static OperatorSpec dirichlet(double a, double b, std::size_t nodes = 2049) {
        OperatorSpec s;
        s.kind = OperatorKind::dirichlet_laplacian;
        s.a = a;
        s.b = b;
        s.grid_nodes = nodes;
        return s;
    }
    static OperatorSpec involution(double eps, std::size_t nodes = 2049) {
        OperatorSpec s;
        s.kind = OperatorKind::involution;
        s.epsilon = eps;
        s.grid_nodes = nodes;
        return s;
    }
    static OperatorSpec harmonic_oscillator(double window = 12.0, std::size_t nodes = 513) {
        OperatorSpec s;
        s.kind = OperatorKind::harmonic_oscillator_1d;
        s.window = window;
        s.window_nodes = nodes;
        return s;
    }
};

class UnsupportedOperatorError : public std::runtime_error {
public:
    explicit UnsupportedOperatorError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CatalogEntry {
    std::string_view name;
    bool supported;
    std::string_view note;
};

inline std::span<const CatalogEntry> catalog() {
    static constexpr std::array<CatalogEntry, 8> entries{{
        {"dirichlet_laplacian", true, "-u'' on (a,b) with Dirichlet conditions"},
        {"involution", true, "-u''(x) + eps*u''(pi-x) on (0,pi), |eps| < 1"},
        {"harmonic_oscillator_1d", true, "-u'' + x^2 u on R, Hermite-function modes"},
        {"fractional_sturm_liouville", false, "no closed-form eigenpairs"},
        {"restricted_fractional_laplacian", false, "eigenpairs only known numerically"},
        {"landau_hamiltonian", false, "infinite-multiplicity spectrum in 2D"},
        {"anharmonic_oscillator", false, "no closed-form eigenpairs"},
        {"heisenberg_oscillator", false, "needs group Fourier analysis beyond 1D quadrature"},
    }};
    return entries;
}

inline std::string_view operator_name(OperatorKind kind) {
    return catalog()[static_cast<std::size_t>(kind)].name;
}

/// Discrete eigensystem of a self-adjoint positive operator: eigenvalue and
/// eigenfunction rules (1-based mode index) plus the quadrature realizing the
/// inner product of the underlying Hilbert space.
struct EigenSystem {
    std::string name;
    QuadratureRule quadrature;
    std::function<double(std::size_t)> eigenvalue;            // k = 1, 2, ...
    std::function<double(std::size_t, double)> eigenfunction; // (k, x)

    double lambda(std::size_t k) const { return eigenvalue(k); }

    FieldSample mode(std::size_t k) const {
        FieldSample out(quadrature.size());
        for (std::size_t i = 0; i < quadrature.size(); ++i)
            out[i] = eigenfunction(k, quadrature.nodes[i]);
        return out;
    }
};

namespace detail {

// Orthonormal Hermite functions by the normalized three-term recurrence;
// the closed form with the 2^{-l/2} (l!)^{-1/2} prefactor overflows factorially.
inline double hermite_function(std::size_t n, double x) {
    double h0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
    if (n == 0) return h0;
    double h1 = std::sqrt(2.0) * x * h0;
    for (std::size_t m = 1; m < n; ++m) {
        double h2 = x * std::sqrt(2.0 / (m + 1.0)) * h1 - std::sqrt(m / (m + 1.0)) * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

inline void validate_spectrum(const EigenSystem& sys, std::size_t count = 200) {
    std::vector<double> lam(count);
    for (std::size_t k = 1; k <= count; ++k) {
        lam[k - 1] = sys.eigenvalue(k);
        if (!(lam[k - 1] > 0.0))
            throw std::invalid_argument("EigenSystem: eigenvalues must be positive");
    }
    std::sort(lam.begin(), lam.end());
    if (!(lam.back() > lam.front()))
        throw std::invalid_argument("EigenSystem: spectrum does not grow");
}

} // namespace detail

inline EigenSystem make_operator(const OperatorSpec& spec) {
    EigenSystem sys;
    switch (spec.kind) {
    case OperatorKind::dirichlet_laplacian: {
        if (!(spec.a < spec.b)) throw std::invalid_argument("dirichlet_laplacian: requires a < b");
        const double len = spec.b - spec.a, a = spec.a;
        sys.name = "dirichlet_laplacian";
        sys.quadrature = composite_simpson(spec.a, spec.b, spec.grid_nodes);
        sys.eigenvalue = [len](std::size_t k) {
            // pi/len first: on (0, pi) the wavenumber is exactly k
            double w = static_cast<double>(k) * (M_PI / len);
            return w * w;
        };
        sys.eigenfunction = [len, a](std::size_t k, double x) {
            return std::sqrt(2.0 / len) * std::sin(static_cast<double>(k) * M_PI * (x - a) / len);
        };
        break;
    }
    case OperatorKind::involution: {
        if (!(std::abs(spec.epsilon) < 1.0))
            throw std::invalid_argument("involution: requires |eps| < 1");
        const double eps = spec.epsilon;
        sys.name = "involution";
        sys.quadrature = composite_simpson(0.0, M_PI, spec.grid_nodes);
        // one index covers both parity families: odd k -> (1-eps) k^2, even k -> (1+eps) k^2
        sys.eigenvalue = [eps](std::size_t k) {
            double sign = (k % 2 == 0) ? 1.0 : -1.0;
            return (1.0 + sign * eps) * static_cast<double>(k) * static_cast<double>(k);
        };
        sys.eigenfunction = [](std::size_t k, double x) {
            return std::sqrt(2.0 / M_PI) * std::sin(static_cast<double>(k) * x);
        };
        break;
    }
    case OperatorKind::harmonic_oscillator_1d: {
        // classical turning point of mode l is sqrt(2l-1); the window has to
        // clear it with room for the evanescent tail
        std::size_t resolvable = static_cast<std::size_t>(0.5 * (spec.window - 2.0) * (spec.window - 2.0));
        if (spec.window < 4.0 || resolvable < 50 || spec.window_nodes < 4 * 50)
            throw std::invalid_argument("harmonic_oscillator_1d: window/node count too small to resolve the requested modes");
        sys.name = "harmonic_oscillator_1d";
        sys.quadrature = hermite_window(spec.window, spec.window_nodes);
        sys.eigenvalue = [](std::size_t k) { return 2.0 * (static_cast<double>(k) - 1.0) + 1.0; };
        sys.eigenfunction = [](std::size_t k, double x) { return detail::hermite_function(k - 1, x); };
        break;
    }
    default: {
        const auto& entry = catalog()[static_cast<std::size_t>(spec.kind)];
        throw UnsupportedOperatorError(std::string("operator '") + std::string(entry.name) +
                                       "' is catalogued but not implemented: " + std::string(entry.note));
    }
    }
    detail::validate_spectrum(sys);
    return sys;
}

inline double inner_product(const EigenSystem& sys, const FieldSample& f, const FieldSample& g) {
    require_aligned(sys.quadrature, f, "inner_product");
    require_aligned(sys.quadrature, g, "inner_product");
    double acc = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double term = sys.quadrature.weights[i] * (f[i] * g[i]); // grouping keeps the product symmetric
        double t = acc + term;
        if (std::abs(acc) >= std::abs(term))
            comp += (acc - t) + term;
        else
            comp += (term - t) + acc;
        acc = t;
    }
    return acc + comp;
}

/// First l Fourier coefficients <f, e_k> of f in the operator's eigenbasis.
inline std::vector<double> analyze(const EigenSystem& sys, const FieldSample& f, std::size_t l) {
    if (l < 1) throw std::invalid_argument("analyze: mode count must be >= 1");
    require_aligned(sys.quadrature, f, "analyze");
    std::vector<double> coeffs(l);
    for (std::size_t k = 1; k <= l; ++k) coeffs[k - 1] = inner_product(sys, f, sys.mode(k));
    return coeffs;
}

/// Finite eigenfunction sum sum_k c_k e_k evaluated on the quadrature nodes.
inline FieldSample synthesize(const EigenSystem& sys, std::span<const double> coeffs) {
    for (double c : coeffs)
        if (!std::isfinite(c)) throw std::invalid_argument("synthesize: non-finite coefficient");
    FieldSample out(sys.quadrature.size(), 0.0);
    for (std::size_t k = 1; k <= coeffs.size(); ++k) {
        if (coeffs[k - 1] == 0.0) continue;
        FieldSample ek = sys.mode(k);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += coeffs[k - 1] * ek[i];
    }
    return out;
}

/// Truncated spectral image  L f ~ sum_{k<=l} lambda_k <f, e_k> e_k;
/// exact on span{e_1..e_l}.
inline FieldSample apply_operator(const EigenSystem& sys, const FieldSample& f, std::size_t l) {
    std::vector<double> coeffs = analyze(sys, f, l);
    for (std::size_t k = 1; k <= l; ++k) coeffs[k - 1] *= sys.lambda(k);
    return synthesize(sys, coeffs);
}

} // namespace invsrc
