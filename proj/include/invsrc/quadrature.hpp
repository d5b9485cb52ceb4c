#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace invsrc {

enum class QuadratureKind {
    composite_simpson,
    gauss_hermite_windowed,
};

/// Nodes and positive weights realizing the L2 inner product on an interval.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    QuadratureKind kind = QuadratureKind::composite_simpson;
    double lower = 0.0;
    double upper = 0.0;

    std::size_t size() const noexcept { return nodes.size(); }
};

/// Composite Simpson rule on [a, b] with an odd node count (endpoints included).
inline QuadratureRule composite_simpson(double a, double b, std::size_t n = 2049) {
    if (!(a < b)) throw std::invalid_argument("composite_simpson: requires a < b");
    if (n < 3 || n % 2 == 0) throw std::invalid_argument("composite_simpson: node count must be odd and >= 3");
    QuadratureRule rule;
    rule.kind = QuadratureKind::composite_simpson;
    rule.lower = a;
    rule.upper = b;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double h = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        rule.nodes[i] = a + h * static_cast<double>(i);
        double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        rule.weights[i] = w * h / 3.0;
    }
    rule.nodes.back() = b;
    return rule;
}

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on the
// three-term recurrence. Stable well past n = 1000.
inline void gauss_legendre_reference(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const std::size_t mid = (n + 1) / 2;
    for (std::size_t i = 0; i < mid; ++i) {
        double z = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - static_cast<double>(j) * p2) / (j + 1.0);
            }
            pp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

} // namespace detail

/// Gaussian rule on the window [-R, R], used for operators whose eigenfunctions
/// decay like exp(-x^2/2). The window must contain the classical support of
/// every mode the caller plans to resolve.
inline QuadratureRule hermite_window(double half_width = 12.0, std::size_t n = 513) {
    if (!(half_width > 0.0)) throw std::invalid_argument("hermite_window: half_width must be positive");
    if (n < 9) throw std::invalid_argument("hermite_window: node count too small");
    QuadratureRule rule;
    rule.kind = QuadratureKind::gauss_hermite_windowed;
    rule.lower = -half_width;
    rule.upper = half_width;
    std::vector<double> x, w;
    detail::gauss_legendre_reference(n, x, w);
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        rule.nodes[i] = half_width * x[i];
        rule.weights[i] = half_width * w[i];
    }
    return rule;
}

inline double integrate(const QuadratureRule& rule, std::span<const double> f) {
    if (f.size() != rule.size()) throw std::invalid_argument("integrate: sample/rule length mismatch");
    double acc = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double term = rule.weights[i] * f[i];
        double t = acc + term;
        if (std::abs(acc) >= std::abs(term))
            comp += (acc - t) + term;
        else
            comp += (term - t) + acc;
        acc = t;
    }
    return acc + comp;
}

} // namespace invsrc
