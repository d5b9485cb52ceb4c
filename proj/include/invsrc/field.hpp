#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "invsrc/quadrature.hpp"

namespace invsrc {

/// A scalar function represented by its values on the quadrature nodes of the
/// owning operator.
struct FieldSample {
    std::vector<double> values;

    FieldSample() = default;
    explicit FieldSample(std::vector<double> v) : values(std::move(v)) {}
    explicit FieldSample(std::size_t n, double fill = 0.0) : values(n, fill) {}

    std::size_t size() const noexcept { return values.size(); }
    double& operator[](std::size_t i) noexcept { return values[i]; }
    double operator[](std::size_t i) const noexcept { return values[i]; }
};

template <typename Fn>
FieldSample sample(const QuadratureRule& rule, Fn&& f) {
    FieldSample out(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) out.values[i] = f(rule.nodes[i]);
    return out;
}

inline void require_aligned(const QuadratureRule& rule, const FieldSample& f, const char* what) {
    if (f.size() != rule.size()) throw std::invalid_argument(std::string(what) + ": sample not aligned with quadrature");
}

inline void require_finite(const FieldSample& f, const char* what) {
    for (double v : f.values)
        if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite sample value");
}

inline double l2_norm(const QuadratureRule& rule, const FieldSample& f) {
    require_aligned(rule, f, "l2_norm");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += rule.weights[i] * f[i] * f[i];
    return std::sqrt(std::max(acc, 0.0));
}

inline double sup_norm(const FieldSample& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

} // namespace invsrc
