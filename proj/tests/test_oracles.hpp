#pragma once

// Independent oracles used by the test suites. Everything here recomputes
// expected values by a route the library does not share: plain composite
// Simpson over callables, Richardson extrapolation, closed-form derivatives
// of the rod profile, and the textbook sine-series transcription of the
// reconstruction formulas.

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

namespace oracles {

inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    // n odd node count
    const double h = (b - a) / static_cast<double>(n - 1);
    double acc = f(a) + f(b);
    for (std::size_t i = 1; i + 1 < n; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
    return acc * h / 3.0;
}

inline double simpson_richardson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    const double coarse = simpson(f, a, b, n);
    const double fine = simpson(f, a, b, 2 * n - 1);
    return fine + (fine - coarse) / 15.0;
}

// rod profile phi(x) = x^3 (pi - x)^3 and its even derivatives
inline double rod_phi(double x) { return std::pow(x, 3) * std::pow(M_PI - x, 3); }
inline double rod_phi_dd(double x) {
    return 6.0 * std::pow(M_PI, 3) * x - 36.0 * M_PI * M_PI * x * x + 60.0 * M_PI * x * x * x - 30.0 * x * x * x * x;
}
inline double rod_phi_dddd(double x) { return -72.0 * M_PI * M_PI + 360.0 * M_PI * x - 360.0 * x * x; }

inline double involution_lambda(double eps, std::size_t k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return (1.0 + sign * eps) * static_cast<double>(k) * static_cast<double>(k);
}

// Straight transcription of the sine-series reconstruction for the rod data
// (phi as above, psi = 0, heat case). Uses only the closed-form fourth
// derivative and the refined Simpson rule: the series coefficient in u is
//   A_k = Int l^2(psi - phi) v_k / (lambda_k^2 (1 - e^{-lambda_k T}))
// and in f it is  B_k = lambda_k A_k,  with l^2(psi - phi) = -(1-eps)^2 phi''''.
struct RodTranscription {
    std::vector<double> a_coeffs;
    std::vector<double> b_coeffs;
};

inline RodTranscription rod_transcription(double eps, double horizon, std::size_t l,
                                          std::size_t oracle_nodes = 20481) {
    RodTranscription out;
    for (std::size_t k = 1; k <= l; ++k) {
        const double lam = involution_lambda(eps, k);
        const double integral = simpson_richardson(
            [&](double x) {
                return -(1.0 - eps) * (1.0 - eps) * rod_phi_dddd(x) * std::sqrt(2.0 / M_PI) *
                       std::sin(static_cast<double>(k) * x);
            },
            0.0, M_PI, oracle_nodes);
        const double denom = 1.0 - std::exp(-lam * horizon);
        out.a_coeffs.push_back(integral / (lam * lam * denom));
        out.b_coeffs.push_back(integral / (lam * denom));
    }
    return out;
}

inline std::mt19937 rng(std::uint32_t seed = 20240811u) { return std::mt19937(seed); }

} // namespace oracles
