#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "invsrc/operator_catalog.hpp"
#include "test_oracles.hpp"

using namespace invsrc;

namespace {

double orthonormality_defect(const EigenSystem& sys, std::size_t count) {
    std::vector<FieldSample> modes;
    for (std::size_t k = 1; k <= count; ++k) modes.push_back(sys.mode(k));
    double worst = 0.0;
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = i; j < count; ++j) {
            const double target = (i == j) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(inner_product(sys, modes[i], modes[j]) - target));
        }
    return worst;
}

} // namespace

TEST_CASE("pinned eigenvalues") {
    const EigenSystem dir = make_operator(OperatorSpec::dirichlet(0.0, M_PI));
    CHECK_THAT(dir.lambda(3), Catch::Matchers::WithinRel(9.0, 1e-14));

    const EigenSystem inv = make_operator(OperatorSpec::involution(0.9));
    CHECK_THAT(inv.lambda(1), Catch::Matchers::WithinRel(0.1, 1e-12)); // (1-eps) * 1^2
    CHECK_THAT(inv.lambda(2), Catch::Matchers::WithinRel(7.6, 1e-12)); // 4 (1+eps) * 1^2
    CHECK_THAT(inv.lambda(3), Catch::Matchers::WithinRel(0.9, 1e-12));

    const EigenSystem osc = make_operator(OperatorSpec::harmonic_oscillator());
    CHECK(osc.lambda(1) == 1.0);
    CHECK(osc.lambda(2) == 3.0);
    CHECK(osc.lambda(50) == 99.0);
}

TEST_CASE("descriptor validation") {
    CHECK_THROWS_AS(make_operator(OperatorSpec::involution(1.0)), std::invalid_argument);
    CHECK_THROWS_AS(make_operator(OperatorSpec::involution(-1.3)), std::invalid_argument);
    CHECK_THROWS_AS(make_operator(OperatorSpec::dirichlet(2.0, 2.0)), std::invalid_argument);
    CHECK_THROWS_AS(make_operator(OperatorSpec::dirichlet(3.0, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS(make_operator(OperatorSpec::harmonic_oscillator(6.0)), std::invalid_argument);
    CHECK_THROWS_AS(make_operator(OperatorSpec::harmonic_oscillator(12.0, 64)), std::invalid_argument);
}

TEST_CASE("catalogued but unimplemented operators raise a clear error") {
    for (auto kind : {OperatorKind::fractional_sturm_liouville, OperatorKind::restricted_fractional_laplacian,
                      OperatorKind::landau_hamiltonian, OperatorKind::anharmonic_oscillator,
                      OperatorKind::heisenberg_oscillator}) {
        OperatorSpec spec;
        spec.kind = kind;
        CHECK_THROWS_AS(make_operator(spec), UnsupportedOperatorError);
    }
    CHECK(catalog().size() == 8);
}

TEST_CASE("orthonormality of the first 50 modes") {
    CHECK(orthonormality_defect(make_operator(OperatorSpec::dirichlet(0.0, M_PI)), 50) <= 1e-7);
    CHECK(orthonormality_defect(make_operator(OperatorSpec::involution(0.9)), 50) <= 1e-7);
    CHECK(orthonormality_defect(make_operator(OperatorSpec::dirichlet(-1.0, 2.5)), 50) <= 1e-7);
    CHECK(orthonormality_defect(make_operator(OperatorSpec::harmonic_oscillator()), 50) <= 1e-7);
}

TEST_CASE("quadrature integrates low-degree polynomials exactly enough") {
    const QuadratureRule rule = composite_simpson(0.0, 2.0, 2049);
    for (int deg = 0; deg <= 4; ++deg) {
        std::vector<double> vals(rule.size());
        for (std::size_t i = 0; i < rule.size(); ++i) vals[i] = std::pow(rule.nodes[i], deg);
        const double expected = std::pow(2.0, deg + 1) / (deg + 1);
        CHECK_THAT(integrate(rule, vals), Catch::Matchers::WithinRel(expected, 1e-10));
    }
    CHECK_THROWS_AS(composite_simpson(0.0, 1.0, 100), std::invalid_argument); // even node count
}

TEST_CASE("inner product against a refined quadrature oracle") {
    const EigenSystem inv = make_operator(OperatorSpec::involution(0.9));
    const FieldSample phi = sample(inv.quadrature, oracles::rod_phi);
    const double got = inner_product(inv, phi, inv.mode(1));
    const double expected = oracles::simpson_richardson(
        [](double x) { return oracles::rod_phi(x) * std::sqrt(2.0 / M_PI) * std::sin(x); }, 0.0, M_PI, 20481);
    CHECK(std::abs(got - expected) <= 1e-8);

    // symmetry and a length-mismatch rejection
    CHECK(inner_product(inv, phi, inv.mode(2)) == inner_product(inv, inv.mode(2), phi));
    FieldSample bad(inv.quadrature.size() - 1, 0.0);
    CHECK_THROWS_AS(inner_product(inv, phi, bad), std::invalid_argument);
}

TEST_CASE("analyze picks out basis coefficients") {
    const EigenSystem inv = make_operator(OperatorSpec::involution(0.0));
    const auto coeffs = analyze(inv, inv.mode(2), 4);
    CHECK(std::abs(coeffs[0]) <= 1e-8);
    CHECK(std::abs(coeffs[1] - 1.0) <= 1e-8);
    CHECK(std::abs(coeffs[2]) <= 1e-8);
    CHECK(std::abs(coeffs[3]) <= 1e-8);

    const auto zeros = analyze(inv, FieldSample(inv.quadrature.size(), 0.0), 6);
    for (double c : zeros) CHECK(c == 0.0);

    // polynomial against the refined-quadrature oracle
    const FieldSample phi = sample(inv.quadrature, oracles::rod_phi);
    const auto got = analyze(inv, phi, 20);
    for (std::size_t k = 1; k <= 20; ++k) {
        const double expected = oracles::simpson_richardson(
            [k](double x) { return oracles::rod_phi(x) * std::sqrt(2.0 / M_PI) * std::sin(k * x); }, 0.0, M_PI,
            20481);
        CHECK(std::abs(got[k - 1] - expected) <= 1e-8);
    }
}

TEST_CASE("synthesize round trips and hand values") {
    const EigenSystem dir = make_operator(OperatorSpec::dirichlet(0.0, M_PI));
    const FieldSample e3 = dir.mode(3);
    const FieldSample back = synthesize(dir, analyze(dir, e3, 5));
    double worst = 0.0;
    for (std::size_t i = 0; i < back.size(); ++i) worst = std::max(worst, std::abs(back[i] - e3[i]));
    CHECK(worst <= 1e-7);

    const FieldSample zero = synthesize(dir, std::vector<double>{0.0, 0.0, 0.0});
    CHECK(sup_norm(zero) == 0.0);

    // sqrt(2/pi) (sin(pi/2) + sin(pi)) at the middle node
    const FieldSample two = synthesize(dir, std::vector<double>{1.0, 1.0});
    const std::size_t mid = dir.quadrature.size() / 2;
    REQUIRE(dir.quadrature.nodes[mid] == Catch::Approx(M_PI / 2).margin(1e-13));
    CHECK_THAT(two[mid], Catch::Matchers::WithinRel(std::sqrt(2.0 / M_PI), 1e-10));

    CHECK_THROWS_AS(synthesize(dir, std::vector<double>{1.0, std::nan("")}), std::invalid_argument);
}

TEST_CASE("apply_operator matches eigenrelations and the symbolic derivative") {
    const EigenSystem dir = make_operator(OperatorSpec::dirichlet(0.0, M_PI));
    const FieldSample le2 = apply_operator(dir, dir.mode(2), 5);
    double worst = 0.0;
    for (std::size_t i = 0; i < le2.size(); ++i) worst = std::max(worst, std::abs(le2[i] - 4.0 * dir.mode(2)[i]));
    CHECK(worst <= 1e-7);

    const EigenSystem inv9 = make_operator(OperatorSpec::involution(0.9));
    const FieldSample le1 = apply_operator(inv9, inv9.mode(1), 3);
    worst = 0.0;
    for (std::size_t i = 0; i < le1.size(); ++i) worst = std::max(worst, std::abs(le1[i] - 0.1 * inv9.mode(1)[i]));
    CHECK(worst <= 1e-7);

    // -phi'' for the rod profile at truncation l = 40: the truncated image must
    // match the projection of the symbolic second derivative to quadrature
    // accuracy, and the distance to the full image is the k^{-5} coefficient
    // tail of the profile (phi'''' does not vanish at the boundary), which at
    // l = 40 sits near 3.5e-2
    const EigenSystem inv0 = make_operator(OperatorSpec::involution(0.0));
    const FieldSample lphi = apply_operator(inv0, sample(inv0.quadrature, oracles::rod_phi), 40);
    const FieldSample exact = sample(inv0.quadrature, [](double x) { return -oracles::rod_phi_dd(x); });
    const FieldSample projected = synthesize(inv0, analyze(inv0, exact, 40));
    double l2_proj = 0.0, l2_full = 0.0;
    for (std::size_t i = 0; i < lphi.size(); ++i) {
        l2_proj += inv0.quadrature.weights[i] * (lphi[i] - projected[i]) * (lphi[i] - projected[i]);
        l2_full += inv0.quadrature.weights[i] * (lphi[i] - exact[i]) * (lphi[i] - exact[i]);
    }
    CHECK(std::sqrt(l2_proj) <= 2e-8);
    CHECK(std::sqrt(l2_full) >= 2e-2);
    CHECK(std::sqrt(l2_full) <= 5e-2);
}

TEST_CASE("involution eigenrelation via an independent finite-difference stencil") {
    const double eps = 0.6;
    const EigenSystem sys = make_operator(OperatorSpec::involution(eps));
    auto stencil_error = [&](std::size_t n_cells) {
        const double h = M_PI / static_cast<double>(n_cells);
        const std::size_t k = 3;
        const double lam = sys.lambda(k);
        double worst = 0.0;
        for (std::size_t j = 2; j + 2 < n_cells; ++j) {
            const double x = h * static_cast<double>(j);
            auto v = [&](double y) { return std::sqrt(2.0 / M_PI) * std::sin(k * y); };
            const double d2x = (v(x + h) - 2.0 * v(x) + v(x - h)) / (h * h);
            const double d2r = (v(M_PI - x + h) - 2.0 * v(M_PI - x) + v(M_PI - x - h)) / (h * h);
            const double image = -d2x + eps * d2r;
            worst = std::max(worst, std::abs(image - lam * v(x)));
        }
        return worst;
    };
    const double coarse = stencil_error(200);
    const double fine = stencil_error(400);
    CHECK(coarse / fine > 3.6);
    CHECK(coarse / fine < 4.4);
}

TEST_CASE("analyze is a left inverse of synthesize; Parseval truncation bound") {
    auto gen = oracles::rng();
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (const auto& spec : {OperatorSpec::dirichlet(0.0, M_PI), OperatorSpec::involution(0.45),
                             OperatorSpec::harmonic_oscillator()}) {
        const EigenSystem sys = make_operator(spec);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> c(12);
            for (double& v : c) v = coeff(gen);
            const FieldSample field = synthesize(sys, c);
            const auto rec = analyze(sys, field, c.size());
            for (std::size_t k = 0; k < c.size(); ++k) CHECK(std::abs(rec[k] - c[k]) <= 1e-8);

            double sq = 0.0;
            for (double v : rec) sq += v * v;
            CHECK(sq <= inner_product(sys, field, field) + 1e-8);
        }
    }
}

TEST_CASE("involution with eps = 0 degenerates to the Dirichlet Laplacian") {
    const EigenSystem inv = make_operator(OperatorSpec::involution(0.0));
    const EigenSystem dir = make_operator(OperatorSpec::dirichlet(0.0, M_PI));
    for (std::size_t k = 1; k <= 100; ++k) CHECK(inv.lambda(k) == dir.lambda(k));
}
