#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "hypwave/hopf.hpp"
#include "hypwave/model.hpp"
#include "hypwave/orbit.hpp"
#include "hypwave/spectrum.hpp"

using namespace hypwave;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Fixture {
    ValidatedModel model;
    HopfData hopf;
    PeriodicOrbit orbit;
    BlochCoefficients co;      // eps = 0.01 coefficients
    BlochCoefficients co_zero; // eps = 0 constants
};

const Fixture& bf_fixture() {
    static const Fixture fx = [] {
        auto model = validate(builtin_model("burgers-fisher", 0.2));
        auto hopf = hopf_summary(model);
        auto orbit = find_periodic_orbit(model, hopf, 0.01);
        auto co = build_coefficients(orbit, model, hopf, 512);
        auto co_zero = constant_coefficients(model, hopf, 256);
        return Fixture{std::move(model), hopf, std::move(orbit), std::move(co),
                       std::move(co_zero)};
    }();
    return fx;
}

// Test-side oracle: matrix exponential by scaling and squaring with a Taylor core.
Mat2c expm(const Mat2c& M) {
    double norm = 0.0;
    for (cplx v : {M.a, M.b, M.c, M.d}) norm = std::max(norm, std::abs(v));
    int squarings = 0;
    while (norm > 0.25) {
        norm *= 0.5;
        ++squarings;
    }
    const double scale = std::ldexp(1.0, -squarings);
    const Mat2c S = M * cplx(scale);
    Mat2c acc = Mat2c::identity();
    Mat2c term = Mat2c::identity();
    for (int k = 1; k <= 24; ++k) {
        term = term * S * cplx(1.0 / double(k));
        acc = acc + term;
    }
    for (int k = 0; k < squarings; ++k) acc = acc * acc;
    return acc;
}

double mat_dist(const Mat2c& A, const Mat2c& B) {
    return std::max({std::abs(A.a - B.a), std::abs(A.b - B.b), std::abs(A.c - B.c),
                     std::abs(A.d - B.d)});
}

// Zeros of the constant-coefficient Evans function for Burgers-Fisher at
// theta = 0: the dispersion quadratic p(l) = 4 pi^2 k^2 (1 - c0^2 tau)^2, k in Z.
std::vector<cplx> bf_constant_zeros(double tau, double bound) {
    std::vector<cplx> zeros;
    for (int k = 0; k <= 8; ++k) {
        // (2pi - l)(l tau + 2pi) = 4 pi^2 k^2, i.e. the quadratic
        // -tau l^2 + 2pi(tau-1) l + 4pi^2(1-k^2) = 0
        const double A = -tau;
        const double B = 2.0 * std::numbers::pi * (tau - 1.0);
        const double C = 4.0 * std::numbers::pi * std::numbers::pi * (1.0 - double(k) * double(k));
        const cplx disc = std::sqrt(cplx(B * B - 4.0 * A * C, 0.0));
        for (cplx root : {(-B + disc) / (2.0 * A), (-B - disc) / (2.0 * A)})
            if (std::abs(root) <= bound) zeros.push_back(root);
    }
    return zeros;
}

} // namespace

TEST_CASE("constant coefficients reproduce the zero-amplitude limit") {
    const auto& fx = bf_fixture();
    CHECK(fx.co_zero.a1_0 == 0.0);
    CHECK(fx.co_zero.b1_0 == doctest::Approx(kTwoPi).epsilon(1e-14));
    for (double v : fx.co_zero.a1) CHECK(v == 0.0);
    for (double v : fx.co_zero.b1) CHECK(v == doctest::Approx(kTwoPi).epsilon(1e-14));
    CHECK(fx.co_zero.detA() < 0.0);
    CHECK(fx.co_zero.degenerate_coupling); // f'(0) = 0 for Burgers-Fisher
}

TEST_CASE("perturbed coefficients stay within the sqrt(eps) envelope") {
    const auto& fx = bf_fixture();
    const double se = std::sqrt(fx.orbit.epsilon);
    double worst_b = 0.0, worst_b1 = 0.0;
    for (std::size_t j = 0; j < fx.co.n; ++j) {
        worst_b = std::max(worst_b, std::abs(fx.co.b1[j] - fx.co.b1_0));
        worst_b1 = std::max(worst_b1, std::abs(fx.co.b1_1[j]));
        // split reconstruction is exact by construction
        CHECK(fx.co.b1_0 + se * fx.co.b1_1[j] == doctest::Approx(fx.co.b1[j]).epsilon(1e-14));
        CHECK(fx.co.a1_0 + se * fx.co.a1_1[j] == doctest::Approx(fx.co.a1[j]).epsilon(1e-14));
    }
    CHECK(worst_b <= 25.0 * se); // measured constant ~23
    CHECK(worst_b1 <= 25.0);
    CHECK(fx.co.b1_0 > 0.0);
}

TEST_CASE("matrix_D matches the constant-coefficient closed form") {
    const auto& fx = bf_fixture();
    const auto& co = fx.co_zero;

    SUBCASE("Burgers-Fisher at lambda_hat = 2pi, theta = 0") {
        const Mat2c D = matrix_D(0.37, kTwoPi, 0.0, co);
        CHECK(std::abs(D.a) <= 1e-12);
        CHECK(D.b.real() == doctest::Approx(-2.4).epsilon(1e-12));
        CHECK(std::abs(D.b.imag()) <= 1e-14);
        CHECK(std::abs(D.c) <= 1e-12);
        CHECK(std::abs(D.d) <= 1e-12);
    }

    SUBCASE("general closed form of the first-order system") {
        // D(l) = (1/pi)(1-c0^2 tau)^{-1} [ c0 tau (b0-l)+a0, -(l tau+T0) ;
        //                                  b0-l+c0 a0,       -c0 (l tau+T0) ]
        const auto poly = validate(polynomial_model("q", {0.0, 1.0, 0.5}, {0.0, 1.0, -1.0}, 0.2));
        const auto hopf = hopf_summary(poly);
        const auto cz = constant_coefficients(poly, hopf, 128);
        const cplx l(1.3, -0.4);
        const double c0 = cz.c0, tau = cz.tau, T0 = cz.T0, a0 = cz.a1_0, b0 = cz.b1_0;
        const double k = 1.0 / (std::numbers::pi * (1.0 - c0 * c0 * tau));
        const Mat2c expect{k * (c0 * tau * (b0 - l) + a0), k * (-(l * tau + T0)),
                           k * (b0 - l + c0 * a0), k * (-c0 * (l * tau + T0))};
        CHECK(mat_dist(matrix_D(1.1, l, 0.0, cz), expect) <= 1e-12);
    }

    SUBCASE("zero data gives the zero matrix") {
        BlochCoefficients zero;
        zero.speed = 0.3;
        zero.tau = 0.5;
        zero.period = 0.0;
        const Mat2c D = matrix_D(0.0, 0.0, 0.0, zero);
        CHECK(mat_dist(D, Mat2c{}) == 0.0);
    }
}

TEST_CASE("monodromy") {
    const auto& fx = bf_fixture();

    SUBCASE("identity for zero data") {
        BlochCoefficients zero;
        zero.speed = 0.3;
        zero.tau = 0.5;
        zero.period = 0.0;
        zero.n = 256;
        CHECK(mat_dist(monodromy(0.0, 0.0, zero), Mat2c::identity()) <= 1e-14);
    }

    SUBCASE("constant coefficients match the matrix exponential") {
        for (cplx l : {cplx(kTwoPi, 0.0), cplx(2.0, 1.0), cplx(-1.0, 3.0)}) {
            const Mat2c F = monodromy(l, 0.0, fx.co_zero, 16384);
            const Mat2c D = matrix_D(0.0, l, 0.0, fx.co_zero);
            CHECK(mat_dist(F, expm(D * cplx(std::numbers::pi))) <= 1e-9);
        }
    }

    SUBCASE("Liouville determinant identity on random draws") {
        std::mt19937 rng(4242);
        std::uniform_real_distribution<double> re(-3.0, 3.0), th(-std::numbers::pi,
                                                                 std::numbers::pi);
        for (int trial = 0; trial < 200; ++trial) {
            const cplx l(re(rng), re(rng));
            const double theta = th(rng);
            const auto& co = trial % 2 ? fx.co : fx.co_zero;
            const Mat2c F = monodromy(l, theta, co, 8192);
            cplx tr = 0.0;
            const std::size_t m = 512;
            for (std::size_t j = 0; j < m; ++j)
                tr += matrix_D(std::numbers::pi * double(j) / double(m), l, theta, co).trace();
            const cplx expected = std::exp(tr * std::numbers::pi / double(m));
            CHECK(std::abs(F.det() - expected) / std::abs(expected) <= 1e-8);
        }
    }
}

TEST_CASE("evans values and symmetry") {
    const auto& fx = bf_fixture();

    SUBCASE("root of the unperturbed operator at lambda0 = 2pi") {
        CHECK(std::abs(evans(kTwoPi, 0.0, fx.co_zero, 16384).value) <= 1e-9);
    }

    SUBCASE("theta = pi at lambda0 evaluates to 4") {
        const cplx v = evans(kTwoPi, std::numbers::pi, fx.co_zero, 16384).value;
        CHECK(std::abs(v - cplx(4.0, 0.0)) <= 1e-8);
    }

    SUBCASE("value equals det(monodromy - e^{i theta} I) of the stored matrix") {
        const auto ev = evans(cplx(2.0, 0.5), 0.8, fx.co);
        const cplx mu = std::exp(cplx(0.0, 0.8));
        const cplx direct = (ev.monodromy - mu * Mat2c::identity()).det();
        CHECK(std::abs(ev.value - direct) <= 1e-10 * std::max(1.0, std::abs(direct)));
    }

    SUBCASE("conjugation symmetry D(conj l, -theta) = conj D(l, theta)") {
        std::mt19937 rng(99);
        std::uniform_real_distribution<double> re(-3.0, 3.0), th(-std::numbers::pi,
                                                                 std::numbers::pi);
        for (int trial = 0; trial < 40; ++trial) {
            const cplx l(re(rng), re(rng));
            const double theta = th(rng);
            const auto& co = trial % 2 ? fx.co : fx.co_zero;
            const cplx a = evans(std::conj(l), -theta, co).value;
            const cplx b = std::conj(evans(l, theta, co).value);
            CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)));
        }
    }
}

TEST_CASE("constant_evans") {
    const auto& fx = bf_fixture();

    SUBCASE("dispersion polynomials for Burgers-Fisher") {
        // q = 0 and p(l) = (2pi - l)(0.2 l + 2pi)
        for (cplx l : {cplx(0.0), cplx(3.0, 1.0), cplx(-2.0, -5.0)}) {
            const auto [q, p] = dispersion_qp(l, fx.co_zero);
            CHECK(std::abs(q) <= 1e-13);
            const cplx expect = (kTwoPi - l) * (0.2 * l + kTwoPi);
            CHECK(std::abs(p - expect) <= 1e-10 * std::abs(expect));
        }
    }

    SUBCASE("vanishes at lambda = b1_0 for theta = 0, any admissible model") {
        CHECK(std::abs(constant_evans(fx.co_zero.b1_0, 0.0, fx.co_zero)) <= 1e-12);
        const auto poly = validate(polynomial_model("q", {0.0, 1.0, 0.5}, {0.0, 1.0, -1.0}, 0.2));
        const auto cz = constant_coefficients(poly, hopf_summary(poly), 128);
        CHECK(std::abs(constant_evans(cz.b1_0, 0.0, cz)) <= 1e-10);
    }

    SUBCASE("agrees with the numeric Evans function on a grid") {
        for (double theta : {0.0, 0.7, std::numbers::pi}) {
            for (int i = 0; i < 5; ++i) {
                for (int j = 0; j < 5; ++j) {
                    const cplx l(2.5 * i, -5.0 + 2.5 * j);
                    const cplx num = evans(l, theta, fx.co_zero, 16384).value;
                    const cplx cf = constant_evans(l, theta, fx.co_zero);
                    CHECK(std::abs(num - cf) <= 1e-8);
                }
            }
        }
    }
}

TEST_CASE("unperturbed eigenpair") {
    const auto& fx = bf_fixture();
    const auto [l0, u0] = unperturbed_eigenpair(fx.co_zero);
    CHECK(l0 == doctest::Approx(kTwoPi).epsilon(1e-14));
    CHECK(u0[0] == 1.0);
    CHECK(u0[1] == 0.0);

    const auto poly = validate(polynomial_model("q", {0.0, 1.0, 0.5}, {0.0, 1.0, -1.0}, 0.2));
    const auto cz = constant_coefficients(poly, hopf_summary(poly), 128);
    const auto [lp, up] = unperturbed_eigenpair(cz);
    CHECK(lp == doctest::Approx(7.577806600795863).epsilon(1e-12));
    CHECK(lp > 0.0);
    CHECK(up[1] == doctest::Approx(5.0 / 6.0).epsilon(1e-13));
}

TEST_CASE("root counting by the argument principle") {
    const auto& fx = bf_fixture();

    SUBCASE("one root in the window around lambda0 at eps = 0") {
        const Window w{kTwoPi - 0.3, kTwoPi + 0.3, -0.3, 0.3};
        CHECK(count_roots(w, 0.0, fx.co_zero) == 1);
    }

    SUBCASE("resolvent region far right contains no roots") {
        CHECK(count_roots({100.0, 101.0, 0.0, 1.0}, 0.0, fx.co_zero) == 0);
    }

    SUBCASE("the window still holds one root for a slow-drift perturbed run") {
        // tau = 0.9 keeps the perturbed root within the stated window
        auto model = validate(builtin_model("burgers-fisher", 0.9));
        auto hopf = hopf_summary(model);
        auto orbit = find_periodic_orbit(model, hopf, 0.01);
        auto co = build_coefficients(orbit, model, hopf, 256);
        const Window w{kTwoPi - 0.3, kTwoPi + 0.3, -0.3, 0.3};
        CHECK(count_roots(w, 0.0, co) == 1);
    }

    SUBCASE("count is stable under doubling the contour resolution") {
        const Window w{kTwoPi - 0.3, kTwoPi + 0.3, -0.3, 0.3};
        CHECK(count_roots(w, 0.0, fx.co, 256) == count_roots(w, 0.0, fx.co, 512));
    }
}

TEST_CASE("root refinement") {
    const auto& fx = bf_fixture();

    SUBCASE("converges to the unperturbed eigenvalue") {
        double res = 0.0;
        const cplx root = refine_root(kTwoPi + 0.05, 0.0, fx.co_zero, &res);
        CHECK(std::abs(root - kTwoPi) <= 1e-8);
        CHECK(res <= 1e-10);
    }

    SUBCASE("an exact root is returned immediately") {
        double res = 0.0;
        const cplx first = refine_root(kTwoPi, 0.0, fx.co_zero, &res);
        CHECK(std::abs(first - kTwoPi) <= 1e-8);
    }

    SUBCASE("perturbed root drifts by O(sqrt eps) and stays unstable") {
        double res = 0.0;
        const cplx root = refine_root(kTwoPi, 0.0, fx.co, &res);
        CHECK(root.real() > 0.0);
        CHECK(std::abs(root - kTwoPi) <= 4.0 * std::sqrt(fx.orbit.epsilon));
        CHECK(std::abs(root.imag()) <= 1e-8); // simple real eigenvalue stays real
    }
}

TEST_CASE("curve tracing in the Bloch parameter") {
    const auto& fx = bf_fixture();
    double res = 0.0;
    const cplx seed = refine_root(kTwoPi, 0.0, fx.co, &res);

    SUBCASE("curve through the unstable root stays in the right half plane") {
        const std::vector<double> up{0.0, 0.1, 0.2};
        const std::vector<double> down{0.0, -0.1, -0.2};
        for (const auto& grid : {up, down}) {
            const auto curve = trace_curve(seed, grid, fx.co);
            CHECK(curve.points.size() == 3);
            for (const auto& p : curve.points) {
                CHECK(p.lambda_hat.real() > 0.0);
                CHECK(p.residual <= 1e-8);
                CHECK(p.lambda.real() == doctest::Approx(p.lambda_hat.real() / fx.co.period));
            }
            CHECK(std::is_sorted(curve.points.begin(), curve.points.end(),
                                 [](const auto& a, const auto& b) { return a.theta < b.theta; }));
        }
    }

    SUBCASE("roots pair up under conjugation of the Bloch parameter") {
        const std::vector<double> up{0.0, 0.15};
        const std::vector<double> down{0.0, -0.15};
        const auto cu = trace_curve(seed, up, fx.co);
        const auto cd = trace_curve(seed, down, fx.co);
        CHECK(std::abs(cu.points.back().lambda_hat - std::conj(cd.points.front().lambda_hat)) <=
              1e-8);
    }

    SUBCASE("single-point grid returns the seed") {
        const std::vector<double> grid{0.0};
        const auto curve = trace_curve(seed, grid, fx.co);
        CHECK(curve.points.size() == 1);
        CHECK(curve.points[0].lambda_hat == seed);
    }
}

TEST_CASE("collocation spectrum") {
    const auto& fx = bf_fixture();

    SUBCASE("constant-coefficient block eigenvalues appear") {
        const auto eigs = collocation_spectrum(0.0, fx.co_zero, 32);
        auto contains = [&](cplx target) {
            for (cplx e : eigs)
                if (std::abs(e - target) <= 1e-8) return true;
            return false;
        };
        CHECK(contains(kTwoPi));
        CHECK(contains(-10.0 * std::numbers::pi));
    }

    SUBCASE("eps = 0 eigenvalues coincide with constant_evans zeros") {
        const auto zeros = bf_constant_zeros(0.2, 20.5);
        for (cplx e : collocation_spectrum(0.0, fx.co_zero, 32)) {
            if (std::abs(e) > 20.0) continue;
            double best = 1e18;
            for (cplx z : zeros) best = std::min(best, std::abs(e - z));
            CHECK(best <= 1e-6);
        }
    }

    SUBCASE("doubling the mode count does not move resolved eigenvalues") {
        const auto small = collocation_spectrum(0.0, fx.co, 32);
        const auto large = collocation_spectrum(0.0, fx.co, 64);
        for (cplx e : small) {
            if (std::abs(e) > 20.0) continue;
            double best = 1e18;
            for (cplx f : large) best = std::min(best, std::abs(e - f));
            CHECK(best <= 1e-8);
        }
    }
}

TEST_CASE("translation mode annihilates the theta = 0 Evans function") {
    const auto& fx = bf_fixture();
    CHECK(std::abs(evans(0.0, 0.0, fx.co).value) <= 1e-6);

    auto model9 = validate(builtin_model("burgers-fisher", 0.9));
    auto hopf9 = hopf_summary(model9);
    auto orbit9 = find_periodic_orbit(model9, hopf9, 0.02);
    auto co9 = build_coefficients(orbit9, model9, hopf9, 256);
    CHECK(std::abs(evans(0.0, 0.0, co9).value) <= 1e-6);
}

TEST_CASE("verdict pipeline for a drifting critical speed") {
    // c0 = 1.25 here, so the dispersion algebra q(l), a1_0 and the A-matrix
    // off-center terms are all nontrivial, unlike Burgers-Fisher.
    const auto model = validate(polynomial_model("quad", {0.0, 1.0, 0.5}, {0.0, 1.0, -1.0}, 0.2));
    const auto hopf = hopf_summary(model);
    const auto orbit = find_periodic_orbit(model, hopf, 1e-4);

    // period oracle straight from the phase-plane linearization at (P0, c0):
    // a small cycle rotates at the imaginary part of the J0 eigenvalues
    const Mat2 J0 = jacobian({0.0, model.spec.f(0.0)}, hopf.c0, model);
    const double tr = J0.a11 + J0.a22;
    const double det = J0.a11 * J0.a22 - J0.a12 * J0.a21;
    const double rot = std::sqrt(det - 0.25 * tr * tr);
    CHECK(std::abs(orbit.period - 2.0 * std::numbers::pi / rot) <= 0.01);

    const auto rep = instability_verdict(orbit, model, hopf);
    CHECK(rep.verdict == Verdict::unstable);
    REQUIRE(rep.witness.has_value());
    // the unscaled growth rate sits at g'(0) up to the O(sqrt(eps)) drift
    CHECK(rep.witness->re_lambda == doctest::Approx(model.d0.gp).epsilon(2e-3));
    CHECK(rep.evidence.collocation_distance <= 1e-5);
    CHECK(rep.evidence.root_count == 1);
}

TEST_CASE("instability verdict") {
    const auto& fx = bf_fixture();

    SUBCASE("computed wave at tau = 0.2, eps = 0.01 is certified unstable") {
        const auto rep = instability_verdict(fx.orbit, fx.model, fx.hopf);
        CHECK(rep.verdict == Verdict::unstable);
        REQUIRE(rep.witness.has_value());
        CHECK(rep.witness->lambda_hat.real() > 1e-6);
        CHECK(std::abs(rep.witness->lambda_hat - kTwoPi) < 1.0);
        CHECK(rep.evidence.root_count == 1);
        CHECK(rep.evidence.collocation_distance <= 1e-5);
        CHECK(rep.evidence.evans_residual <= 1e-8);
        CHECK(rep.witness->re_lambda ==
              doctest::Approx(rep.witness->lambda_hat.real() / fx.orbit.period));
    }

    SUBCASE("constant-coefficient verdict reports lambda0 = T0 g'(0) > 0") {
        const auto rep = instability_verdict_constant(fx.model, fx.hopf);
        CHECK(rep.verdict == Verdict::unstable);
        REQUIRE(rep.witness.has_value());
        CHECK(rep.witness->lambda_hat.real() == doctest::Approx(kTwoPi).epsilon(1e-8));
    }
}
