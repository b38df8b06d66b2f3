#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "hypwave/fourier.hpp"

using namespace hypwave::fourier;

TEST_CASE("fft inverts itself") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<cplx> a(256);
    for (auto& v : a) v = {d(rng), d(rng)};
    auto b = a;
    fft(b, false);
    fft(b, true);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-13);
    std::vector<cplx> bad(100);
    CHECK_THROWS(fft(bad));
}

TEST_CASE("trig interpolation is exact on band-limited data") {
    const double period = 2.0 * std::numbers::pi;
    const std::size_t n = 64;
    auto f = [](double x) { return 1.5 + std::sin(x) - 0.25 * std::cos(3.0 * x); };
    std::vector<double> samples(n);
    for (std::size_t j = 0; j < n; ++j) samples[j] = f(period * double(j) / double(n));
    const TrigInterp ti(samples, period);

    for (double x : {0.1, 1.7, 4.4, 6.0}) CHECK(ti(x) == doctest::Approx(f(x)).epsilon(1e-13));
    CHECK(std::abs(ti.mode(0) - cplx(1.5)) <= 1e-14);
    CHECK(std::abs(ti.mode(1) - cplx(0.0, -0.5)) <= 1e-14); // sin x = (e^{ix}-e^{-ix})/2i
    CHECK(std::abs(ti.mode(3) - cplx(-0.125)) <= 1e-14);
    CHECK(std::abs(ti.mode(7)) <= 1e-14);
    CHECK(ti.mode(200) == cplx(0.0));

    SUBCASE("dense refinement agrees with pointwise evaluation") {
        const auto dense = ti.dense(256);
        for (std::size_t j = 0; j < 256; ++j) {
            const double x = period * double(j) / 256.0;
            CHECK(dense[j] == doctest::Approx(ti(x)).epsilon(1e-12));
        }
    }
}
