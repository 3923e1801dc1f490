#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "primegap/errors.hpp"
#include "primegap/smoothing.hpp"

using namespace primegap;

namespace {

constexpr double kPi = std::numbers::pi;

// int_0^1 psi_delta(x) e(-kx) dx by composite Simpson on each linear piece
std::complex<double> coefficient_by_quadrature(const PsiDelta& p, std::int64_t k) {
    const double d = p.delta, gm = p.gamma;
    const double cuts[] = {0.0, d, gm - d, gm + d, 1.0 - d, 1.0};
    std::complex<double> total = 0;
    const int n = 4000;
    for (int piece = 0; piece < 5; ++piece) {
        const double a = cuts[piece], b = cuts[piece + 1];
        if (b <= a) continue;
        const double h = (b - a) / n;
        std::complex<double> s = 0;
        for (int i = 0; i <= n; ++i) {
            const double x = a + i * h;
            const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
            s += w * psi_delta_eval(p, x) * std::polar(1.0, -2 * kPi * static_cast<double>(k) * x);
        }
        total += s * (h / 3);
    }
    return total;
}

const double kGammas[] = {0.05, 0.3, 0.5, 1 / std::numbers::sqrt2, 0.9};
const double kDeltas[] = {1e-4, 1e-3, 0.01, 0.02, 0.1};

}  // namespace

TEST_SUITE("smoothing") {

TEST_CASE("trapezoid shape") {
    const auto p = PsiDelta::make(0.3, 0.05);
    CHECK(psi_delta_eval(p, 0.0) == doctest::Approx(0.5));
    CHECK(psi_delta_eval(p, 0.3) == doctest::Approx(0.5));
    CHECK(psi_delta_eval(p, 0.15) == 1.0);
    CHECK(psi_delta_eval(p, 0.6) == 0.0);
    CHECK(psi_delta_eval(p, 0.025) == doctest::Approx(0.75));
    CHECK(psi_delta_eval(p, 1.15) == 1.0);
    CHECK(psi_delta_eval(p, -0.85) == 1.0);
    CHECK(psi(0.0, 0.3) == 0);
    CHECK(psi(0.3, 0.3) == 1);
    CHECK(psi(2.2, 0.3) == 1);
    CHECK(psi(0.31, 0.3) == 0);
}

TEST_CASE("coefficients match numerical integration") {
    for (const double gm : {0.3, 0.5, 0.7071}) {
        for (const double d : {0.01, 0.05, 0.1}) {
            const double dd = PsiDelta::clamp_delta(gm, d);
            const auto p = PsiDelta::make(gm, dd);
            CHECK(coefficient_by_quadrature(p, 0).real() == doctest::Approx(gm).epsilon(1e-10));
            for (const std::int64_t k : {1, 2, 3, 7, 20, 51}) {
                CAPTURE(gm);
                CAPTURE(dd);
                CAPTURE(k);
                const auto want = coefficient_by_quadrature(p, k);
                const auto got = psi_delta_fourier(p, k);
                CHECK(std::abs(got.g - want) < 1e-9);
                CHECK(std::abs(got.h - std::conj(want)) < 1e-9);
            }
        }
    }
}

TEST_CASE("coefficient bound over a grid") {
    for (const double gm : kGammas) {
        for (const double req : kDeltas) {
            const auto p = PsiDelta::make(gm, PsiDelta::clamp_delta(gm, req));
            for (std::int64_t k = 1; k <= 10'000; ++k) {
                const auto c = psi_delta_fourier(p, k);
                const double b = psi_delta_coefficient_bound(p, k);
                REQUIRE(std::abs(c.g) <= b);
                REQUIRE(std::abs(c.h) <= b);
            }
            CHECK(psi_delta_coefficient_bound(p, 3) ==
                  doctest::Approx(std::min(2 / (kPi * 3), 2 / (kPi * kPi * 9 * p.delta))));
        }
    }
}

TEST_CASE("plateaus equal the sharp indicator") {
    auto& g = oracle::rng();
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (const double gm : kGammas) {
        const auto p = PsiDelta::make(gm, PsiDelta::clamp_delta(gm, 0.02));
        for (int i = 0; i < 5000; ++i) {
            const double x = u(g);
            const double fr = x - std::floor(x);
            const double v = psi_delta_eval(p, x);
            REQUIRE(v >= 0.0);
            REQUIRE(v <= 1.0);
            const bool near = fr < p.delta || fr > 1 - p.delta || std::fabs(fr - gm) < p.delta;
            if (!near) REQUIRE(v == psi(x, gm));
        }
    }
}

TEST_CASE("truncated series stays within the tail bound") {
    auto& g = oracle::rng();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const double gm : kGammas) {
        for (const double req : {0.01, 0.05, 0.1}) {
            const auto p = PsiDelta::make(gm, PsiDelta::clamp_delta(gm, req));
            for (const std::int64_t K : {16, 100, 1000}) {
                for (int i = 0; i < 50; ++i) {
                    const double x = i < 3 ? std::vector<double>{0.0, gm, p.delta}[i] : u(g);
                    const auto s = psi_delta_series(p, x, K);
                    CHECK(s.tail_bound == doctest::Approx(4 / (kPi * kPi * K * p.delta)));
                    REQUIRE(std::fabs(s.value - psi_delta_eval(p, x)) <= s.tail_bound);
                }
            }
        }
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(PsiDelta::make(0.0, 0.01), InvalidArgument);
    CHECK_THROWS_AS(PsiDelta::make(1.0, 0.01), InvalidArgument);
    CHECK_THROWS_AS(PsiDelta::make(0.5, 0.125), InvalidArgument);
    CHECK_THROWS_AS(PsiDelta::make(0.5, 0.0), InvalidArgument);
    CHECK_THROWS_AS(PsiDelta::make(0.1, 0.06), InvalidArgument);
    CHECK_NOTHROW(PsiDelta::make(0.1, 0.05));
    for (const double gm : kGammas) {
        for (const double req : {1e-6, 0.01, 0.2, 5.0}) {
            const double d = PsiDelta::clamp_delta(gm, req);
            CHECK(d <= req);
            CHECK(d > 0);
            CHECK_NOTHROW(PsiDelta::make(gm, d));
        }
    }
    CHECK_THROWS_AS(psi_delta_fourier(PsiDelta::make(0.5, 0.1), 0), InvalidArgument);
}

}  // TEST_SUITE
