#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "primegap/errors.hpp"
#include "primegap/irrational.hpp"
#include "primegap/rational.hpp"

using namespace primegap;

namespace {

std::vector<long> to_longs(const std::vector<mpz_class>& v) {
    std::vector<long> out;
    for (const auto& x : v) out.push_back(x.get_si());
    return out;
}

// classical integer recurrence for the expansion of sqrt(D)
std::vector<long> sqrt_cf(long D, std::size_t count) {
    const auto a0 = static_cast<long>(std::floor(std::sqrt(static_cast<double>(D))));
    std::vector<long> out{a0};
    long m = 0, d = 1, a = a0;
    while (out.size() < count) {
        m = d * a - m;
        d = (D - m * m) / d;
        a = (a0 + m) / d;
        out.push_back(a);
    }
    return out;
}

}  // namespace

TEST_SUITE("irrational") {

TEST_CASE("continued fractions of named values") {
    CHECK(to_longs(cf_expand(IrrationalSpec::golden_ratio(), 6)) == std::vector<long>{1, 1, 1, 1, 1, 1});
    CHECK(to_longs(cf_expand(IrrationalSpec::sqrt2(), 5)) == std::vector<long>{1, 2, 2, 2, 2});
    CHECK(to_longs(cf_expand(IrrationalSpec::parse("pi"), 20)) ==
          std::vector<long>{3, 7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1, 14, 2, 1, 1, 2, 2, 2, 2});
    CHECK(to_longs(cf_expand(IrrationalSpec::parse("e"), 13)) ==
          std::vector<long>{2, 1, 2, 1, 1, 4, 1, 1, 6, 1, 1, 8, 1});
}

TEST_CASE("surd expansions match the integer recurrence") {
    for (long D = 2; D <= 60; ++D) {
        const long r = static_cast<long>(std::sqrt(static_cast<double>(D)));
        if (r * r == D) continue;
        const auto spec = IrrationalSpec::surd(0, 1, D, 1);
        CAPTURE(D);
        CHECK(to_longs(cf_expand(spec, 25)) == sqrt_cf(D, 25));
    }
}

TEST_CASE("convergents satisfy the determinant identity and approximation bound") {
    for (const char* text : {"pi", "e", "surd:(1+1*sqrt(5))/2", "surd:(3+2*sqrt(7))/5"}) {
        const auto spec = IrrationalSpec::parse(text);
        const auto conv = convergents(spec, 18);
        for (std::size_t k = 1; k < conv.size(); ++k) {
            const mpz_class det = conv[k].p * conv[k - 1].q - conv[k - 1].p * conv[k].q;
            CHECK(abs(det) == 1);
            // |alpha - p/q| < 1/q^2  <=>  |alpha q^2 - p q| < 1
            const mpq_class u(conv[k].q * conv[k].q), v1(-conv[k].p * conv[k].q - 1), v2(-conv[k].p * conv[k].q + 1);
            CHECK(spec.sign_affine(u, v1) < 0);
            CHECK(spec.sign_affine(u, v2) > 0);
        }
    }
    const auto c = convergents(IrrationalSpec::sqrt2(), 4);
    CHECK(c[3].p == 17);
    CHECK(c[3].q == 12);
}

TEST_CASE("floor_linear for surds against integer square roots") {
    const auto s2 = IrrationalSpec::sqrt2();
    const auto s3 = IrrationalSpec::surd(0, 1, 3, 1);
    auto& g = oracle::rng();
    std::uniform_int_distribution<std::int64_t> dist(1, 2'000'000'000'000LL);
    for (int i = 0; i < 3000; ++i) {
        const auto n = i < 1000 ? i + 1 : dist(g);
        const long p = static_cast<long>(g() % 19) - 9, q = static_cast<long>(g() % 7) + 1;
        CAPTURE(n);
        CHECK(s2.floor_linear(n, Rational(p, q)) == oracle::floor_sqrt_affine(n, 2, p, q).get_si());
        CHECK(s3.floor_linear(n, Rational(p, q)) == oracle::floor_sqrt_affine(n, 3, p, q).get_si());
    }
    CHECK(s2.floor_linear(5, Rational(0)) == 7);
    CHECK_THROWS_AS(s2.floor_linear(0, Rational(0)), InvalidArgument);
}

TEST_CASE("floor_linear for pi and e against 256-bit enclosures") {
    const auto pi = IrrationalSpec::parse("pi");
    const auto e = IrrationalSpec::parse("e");
    auto& g = oracle::rng();
    std::uniform_int_distribution<std::int64_t> dist(1, 1'000'000'000'000'000LL);
    for (int i = 0; i < 2000; ++i) {
        const auto n = i < 200 ? i + 1 : dist(g);
        const long p = static_cast<long>(g() % 11) - 5, q = static_cast<long>(g() % 5) + 1;
        mpz_class want;
        REQUIRE(oracle::floor_const_affine(oracle::Const::Pi, n, p, q, 256, want));
        CHECK(pi.floor_linear(n, Rational(p, q)) == want.get_si());
        REQUIRE(oracle::floor_const_affine(oracle::Const::E, n, p, q, 256, want));
        CHECK(e.floor_linear(n, Rational(p, q)) == want.get_si());
    }
}

TEST_CASE("fractional comparison agrees with the floors") {
    // {alpha n + beta} < c  <=>  floor(alpha n + beta - c) < floor(alpha n + beta)
    const auto pi = IrrationalSpec::parse("pi");
    const auto s2 = IrrationalSpec::sqrt2();
    for (std::int64_t n = 1; n < 3000; ++n) {
        for (const auto& [cn, cd] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{7, 9}}) {
            const Rational c(cn, cd);
            const bool want_pi = pi.floor_linear(n, Rational(-cn, cd)) < pi.floor_linear(n, Rational(0));
            CHECK(pi.frac_compare(n, Rational(0), c) == want_pi);
            const auto ev = s2.eval_linear(n, Rational(0), c);
            CHECK(ev.floor == s2.floor_linear(n, Rational(0)));
            CHECK(ev.below_cutoff == (s2.floor_linear(n, Rational(-cn, cd)) < ev.floor));
        }
    }
}

TEST_CASE("parsing") {
    const auto cf = IrrationalSpec::parse("cf:[1;(2)]");
    const auto s2 = IrrationalSpec::sqrt2();
    for (std::int64_t n = 1; n < 2000; n += 7) CHECK(cf.floor_linear(n, Rational(0)) == s2.floor_linear(n, Rational(0)));
    const auto phi = IrrationalSpec::parse("surd:(1+1*sqrt(5))/2");
    CHECK(phi.floor_linear(1000, Rational(0)) == 1618);
    CHECK_THROWS_AS(IrrationalSpec::parse("surd:(1+1*sqrt(4))/2"), InvalidArgument);
    CHECK_THROWS_AS(IrrationalSpec::parse("tau"), InvalidArgument);
    CHECK_THROWS_AS(IrrationalSpec::parse("cf:[1;2,3]"), InvalidArgument);
    CHECK_THROWS_AS(IrrationalSpec::parse("surd:(1+0*sqrt(5))/2"), InvalidArgument);
    CHECK(Rational::parse("3/6") == Rational(1, 2));
    CHECK_THROWS_AS(Rational::parse("1/0"), InvalidArgument);
    CHECK_THROWS_AS(Rational::parse("x"), InvalidArgument);
}

TEST_CASE("reciprocal floors") {
    const auto inv = IrrationalSpec::sqrt2().reciprocal();
    for (std::int64_t n = 1; n < 5000; ++n) {
        // floor(n / sqrt 2) = isqrt(floor(n^2 / 2))
        mpz_class v(static_cast<long>(n * n / 2)), r;
        mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
        CHECK(inv.floor_linear(n, Rational(0)) == r.get_si());
    }
    const auto pinv = IrrationalSpec::parse("pi").reciprocal();
    CHECK(std::fabs(static_cast<double>(pinv.approx()) - 1.0 / M_PI) < 1e-15);
}

TEST_CASE("generators reproduce named constants") {
    // e = [2; 1, 2, 1, 1, 4, 1, 1, 6, ...]
    const auto gen = IrrationalSpec::generator("e-pattern", [](std::size_t k, std::span<const Convergent>) {
        if (k == 0) return mpz_class(2);
        return (k % 3 == 2) ? mpz_class(static_cast<long>(2 * (k + 1) / 3)) : mpz_class(1);
    });
    const auto e = IrrationalSpec::parse("e");
    for (std::int64_t n = 1; n < 1000; ++n) CHECK(gen.floor_linear(n, Rational(0)) == e.floor_linear(n, Rational(0)));
}

TEST_CASE("affine queries against 512-bit enclosures") {
    const auto pi = IrrationalSpec::parse("pi");
    auto& g = oracle::rng();
    for (int i = 0; i < 500; ++i) {
        const long un = static_cast<long>(g() % 2001) - 1000, ud = static_cast<long>(g() % 50) + 1;
        const long vn = static_cast<long>(g() % 200001) - 100000, vd = static_cast<long>(g() % 50) + 1;
        mpq_class u(un, ud), v(vn, vd);
        u.canonicalize();
        v.canonicalize();
        oracle::Big lo(512), hi(512);
        // pi u + v enclosure; for negative u the upper bound of pi gives the lower end
        const bool neg = u < 0;
        mpfr_const_pi(lo.get(), neg ? MPFR_RNDU : MPFR_RNDD);
        mpfr_const_pi(hi.get(), neg ? MPFR_RNDD : MPFR_RNDU);
        mpfr_mul_q(lo.get(), lo.get(), u.get_mpq_t(), MPFR_RNDD);
        mpfr_mul_q(hi.get(), hi.get(), u.get_mpq_t(), MPFR_RNDU);
        mpfr_add_q(lo.get(), lo.get(), v.get_mpq_t(), MPFR_RNDD);
        mpfr_add_q(hi.get(), hi.get(), v.get_mpq_t(), MPFR_RNDU);
        mpz_class want;
        REQUIRE(oracle::floor_of(lo.get(), hi.get(), want));
        CHECK(pi.floor_affine(u, v) == want);
        const int sign = mpfr_sgn(lo.get()) > 0 ? 1 : (mpfr_sgn(hi.get()) < 0 ? -1 : 0);
        if (sign != 0) CHECK(pi.sign_affine(u, v) == sign);
    }
    CHECK(pi.sign_affine(0, mpq_class(-3)) == -1);
    CHECK(pi.sign_affine(0, 0) == 0);
}

TEST_CASE("type estimates") {
    CHECK(estimate_type(IrrationalSpec::golden_ratio(), 30).tau_hat == doctest::Approx(1.0));
    const double t2 = estimate_type(IrrationalSpec::sqrt2(), 30).tau_hat;
    CHECK(t2 >= 1.0);
    CHECK(t2 < 1.1);
    const auto tp = estimate_type(IrrationalSpec::parse("pi"), 30);
    CHECK(tp.tau_hat > 1.0);
    CHECK(tp.prefix_max >= tp.tau_hat);
}

TEST_CASE("approximations carry a rigorous error bound") {
    for (const char* text : {"pi", "e", "surd:(0+1*sqrt(2))/1", "cf:[0;1,(3,5)]"}) {
        const auto spec = IrrationalSpec::parse(text);
        const long double a = spec.approx(), err = spec.approx_error();
        CHECK(err < 1e-17L * std::fabs(a) + 1e-300L);
        // alpha lies within [a - err - tiny, a + err + tiny]
        // a long double splits exactly into two doubles
        const double a1 = static_cast<double>(a), a2 = static_cast<double>(a - a1);
        const mpq_class exact = mpq_class(a1) + mpq_class(a2);
        const mpq_class slack = mpq_class(static_cast<double>(err)) * 2 + mpq_class(mpz_class(1), mpz_class("1000000000000000000"));
        const mpq_class lo = exact - slack, hi = exact + slack;
        CHECK(spec.sign_affine(1, -lo) > 0);
        CHECK(spec.sign_affine(1, -hi) < 0);
    }
}

}  // TEST_SUITE
