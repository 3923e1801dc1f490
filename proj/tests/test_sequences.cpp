#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "primegap/errors.hpp"
#include "primegap/parallel.hpp"
#include "primegap/reference.hpp"
#include "primegap/sequences.hpp"
#include "primegap/sieve.hpp"

using namespace primegap;

namespace {

BeattySpec sqrt2_half() { return BeattySpec(IrrationalSpec::sqrt2(), Rational(0), Rational(1, 2)); }

}  // namespace

TEST_SUITE("sequences") {

TEST_CASE("Beatty windows by hand") {
    CHECK(beatty_window(sqrt2_half(), 1, 12).terms() == std::vector<std::int64_t>{1, 4, 7, 8, 11});
    const BeattySpec full(IrrationalSpec::sqrt2());
    CHECK(beatty_window(full, 1, 12).terms() == std::vector<std::int64_t>{1, 2, 4, 5, 7, 8, 9, 11});
    const auto w = beatty_window(sqrt2_half(), 1, 12);
    CHECK(w.entries[2].n == 5);
    CHECK(w.entries[2].frac == doctest::Approx(5 * std::sqrt(2.0) - 7));
    CHECK(beatty_window(full, 5, 5).size() == 0);
    CHECK_THROWS_AS(beatty_window(full, 0, 10), InvalidArgument);
}

TEST_CASE("Beatty windows agree with the serial reference") {
    const std::vector<BeattySpec> specs = {
        sqrt2_half(),
        BeattySpec(IrrationalSpec::parse("pi"), Rational(1, 3), Rational(2, 3)),
        BeattySpec(IrrationalSpec::golden_ratio().reciprocal(), Rational(-1, 2), Rational(1)),
        BeattySpec(IrrationalSpec::parse("e"), Rational(5, 2), Rational(1, 7)),
    };
    for (const auto& s : specs) {
        CAPTURE(s.str());
        for (const auto& [lo, hi] : {std::pair<std::int64_t, std::int64_t>{1, 5000}, {77'777, 200'000}}) {
            CHECK(beatty_terms(s, lo, hi) == reference::beatty_terms(s, lo, hi));
        }
    }
}

TEST_CASE("witnesses reproduce their terms") {
    const BeattySpec s(IrrationalSpec::parse("pi"), Rational(1, 3), Rational(2, 3));
    for (const auto& e : beatty_window(s, 1000, 20'000).entries) {
        REQUIRE(beatty_term(s, e.n) == e.term);
        REQUIRE(s.alpha().frac_compare(e.n, s.beta(), s.c()));
    }
}

TEST_CASE("membership matches enumeration") {
    for (const auto& s : {sqrt2_half(), BeattySpec(IrrationalSpec::parse("e"), Rational(1, 4), Rational(3, 5)),
                          BeattySpec(IrrationalSpec::golden_ratio().reciprocal(), Rational(0), Rational(1, 3))}) {
        const auto terms = beatty_terms(s, 1, 30'000);
        const std::set<std::int64_t> members(terms.begin(), terms.end());
        for (std::int64_t m = 1; m < 30'000; ++m) {
            const auto r = beatty_membership(s, m);
            REQUIRE(r.member == (members.count(m) == 1));
            if (r.member) {
                REQUIRE(r.witness);
                REQUIRE(beatty_term(s, *r.witness) == m);
            }
        }
    }
    const auto r = beatty_membership(sqrt2_half(), 7);
    CHECK(r.member);
    CHECK(*r.witness == 5);
    CHECK_FALSE(beatty_membership(sqrt2_half(), 2).member);
}

TEST_CASE("progression counts") {
    const auto s = sqrt2_half();
    CHECK(beatty_count_ap(s, 11, 2, 1) == 3);  // 1, 7, 11
    const auto terms = beatty_terms(s, 1, 100'001);
    for (std::int64_t q = 1; q <= 12; ++q) {
        std::uint64_t sum = 0;
        for (std::int64_t a = 0; a < q; ++a) {
            std::uint64_t want = 0;
            for (const auto t : terms) want += t % q == a;
            const auto got = beatty_count_ap(s, 100'000, q, a);
            CHECK(got == want);
            sum += got;
        }
        CHECK(sum == terms.size());
    }
    const auto window = beatty_terms(s, 5000, 10'000);
    std::uint64_t odd = 0;
    for (const auto t : window) odd += t % 2 == 1;
    CHECK(beatty_window_count_ap(s, 5000, 2, 1) == odd);
}

TEST_CASE("density") {
    const auto s = sqrt2_half();
    const auto count = static_cast<double>(beatty_count_ap(s, 1'000'000, 1, 0));
    CHECK(std::fabs(count * 2 * std::sqrt(2.0) / 1e6 - 1) < 0.01);
    CHECK(s.density() == doctest::Approx(1 / (2 * std::sqrt(2.0))));
}

TEST_CASE("Beatty spec validation") {
    CHECK_THROWS_AS(BeattySpec(IrrationalSpec::sqrt2(), Rational(0), Rational(0)), InvalidArgument);
    CHECK_THROWS_AS(BeattySpec(IrrationalSpec::sqrt2(), Rational(0), Rational(3, 2)), InvalidArgument);
    CHECK_THROWS_AS(BeattySpec(IrrationalSpec::surd(0, -1, 2, 1)), InvalidArgument);
}

TEST_CASE("Leitmann floors against 256-bit enclosures") {
    const auto f = LeitmannFunction::power(1.05);
    auto& g = oracle::rng();
    for (int i = 0; i < 3000; ++i) {
        const std::uint64_t n = i < 1000 ? static_cast<std::uint64_t>(i + 2) : 2 + g() % 100'000'000ULL;
        mpz_class want;
        REQUIRE(oracle::floor_power(n, 1.05, 256, want));
        CHECK(f.floor_at(n) == want.get_si());
    }
    // perfect powers sit exactly on integers
    const auto h = LeitmannFunction::power(1.0625);  // 17/16
    for (std::uint64_t b = 2; b < 40; ++b) {
        const std::uint64_t n = b * b * b * b * b * b * b * b * b * b * b * b * b * b * b * b;  // b^16
        if (n > 1'000'000'000'000ULL) break;
        mpz_class want;
        REQUIRE(oracle::floor_power(n, 1.0625, 256, want));
        CHECK(h.floor_at(n) == want.get_si());
    }
}

TEST_CASE("Leitmann windows and kinds") {
    const auto f = LeitmannFunction::power(1.05);
    CHECK(leitmann_window(f, 2, 6).terms() == std::vector<std::int64_t>{2, 3, 4, 5});
    const auto w = leitmann_window(f, 2, 200'000);
    std::int64_t prev = 0;
    for (const auto& e : w.entries) {
        REQUIRE(e.term > prev);
        REQUIRE(f.floor_at(static_cast<std::uint64_t>(e.n)) == e.term);
        prev = e.term;
    }
    // f' > 1 so every index below f^{-1}(hi) gives its own term
    CHECK(std::fabs(static_cast<double>(w.size()) - f.inverse(200'000.0)) < 3);
    for (const char* text : {"logpow:1", "explog:1,0.5", "iterlog:1", "iterlog:2", "power:1.08"}) {
        const auto h = LeitmannFunction::parse(text);
        CAPTURE(text);
        const auto lo = leitmann_term(h, h.c0());
        const auto ws = leitmann_window(h, lo, lo + 5000);
        for (const auto& e : ws.entries) REQUIRE(h.floor_at(static_cast<std::uint64_t>(e.n)) == e.term);
        CHECK(ws.size() > 100);
        CHECK(h(static_cast<double>(h.c0())) >= 2.0);
    }
    CHECK_THROWS_AS(LeitmannFunction::power(1.2), InvalidArgument);
    CHECK_THROWS_AS(LeitmannFunction::parse("cubic:3"), InvalidArgument);
    CHECK_THROWS_AS(leitmann_window(f, 0, 10), InvalidArgument);
}

TEST_CASE("Leitmann derivatives and inverse") {
    const auto f = LeitmannFunction::parse("explog:1,0.5");
    for (const double x : {50.0, 1e3, 1e6}) {
        const double h = x * 1e-5;
        CHECK(f.derivative(x, 1) == doctest::Approx((f(x + h) - f(x - h)) / (2 * h)).epsilon(1e-6));
        CHECK(f.derivative(x, 2) ==
              doctest::Approx((f.derivative(x + h, 1) - f.derivative(x - h, 1)) / (2 * h)).epsilon(1e-5));
        CHECK(f.inverse(f(x)) == doctest::Approx(x).epsilon(1e-10));
        CHECK(f.inverse_derivative(f(x)) == doctest::Approx(1 / f.derivative(x, 1)).epsilon(1e-9));
    }
    const auto p = LeitmannFunction::power(1.05);
    CHECK(p.inverse(std::pow(1e6, 1.05)) == doctest::Approx(1e6));
}

TEST_CASE("Leitmann validation") {
    const std::vector<double> grid = {1e2, 1e3, 1e4, 1e5, 1e6, 1e8, 1e10};
    for (const char* text : {"power:1.05", "logpow:1", "explog:1,0.5", "iterlog:2"}) {
        CAPTURE(text);
        const auto v = leitmann_validate(LeitmannFunction::parse(text), grid);
        CHECK(v.ok());
        CHECK(v.samples.size() == grid.size());
    }
    const auto pv = leitmann_validate(LeitmannFunction::power(1.05), grid);
    CHECK(pv.final_deviation[0] < 1e-6);
    // a concave function declared convex must be caught
    const auto bad = LeitmannFunction::custom(
        "sqrtish", [](const Jet& x) { return pow(x, 0.9) * 3.0; }, 2, {1.0, 0.0, -1.0});
    CHECK_THROWS_AS(leitmann_validate(bad, grid), ValidationFailed);
    const auto report = leitmann_validate(bad, grid, true);
    CHECK_FALSE(report.ok());
    CHECK(report.violations.size() >= 2);
}

TEST_CASE("Leitmann logarithmic integral") {
    const auto f = LeitmannFunction::power(1.05);
    // g'(t)/log t with g(t) = t^(1/1.05): compare with a plain composite Simpson rule
    const double c = f(2.0), x = 1e6;
    const int n = 2'000'000;
    const double h = (x - c) / n;
    double s = 0;
    for (int i = 0; i <= n; ++i) {
        const double t = c + i * h;
        const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
        s += w * std::pow(t, 1 / 1.05 - 1) / 1.05 / std::log(t);
    }
    s *= h / 3;
    CHECK(leitmann_li(f, x) == doctest::Approx(s).epsilon(1e-7));
    // shifting f shifts the integrand
    CHECK(leitmann_li(f, c + 10, x + 10, 10) == doctest::Approx(leitmann_li(f, c, x)).epsilon(5e-3));
    CHECK_THROWS_AS(leitmann_li(f, 1.5, x), InvalidArgument);
}

TEST_CASE("windows do not depend on the worker count") {
    const auto s = BeattySpec(IrrationalSpec::parse("pi"), Rational(1, 3), Rational(2, 3));
    set_worker_count(1);
    const auto a = beatty_terms(s, 1, 300'000);
    const auto fa = leitmann_window(LeitmannFunction::power(1.05), 2, 100'000).terms();
    set_worker_count(3);
    const auto b = beatty_terms(s, 1, 300'000);
    const auto fb = leitmann_window(LeitmannFunction::power(1.05), 2, 100'000).terms();
    oracle::reset_workers();
    CHECK(a == b);
    CHECK(fa == fb);
}

}  // TEST_SUITE
