#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "oracles.hpp"
#include "primegap/errors.hpp"
#include "primegap/hypothesis.hpp"
#include "primegap/parallel.hpp"
#include "primegap/reference.hpp"

using namespace primegap;

namespace {

BeattySpec sqrt2_half() { return BeattySpec(IrrationalSpec::sqrt2(), Rational(0), Rational(1, 2)); }

const PrimeTable& table() {
    static const PrimeTable t = PrimeTable::build(3'000'000);
    return t;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

// sum over q <= q_max of max over admissible a of |#P(x; q, a) - #P(x)/phi(q)|
double part2_brute(const BeattySpec& spec, std::int64_t shift, std::int64_t x, std::uint64_t q_max,
                   std::uint64_t& count_p) {
    std::vector<std::int64_t> hits;
    for (const auto n : reference::beatty_terms(spec, x, 2 * x))
        if (reference::is_prime_trial(static_cast<std::uint64_t>(n + shift))) hits.push_back(n);
    count_p = hits.size();
    double total = 0;
    for (std::uint64_t q = 1; q <= q_max; ++q) {
        std::uint64_t phi = 0;
        for (std::uint64_t r = 1; r <= q; ++r) phi += gcd(r, q) == 1;
        double worst = 0;
        for (std::uint64_t a = 0; a < q; ++a) {
            const auto la = static_cast<std::uint64_t>(((shift % static_cast<std::int64_t>(q)) + q + a) % q);
            if (gcd(la, q) != 1) continue;
            std::uint64_t c = 0;
            for (const auto n : hits) c += static_cast<std::uint64_t>(n) % q == a;
            worst = std::max(worst, std::fabs(static_cast<double>(c) - static_cast<double>(hits.size()) / phi));
        }
        total += worst;
    }
    return total;
}

// trial-division von Mangoldt
double lambda_trial(std::uint64_t m) {
    if (m < 2) return 0;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        while (m % p == 0) m /= p;
        return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
    }
    return std::log(static_cast<double>(m));
}

}  // namespace

TEST_SUITE("hypothesis") {

TEST_CASE("part 1 matches the serial reference") {
    for (const auto& spec : {sqrt2_half(), BeattySpec(IrrationalSpec::parse("pi"), Rational(1, 3), Rational(2, 3))}) {
        for (const std::int64_t x : {1000LL, 54'321LL, 200'000LL}) {
            const double theta = default_theta(spec);
            const auto r = hyp1_part1(spec, x, theta);
            CHECK(r.q_max == q_limit(x, theta));
            CHECK(r.rows.size() == r.q_max);
            CHECK(r.rows[0].max_error == 0.0);
            CHECK(r.total == doctest::Approx(reference::hyp1_part1_total(spec, x, r.q_max)).epsilon(1e-12));
            CHECK(r.count_a == reference::beatty_terms(spec, x, 2 * x).size());
            CHECK(r.normalized == doctest::Approx(r.total / static_cast<double>(r.count_a)));
        }
    }
    CHECK(q_limit(100'000, 0.5) == 316);
    CHECK(q_limit(10, 0.01) == 1);
    CHECK(default_theta(BeattySpec(IrrationalSpec::golden_ratio())) == doctest::Approx(0.45));
    CHECK_THROWS_AS(hyp1_part1(sqrt2_half(), 1, 0.3), InvalidArgument);
    CHECK_THROWS_AS(hyp1_part1(sqrt2_half(), kMaxWindowEnd, 0.3), CapacityExceeded);
}

TEST_CASE("part 2 matches brute force with the coprimality filter") {
    const auto spec = sqrt2_half();
    for (const std::int64_t shift : {1LL, 2LL, 7LL}) {
        const std::int64_t x = 20'000;
        const auto r = hyp1_part2(spec, table(), shift, x, 0.3);
        std::uint64_t count_p = 0;
        const double want = part2_brute(spec, shift, x, r.q_max, count_p);
        CAPTURE(shift);
        CHECK(r.count_p == count_p);
        CHECK(r.total == doctest::Approx(want).epsilon(1e-12));
        CHECK(r.rows[0].max_error == 0.0);
    }
    CHECK_THROWS_AS(hyp1_part2(spec, table(), 1, 2'000'000, 0.3), CapacityExceeded);
}

TEST_CASE("part 3 concentration") {
    const auto c = hyp1_part3(sqrt2_half(), 100'000, 0.3);
    CHECK(c.ratio >= 1.0);
    CHECK(c.q <= c.q_max);
    // the ratio is a witnessed value
    const auto terms = reference::beatty_terms(sqrt2_half(), 100'000, 200'000);
    std::uint64_t hits = 0;
    for (const auto n : terms) hits += static_cast<std::uint64_t>(n) % c.q == c.a;
    CHECK(c.ratio == doctest::Approx(static_cast<double>(c.q * hits) / static_cast<double>(terms.size())));
}

TEST_CASE("lambda sums against brute force") {
    const std::vector<BeattySpec> specs = {
        sqrt2_half(),
        BeattySpec(IrrationalSpec::parse("pi"), Rational(1, 3), Rational(2, 3)),
        BeattySpec(IrrationalSpec::parse("e"), Rational(0), Rational(1)),
    };
    for (const auto& spec : specs) {
        for (const auto& [q, a] : {std::pair{1ULL, 0ULL}, {3ULL, 1ULL}, {10ULL, 7ULL}}) {
            const std::int64_t N = 50'000;
            const auto r = lambda_beatty_sum(spec, table(), N, q, a);
            double want = 0;
            for (const auto m : reference::beatty_terms(spec, 1, r.M + 1))
                if (static_cast<std::uint64_t>(m) % q == a) want += lambda_trial(static_cast<std::uint64_t>(m));
            CAPTURE(spec.str());
            CHECK(r.S == doctest::Approx(want).epsilon(1e-12));
            CHECK(r.M == spec.alpha().floor_linear(N, spec.beta()));
            CHECK(r.main_term == doctest::Approx(spec.density() * r.chebyshev));
        }
    }
    CHECK(lambda_beatty_sum(sqrt2_half(), table(), 1, 1, 0).S == 0.0);
    CHECK_THROWS_AS(lambda_beatty_sum(sqrt2_half(), table(), 1000, 6, 3), NotCoprime);
    CHECK_THROWS_AS(lambda_beatty_sum(sqrt2_half(), table(), 3'000'000, 1, 0), CapacityExceeded);
}

TEST_CASE("decomposition closes within the tail bound") {
    const BeattySpec spec(IrrationalSpec::sqrt2(), Rational(0), Rational(1, 2));
    for (const std::int64_t N : {10'000LL, 300'000LL}) {
        for (const auto& [q, a] : {std::pair{1ULL, 0ULL}, {3ULL, 1ULL}, {4ULL, 3ULL}}) {
            LambdaSumOptions opt;
            opt.decompose = true;
            const auto r = lambda_beatty_sum(spec, table(), N, q, a, opt);
            REQUIRE(r.decomposition);
            const auto& d = *r.decomposition;
            CHECK(d.within_tail());
            CHECK(std::fabs(d.residual) <= d.tail_bound);
            CHECK(d.tail_bound == doctest::Approx(4 * r.chebyshev / (std::numbers::pi * std::numbers::pi * d.K * d.delta)));
            CHECK(d.K >= 64);
            CHECK(d.k_split <= d.K);
            CHECK(std::fabs(d.large_k) <= d.large_k_trivial + 1e-9);
            CHECK(d.boundary_weight <= r.chebyshev);
        }
    }
    LambdaSumOptions opt;
    opt.decompose = true;
    opt.delta = 0.01;
    opt.K = 2000;
    const auto r = lambda_beatty_sum(spec, table(), 100'000, 1, 0, opt);
    CHECK(r.decomposition->delta == 0.01);
    CHECK(r.decomposition->K == 2000);
    CHECK(r.decomposition->within_tail());
    opt.delta = 0.5;
    CHECK_THROWS_AS(lambda_beatty_sum(spec, table(), 1000, 1, 0, opt), InvalidArgument);
    // alpha < 1 has no membership criterion of this form
    LambdaSumOptions plain;
    plain.decompose = true;
    CHECK_THROWS_AS(lambda_beatty_sum(BeattySpec(IrrationalSpec::sqrt2().reciprocal()), table(), 1000, 1, 0, plain),
                    InvalidArgument);
}

TEST_CASE("twisted sums and support") {
    const auto gamma = IrrationalSpec::sqrt2().reciprocal();
    const double g = static_cast<double>(gamma.approx());
    for (const std::int64_t k : {1LL, 5LL}) {
        const auto t = twisted_lambda_sum(table(), 20'000, 3, 2, gamma, k);
        long double re = 0, im = 0, triv = 0;
        for (std::uint64_t m = 2; m <= 20'000; ++m) {
            if (m % 3 != 2) continue;
            const double l = lambda_trial(m);
            if (l == 0) continue;
            const long double ph = 2 * std::numbers::pi_v<long double> * std::fmod(static_cast<long double>(g) * k * m, 1.0L);
            re += l * std::cos(ph);
            im += l * std::sin(ph);
            triv += l;
        }
        CHECK(t.magnitude == doctest::Approx(static_cast<double>(std::hypot(re, im))).epsilon(1e-7));
        CHECK(t.trivial == doctest::Approx(static_cast<double>(triv)).epsilon(1e-12));
        CHECK(t.eta_hat == doctest::Approx(1 - std::log(t.magnitude) / std::log(20'000.0)));
    }
    const auto s = lambda_support(table(), 100, 4, 1);
    std::vector<std::uint64_t> ms;
    for (const auto& [m, l] : s) {
        ms.push_back(m);
        CHECK(l == doctest::Approx(lambda_trial(m)));
    }
    CHECK(ms == std::vector<std::uint64_t>{5, 9, 13, 17, 25, 29, 37, 41, 49, 53, 61, 73, 81, 89, 97});
}

TEST_CASE("cluster counts") {
    const auto spec = sqrt2_half();
    const LinearFormTuple tuple({0, 2, 6});
    const std::int64_t x = 10'000;
    const auto terms = reference::beatty_terms(spec, x, 2 * x);
    for (std::size_t m = 0; m <= 4; ++m) {
        const auto r = cluster_search(spec, table(), tuple, x, m);
        std::uint64_t want = 0;
        for (const auto n : terms) {
            std::size_t primes = 0;
            for (const auto l : tuple.shifts()) primes += reference::is_prime_trial(static_cast<std::uint64_t>(n + l));
            want += primes >= m;
        }
        CAPTURE(m);
        CHECK(r.count == want);
        CHECK(r.scanned == terms.size());
        if (m == 0) CHECK(r.count == terms.size());
        if (m > 3) CHECK(r.count == 0);
        CHECK(r.exemplars.size() == std::min<std::uint64_t>(r.count, kExemplarCap));
        std::int64_t prev = 0;
        for (const auto& e : r.exemplars) {
            CHECK(e.anchor > prev);
            prev = e.anchor;
            CHECK(e.primes.size() >= m);
            for (const auto p : e.primes) CHECK(reference::is_prime_trial(static_cast<std::uint64_t>(p)));
        }
    }
    CHECK(cluster_search_range(spec, table(), tuple, 100, 100, 1).count == 0);
    CHECK_THROWS_AS(cluster_search(spec, table(), tuple, 2'000'000, 1), CapacityExceeded);
}

TEST_CASE("constructed tuple exemplars stay in the sequence") {
    const auto spec = sqrt2_half();
    const auto tuple = beatty_admissible_tuple(spec, 4, 100'000);
    const auto r = cluster_search(spec, table(), tuple, 100'000, 2, 10);
    CHECK(r.count > 0);
    CHECK(r.exemplars.size() == std::min<std::uint64_t>(r.count, 10));
    for (const auto& e : r.exemplars)
        for (const auto p : e.primes) CHECK(beatty_membership(BeattySpec(IrrationalSpec::sqrt2()), p).member);
}

TEST_CASE("Leitmann interval search") {
    const auto f = LeitmannFunction::power(1.05);
    const auto r = leitmann_interval_search(f, table(), 1000, 20'000, 2, 6);
    const auto terms = leitmann_window(f, 1000, 20'000).terms();
    std::uint64_t want = 0;
    for (const auto t : terms) {
        std::size_t c = 0;
        for (auto v = t; v <= t + 6; ++v) c += reference::is_prime_trial(static_cast<std::uint64_t>(v));
        want += c >= 2;
    }
    CHECK(r.count == want);
    CHECK(r.scanned == terms.size());
}

TEST_CASE("Leitmann prime counts") {
    const auto f = LeitmannFunction::power(1.05);
    for (const std::int64_t shift : {0LL, 3LL}) {
        const std::int64_t x = 100'000;
        const auto r = leitmann_pnt_check(f, table(), x, 10, shift);
        // primes p <= x with p - shift = floor(n^1.05) for some n >= c0
        std::set<std::int64_t> hits;
        for (std::uint64_t n = f.c0();; ++n) {
            mpz_class fl;
            REQUIRE(oracle::floor_power(n, 1.05, 256, fl));
            const auto p = fl.get_si() + shift;
            if (p > x) break;
            if (p >= 2 && reference::is_prime_trial(static_cast<std::uint64_t>(p))) hits.insert(p);
        }
        CAPTURE(shift);
        CHECK(r.pi_f == hits.size());
        CHECK(std::fabs(r.relative_error) < 0.05);
        // the counts over the coprime classes of each q partition pi_f up to primes dividing q
        for (const auto& row : r.rows) {
            std::map<std::uint64_t, std::uint64_t> by_class;
            for (const auto p : hits) by_class[static_cast<std::uint64_t>(p) % row.q]++;
            double worst = 0;
            for (std::uint64_t a = 0; a < row.q; ++a)
                if (gcd(a, row.q) == 1)
                    worst = std::max(worst, std::fabs(static_cast<double>(by_class[a]) - r.li / static_cast<double>(row.phi_q)));
            CHECK(row.max_error == doctest::Approx(worst));
        }
    }
}

TEST_CASE("log-log fits") {
    const std::vector<double> xs = {1e3, 1e4, 1e5, 1e6};
    std::vector<double> ys, flat(4, 2.5);
    for (const double x : xs) ys.push_back(3 * std::sqrt(x));
    const auto fit = fit_loglog(xs, ys);
    CHECK(fit.slope == doctest::Approx(0.5));
    CHECK(fit.intercept == doctest::Approx(std::log(3.0)));
    for (const double r : fit.residuals) CHECK(std::fabs(r) < 1e-12);
    CHECK(fit_loglog(xs, flat).slope == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(fit_loglog({1, 2}, {1, 2}), InvalidArgument);
    CHECK_THROWS_AS(fit_loglog({1, 2, 3}, {1, 0, 2}), InvalidArgument);
}

TEST_CASE("results do not depend on the worker count") {
    const auto spec = sqrt2_half();
    LambdaSumOptions opt;
    opt.decompose = true;
    set_worker_count(1);
    const auto a1 = hyp1_part1(spec, 300'000, 0.3);
    const auto b1 = lambda_beatty_sum(spec, table(), 200'000, 3, 2, opt);
    const auto c1 = hyp1_part2(spec, table(), 1, 100'000, 0.3);
    set_worker_count(3);
    const auto a3 = hyp1_part1(spec, 300'000, 0.3);
    const auto b3 = lambda_beatty_sum(spec, table(), 200'000, 3, 2, opt);
    const auto c3 = hyp1_part2(spec, table(), 1, 100'000, 0.3);
    oracle::reset_workers();
    CHECK(a1.total == a3.total);
    CHECK(b1.S == b3.S);
    CHECK(b1.decomposition->residual == b3.decomposition->residual);
    CHECK(b1.decomposition->exceptional_count == b3.decomposition->exceptional_count);
    CHECK(c1.total == c3.total);
}

}  // TEST_SUITE
