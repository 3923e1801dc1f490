#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "primegap/errors.hpp"
#include "primegap/reference.hpp"
#include "primegap/sequences.hpp"
#include "primegap/tuples.hpp"

using namespace primegap;

TEST_SUITE("tuples") {

TEST_CASE("admissibility agrees with brute force") {
    auto& g = oracle::rng();
    std::size_t admissible = 0;
    for (int i = 0; i < 500; ++i) {
        const std::size_t k = 1 + g() % 20;
        std::set<std::int64_t> s;
        // mix of narrow and wide shift ranges so both outcomes occur
        const std::int64_t range = i % 2 ? 4 * static_cast<std::int64_t>(k) : 1000;
        while (s.size() < k) s.insert(static_cast<std::int64_t>(g() % range) * (i % 3 ? 2 : 1));
        const std::vector<std::int64_t> shifts(s.begin(), s.end());
        const auto r = is_admissible(LinearFormTuple(shifts));
        REQUIRE(r.admissible == reference::is_admissible(shifts));
        if (!r.admissible) {
            REQUIRE(r.witness_prime);
            const auto p = static_cast<std::int64_t>(*r.witness_prime);
            std::set<std::int64_t> classes;
            for (const auto l : shifts) classes.insert(l % p);
            REQUIRE(classes.size() == static_cast<std::size_t>(p));
        }
        admissible += r.admissible;
    }
    CHECK(admissible > 50);
    CHECK(admissible < 450);
}

TEST_CASE("small examples") {
    const auto r = is_admissible(LinearFormTuple({0, 2, 4}));
    CHECK_FALSE(r.admissible);
    CHECK(*r.witness_prime == 3);
    CHECK(is_admissible(LinearFormTuple({0, 2, 6})).admissible);
    CHECK(is_admissible(LinearFormTuple({0})).admissible);
    CHECK_FALSE(is_admissible(LinearFormTuple({0, 1})).admissible);
    CHECK(diameter(LinearFormTuple({4, 0, 10})) == 10);
    CHECK(LinearFormTuple({4, 0, 10}).shifts() == std::vector<std::int64_t>{0, 4, 10});
    CHECK_THROWS_AS(LinearFormTuple({1, 1}), InvalidArgument);
    CHECK_THROWS_AS(LinearFormTuple({-1, 3}), InvalidArgument);
    CHECK_THROWS_AS(LinearFormTuple({}), InvalidArgument);
}

TEST_CASE("primorials") {
    CHECK(primorial(1) == 1);
    CHECK(primorial(5) == 30);
    CHECK(primorial(10) == 210);
    CHECK(primorial(52) == 614889782588491410ULL);
    CHECK_THROWS_AS(primorial(53), CapacityExceeded);
}

TEST_CASE("constructed tuples are admissible and closed under the sequence") {
    const BeattySpec spec(IrrationalSpec::sqrt2(), Rational(0), Rational(1, 2));
    const auto members = beatty_terms(spec, 1, 10'000);
    for (std::size_t k = 1; k <= 10; ++k) {
        CAPTURE(k);
        const auto t = beatty_admissible_tuple(spec, k, 200'000);
        REQUIRE(t.size() == k);
        CHECK(is_admissible(t).admissible);
        REQUIRE(t.origin());
        const auto W = t.origin()->W;
        CHECK(W == primorial(k));
        for (const auto l : t.shifts()) {
            CHECK(static_cast<std::uint64_t>(l) % W == t.origin()->residue);
            CHECK(beatty_membership(spec, l).member);
        }
        for (const auto n : members) REQUIRE(closure_check(spec, t, n));
    }
    CHECK_THROWS_AS(closure_check(spec, beatty_admissible_tuple(spec, 3, 10'000), 2), NotMember);
    // beta must vanish and c stay at most 1/2
    CHECK_THROWS_AS(beatty_admissible_tuple(BeattySpec(IrrationalSpec::sqrt2(), Rational(1, 3), Rational(1, 2)), 3, 1000),
                    InvalidArgument);
    CHECK_THROWS_AS(beatty_admissible_tuple(BeattySpec(IrrationalSpec::sqrt2(), Rational(0), Rational(2, 3)), 3, 1000),
                    InvalidArgument);
}

}  // TEST_SUITE
