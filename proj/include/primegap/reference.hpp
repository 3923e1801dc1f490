#pragma once

// Serial, deliberately plain versions of the parallel kernels. Tests use them
// as oracles and the bench target times the kernels against them.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "primegap/sequences.hpp"
#include "primegap/tuples.hpp"

namespace primegap::reference {

// flags[n] for 0 <= n <= limit, single monolithic sieve
std::vector<bool> sieve(std::uint64_t limit);
bool is_prime_trial(std::uint64_t n);
std::uint64_t prime_count(const std::vector<bool>& flags, std::uint64_t x);
// sum of Lambda(m), m <= M, m = a mod q, by factoring each m through the flags
double chebyshev_sum(const std::vector<bool>& flags, std::uint64_t M, std::uint64_t q, std::uint64_t a);

// Brute force over every endpoint pair, counting points directly.
double discrepancy_star(std::span<const double> values);
double discrepancy_extreme(std::span<const double> values);

// plain loop, no chunking, no compensation
std::complex<double> exp_sum(std::span<const double> values, std::int64_t h);

// tries every residue of every prime up to k + 1
bool is_admissible(const std::vector<std::int64_t>& shifts);

// members of A in [lo, hi) by direct evaluation of every index
std::vector<std::int64_t> beatty_terms(const BeattySpec& spec, std::int64_t lo, std::int64_t hi);

// sum_{q <= q_max} max_a |#A(x; q, a) - #A(x)/q| one modulus at a time
double hyp1_part1_total(const BeattySpec& spec, std::int64_t x, std::uint64_t q_max);

}  // namespace primegap::reference
