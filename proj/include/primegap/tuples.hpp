#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "primegap/sequences.hpp"

namespace primegap {

// How a tuple was obtained from a Beatty set: every shift lies in the class
// residue mod W, W the product of the primes <= k.
struct TupleOrigin {
    std::string spec;
    std::uint64_t W = 1;
    std::uint64_t residue = 0;
    std::int64_t search_limit = 0;
};

// Linear forms n + l_i with distinct non-negative shifts, kept sorted.
class LinearFormTuple {
public:
    explicit LinearFormTuple(std::vector<std::int64_t> shifts, std::optional<TupleOrigin> origin = std::nullopt);

    const std::vector<std::int64_t>& shifts() const noexcept { return shifts_; }
    std::size_t size() const noexcept { return shifts_.size(); }
    const std::optional<TupleOrigin>& origin() const noexcept { return origin_; }

private:
    std::vector<std::int64_t> shifts_;
    std::optional<TupleOrigin> origin_;
};

struct Admissibility {
    bool admissible = true;
    std::optional<std::uint64_t> witness_prime;  // a prime whose residues are all covered
};

// Only primes p <= k can have every residue covered by k shifts.
Admissibility is_admissible(const LinearFormTuple& t);

// product of the primes <= k; CapacityExceeded past 64 bits
std::uint64_t primorial(std::uint64_t k);

// The k smallest members of the most populous class of A mod W among the
// members up to search_limit (smallest residue on ties). Needs c <= 1/2 and
// beta = 0 so that sums of members stay Beatty terms.
LinearFormTuple beatty_admissible_tuple(const BeattySpec& spec, std::size_t k, std::int64_t search_limit);

// Whether every n + l_i is a term floor(alpha r) of the full Beatty sequence.
// Throws NotMember if n is not in A.
bool closure_check(const BeattySpec& spec, const LinearFormTuple& t, std::int64_t n);

std::int64_t diameter(const LinearFormTuple& t);

}  // namespace primegap
