#include "primegap/tuples.hpp"

#include <algorithm>
#include <limits>

#include "primegap/errors.hpp"
#include "primegap/sieve.hpp"

namespace primegap {

namespace {

std::vector<std::uint64_t> primes_up_to(std::uint64_t k) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p <= k; ++p)
        if (miller_rabin_is_prime(p)) out.push_back(p);
    return out;
}

}  // namespace

LinearFormTuple::LinearFormTuple(std::vector<std::int64_t> shifts, std::optional<TupleOrigin> origin)
    : shifts_(std::move(shifts)), origin_(std::move(origin)) {
    if (shifts_.empty()) throw InvalidArgument("a tuple needs at least one shift");
    std::sort(shifts_.begin(), shifts_.end());
    if (shifts_.front() < 0) throw InvalidArgument("shifts must be non-negative");
    if (std::adjacent_find(shifts_.begin(), shifts_.end()) != shifts_.end())
        throw InvalidArgument("shifts must be distinct");
}

Admissibility is_admissible(const LinearFormTuple& t) {
    for (const std::uint64_t p : primes_up_to(t.size())) {
        std::vector<bool> hit(p, false);
        std::uint64_t covered = 0;
        for (const std::int64_t l : t.shifts()) {
            const auto r = static_cast<std::uint64_t>((p - static_cast<std::uint64_t>(l) % p) % p);
            if (!hit[r]) {
                hit[r] = true;
                ++covered;
            }
        }
        if (covered == p) return {false, p};
    }
    return {};
}

std::uint64_t primorial(std::uint64_t k) {
    std::uint64_t w = 1;
    for (const std::uint64_t p : primes_up_to(k)) {
        if (w > std::numeric_limits<std::uint64_t>::max() / p)
            throw CapacityExceeded("primorial of " + std::to_string(k) + " overflows 64 bits");
        w *= p;
    }
    return w;
}

LinearFormTuple beatty_admissible_tuple(const BeattySpec& spec, std::size_t k, std::int64_t search_limit) {
    if (k < 1) throw InvalidArgument("tuple size must be at least 1");
    if (spec.c() > Rational(1, 2)) throw InvalidArgument("tuple construction needs c <= 1/2");
    if (!spec.beta().is_zero()) throw InvalidArgument("tuple construction needs beta = 0");
    if (search_limit < 1) throw InvalidArgument("search limit must be positive");
    const std::uint64_t W = primorial(k);
    const auto members = beatty_terms(spec, 1, search_limit + 1);
    // sort residues rather than allocate W counters; W grows fast with k
    std::vector<std::uint64_t> residues;
    residues.reserve(members.size());
    for (const std::int64_t m : members) residues.push_back(static_cast<std::uint64_t>(m) % W);
    std::sort(residues.begin(), residues.end());
    std::uint64_t best_residue = 0, best_count = 0;
    for (std::size_t i = 0; i < residues.size();) {
        std::size_t j = i;
        while (j < residues.size() && residues[j] == residues[i]) ++j;
        if (j - i > best_count) {
            best_count = j - i;
            best_residue = residues[i];
        }
        i = j;
    }
    if (best_count < k)
        throw InsufficientElements("no class mod " + std::to_string(W) + " holds " + std::to_string(k) +
                                   " members up to " + std::to_string(search_limit));
    std::vector<std::int64_t> shifts;
    for (const std::int64_t m : members) {
        if (static_cast<std::uint64_t>(m) % W != best_residue) continue;
        shifts.push_back(m);
        if (shifts.size() == k) break;
    }
    LinearFormTuple t(std::move(shifts), TupleOrigin{spec.str(), W, best_residue, search_limit});
    const auto adm = is_admissible(t);
    if (!adm.admissible)
        throw ValidationFailed("constructed tuple is not admissible (prime " + std::to_string(*adm.witness_prime) + ")");
    return t;
}

bool closure_check(const BeattySpec& spec, const LinearFormTuple& t, std::int64_t n) {
    if (!beatty_membership(spec, n).member) throw NotMember(std::to_string(n) + " is not in the set");
    const BeattySpec full(spec.alpha(), Rational(0), Rational(1));
    for (const std::int64_t l : t.shifts())
        if (!beatty_membership(full, n + l).member) return false;
    return true;
}

std::int64_t diameter(const LinearFormTuple& t) { return t.shifts().back() - t.shifts().front(); }

}  // namespace primegap
