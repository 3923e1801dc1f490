#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace primegap {

struct SieveConfig {
    // largest limit build() accepts; the table needs about limit/16 bytes
    std::uint64_t limit_cap = 4'000'000'000ULL;
    // odd entries per segment, rounded up to a multiple of 64
    std::size_t segment_odds = std::size_t{1} << 18;
};

// Per-modulus row of prime counts in residue classes.
struct APCountReport {
    std::uint64_t x = 0;
    std::uint64_t q = 1;
    std::vector<std::uint64_t> counts;  // counts[a] = pi(x; q, a)
    std::uint64_t pi_x = 0;
    std::uint64_t phi_q = 1;
    double max_error = 0.0;  // max over (a,q)=1 of |pi(x;q,a) - pi(x)/phi(q)|
    std::uint64_t argmax_a = 0;
};

struct BVErrorTable {
    std::uint64_t x = 0;
    std::uint64_t q_max = 1;
    std::vector<APCountReport> rows;
    double total = 0.0;  // sum over q of max_error
    double log_power = 0.0;
    double normalized = 0.0;  // total * (log x)^A / x
};

// Primality and von Mangoldt oracle backed by an odd-only composite bitset
// (bit i set iff 2i+3 is composite). Immutable after construction.
class PrimeTable {
public:
    static PrimeTable build(std::uint64_t limit, const SieveConfig& config = {});
    static PrimeTable load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
    // Reuses the cache file when it covers limit, otherwise builds and writes it.
    static PrimeTable load_or_build(std::uint64_t limit,
                                    const std::optional<std::filesystem::path>& cache,
                                    const SieveConfig& config = {});

    std::uint64_t limit() const noexcept { return limit_; }
    std::uint64_t odd_entries() const noexcept { return odd_entries_; }

    bool is_prime(std::uint64_t n) const;
    double von_mangoldt(std::uint64_t n) const;
    std::uint64_t pi(std::uint64_t x) const;
    std::uint64_t pi_count(std::uint64_t x, std::uint64_t q, std::uint64_t a) const;
    double chebyshev_sum(std::uint64_t m, std::uint64_t q, std::uint64_t a) const;
    BVErrorTable bv_error_table(std::uint64_t x, std::uint64_t q_max, double log_power = 0.0) const;
    std::uint64_t euler_phi(std::uint64_t q) const;

    // primes p with lo <= p <= hi, ascending
    std::vector<std::uint64_t> primes(std::uint64_t lo, std::uint64_t hi) const;
    // prime powers p^j (j >= 2) up to limit with their log p, ascending
    std::span<const std::pair<std::uint64_t, double>> higher_prime_powers() const noexcept {
        return prime_powers_;
    }

    template <class F>
    void for_each_prime(std::uint64_t lo, std::uint64_t hi, F&& fn) const {
        check_range(hi);
        if (lo > hi) return;
        if (lo <= 2 && hi >= 2) fn(std::uint64_t{2});
        if (hi < 3) return;
        const std::uint64_t first = lo <= 3 ? 0 : (lo - 2) / 2;  // first odd index with 2i+3 >= lo
        const std::uint64_t last = (hi - 3) / 2;
        if (first > last) return;
        for (std::uint64_t w = first / 64; w <= last / 64; ++w) {
            std::uint64_t bits = ~words_[w];
            if (w == first / 64) bits &= ~std::uint64_t{0} << (first % 64);
            if (w == last / 64 && last % 64 != 63) bits &= (std::uint64_t{1} << (last % 64 + 1)) - 1;
            while (bits) {
                const int b = __builtin_ctzll(bits);
                bits &= bits - 1;
                fn(2 * (w * 64 + static_cast<std::uint64_t>(b)) + 3);
            }
        }
    }

    // raw words, bit i of the table in word i/64 at position i%64
    std::span<const std::uint64_t> words() const noexcept { return words_; }

private:
    PrimeTable() = default;
    void check_range(std::uint64_t n) const;
    void finish();

    std::uint64_t limit_ = 0;
    std::uint64_t odd_entries_ = 0;
    std::vector<std::uint64_t> words_;
    std::vector<std::pair<std::uint64_t, double>> prime_powers_;
};

PrimeTable build_table(std::uint64_t limit, const SieveConfig& config = {});

// Table-free helpers.
std::uint64_t euler_phi(std::uint64_t q);
double von_mangoldt(std::uint64_t n);
// Deterministic Miller-Rabin for 64-bit inputs; independent of any table.
bool miller_rabin_is_prime(std::uint64_t n);
std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

}  // namespace primegap
