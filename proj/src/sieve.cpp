#include "primegap/sieve.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>

#include "primegap/errors.hpp"
#include "primegap/parallel.hpp"

namespace primegap {

namespace {

constexpr std::array<char, 4> kMagic{'P', 'G', 'L', '1'};
constexpr std::uint64_t kWordsPerBlock = 4096;  // fixed reduction block for Lambda sums

std::uint64_t isqrt_u64(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::vector<std::uint64_t> small_odd_primes(std::uint64_t bound) {
    std::vector<std::uint64_t> out;
    if (bound < 3) return out;
    std::vector<bool> composite(bound + 1, false);
    for (std::uint64_t i = 3; i * i <= bound; i += 2)
        if (!composite[i])
            for (std::uint64_t j = i * i; j <= bound; j += 2 * i) composite[j] = true;
    for (std::uint64_t i = 3; i <= bound; i += 2)
        if (!composite[i]) out.push_back(i);
    return out;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------

PrimeTable PrimeTable::build(std::uint64_t limit, const SieveConfig& config) {
    if (limit < 2) throw InvalidArgument("sieve limit must be at least 2");
    if (limit > config.limit_cap)
        throw CapExceeded("sieve limit " + std::to_string(limit) + " exceeds cap " +
                          std::to_string(config.limit_cap));
    PrimeTable t;
    t.limit_ = limit;
    t.odd_entries_ = limit >= 3 ? (limit - 3) / 2 + 1 : 0;
    t.words_.assign((t.odd_entries_ + 63) / 64, 0);

    const std::uint64_t root = isqrt_u64(limit);
    const auto base = small_odd_primes(root);
    const std::uint64_t seg = std::max<std::uint64_t>(64, (config.segment_odds + 63) / 64 * 64);
    const std::uint64_t n_seg = (t.odd_entries_ + seg - 1) / seg;
    std::uint64_t* words = t.words_.data();
    const std::uint64_t odd = t.odd_entries_;

    // segments cover whole words, so workers never share a word
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(n_seg); ++s) {
        const std::uint64_t i0 = static_cast<std::uint64_t>(s) * seg;
        const std::uint64_t i1 = std::min(odd, i0 + seg);
        const std::uint64_t v0 = 2 * i0 + 3, v1 = 2 * (i1 - 1) + 3;
        for (const std::uint64_t p : base) {
            const std::uint64_t pp = p * p;
            if (pp > v1) break;
            std::uint64_t m = pp;
            if (m < v0) {
                m = (v0 + p - 1) / p * p;
                if ((m & 1) == 0) m += p;
            }
            for (std::uint64_t j = (m - 3) / 2; j < i1; j += p) words[j >> 6] |= std::uint64_t{1} << (j & 63);
        }
    }
    t.finish();
    return t;
}

void PrimeTable::finish() {
    if (odd_entries_ % 64 != 0 && !words_.empty())
        words_.back() |= ~std::uint64_t{0} << (odd_entries_ % 64);
    prime_powers_.clear();
    const std::uint64_t root = isqrt_u64(limit_);
    for_each_prime(2, std::min(root, limit_), [&](std::uint64_t p) {
        const double lp = std::log(static_cast<double>(p));
        std::uint64_t v = p * p;
        while (v <= limit_) {
            prime_powers_.emplace_back(v, lp);
            if (v > limit_ / p) break;
            v *= p;
        }
    });
    std::sort(prime_powers_.begin(), prime_powers_.end());
}

void PrimeTable::check_range(std::uint64_t n) const {
    if (n > limit_)
        throw RangeError("query " + std::to_string(n) + " beyond sieve limit " + std::to_string(limit_));
}

bool PrimeTable::is_prime(std::uint64_t n) const {
    check_range(n);
    if (n < 2) return false;
    if (n == 2) return true;
    if ((n & 1) == 0) return false;
    const std::uint64_t i = (n - 3) / 2;
    return ((words_[i >> 6] >> (i & 63)) & 1) == 0;
}

double PrimeTable::von_mangoldt(std::uint64_t n) const {
    if (n == 0) throw InvalidArgument("von_mangoldt requires n >= 1");
    check_range(n);
    if (n == 1) return 0.0;
    if (is_prime(n)) return std::log(static_cast<double>(n));
    auto it = std::lower_bound(prime_powers_.begin(), prime_powers_.end(),
                               std::make_pair(n, 0.0));
    if (it != prime_powers_.end() && it->first == n) return it->second;
    return 0.0;
}

std::uint64_t PrimeTable::pi(std::uint64_t x) const {
    check_range(x);
    if (x < 2) return 0;
    if (x < 3) return 1;
    const std::uint64_t last = (x - 3) / 2;
    std::uint64_t composite = 0;
    const std::uint64_t full = (last + 1) / 64;
    for (std::uint64_t w = 0; w < full; ++w) composite += std::popcount(words_[w]);
    const std::uint64_t rem = (last + 1) % 64;
    if (rem) composite += std::popcount(words_[full] & ((std::uint64_t{1} << rem) - 1));
    return 1 + (last + 1 - composite);
}

std::uint64_t PrimeTable::pi_count(std::uint64_t x, std::uint64_t q, std::uint64_t a) const {
    if (q == 0 || a >= q) throw InvalidArgument("pi_count requires 0 <= a < q");
    check_range(x);
    if (q == 1) return pi(x);
    std::uint64_t count = 0;
    for_each_prime(2, x, [&](std::uint64_t p) { count += (p % q == a); });
    return count;
}

double PrimeTable::chebyshev_sum(std::uint64_t m, std::uint64_t q, std::uint64_t a) const {
    if (q == 0 || a >= q) throw InvalidArgument("chebyshev_sum requires 0 <= a < q");
    check_range(m);
    if (m < 2) return 0.0;
    CompensatedSum total;
    if (2 % q == a) total.add(std::log(2.0));
    if (m >= 3) {
        const std::uint64_t last = (m - 3) / 2;
        const std::uint64_t n_words = last / 64 + 1;
        const std::uint64_t n_blocks = (n_words + kWordsPerBlock - 1) / kWordsPerBlock;
        std::vector<CompensatedSum> partial(n_blocks);
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t b = 0; b < static_cast<std::int64_t>(n_blocks); ++b) {
            const std::uint64_t lo = 2 * (static_cast<std::uint64_t>(b) * kWordsPerBlock * 64) + 3;
            const std::uint64_t hi =
                std::min(m, 2 * ((static_cast<std::uint64_t>(b) + 1) * kWordsPerBlock * 64 - 1) + 3);
            CompensatedSum s;
            for_each_prime(std::max<std::uint64_t>(lo, 3), hi, [&](std::uint64_t p) {
                if (p % q == a) s.add(std::log(static_cast<double>(p)));
            });
            partial[static_cast<std::size_t>(b)] = s;
        }
        for (const auto& s : partial) total.add(s);
    }
    for (const auto& [v, lp] : prime_powers_) {
        if (v > m) break;
        if (v % q == a) total.add(lp);
    }
    return total.value();
}

std::vector<std::uint64_t> PrimeTable::primes(std::uint64_t lo, std::uint64_t hi) const {
    std::vector<std::uint64_t> out;
    for_each_prime(lo, hi, [&](std::uint64_t p) { out.push_back(p); });
    return out;
}

BVErrorTable PrimeTable::bv_error_table(std::uint64_t x, std::uint64_t q_max, double log_power) const {
    if (q_max < 1) throw InvalidArgument("q_max must be at least 1");
    check_range(x);
    BVErrorTable table;
    table.x = x;
    table.q_max = q_max;
    table.log_power = log_power;
    table.rows.resize(q_max);
    const auto ps = primes(2, x);
    const std::uint64_t pi_x = ps.size();
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t qi = 1; qi <= static_cast<std::int64_t>(q_max); ++qi) {
        const auto q = static_cast<std::uint64_t>(qi);
        APCountReport row;
        row.x = x;
        row.q = q;
        row.pi_x = pi_x;
        row.phi_q = primegap::euler_phi(q);
        row.counts.assign(q, 0);
        for (const std::uint64_t p : ps) ++row.counts[p % q];
        const double expected = static_cast<double>(pi_x) / static_cast<double>(row.phi_q);
        for (std::uint64_t a = 0; a < q; ++a) {
            if (gcd_u64(a, q) != 1) continue;
            const double err = std::fabs(static_cast<double>(row.counts[a]) - expected);
            if (err > row.max_error) {
                row.max_error = err;
                row.argmax_a = a;
            }
        }
        table.rows[q - 1] = std::move(row);
    }
    CompensatedSum total;
    for (const auto& row : table.rows) total.add(row.max_error);
    table.total = total.value();
    const double lx = std::log(static_cast<double>(std::max<std::uint64_t>(x, 2)));
    table.normalized = table.total * std::pow(lx, log_power) / static_cast<double>(x);
    return table;
}

std::uint64_t PrimeTable::euler_phi(std::uint64_t q) const {
    if (q == 0) throw InvalidArgument("euler_phi requires q >= 1");
    if (q / limit_ > limit_) throw RangeError("q beyond the table's factorable range");
    std::uint64_t result = q, rest = q;
    for_each_prime(2, std::min(limit_, isqrt_u64(q)), [&](std::uint64_t p) {
        if (rest % p == 0) {
            while (rest % p == 0) rest /= p;
            result -= result / p;
        }
    });
    if (rest > 1) result -= result / rest;
    return result;
}

// ---------------------------------------------------------------------------

void PrimeTable::save(const std::filesystem::path& path) const {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open prime cache for writing: " + path.string());
    out.write(kMagic.data(), kMagic.size());
    std::array<char, 8> lim{};
    for (int i = 0; i < 8; ++i) lim[i] = static_cast<char>((limit_ >> (8 * i)) & 0xff);
    out.write(lim.data(), lim.size());
    const std::uint64_t n_bytes = (odd_entries_ + 7) / 8;
    std::vector<char> buf;
    buf.reserve(1 << 16);
    for (std::uint64_t j = 0; j < n_bytes; ++j) {
        auto byte = static_cast<unsigned char>((words_[j / 8] >> (8 * (j % 8))) & 0xff);
        if (j == n_bytes - 1 && odd_entries_ % 8 != 0)
            byte &= static_cast<unsigned char>((1u << (odd_entries_ % 8)) - 1);
        buf.push_back(static_cast<char>(byte));
        if (buf.size() == buf.capacity()) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("failed writing prime cache: " + path.string());
}

PrimeTable PrimeTable::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open prime cache: " + path.string());
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw IoError("bad prime cache magic in " + path.string());
    std::array<unsigned char, 8> lim{};
    in.read(reinterpret_cast<char*>(lim.data()), lim.size());
    if (!in) throw IoError("truncated prime cache header in " + path.string());
    std::uint64_t limit = 0;
    for (int i = 0; i < 8; ++i) limit |= static_cast<std::uint64_t>(lim[i]) << (8 * i);
    if (limit < 2) throw IoError("prime cache limit below 2 in " + path.string());
    PrimeTable t;
    t.limit_ = limit;
    t.odd_entries_ = limit >= 3 ? (limit - 3) / 2 + 1 : 0;
    const std::uint64_t n_bytes = (t.odd_entries_ + 7) / 8;
    std::error_code ec;
    const auto size = std::filesystem::file_size(path, ec);
    if (ec || size != 12 + n_bytes) throw IoError("prime cache size mismatch in " + path.string());
    std::vector<unsigned char> bytes(n_bytes);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(n_bytes));
    if (!in) throw IoError("truncated prime cache body in " + path.string());
    t.words_.assign((t.odd_entries_ + 63) / 64, 0);
    for (std::uint64_t j = 0; j < n_bytes; ++j)
        t.words_[j / 8] |= static_cast<std::uint64_t>(bytes[j]) << (8 * (j % 8));
    t.finish();
    return t;
}

PrimeTable PrimeTable::load_or_build(std::uint64_t limit,
                                     const std::optional<std::filesystem::path>& cache,
                                     const SieveConfig& config) {
    if (cache && std::filesystem::exists(*cache)) {
        PrimeTable t = load(*cache);
        if (t.limit() >= limit) return t;
    }
    PrimeTable t = build(limit, config);
    if (cache) t.save(*cache);
    return t;
}

PrimeTable build_table(std::uint64_t limit, const SieveConfig& config) {
    return PrimeTable::build(limit, config);
}

// ---------------------------------------------------------------------------

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t euler_phi(std::uint64_t q) {
    if (q == 0) throw InvalidArgument("euler_phi requires q >= 1");
    if (q > (std::uint64_t{1} << 50)) throw RangeError("q beyond the trial-division range");
    std::uint64_t result = q, rest = q;
    for (std::uint64_t p = 2; p * p <= rest; p += (p == 2 ? 1 : 2)) {
        if (rest % p == 0) {
            while (rest % p == 0) rest /= p;
            result -= result / p;
        }
    }
    if (rest > 1) result -= result / rest;
    return result;
}

double von_mangoldt(std::uint64_t n) {
    if (n == 0) throw InvalidArgument("von_mangoldt requires n >= 1");
    if (n == 1) return 0.0;
    std::uint64_t p = 0;
    for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
        if (n % d == 0) {
            p = d;
            break;
        }
    }
    if (p == 0) return std::log(static_cast<double>(n));
    while (n % p == 0) n /= p;
    return n == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

bool miller_rabin_is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
        const std::uint64_t base = a % n;
        if (base == 0) continue;
        std::uint64_t x = powmod(base, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

}  // namespace primegap
