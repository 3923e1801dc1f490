#include "primegap/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "primegap/errors.hpp"

namespace primegap::reference {

std::vector<bool> sieve(std::uint64_t limit) {
    std::vector<bool> flags(limit + 1, true);
    flags[0] = false;
    if (limit >= 1) flags[1] = false;
    for (std::uint64_t p = 2; p * p <= limit; ++p)
        if (flags[p])
            for (std::uint64_t m = p * p; m <= limit; m += p) flags[m] = false;
    return flags;
}

bool is_prime_trial(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

std::uint64_t prime_count(const std::vector<bool>& flags, std::uint64_t x) {
    if (x >= flags.size()) throw RangeError("x beyond the reference sieve");
    std::uint64_t c = 0;
    for (std::uint64_t n = 2; n <= x; ++n) c += flags[n];
    return c;
}

double chebyshev_sum(const std::vector<bool>& flags, std::uint64_t M, std::uint64_t q, std::uint64_t a) {
    if (M >= flags.size()) throw RangeError("M beyond the reference sieve");
    double s = 0.0;
    for (std::uint64_t m = 2; m <= M; ++m) {
        if (m % q != a) continue;
        // smallest prime factor, then check m is a power of it
        std::uint64_t p = 2;
        while (p * p <= m && (!flags[p] || m % p != 0)) ++p;
        if (p * p > m) p = m;
        std::uint64_t r = m;
        while (r % p == 0) r /= p;
        if (r == 1) s += std::log(static_cast<double>(p));
    }
    return s;
}

double discrepancy_star(std::span<const double> values) {
    const auto n = static_cast<double>(values.size());
    if (values.empty()) return 0.0;
    double d = 0.0;
    // sup over b of |#{x < b}/N - b| is approached at b = x_i from either side
    for (const double b : values) {
        double below = 0, upto = 0;
        for (const double x : values) {
            below += x < b;
            upto += x <= b;
        }
        d = std::max({d, std::fabs(below / n - b), std::fabs(upto / n - b)});
    }
    return d;
}

double discrepancy_extreme(std::span<const double> values) {
    if (values.empty()) return 0.0;
    const auto n = static_cast<double>(values.size());
    std::vector<double> ends(values.begin(), values.end());
    ends.push_back(0.0);
    ends.push_back(1.0);
    double d = 0.0;
    for (const double u : ends) {
        for (const double v : ends) {
            if (v < u) continue;
            double closed = 0, open = 0;
            for (const double x : values) {
                closed += u <= x && x <= v;
                open += u < x && x < v;
            }
            // [u, v + eps) picks up the closed count, [u + eps, v) the open one
            d = std::max({d, closed / n - (v - u), (v - u) - open / n});
        }
    }
    return d;
}

std::complex<double> exp_sum(std::span<const double> values, std::int64_t h) {
    std::complex<double> s = 0.0;
    for (const double x : values) {
        const double t = 2.0 * std::numbers::pi * std::fmod(static_cast<double>(h) * x, 1.0);
        s += std::complex<double>(std::cos(t), std::sin(t));
    }
    return s;
}

bool is_admissible(const std::vector<std::int64_t>& shifts) {
    const auto k = static_cast<std::int64_t>(shifts.size());
    for (std::int64_t p = 2; p <= k + 1; ++p) {
        if (!is_prime_trial(static_cast<std::uint64_t>(p))) continue;
        std::vector<bool> hit(static_cast<std::size_t>(p), false);
        for (const auto l : shifts) hit[static_cast<std::size_t>(((l % p) + p) % p)] = true;
        if (std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) return false;
    }
    return true;
}

std::vector<std::int64_t> beatty_terms(const BeattySpec& spec, std::int64_t lo, std::int64_t hi) {
    std::vector<std::int64_t> out;
    for (std::int64_t n = 1;; ++n) {
        const auto ev = spec.alpha().eval_linear(n, spec.beta(), spec.c());
        if (ev.floor >= hi) break;
        // alpha < 1 repeats floors; a term counts once
        if (ev.floor >= lo && ev.below_cutoff && (out.empty() || out.back() != ev.floor)) out.push_back(ev.floor);
    }
    return out;
}

double hyp1_part1_total(const BeattySpec& spec, std::int64_t x, std::uint64_t q_max) {
    const auto terms = reference::beatty_terms(spec, x, 2 * x);
    double total = 0.0;
    for (std::uint64_t q = 1; q <= q_max; ++q) {
        double worst = 0.0;
        for (std::uint64_t a = 0; a < q; ++a) {
            std::uint64_t c = 0;
            for (const auto t : terms) c += static_cast<std::uint64_t>(t) % q == a;
            worst = std::max(worst, std::fabs(static_cast<double>(c) - static_cast<double>(terms.size()) /
                                                                      static_cast<double>(q)));
        }
        total += worst;
    }
    return total;
}

}  // namespace primegap::reference
