#include <algorithm>
#include <cmath>

#include "primegap/errors.hpp"
#include "primegap/parallel.hpp"
#include "primegap/sequences.hpp"

namespace primegap {

std::vector<std::int64_t> SequenceWindow::terms() const {
    std::vector<std::int64_t> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.term);
    return out;
}

BeattySpec::BeattySpec(IrrationalSpec alpha, Rational beta, Rational c)
    : alpha_(std::move(alpha)), inverse_(alpha_), beta_(beta), c_(c) {
    if (c_ <= Rational(0) || c_ > Rational(1)) throw InvalidArgument("cutoff c must lie in (0, 1]");
    if (alpha_.sign_affine(1, 0) <= 0) throw InvalidArgument("alpha must be positive");
    inverse_ = alpha_.reciprocal();
}

double BeattySpec::density() const { return c_.to_double() / static_cast<double>(alpha_.approx()); }

std::string BeattySpec::str() const {
    return "alpha=" + alpha_.str() + " beta=" + beta_.str() + " c=" + c_.str();
}

std::int64_t beatty_term(const BeattySpec& spec, std::int64_t n) {
    return spec.alpha().floor_linear(n, spec.beta());
}

namespace {

// index range guaranteed to cover every member in [lo, hi)
std::pair<std::int64_t, std::int64_t> index_range(const BeattySpec& spec, std::int64_t lo, std::int64_t hi) {
    const long double a = spec.alpha().approx();
    const long double b = spec.beta().to_long_double();
    const auto n_lo = static_cast<std::int64_t>(std::floor((static_cast<long double>(lo) - b - 1) / a)) - 1;
    const auto n_hi = static_cast<std::int64_t>(std::ceil((static_cast<long double>(hi) - b) / a)) + 1;
    return {std::max<std::int64_t>(1, n_lo), n_hi};
}

template <class Out, class Make>
std::vector<Out> scan(const BeattySpec& spec, std::int64_t lo, std::int64_t hi, Make make) {
    if (lo < 1) throw InvalidArgument("window lower end must be at least 1");
    std::vector<Out> out;
    if (hi <= lo) return out;
    const auto [n_lo, n_hi] = index_range(spec, lo, hi);
    if (n_hi < n_lo) return out;
    const auto count = static_cast<std::size_t>(n_hi - n_lo + 1);
    const std::size_t chunks = chunk_count(count);
    std::vector<std::vector<Out>> parts(chunks);
    ParallelErrors errors;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(chunks); ++ci) {
        errors.guard(static_cast<std::size_t>(ci), [&] {
            const std::int64_t first = n_lo + ci * static_cast<std::int64_t>(kReductionChunk);
            const std::int64_t last = std::min(n_hi, first + static_cast<std::int64_t>(kReductionChunk) - 1);
            auto& part = parts[static_cast<std::size_t>(ci)];
            for (std::int64_t n = first; n <= last; ++n) {
                const auto ev = spec.alpha().eval_linear(n, spec.beta(), spec.c());
                if (!ev.below_cutoff || ev.floor < lo || ev.floor >= hi) continue;
                part.push_back(make(n, ev));
            }
        });
    }
    errors.rethrow();
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    out.reserve(total);
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

}  // namespace

SequenceWindow beatty_window(const BeattySpec& spec, std::int64_t lo, std::int64_t hi) {
    SequenceWindow w;
    w.lo = lo;
    w.hi = hi;
    w.entries = scan<WindowEntry>(spec, lo, hi, [](std::int64_t n, const IrrationalSpec::LinearEval& ev) {
        return WindowEntry{n, ev.floor, ev.frac};
    });
    // alpha < 1 can map several indices to one term
    auto last = std::unique(w.entries.begin(), w.entries.end(),
                            [](const WindowEntry& x, const WindowEntry& y) { return x.term == y.term; });
    w.entries.erase(last, w.entries.end());
    return w;
}

std::vector<std::int64_t> beatty_terms(const BeattySpec& spec, std::int64_t lo, std::int64_t hi) {
    auto out = scan<std::int64_t>(spec, lo, hi,
                                  [](std::int64_t, const IrrationalSpec::LinearEval& ev) { return ev.floor; });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Membership beatty_membership(const BeattySpec& spec, std::int64_t m) {
    if (m < 1) throw InvalidArgument("membership query requires m >= 1");
    // m = floor(alpha n + beta) with {alpha n + beta} < c  iff  (m - beta)/alpha <= n < (m - beta + c)/alpha
    const mpq_class shifted = mpq_class(m) - spec.beta().to_mpq();
    const mpq_class u = shifted + spec.c().to_mpq();
    if (u == 0) return {};
    const IrrationalSpec& inv = spec.alpha_inverse();
    const mpz_class fl = inv.floor_affine(u, 0);
    // {u/alpha} <= c/alpha  iff  (m - beta)/alpha - floor(u/alpha) <= 0
    if (inv.sign_affine(shifted, mpq_class(-fl)) > 0) return {};
    if (fl < 1) return {};
    if (!fl.fits_slong_p()) throw CapacityExceeded("witness index overflows 64 bits");
    const std::int64_t n = fl.get_si();
    const auto ev = spec.alpha().eval_linear(n, spec.beta(), spec.c());
    if (ev.floor != m || !ev.below_cutoff)
        throw ValidationFailed("membership witness " + std::to_string(n) + " does not reproduce " + std::to_string(m));
    return {true, n};
}

std::uint64_t beatty_count_ap(const BeattySpec& spec, std::int64_t x, std::int64_t q, std::int64_t a) {
    if (q < 1 || a < 0 || a >= q || q > x) throw InvalidArgument("requires 0 <= a < q <= x");
    std::uint64_t count = 0;
    for (const std::int64_t t : beatty_terms(spec, 1, x + 1)) count += (t % q == a);
    return count;
}

std::uint64_t beatty_window_count_ap(const BeattySpec& spec, std::int64_t x, std::int64_t q, std::int64_t a) {
    if (q < 1 || a < 0 || a >= q || q > x) throw InvalidArgument("requires 0 <= a < q <= x");
    std::uint64_t count = 0;
    for (const std::int64_t t : beatty_terms(spec, x, 2 * x)) count += (t % q == a);
    return count;
}

}  // namespace primegap
