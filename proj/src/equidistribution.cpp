#include "primegap/equidistribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "primegap/errors.hpp"
#include "primegap/parallel.hpp"

namespace primegap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> sorted_copy(std::span<const double> values) {
    if (values.empty()) throw InvalidArgument("discrepancy of an empty sequence");
    std::vector<double> xs(values.begin(), values.end());
    std::sort(xs.begin(), xs.end());
    return xs;
}

CompensatedComplexSum exp_sum_range(std::span<const double> values, std::int64_t h, std::size_t begin,
                                    std::size_t end) {
    CompensatedComplexSum s;
    const auto hd = static_cast<long double>(h);
    for (std::size_t i = begin; i < end; ++i) {
        long double t = hd * values[i];
        t -= std::floor(t);
        const double angle = kTwoPi * static_cast<double>(t);
        s.add(std::complex<double>(std::cos(angle), std::sin(angle)));
    }
    return s;
}

// Chunks are summed separately and merged in order, so the result is the
// same whether chunks run serially or in parallel.
std::complex<double> exp_sum_serial_chunks(std::span<const double> values, std::int64_t h) {
    CompensatedComplexSum total;
    const std::size_t chunks = chunk_count(values.size());
    for (std::size_t c = 0; c < chunks; ++c)
        total.add(exp_sum_range(values, h, c * kReductionChunk, std::min(values.size(), (c + 1) * kReductionChunk)));
    return total.value();
}

double wrap01(long double v) {
    v -= std::floor(v);
    const auto d = static_cast<double>(v);
    return d >= 1.0 ? std::nextafter(1.0, 0.0) : d;
}

}  // namespace

UnitSequence UnitSequence::from_values(std::vector<double> values) {
    if (values.empty()) throw InvalidArgument("sequence must have at least one value");
    for (const double v : values)
        if (!(v >= 0.0 && v < 1.0)) throw InvalidArgument("sequence values must lie in [0, 1)");
    UnitSequence s;
    s.values = std::move(values);
    return s;
}

UnitSequence UnitSequence::scaled_beatty(const IrrationalSpec& alpha, std::uint64_t q, std::uint64_t N) {
    if (q < 1 || N < 1) throw InvalidArgument("scaled Beatty sequence needs q >= 1 and N >= 1");
    UnitSequence s;
    s.origin = q == 1 ? SequenceOrigin::BeattyMultiples : SequenceOrigin::ScaledBeatty;
    s.values.resize(N);
    const auto qq = static_cast<std::int64_t>(q);
    ParallelErrors errors;
#pragma omp parallel for schedule(static)
    for (std::int64_t n = 1; n <= static_cast<std::int64_t>(N); ++n) {
        errors.guard(static_cast<std::size_t>(n), [&] {
            // alpha n / q = (floor(alpha n) mod q + {alpha n}) / q  (mod 1)
            const auto ev = alpha.eval_linear(n, Rational(0), Rational(1));
            const std::int64_t r = ((ev.floor % qq) + qq) % qq;
            s.values[static_cast<std::size_t>(n - 1)] =
                wrap01((static_cast<long double>(r) + ev.frac) / static_cast<long double>(q));
        });
    }
    errors.rethrow();
    return s;
}

UnitSequence UnitSequence::leitmann(const LeitmannFunction& f, std::uint64_t q, std::uint64_t N, std::int64_t shift) {
    if (q < 1 || N < 1) throw InvalidArgument("Leitmann sequence needs q >= 1 and N >= 1");
    UnitSequence s;
    s.origin = SequenceOrigin::Leitmann;
    s.values.resize(N);
    const std::uint64_t c0 = f.c0();
    ParallelErrors errors;
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(N); ++i) {
        errors.guard(static_cast<std::size_t>(i), [&] {
            s.values[static_cast<std::size_t>(i)] = f.frac_scaled(static_cast<std::uint64_t>(i) + c0, q, shift);
        });
    }
    errors.rethrow();
    return s;
}

double discrepancy_star(std::span<const double> values) {
    const auto xs = sorted_copy(values);
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double above = static_cast<double>(i + 1) / n - xs[i];  // [0, x_i] holds i+1 points
        const double below = xs[i] - static_cast<double>(i) / n;      // [0, x_i) holds at most i
        d = std::max({d, above, below});
    }
    return d;
}

double discrepancy_extreme(std::span<const double> values) {
    const auto xs = sorted_copy(values);
    const double n = static_cast<double>(xs.size());
    double over = 0.0, under = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        over = std::max(over, static_cast<double>(i + 1) / n - xs[i]);
        under = std::max(under, xs[i] - static_cast<double>(i) / n);
    }
    return over + under;
}

std::complex<double> exp_sum(std::span<const double> values, std::int64_t h) {
    if (h < 1) throw InvalidArgument("exponential sum frequency must be at least 1");
    const std::size_t chunks = chunk_count(values.size());
    std::vector<CompensatedComplexSum> parts(chunks);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
        const auto cu = static_cast<std::size_t>(c);
        parts[cu] = exp_sum_range(values, h, cu * kReductionChunk, std::min(values.size(), (cu + 1) * kReductionChunk));
    }
    CompensatedComplexSum total;
    for (const auto& p : parts) total.add(p);
    return total.value();
}

std::vector<double> exp_sum_magnitudes(std::span<const double> values, std::int64_t m) {
    if (m < 1) throw InvalidArgument("m must be at least 1");
    std::vector<double> out(static_cast<std::size_t>(m));
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t h = 1; h <= m; ++h)
        out[static_cast<std::size_t>(h - 1)] = std::abs(exp_sum_serial_chunks(values, h));
    return out;
}

double erdos_turan_bound(std::span<const double> values, std::int64_t m, double scale) {
    if (m < 1) throw InvalidArgument("m must be at least 1");
    if (values.empty()) throw InvalidArgument("empty sequence");
    const auto mags = exp_sum_magnitudes(values, m);
    const double n = static_cast<double>(values.size());
    CompensatedSum s;
    for (std::int64_t h = 1; h <= m; ++h) s.add(mags[static_cast<std::size_t>(h - 1)] / (static_cast<double>(h) * n));
    return scale * (6.0 / static_cast<double>(m + 1) + 4.0 / std::numbers::pi * s.value());
}

ErdosTuranBound erdos_turan_best(std::span<const double> values, std::int64_t m_lo, std::int64_t m_hi, double scale) {
    if (m_lo < 1 || m_hi < m_lo) throw InvalidArgument("need 1 <= m_lo <= m_hi");
    if (values.empty()) throw InvalidArgument("empty sequence");
    const auto mags = exp_sum_magnitudes(values, m_hi);
    const double n = static_cast<double>(values.size());
    ErdosTuranBound best{std::numeric_limits<double>::infinity(), m_lo};
    CompensatedSum s;
    for (std::int64_t h = 1; h <= m_hi; ++h) {
        s.add(mags[static_cast<std::size_t>(h - 1)] / (static_cast<double>(h) * n));
        if (h < m_lo) continue;
        const double b = scale * (6.0 / static_cast<double>(h + 1) + 4.0 / std::numbers::pi * s.value());
        if (b < best.bound) best = {b, h};
    }
    return best;
}

double probe_curvature(const Phase& f, double a, double b, int interior_samples) {
    if (!(a < b)) throw InvalidArgument("curvature probe needs a < b");
    double rho = std::min(std::fabs(f(Jet::variable(a)).d2), std::fabs(f(Jet::variable(b)).d2));
    for (int i = 1; i <= interior_samples; ++i) {
        const double x = a + (b - a) * i / (interior_samples + 1);
        rho = std::min(rho, std::fabs(f(Jet::variable(x)).d2));
    }
    return rho;
}

double vdc_bound(const Phase& f, std::int64_t a, std::int64_t b, double rho) {
    if (a >= b) throw InvalidArgument("van der Corput bound needs a < b");
    if (!(rho > 0.0)) throw InvalidCurvature("rho must be positive");
    const auto ad = static_cast<double>(a), bd = static_cast<double>(b);
    const double seen = probe_curvature(f, ad, bd);
    if (seen < rho) throw InvalidCurvature("|f''| = " + std::to_string(seen) + " below rho = " + std::to_string(rho));
    const double spread = std::fabs(f(Jet::variable(bd)).d1 - f(Jet::variable(ad)).d1);
    return (spread + 2.0) * (4.0 / std::sqrt(rho) + 3.0);
}

std::complex<double> phase_exp_sum(const Phase& f, std::int64_t a, std::int64_t b) {
    if (a > b) return {0.0, 0.0};
    std::vector<double> values(static_cast<std::size_t>(b - a + 1));
#pragma omp parallel for schedule(static)
    for (std::int64_t n = a; n <= b; ++n)
        values[static_cast<std::size_t>(n - a)] = wrap01(static_cast<long double>(f(Jet::variable(static_cast<double>(n))).v));
    return exp_sum(values, 1);
}

VdcCheck vdc_check(const Phase& f, std::int64_t a, std::int64_t b) {
    VdcCheck out;
    out.rho = probe_curvature(f, static_cast<double>(a), static_cast<double>(b));
    if (!(out.rho > 0.0)) throw InvalidCurvature("phase has no positive curvature lower bound");
    out.bound = vdc_bound(f, a, b, out.rho);
    out.magnitude = std::abs(phase_exp_sum(f, a, b));
    return out;
}

VdcCheck leitmann_vdc_check(const LeitmannFunction& f, std::int64_t h, std::uint64_t q, std::uint64_t N) {
    if (h < 1 || q < 1 || N < 2) throw InvalidArgument("need h >= 1, q >= 1, N >= 2");
    const double scale = static_cast<double>(h) / static_cast<double>(q);
    const auto a = static_cast<double>(f.c0());
    const double b = a + static_cast<double>(N) - 1.0;
    const Jet ja = f.jet(a), jb = f.jet(b);
    VdcCheck out;
    // f'' is monotone for the built-in kinds
    out.rho = scale * std::min(ja.d2, jb.d2);
    if (!(out.rho > 0.0)) throw InvalidCurvature("Leitmann phase has non-positive curvature");
    if (f.kind() == LeitmannKind::Custom) {
        const double seen = scale * probe_curvature([&](const Jet& x) { return f.jet(x.v); }, a, b);
        if (seen < out.rho) throw InvalidCurvature("custom phase curvature dips below its endpoint values");
    }
    out.bound = (scale * std::fabs(jb.d1 - ja.d1) + 2.0) * (4.0 / std::sqrt(out.rho) + 3.0);
    const auto seq = UnitSequence::leitmann(f, q, N);
    out.magnitude = std::abs(exp_sum(seq.values, h));
    return out;
}

DiscrepancyReport make_report(const UnitSequence& seq, std::uint64_t q, double envelope, const DiscrepancyOptions& options) {
    DiscrepancyReport r;
    r.N = seq.size();
    r.q = q;
    r.d_star = discrepancy_star(seq.values);
    r.d_extreme = discrepancy_extreme(seq.values);
    const std::int64_t m_max = std::max<std::int64_t>(1, std::min<std::int64_t>(options.et_m_max, static_cast<std::int64_t>(r.N)));
    const auto et = erdos_turan_best(seq.values, 1, m_max, options.et_scale);
    r.et_bound = et.bound;
    r.et_m = et.m;
    r.envelope = envelope;
    r.q_too_large = r.N < 2 * q;
    return r;
}

DiscrepancyReport scaled_beatty_discrepancy(const IrrationalSpec& alpha, std::uint64_t q, std::uint64_t N,
                                            const DiscrepancyOptions& options) {
    if (q < 1 || q >= N) throw InvalidArgument("scaled discrepancy needs 1 <= q < N");
    const double tau = estimate_type(alpha, options.type_depth).tau_hat;
    const double envelope = std::pow(static_cast<double>(N) / static_cast<double>(q), -1.0 / tau + options.epsilon);
    return make_report(UnitSequence::scaled_beatty(alpha, q, N), q, envelope, options);
}

std::uint64_t leitmann_q_limit(std::uint64_t N) {
    // smallest r with r^11 >= N, i.e. ceil(N^(1/11)) without rounding trouble
    std::uint64_t r = 1;
    auto pow11_below = [N](std::uint64_t v) {
        long double p = 1;
        for (int i = 0; i < 11; ++i) p *= static_cast<long double>(v);
        return p < static_cast<long double>(N);
    };
    while (pow11_below(r)) ++r;
    return r;
}

double leitmann_envelope(std::uint64_t q, std::uint64_t N) {
    const auto n = static_cast<double>(N);
    return std::pow(n, -1.0 / 11.0) + std::sqrt(static_cast<double>(q)) * std::pow(n, -23.0 / 22.0);
}

DiscrepancyReport leitmann_discrepancy(const LeitmannFunction& f, std::uint64_t q, std::uint64_t N,
                                       const DiscrepancyOptions& options) {
    if (N < 1 || q < 1) throw InvalidArgument("need N >= 1 and q >= 1");
    if (q > leitmann_q_limit(N))
        throw QTooLarge("q = " + std::to_string(q) + " exceeds ceil(N^(1/11)) = " + std::to_string(leitmann_q_limit(N)));
    return make_report(UnitSequence::leitmann(f, q, N), q, leitmann_envelope(q, N), options);
}

}  // namespace primegap
