#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "primegap/irrational.hpp"
#include "primegap/jet.hpp"
#include "primegap/sequences.hpp"

namespace primegap {

enum class SequenceOrigin { BeattyMultiples, ScaledBeatty, Leitmann, Explicit };

// Finite sequence of reals in [0, 1).
struct UnitSequence {
    std::vector<double> values;
    SequenceOrigin origin = SequenceOrigin::Explicit;

    static UnitSequence from_values(std::vector<double> values);
    // {alpha n / q} for n = 1..N, exact floors with long double fractional parts
    static UnitSequence scaled_beatty(const IrrationalSpec& alpha, std::uint64_t q, std::uint64_t N);
    // {(f(n + c0 - 1) + shift) / q} for n = 1..N, reduced at 192 bits
    static UnitSequence leitmann(const LeitmannFunction& f, std::uint64_t q, std::uint64_t N,
                                 std::int64_t shift = 0);
    std::size_t size() const noexcept { return values.size(); }
};

// sup over [0, b) of |A/N - b|
double discrepancy_star(std::span<const double> values);
// sup over 0 <= a < b <= 1 of |A([a, b))/N - (b - a)|, intervals not wrapping
double discrepancy_extreme(std::span<const double> values);

// sum of e(h x_n), compensated, merged in fixed chunk order
std::complex<double> exp_sum(std::span<const double> values, std::int64_t h);
// |S_h| for h = 1..m
std::vector<double> exp_sum_magnitudes(std::span<const double> values, std::int64_t m);

struct ErdosTuranBound {
    double bound = 0.0;
    std::int64_t m = 1;
};

// scale * (6/(m+1) + (4/pi) sum_{h<=m} |S_h| / (h N))
double erdos_turan_bound(std::span<const double> values, std::int64_t m, double scale = 1.0);
// minimizing m over [m_lo, m_hi]; ties go to the smaller m
ErdosTuranBound erdos_turan_best(std::span<const double> values, std::int64_t m_lo, std::int64_t m_hi,
                                 double scale = 1.0);

using Phase = std::function<Jet(const Jet&)>;

// Smallest |f''| over [a, b] seen at the endpoints and an evenly spaced set
// of interior points; for monotone f'' the endpoints alone decide it.
double probe_curvature(const Phase& f, double a, double b, int interior_samples = 64);

// (|f'(b) - f'(a)| + 2)(4/sqrt(rho) + 3), after confirming |f''| >= rho on
// the probe points. Throws InvalidCurvature otherwise.
double vdc_bound(const Phase& f, std::int64_t a, std::int64_t b, double rho);

// sum over integers a <= n <= b of e(f(n))
std::complex<double> phase_exp_sum(const Phase& f, std::int64_t a, std::int64_t b);

struct VdcCheck {
    double magnitude = 0.0;
    double bound = 0.0;
    double rho = 0.0;
    bool holds() const noexcept { return magnitude <= bound; }
};

// |sum_{n=a}^{b} e(f(n))| against the bound with rho from probe_curvature.
VdcCheck vdc_check(const Phase& f, std::int64_t a, std::int64_t b);
// The Leitmann phase h f(n + c0 - 1)/q for n = 1..N: the sum uses 192-bit
// reductions and rho = (h/q) min f'' at the two ends of [c0, N + c0 - 1].
VdcCheck leitmann_vdc_check(const LeitmannFunction& f, std::int64_t h, std::uint64_t q, std::uint64_t N);

struct DiscrepancyReport {
    std::uint64_t N = 0;
    std::uint64_t q = 1;
    double d_star = 0.0;
    double d_extreme = 0.0;
    double et_bound = 0.0;
    std::int64_t et_m = 1;
    double envelope = 0.0;
    bool q_too_large = false;  // fewer than two full periods per residue
};

struct DiscrepancyOptions {
    std::int64_t et_m_max = 256;  // Erdős–Turán m searched over [1, et_m_max]
    double et_scale = 1.0;
    double epsilon = 0.05;   // exponent slack in (N/q)^(-1/tau + eps)
    std::size_t type_depth = 30;
};

DiscrepancyReport make_report(const UnitSequence& seq, std::uint64_t q, double envelope,
                              const DiscrepancyOptions& options = {});

// {alpha n / q}, n <= N, with envelope (N/q)^(-1/tau_hat + eps). Requires 1 <= q < N.
DiscrepancyReport scaled_beatty_discrepancy(const IrrationalSpec& alpha, std::uint64_t q, std::uint64_t N,
                                            const DiscrepancyOptions& options = {});

// {f(n + c0 - 1)/q}, n <= N, with envelope N^(-1/11) + sqrt(q) N^(-23/22).
// Requires q <= ceil(N^(1/11)); QTooLarge otherwise.
DiscrepancyReport leitmann_discrepancy(const LeitmannFunction& f, std::uint64_t q, std::uint64_t N,
                                       const DiscrepancyOptions& options = {});
double leitmann_envelope(std::uint64_t q, std::uint64_t N);
std::uint64_t leitmann_q_limit(std::uint64_t N);

}  // namespace primegap
