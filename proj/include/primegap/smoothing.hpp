#pragma once

#include <complex>
#include <cstdint>

namespace primegap {

// Indicator of (0, gamma] mod 1 averaged over a window of half-width delta:
// a trapezoid equal to 1 on [delta, gamma - delta], 0 on [gamma + delta,
// 1 - delta], with linear ramps of width 2 delta across both jumps.
struct PsiDelta {
    double gamma = 0.5;
    double delta = 0.1;

    // 0 < gamma < 1, 0 < delta < 1/8, delta <= min(gamma, 1 - gamma)/2
    static PsiDelta make(double gamma, double delta);
    // the largest admissible delta not exceeding the request
    static double clamp_delta(double gamma, double requested);
};

// 1 if 0 < {x} <= gamma, else 0
int psi(double x, double gamma);

double psi_delta_eval(const PsiDelta& p, double x);

struct FourierPair {
    std::complex<double> g;  // coefficient of e(kx)
    std::complex<double> h;  // coefficient of e(-kx)
};

FourierPair psi_delta_fourier(const PsiDelta& p, std::int64_t k);

// min(2/(pi k), 2/(pi^2 k^2 delta))
double psi_delta_coefficient_bound(const PsiDelta& p, std::int64_t k);

struct SeriesValue {
    double value = 0.0;
    double tail_bound = 0.0;  // 4/(pi^2 K delta)
};

// gamma + sum_{k<=K} (g_k e(kx) + h_k e(-kx))
SeriesValue psi_delta_series(const PsiDelta& p, double x, std::int64_t K);

}  // namespace primegap
