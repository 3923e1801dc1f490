#include "primegap/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "primegap/errors.hpp"
#include "primegap/parallel.hpp"

namespace primegap {

namespace {

constexpr double kPi = std::numbers::pi;

double frac(double x) { return x - std::floor(x); }

}  // namespace

PsiDelta PsiDelta::make(double gamma, double delta) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("gamma must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 0.125)) throw InvalidArgument("delta must lie in (0, 1/8)");
    if (delta > std::min(gamma, 1.0 - gamma) / 2.0) throw InvalidArgument("delta must not exceed min(gamma, 1 - gamma)/2");
    return {gamma, delta};
}

double PsiDelta::clamp_delta(double gamma, double requested) {
    const double cap = std::min(std::nextafter(0.125, 0.0), std::min(gamma, 1.0 - gamma) / 2.0);
    return std::min(requested, cap);
}

int psi(double x, double gamma) {
    const double y = frac(x);
    return (y > 0.0 && y <= gamma) ? 1 : 0;
}

double psi_delta_eval(const PsiDelta& p, double x) {
    const double y = frac(x);
    const double d = p.delta, g = p.gamma;
    if (y >= d && y <= g - d) return 1.0;
    if (y >= g + d && y <= 1.0 - d) return 0.0;
    if (y < d) return (y + d) / (2.0 * d);
    if (y > 1.0 - d) return (y - (1.0 - d)) / (2.0 * d);
    return (g + d - y) / (2.0 * d);
}

FourierPair psi_delta_fourier(const PsiDelta& p, std::int64_t k) {
    if (k < 1) throw InvalidArgument("Fourier index must be at least 1");
    const double kd = static_cast<double>(k);
    // indicator of (0, gamma]: e^{-pi i k gamma} sin(pi k gamma)/(pi k); kernel: sin(2 pi k delta)/(2 pi k delta)
    const double t = 2.0 * kPi * kd * p.delta;
    const double kernel = std::sin(t) / t;
    const double mag = std::sin(kPi * kd * p.gamma) / (kPi * kd) * kernel;
    const std::complex<double> g = std::polar(1.0, -kPi * kd * p.gamma) * mag;
    return {g, std::conj(g)};
}

double psi_delta_coefficient_bound(const PsiDelta& p, std::int64_t k) {
    const double kd = static_cast<double>(k);
    return std::min(2.0 / (kPi * kd), 2.0 / (kPi * kPi * kd * kd * p.delta));
}

SeriesValue psi_delta_series(const PsiDelta& p, double x, std::int64_t K) {
    if (K < 1) throw InvalidArgument("series order must be at least 1");
    const double y = frac(x);
    CompensatedSum s;
    s.add(p.gamma);
    for (std::int64_t k = 1; k <= K; ++k) {
        const auto c = psi_delta_fourier(p, k);
        const double angle = 2.0 * kPi * frac(static_cast<double>(k) * y);
        // g e(ky) + conj(g) e(-ky) = 2 Re(g e(ky))
        s.add(2.0 * (c.g.real() * std::cos(angle) - c.g.imag() * std::sin(angle)));
    }
    return {s.value(), 4.0 / (kPi * kPi * static_cast<double>(K) * p.delta)};
}

}  // namespace primegap
