#pragma once

#include <cmath>

namespace primegap {

// Value and first three derivatives of a function of one variable, carried
// through arithmetic by the chain rule.
struct Jet {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;

    static Jet variable(double x) { return {x, 1.0, 0.0, 0.0}; }
    static Jet constant(double c) { return {c, 0.0, 0.0, 0.0}; }
};

inline Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3}; }
inline Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3}; }
inline Jet operator*(double s, const Jet& a) { return {s * a.v, s * a.d1, s * a.d2, s * a.d3}; }
inline Jet operator*(const Jet& a, double s) { return s * a; }

inline Jet operator*(const Jet& a, const Jet& b) {
    return {a.v * b.v,
            a.d1 * b.v + a.v * b.d1,
            a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
            a.d3 * b.v + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.v * b.d3};
}

// phi(u) given phi and its first three derivatives at u.v
inline Jet compose(const Jet& u, double p0, double p1, double p2, double p3) {
    return {p0,
            p1 * u.d1,
            p2 * u.d1 * u.d1 + p1 * u.d2,
            p3 * u.d1 * u.d1 * u.d1 + 3.0 * p2 * u.d1 * u.d2 + p1 * u.d3};
}

inline Jet log(const Jet& u) {
    const double x = u.v;
    return compose(u, std::log(x), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x));
}

inline Jet exp(const Jet& u) {
    const double e = std::exp(u.v);
    return compose(u, e, e, e, e);
}

inline Jet pow(const Jet& u, double p) {
    const double x = u.v;
    const double a = std::pow(x, p - 3.0);
    return compose(u, a * x * x * x, p * a * x * x, p * (p - 1.0) * a * x, p * (p - 1.0) * (p - 2.0) * a);
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * pow(b, -1.0); }

}  // namespace primegap
