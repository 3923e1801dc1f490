#pragma once

// Discrepancy instances shared by the unit tests and the acceptance run.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace corpus {

inline std::vector<double> equally_spaced(std::size_t n) {
    std::vector<double> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(static_cast<double>(i) / static_cast<double>(n));
    return v;
}

inline std::vector<double> frac_multiples(double alpha, std::size_t n) {
    std::vector<double> v;
    for (std::size_t i = 1; i <= n; ++i) {
        const long double x = static_cast<long double>(alpha) * static_cast<long double>(i);
        v.push_back(static_cast<double>(x - std::floor(x)));
    }
    return v;
}

// corpus of structured instances
inline std::vector<std::vector<double>> structured() {
    std::vector<std::vector<double>> out;
    out.push_back({0.5});
    out.push_back({0.0});
    out.push_back(std::vector<double>(17, 0.0));
    out.push_back(equally_spaced(10));
    out.push_back(equally_spaced(101));
    out.push_back(frac_multiples(std::sqrt(2.0), 150));
    out.push_back(frac_multiples(std::numbers::pi, 200));
    out.push_back(frac_multiples((1 + std::sqrt(5.0)) / 2, 89));
    std::vector<double> clustered;
    for (int i = 0; i < 60; ++i) clustered.push_back(0.3 + 0.001 * i);
    out.push_back(clustered);
    std::vector<double> dup = {0.25, 0.25, 0.25, 0.75, 0.75, 0.1, 0.999};
    out.push_back(dup);
    std::vector<double> edges = {0.0, 0.0, 0.5, 0.9999999999};
    out.push_back(edges);
    std::vector<double> two_clusters;
    for (int i = 0; i < 40; ++i) two_clusters.push_back(i % 2 ? 0.1 + 1e-4 * i : 0.8 + 1e-4 * i);
    out.push_back(two_clusters);
    out.push_back({0.999, 0.001});
    std::vector<double> grid3;
    for (int i = 0; i < 30; ++i) grid3.push_back((i % 3) / 3.0);
    out.push_back(grid3);
    out.push_back(frac_multiples(std::exp(1.0), 7));
    std::vector<double> halves(50, 0.5);
    out.push_back(halves);
    out.push_back(frac_multiples(std::sqrt(3.0), 199));
    out.push_back(frac_multiples(1 / std::sqrt(2.0), 64));
    out.push_back({0.1, 0.2, 0.3, 0.4});
    std::vector<double> tail;
    for (int i = 0; i < 25; ++i) tail.push_back(1.0 - std::pow(0.5, i + 1));
    out.push_back(tail);
    return out;
}

template <class Gen>
std::vector<double> random_instance(Gen& g, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) {
        x = u(g);
        // occasional repeats and dyadic values exercise ties
        if (g() % 10 == 0) x = std::floor(x * 8) / 8;
    }
    if (n > 3 && g() % 2) v[1] = v[0];
    return v;
}

}  // namespace corpus
