#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "fcs/errors.hpp"

namespace fcs {

struct QuadratureSettings {
    double window_half_widths = 8.0; // packet support taken as p0 +- W sigma_p
    int base_nodes = 64;
    double scale = 1.0;              // user multiplier for the node budget
    double unitarity_tol = 1e-8;     // ceiling on |sum_m Q(m) - I|
    double convergence_tol = 1e-9;   // ceiling on the node-doubling residual
};

struct GaussLegendreRule {
    std::vector<double> nodes;   // ascending
    std::vector<double> weights;
};

// Nodes and weights on [-1, 1] by Newton iteration on the Legendre
// recurrence, seeded with the Chebyshev-like estimate. Accurate to machine
// precision for the node counts used here.
inline GaussLegendreRule gauss_legendre(int n) {
    if (n < 1) throw range_error("gauss_legendre needs at least one node");
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double pk = 1.0, pk_prev = 0.0;
            for (int k = 0; k < n; ++k) {
                const double tmp = ((2 * k + 1) * x * pk - k * pk_prev) / (k + 1);
                pk_prev = pk;
                pk = tmp;
            }
            dp = n * (x * pk - pk_prev) / (x * x - 1.0);
            const double dx = -pk / dp;
            x += dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

inline GaussLegendreRule gauss_legendre(int n, double a, double b) {
    GaussLegendreRule rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half * rule.nodes[i];
        rule.weights[i] *= half;
    }
    return rule;
}

// At least n nodes across [a, b] as equal panels of a fixed 64-point rule.
// Build cost is linear in n, unlike a single monolithic rule, and accuracy
// is spectral as long as the integrand oscillates by no more than a few
// radians per panel, which the node budget guarantees.
inline GaussLegendreRule composite_gauss_legendre(int n, double a, double b) {
    static const GaussLegendreRule base = gauss_legendre(64);
    const int panels = std::max(1, (n + 63) / 64);
    GaussLegendreRule rule;
    rule.nodes.reserve(std::size_t(panels) * 64);
    rule.weights.reserve(std::size_t(panels) * 64);
    const double h = (b - a) / double(panels);
    for (int p = 0; p < panels; ++p) {
        const double mid = a + h * (double(p) + 0.5), half = 0.5 * h;
        for (int i = 0; i < 64; ++i) {
            rule.nodes.push_back(mid + half * base.nodes[i]);
            rule.weights.push_back(half * base.weights[i]);
        }
    }
    return rule;
}

} // namespace fcs
