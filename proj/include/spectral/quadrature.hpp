#pragma once

#include <vector>

namespace spectral {

struct QuadratureRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

/// Gauss-Legendre rule with `order` points (1..64), computed once and cached.
const QuadratureRule& gauss_legendre_rule(int order);

template <typename F>
double gauss_legendre(F&& f, double a, double b, int order) {
    const QuadratureRule& rule = gauss_legendre_rule(order);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return half * sum;
}

} // namespace spectral
