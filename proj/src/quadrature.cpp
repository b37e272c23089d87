#include "spectral/quadrature.hpp"

#include "spectral/errors.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>

namespace spectral {

namespace {

QuadratureRule build_rule(int order) {
    QuadratureRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        // Newton on P_order from the Chebyshev-like initial guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

} // namespace

const QuadratureRule& gauss_legendre_rule(int order) {
    if (order < 1 || order > 64) {
        throw ParameterError("gauss_legendre_rule: order must be in [1, 64]");
    }
    static std::array<QuadratureRule, 65> rules;
    static std::array<std::once_flag, 65> flags;
    std::call_once(flags[order], [order] { rules[order] = build_rule(order); });
    return rules[order];
}

} // namespace spectral
