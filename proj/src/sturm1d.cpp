#include "spectral/sturm1d.hpp"

#include "spectral/errors.hpp"
#include "spectral/quadrature.hpp"
#include "spectral/special.hpp"

#include <cmath>
#include <string>

namespace spectral {

namespace {

double signed_pow(double v, double e) { return std::copysign(std::pow(std::abs(v), e), v); }

void validate(const SturmProblem& problem) {
    if (!(problem.gamma > 1.0) || !std::isfinite(problem.gamma)) {
        throw ParameterError("sturm: gamma must be > 1");
    }
    if (!(problem.beta > 0.0) || !(problem.beta < problem.gamma)) {
        throw ParameterError("sturm: beta must lie in (0, gamma)");
    }
    if (!(problem.length > 0.0) || !std::isfinite(problem.length)) {
        throw ParameterError("sturm: A must be > 0");
    }
    if (problem.intervals < 2) {
        throw ParameterError("sturm: need at least 2 intervals");
    }
}

// Quadrature nodes for the weight s^{-beta} on every cell but the first. Cells
// are cut into pieces [x, 2x].
struct WeightRule {
    std::vector<int> offset;      // per cell, into the arrays below
    std::vector<double> weight;   // GL weight times s^{-beta}
    std::vector<double> lambda;   // position within the cell in [0, 1]

    WeightRule(std::span<const double> grid, double beta) : offset(grid.size() + 1, 0) {
        const QuadratureRule& rule = gauss_legendre_rule(8);
        const std::size_t cells = grid.size() - 1;
        for (std::size_t i = 1; i <= cells; ++i) {
            offset[i] = static_cast<int>(weight.size());
            if (i == 1) {
                continue;
            }
            const double a = grid[i - 1];
            const double b = grid[i];
            for (double lo = a; lo < b;) {
                const double hi = std::min(b, 2.0 * lo);
                const double mid = 0.5 * (lo + hi);
                const double half = 0.5 * (hi - lo);
                for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                    const double s = mid + half * rule.nodes[k];
                    weight.push_back(half * rule.weights[k] * std::pow(s, -beta));
                    lambda.push_back((s - a) / (b - a));
                }
                lo = hi;
            }
        }
        offset[cells + 1] = static_cast<int>(weight.size());
    }
};

double weight_integral(const SturmProblem& pb, std::span<const double> grid, std::span<const double> phi,
                       const WeightRule& rule) {
    const double g = pb.gamma;
    const double h1 = grid[1];
    double total = std::pow(std::abs(phi[1]), g) * std::pow(h1, 1.0 - pb.beta) / (g + 1.0 - pb.beta);
    for (std::size_t i = 2; i < grid.size(); ++i) {
        for (int k = rule.offset[i]; k < rule.offset[i + 1]; ++k) {
            const double v = phi[i - 1] + (phi[i] - phi[i - 1]) * rule.lambda[k];
            total += rule.weight[k] * std::pow(std::abs(v), g);
        }
    }
    return total;
}

double dirichlet_integral(double gamma, std::span<const double> grid, std::span<const double> phi) {
    double total = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double h = grid[i] - grid[i - 1];
        const double prev = i == 1 ? 0.0 : phi[i - 1];
        total += h * std::pow(std::abs((phi[i] - prev) / h), gamma);
    }
    return total;
}

} // namespace

std::vector<double> sturm_grid(double length, int intervals) {
    std::vector<double> grid(intervals + 1);
    for (int i = 0; i <= intervals; ++i) {
        const double t = static_cast<double>(i) / intervals;
        grid[i] = length * t * t * t;
    }
    grid[intervals] = length;
    return grid;
}

double sturm_quotient(const SturmProblem& problem, std::span<const double> grid, std::span<const double> phi) {
    validate(problem);
    if (grid.size() != phi.size() || grid.size() < 3) {
        throw ParameterError("sturm_quotient: grid and phi sizes differ");
    }
    const WeightRule rule(grid, problem.beta);
    const double w = weight_integral(problem, grid, phi, rule);
    if (!(w > 0.0)) {
        throw ParameterError("sturm_quotient: phi vanishes identically");
    }
    return dirichlet_integral(problem.gamma, grid, phi) / w;
}

SturmSolution sturm_solve(const SturmProblem& problem, const SturmOptions& options) {
    validate(problem);
    const double g = problem.gamma;
    const double beta = problem.beta;
    const int n = problem.intervals;

    SturmSolution sol;
    sol.grid = sturm_grid(problem.length, n);
    const auto& s = sol.grid;
    const WeightRule rule(s, beta);

    std::vector<double> phi(s.begin(), s.end());
    std::vector<double> load(n + 1, 0.0);
    double sigma = HUGE_VAL;
    for (int it = 1; it <= options.max_iterations; ++it) {
        const double w = weight_integral(problem, s, phi, rule);
        const double scale = std::pow(w, -1.0 / g);
        for (double& v : phi) {
            v *= scale;
        }
        const double next = dirichlet_integral(g, s, phi);
        const double change = std::abs(sigma - next);
        sigma = next;
        if (change <= options.tolerance * sigma) {
            sol.sigma = sigma;
            sol.phi = std::move(phi);
            sol.phi[0] = 0.0;
            sol.iterations = it;
            return sol;
        }

        // Load b_j = int |phi|^{g-2} phi N_j s^{-beta}; the first cell is exact.
        std::fill(load.begin(), load.end(), 0.0);
        load[1] = signed_pow(phi[1], g - 1.0) * std::pow(s[1], 1.0 - beta) / (g - beta + 1.0);
        for (int i = 2; i <= n; ++i) {
            for (int k = rule.offset[i]; k < rule.offset[i + 1]; ++k) {
                const double lam = rule.lambda[k];
                const double v = signed_pow(phi[i - 1] + (phi[i] - phi[i - 1]) * lam, g - 1.0) * rule.weight[k];
                load[i - 1] += v * (1.0 - lam);
                load[i] += v * lam;
            }
        }

        // Flux on cell j equals the load summed from j to the free end.
        double flux = 0.0;
        std::vector<double> slope(n + 1, 0.0);
        for (int j = n; j >= 1; --j) {
            flux += load[j];
            slope[j] = signed_pow(flux, 1.0 / (g - 1.0));
        }
        phi[0] = 0.0;
        for (int j = 1; j <= n; ++j) {
            phi[j] = phi[j - 1] + (s[j] - s[j - 1]) * slope[j];
        }
    }
    throw ConvergenceError("sigma1: no convergence after " + std::to_string(options.max_iterations) +
                               " iterations, last quotient " + std::to_string(sigma),
                           sigma);
}

double sigma1(const SturmProblem& problem, const SturmOptions& options) {
    return sturm_solve(problem, options).sigma;
}

double hardy_lower_bound(const SturmProblem& problem) {
    validate(problem);
    const double g = problem.gamma;
    return std::pow(problem.length, problem.beta - g) * std::pow(g - 1.0, g) / std::pow(g, g);
}

double isoperimetric_length(double p, int n, double k_const, double mu1) {
    if (!(k_const > 0.0) || !(mu1 > 0.0)) {
        throw ParameterError("isoperimetric_length requires K > 0 and mu1 > 0");
    }
    const double psi = cached_psi_profile(p, n).first_zero();
    return std::pow(k_const / n, n) * std::pow(std::pow(psi, p) / mu1, n / p);
}

SturmConsistencyReport sturm_consistency(double p, int n, double k_const, double mu1, int intervals) {
    SturmConsistencyReport report;
    report.length = isoperimetric_length(p, n, k_const, mu1);
    const double gamma = p / (p - 1.0);
    const SturmProblem problem{gamma, gamma * (1.0 - 1.0 / n), report.length, intervals};
    report.sigma_target = std::pow(mu1 / std::pow(k_const, p), 1.0 / (p - 1.0));
    report.sigma_computed = sigma1(problem);
    report.rel_err = std::abs(report.sigma_computed - report.sigma_target) / report.sigma_target;
    report.hardy_bound = hardy_lower_bound(problem);
    return report;
}

LBoundReport check_L_bound(double p, int n, double k_const, double mu1, double s_tilde, double area,
                           double tolerance) {
    LBoundReport report;
    report.length = isoperimetric_length(p, n, k_const, mu1);
    report.s_tilde = s_tilde;
    report.area = area;
    report.margin_positive = s_tilde - report.length;
    report.margin_negative = area - s_tilde - report.length;
    report.margin_half = 0.5 * area - report.length;
    report.ok = report.margin_positive >= -tolerance && report.margin_negative >= -tolerance &&
                report.margin_half >= -tolerance;
    return report;
}

} // namespace spectral
