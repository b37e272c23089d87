#pragma once

#include <span>
#include <vector>

namespace spectral {

/// Weighted eigenproblem -(|phi'|^{gamma-2} phi')' = sigma |phi|^{gamma-2} phi s^{-beta}
/// on (0, A) with phi(0) = 0 and a natural condition at s = A.
struct SturmProblem {
    double gamma = 2.0;
    double beta = 1.0;
    double length = 1.0; // A
    int intervals = 4096;
};

struct SturmSolution {
    double sigma = 0.0;
    std::vector<double> grid; // s_0 = 0, ..., s_N = A
    std::vector<double> phi;  // nodal values, phi_0 = 0, normalized weight integral 1
    int iterations = 0;
};

struct SturmOptions {
    double tolerance = 1e-10;
    int max_iterations = 50000;
};

/// Graded grid s_i = A (i/N)^3.
std::vector<double> sturm_grid(double length, int intervals);

/// Discrete quotient int |phi'|^gamma / int |phi|^gamma s^{-beta} for a
/// piecewise-linear phi on `grid` (phi[0] is ignored and taken as 0).
double sturm_quotient(const SturmProblem& problem, std::span<const double> grid, std::span<const double> phi);

SturmSolution sturm_solve(const SturmProblem& problem, const SturmOptions& options = {});

/// First eigenvalue sigma_1(0, A).
double sigma1(const SturmProblem& problem, const SturmOptions& options = {});

/// A^{beta-gamma} (gamma-1)^gamma / gamma^gamma.
double hardy_lower_bound(const SturmProblem& problem);

/// (K/n)^n (psi_p^p / mu1)^{n/p}: measure of the ball carrying the comparison function.
double isoperimetric_length(double p, int n, double k_const, double mu1);

struct SturmConsistencyReport {
    double length = 0.0;          // L
    double sigma_target = 0.0;    // (mu1 / K^p)^{1/(p-1)}
    double sigma_computed = 0.0;  // sigma_1(0, L)
    double rel_err = 0.0;
    double hardy_bound = 0.0;
};

/// Solves on (0, L) with gamma = p/(p-1), beta = gamma (1 - 1/n) and compares
/// with (mu1 / K^p)^{1/(p-1)}; the exponent is 1 when p = 2.
SturmConsistencyReport sturm_consistency(double p, int n, double k_const, double mu1, int intervals = 4096);

struct LBoundReport {
    double length = 0.0;
    double s_tilde = 0.0;
    double area = 0.0;
    double margin_positive = 0.0;   // s~ - L
    double margin_negative = 0.0;   // |Omega| - s~ - L
    double margin_half = 0.0;       // |Omega|/2 - L
    bool ok = false;
};

/// L <= min{s~, |Omega| - s~, |Omega|/2} with each margin allowed down to -tolerance.
LBoundReport check_L_bound(double p, int n, double k_const, double mu1, double s_tilde, double area,
                           double tolerance = 1e-3);

} // namespace spectral
