#pragma once

#include "spectral/geometry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spectral {

/// Relative isoperimetric constant with the closed-form rule that produced it.
struct KnEntry {
    DomainSpec domain;
    double value = 0.0;
    std::string provenance;
};

/// K_2 for rhombi and for centrally symmetric convex planar domains.
/// Anything else raises ParameterError ("no known constant").
KnEntry kn_lookup(const DomainSpec& spec);

/// n omega_n^{1/n}, the constant of the whole space.
double kn_whole_space(int n);

/// 2^{p/n} (K / (n omega_n^{1/n}))^p lambda_1(ball of measure `area`).
double main_bound(double p, int n, double k_const, double area);

/// pi^2 / d^2.
double payne_weinberger(double diameter);

/// 2^{p/n} (n / (p (n-1)))^p K^p / area^{p/n}.
double ashbaugh_mercado(double p, int n, double k_const, double area);

struct SupResult {
    double value = 0.0;
    double q = 0.0;
};

/// sup over q in (1, 50] of (f(1)/f(q))^{2q/(n(q-1))} for p = 2, on a
/// 200-point grid in log(q - 1) refined by golden-section search. Memoized per n.
SupResult bct_supremum(int n);

/// 2^{2/n} alpha sup(...) j_{n/2-1,1}^2 / (area/omega_n)^{2/n}.
double bct_corollary(int n, double k_const, double area);

/// j_{0,1}^2 w^2 / area^2.
double symmetric_planar_bound(double width, double area);

struct PwImprovementReport {
    double c = 0.0;
    double area = 0.0;
    double width = 0.0;
    double diameter = 0.0;
    bool hypothesis = false;       // area < C w d
    double bound_d2 = 0.0;         // symmetric_planar_bound * d^2
    double threshold = 0.0;        // j_{0,1}^2 / C^2
    bool conclusion = false;       // bound_d2 >= threshold > pi^2
};

/// Requires a centrally symmetric convex domain and 0 < C < j_{0,1}/pi.
PwImprovementReport pw_improvement_check(const DomainSpec& spec, double c);

struct BoundEntry {
    std::string name;
    double value = 0.0;
    bool applicable = true;
    std::optional<double> ratio; // value / mu1
};

struct BoundReport {
    std::string domain;
    double p = 2.0;
    int n = 2;
    int level = 0;
    std::optional<double> mu1;             // FEM at `level`
    std::optional<double> mu1_coarse;      // FEM at `level - 1`
    std::optional<double> mu1_richardson;
    std::vector<BoundEntry> entries;
    bool valid = true;
};

/// Formula bounds for a planar domain: main and Ashbaugh-Mercado for every
/// p >= 2, plus Payne-Weinberger, the p = 2 corollary and the symmetric planar
/// bound when p = 2.
std::vector<BoundEntry> bound_entries(const DomainSpec& spec, double p);

/// Every bound for the domain. With p = 2 the FEM mu1 at levels level-1 and
/// level is attached (solved concurrently) and the report is valid when each
/// applicable bound lies below mu1 (1 + 1e-2) and below the extrapolated
/// mu1 (1 + 5e-3). For other p only the main and Ashbaugh-Mercado bounds appear.
BoundReport compare_report(const DomainSpec& spec, double p, int level);

struct RhombusRow {
    int m = 0;
    double beta = 0.0;
    double alpha = 0.0;
    double lambda_sharp = 0.0;
    double mu1 = 0.0;
    double mu1_richardson = 0.0;
    double r_m = 0.0;               // mu1_richardson / (alpha lambda_sharp)
    double lambda_dn = 0.0;         // half rhombus, Dirichlet on the short diagonal
    double lambda_dn_richardson = 0.0;
    double sandwich_low = 0.0;      // j_{0,1}^2
    double sandwich_high = 0.0;     // j_{0,1}^2 / cos^2(beta/2)
    bool sandwich_ok = false;       // within 1% relative
};

struct RhombusStudy {
    std::vector<RhombusRow> rows;
    bool decreasing = true;
};

RhombusStudy verify_rhombus(const std::vector<int>& ms, int level, double sandwich_tolerance = 1e-2);

} // namespace spectral
