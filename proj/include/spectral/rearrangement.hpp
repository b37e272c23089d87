#pragma once

#include "spectral/geometry.hpp"
#include "spectral/quadrature.hpp"
#include "spectral/special.hpp"

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

namespace spectral {

/// Decreasing rearrangement u* of a P1 mesh function.
///
/// The distribution m(t) = |{u > t}| of a P1 function is, per element, a
/// piecewise quadratic in t with breaks at the nodal values. Summing over
/// elements gives a density -m'(t) that is linear between consecutive distinct
/// nodal values, plus point masses where whole elements are flat. u* is stored
/// as that sequence of pieces laid end to end in the measure variable
/// s in [0, |Omega|] and inverted in closed form.
class RearrangedProfile {
public:
    struct Piece {
        double s_begin = 0.0;
        double s_end = 0.0;
        double top = 0.0;        // u* at s_begin
        double bottom = 0.0;     // u* at s_end
        double density_top = 0.0;
        double density_bottom = 0.0;
        bool atom = false;
    };

    RearrangedProfile(double measure, std::vector<Piece> pieces);

    /// |Omega|.
    double measure() const { return measure_; }
    /// s~ = |{u > 0}|.
    double positive_measure() const { return distribution(0.0); }
    double max_value() const { return pieces_.front().top; }
    double min_value() const { return pieces_.back().bottom; }

    /// m(t) = |{u > t}|.
    double distribution(double t) const;
    /// u*(s), nonincreasing and right-continuous.
    double value(double s) const;

    /// int_0^s g(u*(t)) dt, with g applied to the level variable.
    template <typename G>
    double integrate(G&& g, double s) const;

    /// int_0^|Omega| u* = int_Omega u.
    double mean_integral() const;
    /// int_0^|Omega| |u*|^q.
    double absolute_power_integral(double q) const;

    /// Samples (s, u*(s)) on a uniform measure grid plus every piece boundary.
    std::vector<std::pair<double, double>> samples(int grid_points = 4096) const;

    const std::vector<Piece>& pieces() const { return pieces_; }

    /// Level within piece `k` after `sigma` units of measure from its start.
    double piece_level(std::size_t k, double sigma) const;
    /// int of g(tau) * density over [lo, hi] within piece k (lo, hi levels).
    template <typename G>
    double piece_integral(std::size_t k, double lo, double hi, G&& g) const;

private:
    std::size_t locate(double s) const;

    double measure_;
    std::vector<Piece> pieces_;
};

RearrangedProfile rearrange(const Mesh& mesh, std::span<const double> nodal);

/// Rearranges `nodal` or its negative, whichever has |{u > 0}| <= |Omega|/2.
RearrangedProfile rearrange_eigenfunction(const Mesh& mesh, std::span<const double> nodal);

/// s -> int_0^s (u*(t)_+)^q dt.
class CumulativePower {
public:
    CumulativePower(const RearrangedProfile& profile, double q);

    double exponent() const { return q_; }
    double operator()(double s) const;
    /// Value at s~, the q-th power of ||u+||_q.
    double total() const { return prefix_.back(); }

private:
    const RearrangedProfile* profile_;
    double q_;
    std::vector<double> prefix_;
};

CumulativePower cumulative_power(const RearrangedProfile& profile, double q);

/// ||u+||_{L^q(Omega)}.
double lq_norm_positive(const RearrangedProfile& profile, double q);

struct ChitiReport {
    double max_violation = 0.0;   // max of (U_q - V_q) / U_q(s~) over s = L j / grid, j >= 1
    double s_at_max = 0.0;
    double u_at_max = 0.0;        // normalized U_q(s_at_max)
    double v_at_max = 0.0;        // normalized V_q(s_at_max)
    double length = 0.0;          // L
    double s_tilde = 0.0;
    bool length_violation = false; // L > s~ beyond tolerance
};

/// Compares U_q(s) = int_0^s (u*)^q with V_q(s) = int_0^s (v*)^q on [0, L],
/// where v is the radial ball eigenfunction on the ball of measure L, scaled so
/// that V_q(L) = U_q(s~). Both sides are normalized by U_q(s~).
ChitiReport chiti_check(const RearrangedProfile& u_profile, const RadialProfile& ball, double q, double length,
                        int grid = 2000, double tolerance = 1e-3);

struct ReverseHolderReport {
    double lhs = 0.0;       // ||u+||_q / ||u+||_r
    double rhs = 0.0;       // C = ||v1||_q / ||v1||_r on B_Rbar
    double norm_q = 0.0;    // ||u+||_q (as given)
    double norm_r = 0.0;
    double radius = 0.0;    // Rbar
    bool ok = false;
};

/// Checks ||u+||_q <= C ||u+||_r with u normalized to ||u+||_r = 1.
ReverseHolderReport reverse_holder_check(const RearrangedProfile& u_profile, const RadialProfile& ball, double k_const,
                                         double mu1, double q, double r, double tolerance = 1e-3);

// ---------------------------------------------------------------------------

template <typename G>
double RearrangedProfile::piece_integral(std::size_t k, double lo, double hi, G&& g) const {
    const Piece& pc = pieces_[k];
    if (pc.atom) {
        return g(pc.top) * (pc.s_end - pc.s_begin);
    }
    if (!(hi > lo)) {
        return 0.0;
    }
    const double span = pc.top - pc.bottom;
    auto density = [&](double tau) {
        const double x = (pc.top - tau) / span;
        return pc.density_top + (pc.density_bottom - pc.density_top) * x;
    };
    auto segment = [&](double a, double b) {
        const QuadratureRule& rule = gauss_legendre_rule(8);
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double tau = mid + half * rule.nodes[i];
            sum += rule.weights[i] * g(tau) * density(tau);
        }
        return half * sum;
    };
    // Split at the kink of |tau|^q and tau_+^q.
    if (lo < 0.0 && hi > 0.0) {
        return segment(lo, 0.0) + segment(0.0, hi);
    }
    return segment(lo, hi);
}

template <typename G>
double RearrangedProfile::integrate(G&& g, double s) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        const Piece& pc = pieces_[k];
        if (pc.s_begin >= s) {
            break;
        }
        const double end = std::min(s, pc.s_end);
        const double level = end >= pc.s_end ? pc.bottom : piece_level(k, end - pc.s_begin);
        if (pc.atom) {
            sum += g(pc.top) * (end - pc.s_begin);
        } else {
            sum += piece_integral(k, level, pc.top, g);
        }
    }
    return sum;
}

} // namespace spectral
