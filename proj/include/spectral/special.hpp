#pragma once

#include <vector>

namespace spectral {

/// Bessel function of the first kind J_nu(x), nu >= 0, x >= 0.
double bessel_j(double nu, double x);

/// Derivative J_nu'(x).
double bessel_j_prime(double nu, double x);

/// First positive zero j_{nu,1} of J_nu.
double bessel_first_zero(double nu);

/// First positive zero j'_{nu,1} of J_nu' (nu >= 1; for nu = 0 this is j_{1,1}).
double bessel_prime_first_zero(double nu);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

/// Radial profile Psi_p of the first Dirichlet eigenfunction of the p-Laplacian
/// on a ball, normalized by Psi_p(0) = 1 and scaled so that -Delta_p Psi = Psi^{p-1}.
/// Samples are on a uniform grid over [0, first_zero]. Between samples the
/// profile is evaluated by cubic Hermite interpolation using the stored slopes.
class RadialProfile {
public:
    RadialProfile(double p, int n, std::vector<double> values, std::vector<double> slopes, double first_zero);

    double p() const { return p_; }
    int n() const { return n_; }
    /// psi_p, the first positive zero.
    double first_zero() const { return first_zero_; }
    double spacing() const { return first_zero_ / intervals(); }
    int intervals() const { return static_cast<int>(values_.size()) - 1; }
    double grid_point(int i) const { return i * spacing(); }

    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& slopes() const { return slopes_; }

    /// Psi_p(r) for r in [0, first_zero]; 0 beyond.
    double value(double r) const;
    double slope(double r) const;

    /// log of n/psi^n * int_0^psi t^{n-1} Psi(t)^s dt, s > 0.
    double log_normalized_moment(double s) const;

private:
    double p_;
    int n_;
    std::vector<double> values_;
    std::vector<double> slopes_;
    double first_zero_;
};

struct ProfileOptions {
    int intervals = 4096;
    double start_radius = 1e-4;
    double tolerance = 1e-11;
    double zero_tolerance = 1e-13;
    double max_radius = 100.0;
};

/// Cumulative radial moments rho -> int_0^rho t^{n-1} Psi(t)^q dt, tabulated
/// per grid cell with Gauss-Legendre on the Hermite interpolant.
class RadialMoments {
public:
    RadialMoments(const RadialProfile& profile, double q);

    double operator()(double rho) const;
    double total() const { return cumulative_.back(); }

private:
    const RadialProfile* profile_;
    double q_;
    std::vector<double> cumulative_;
};

/// Shoots the radial ODE -(r^{n-1}|Psi'|^{p-2}Psi')' = r^{n-1}|Psi|^{p-2}Psi
/// from the origin and stops at the first sign change of Psi.
RadialProfile psi_profile(double p, int n, const ProfileOptions& options = {});

/// Memoized psi_profile with default options; thread-safe.
const RadialProfile& cached_psi_profile(double p, int n);

/// psi_p^p R^{-p}: first Dirichlet eigenvalue of the p-Laplacian on B_R.
double lambda1_ball(const RadialProfile& profile, double radius);
double lambda1_ball(double p, int n, double radius);

/// First Dirichlet eigenvalue of the ball with the given measure.
double lambda1_sharp(const RadialProfile& profile, double area);
double lambda1_sharp(double p, int n, double area);

/// Power mean f(s) = (n/psi^n int_0^psi t^{n-1} Psi^s dt)^{1/s}.
double f_power_mean(const RadialProfile& profile, double s);

/// (f(r)/f(q))^{p q r / (n (q - r))} for 0 < r < q, evaluated in log space.
double sup_ratio(const RadialProfile& profile, double r, double q);

} // namespace spectral
