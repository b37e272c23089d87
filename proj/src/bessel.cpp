#include "spectral/errors.hpp"
#include "spectral/special.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace spectral {

namespace {

constexpr double series_limit = 10.0;

// Ascending series; terms stay below e^x / (pi x) in size, so at most three
// digits are lost on [0, series_limit].
double bessel_series(double nu, double x) {
    const double half = 0.5 * x;
    double term = std::exp(nu * std::log(half) - std::lgamma(nu + 1.0));
    double sum = term;
    const double q = -half * half;
    for (int k = 1; k < 500; ++k) {
        term *= q / (k * (k + nu));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) {
            break;
        }
    }
    return sum;
}

// Miller backward recurrence from order nu + K, normalized with
//   (x/2)^nu / Gamma(nu+1) = J_nu + sum_{j>=1} (nu+2j) Gamma(nu+j)/(j! Gamma(nu+1)) J_{nu+2j}.
double bessel_backward(double nu, double x) {
    const int k_top = 2 * (static_cast<int>(0.5 * x) + 40);
    std::vector<double> f(k_top + 2, 0.0);
    f[k_top + 1] = 0.0;
    f[k_top] = 1e-30;
    for (int k = k_top; k >= 1; --k) {
        f[k - 1] = 2.0 * (nu + k) / x * f[k] - f[k + 1];
        if (std::abs(f[k - 1]) > 1e200) {
            for (int j = k - 1; j <= k_top + 1; ++j) {
                f[j] *= 1e-200;
            }
        }
    }
    double norm = f[0];
    double d = 1.0;
    for (int j = 1; 2 * j <= k_top; ++j) {
        if (j > 1) {
            d *= (nu + j - 1.0) / j;
        }
        norm += (nu + 2.0 * j) * d * f[2 * j];
    }
    const double lhs = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
    return f[0] * lhs / norm;
}

template <typename F>
double first_sign_change(F&& fn, double start, double step, double limit, const char* what) {
    double lo = start;
    double f_lo = fn(lo);
    if (!(f_lo > 0.0)) {
        throw NumericError(std::string(what) + ": function not positive at bracket start");
    }
    double hi = lo + step;
    while (fn(hi) > 0.0) {
        lo = hi;
        hi += step;
        if (hi > limit) {
            throw NumericError(std::string(what) + ": no sign change found while bracketing");
        }
    }
    for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (fn(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

double bessel_j(double nu, double x) {
    if (!(nu >= 0.0)) {
        throw ParameterError("bessel_j: order must be >= 0");
    }
    if (!(x >= 0.0)) {
        throw ParameterError("bessel_j: argument must be >= 0");
    }
    if (x == 0.0) {
        return nu == 0.0 ? 1.0 : 0.0;
    }
    return x <= series_limit ? bessel_series(nu, x) : bessel_backward(nu, x);
}

double bessel_j_prime(double nu, double x) {
    if (x == 0.0) {
        if (nu == 1.0) {
            return 0.5;
        }
        if (nu == 0.0 || nu > 1.0) {
            return 0.0;
        }
        return HUGE_VAL;
    }
    return nu / x * bessel_j(nu, x) - bessel_j(nu + 1.0, x);
}

double bessel_first_zero(double nu) {
    if (!(nu >= 0.0)) {
        throw ParameterError("bessel_first_zero: order must be >= 0");
    }
    // J_nu > 0 on (0, j_{nu,1}) and j_{nu,1} > nu.
    return first_sign_change([nu](double x) { return bessel_j(nu, x); }, nu + 1e-3, 0.05, nu + 60.0,
                             "bessel_first_zero");
}

double bessel_prime_first_zero(double nu) {
    if (!(nu >= 0.0)) {
        throw ParameterError("bessel_prime_first_zero: order must be >= 0");
    }
    if (nu == 0.0) {
        return bessel_first_zero(1.0);
    }
    if (nu < 1.0) {
        throw ParameterError("bessel_prime_first_zero: 0 < nu < 1 is not supported");
    }
    return first_sign_change([nu](double x) { return bessel_j_prime(nu, x); }, 0.5 * nu + 1e-3, 0.05,
                             nu + 60.0, "bessel_prime_first_zero");
}

double unit_ball_volume(int n) {
    if (n < 1) {
        throw ParameterError("unit_ball_volume: dimension must be >= 1");
    }
    return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

} // namespace spectral
