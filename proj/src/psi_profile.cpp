#include "spectral/errors.hpp"
#include "spectral/quadrature.hpp"
#include "spectral/special.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace spectral {

namespace {

namespace odeint = boost::numeric::odeint;

using State = std::array<double, 2>;

double signed_pow(double v, double e) { return std::copysign(std::pow(std::abs(v), e), v); }

// State (Psi, flux) with flux = |Psi'|^{p-2} Psi'.
struct RadialSystem {
    double p;
    int n;

    void operator()(const State& x, State& dxdt, double r) const {
        dxdt[0] = signed_pow(x[1], 1.0 / (p - 1.0));
        dxdt[1] = -(n - 1.0) / r * x[1] - signed_pow(x[0], p - 1.0);
    }
};

// Two-term expansion at the origin. With p' = p/(p-1) and
// c = (p-1)/p * n^{-1/(p-1)}:
//   Psi  = 1 - c r^{p'} + c n^{1-1/(p-1)} / ((n+p') 2p') r^{2p'}
//   flux = -r/n + (p-1) c r^{1+p'} / (n+p')
State series_start(double p, int n, double r) {
    const double pc = p / (p - 1.0);
    const double c = (p - 1.0) / p * std::pow(n, -1.0 / (p - 1.0));
    const double c2 = c * std::pow(n, 1.0 - 1.0 / (p - 1.0)) / ((n + pc) * 2.0 * pc);
    const double psi = 1.0 - c * std::pow(r, pc) + c2 * std::pow(r, 2.0 * pc);
    const double flux = -r / n + (p - 1.0) * c * std::pow(r, 1.0 + pc) / (n + pc);
    return {psi, flux};
}

auto make_stepper(double tol) { return odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(tol, tol); }

double hermite(double h, double t, double y0, double y1, double d0, double d1) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * h * d1;
}

double hermite_slope(double h, double t, double y0, double y1, double d0, double d1) {
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * y0 + (-6 * t2 + 6 * t) * y1) / h + (3 * t2 - 4 * t + 1) * d0 + (3 * t2 - 2 * t) * d1;
}

} // namespace

RadialProfile::RadialProfile(double p, int n, std::vector<double> values, std::vector<double> slopes,
                             double first_zero)
    : p_(p), n_(n), values_(std::move(values)), slopes_(std::move(slopes)), first_zero_(first_zero) {
    if (values_.size() < 3 || values_.size() != slopes_.size()) {
        throw ParameterError("RadialProfile: inconsistent sample arrays");
    }
}

double RadialProfile::value(double r) const {
    if (r <= 0.0) {
        return values_.front();
    }
    if (r >= first_zero_) {
        return 0.0;
    }
    const double h = spacing();
    const int i = std::min(static_cast<int>(r / h), intervals() - 1);
    const double t = (r - i * h) / h;
    return hermite(h, t, values_[i], values_[i + 1], slopes_[i], slopes_[i + 1]);
}

double RadialProfile::slope(double r) const {
    if (r <= 0.0) {
        return slopes_.front();
    }
    if (r >= first_zero_) {
        return slopes_.back();
    }
    const double h = spacing();
    const int i = std::min(static_cast<int>(r / h), intervals() - 1);
    const double t = (r - i * h) / h;
    return hermite_slope(h, t, values_[i], values_[i + 1], slopes_[i], slopes_[i + 1]);
}

double RadialProfile::log_normalized_moment(double s) const {
    if (!(s > 0.0)) {
        throw ParameterError("moment exponent must be > 0");
    }
    const double h = spacing();
    const int tail_cells = std::min(32, intervals() / 2);
    const int bulk_cells = (intervals() - tail_cells) / 2 * 2;
    auto integrand = [&](double t, double psi) { return std::pow(t, n_ - 1) * std::pow(std::max(psi, 0.0), s); };

    // Composite Simpson over the smooth bulk.
    double bulk = 0.0;
    for (int i = 0; i <= bulk_cells; ++i) {
        const double w = (i == 0 || i == bulk_cells) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        bulk += w * integrand(i * h, values_[i]);
    }
    bulk *= h / 3.0;

    // Psi^s behaves like (psi - t)^s at the zero; integrate the tail on dyadic
    // layers towards the endpoint.
    const double t0 = bulk_cells * h;
    const double width = first_zero_ - t0;
    double tail = 0.0;
    double outer = width;
    for (int layer = 0; layer < 64; ++layer) {
        const double inner = 0.5 * outer;
        tail += gauss_legendre(
            [&](double v) {
                const double t = first_zero_ - v;
                return integrand(t, value(t));
            },
            inner, outer, 8);
        outer = inner;
    }
    const double total = bulk + tail;
    return std::log(n_ * total / std::pow(first_zero_, n_));
}

RadialMoments::RadialMoments(const RadialProfile& profile, double q)
    : profile_(&profile), q_(q), cumulative_(profile.intervals() + 1, 0.0) {
    if (!(q > 0.0)) {
        throw ParameterError("moment exponent must be > 0");
    }
    const double h = profile.spacing();
    const int n = profile.n();
    for (int i = 0; i < profile.intervals(); ++i) {
        const double cell = gauss_legendre(
            [&](double t) { return std::pow(t, n - 1) * std::pow(std::max(profile.value(t), 0.0), q); }, i * h,
            (i + 1) * h, 6);
        cumulative_[i + 1] = cumulative_[i] + cell;
    }
}

double RadialMoments::operator()(double rho) const {
    const double h = profile_->spacing();
    if (rho <= 0.0) {
        return 0.0;
    }
    if (rho >= profile_->first_zero()) {
        return cumulative_.back();
    }
    const int i = std::min(static_cast<int>(rho / h), profile_->intervals() - 1);
    const int n = profile_->n();
    const double q = q_;
    return cumulative_[i] +
           gauss_legendre([&](double t) { return std::pow(t, n - 1) * std::pow(std::max(profile_->value(t), 0.0), q); },
                          i * h, rho, 6);
}

RadialProfile psi_profile(double p, int n, const ProfileOptions& options) {
    if (!(p >= 2.0) || !std::isfinite(p)) {
        throw ParameterError("psi_profile requires p >= 2");
    }
    if (n < 2) {
        throw ParameterError("psi_profile requires n >= 2");
    }
    if (options.intervals < 64 || options.intervals % 2 != 0) {
        throw ParameterError("psi_profile requires an even grid of at least 64 intervals");
    }
    const RadialSystem system{p, n};
    const double r0 = options.start_radius;

    // March until Psi changes sign.
    auto stepper = make_stepper(options.tolerance);
    State x = series_start(p, n, r0);
    double r = r0;
    double dt = r0;
    State before = x;
    double r_before = r;
    for (;;) {
        before = x;
        r_before = r;
        odeint::controlled_step_result result = odeint::fail;
        for (int attempt = 0; attempt < 1000 && result == odeint::fail; ++attempt) {
            result = stepper.try_step(system, x, r, dt);
        }
        if (result == odeint::fail) {
            throw NumericError("psi_profile: step size control failed");
        }
        dt = std::min(dt, 0.05);
        if (!std::isfinite(x[0]) || !std::isfinite(x[1])) {
            throw NumericError("psi_profile: integration produced non-finite values");
        }
        if (x[0] <= 0.0) {
            break;
        }
        if (r > options.max_radius) {
            throw NumericError("psi_profile: no sign change before the radius cap");
        }
    }

    // Bisect the crossing with fresh integrations from the last positive state.
    double lo = r_before;
    double hi = r;
    auto integrate_to = [&](double target) {
        State y = before;
        auto restart = make_stepper(options.tolerance);
        odeint::integrate_adaptive(restart, system, y, r_before, target, std::max((target - r_before) / 8.0, 1e-14));
        return y;
    };
    while (hi - lo > options.zero_tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (integrate_to(mid)[0] > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double zero = 0.5 * (lo + hi);

    // Sample on the uniform grid.
    const int intervals = options.intervals;
    std::vector<double> times;
    times.reserve(intervals + 1);
    times.push_back(r0);
    for (int i = 1; i <= intervals; ++i) {
        times.push_back(zero * i / intervals);
    }
    std::vector<double> values(intervals + 1, 0.0);
    std::vector<double> slopes(intervals + 1, 0.0);
    values[0] = 1.0;
    slopes[0] = 0.0;
    std::size_t hit = 0;
    State y = series_start(p, n, r0);
    auto sampler = make_stepper(options.tolerance);
    odeint::integrate_times(sampler, system, y, times.begin(), times.end(), r0 * 0.5,
                            [&](const State& s, double) {
                                if (hit > 0) {
                                    values[hit] = s[0];
                                    slopes[hit] = signed_pow(s[1], 1.0 / (p - 1.0));
                                }
                                ++hit;
                            });
    if (hit != times.size()) {
        throw NumericError("psi_profile: sampling pass ended early");
    }
    return RadialProfile(p, n, std::move(values), std::move(slopes), zero);
}

const RadialProfile& cached_psi_profile(double p, int n) {
    static std::mutex mutex;
    static std::map<std::pair<double, int>, std::unique_ptr<RadialProfile>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{p, n}];
    if (!slot) {
        slot = std::make_unique<RadialProfile>(psi_profile(p, n));
    }
    return *slot;
}

double lambda1_ball(const RadialProfile& profile, double radius) {
    if (!(radius > 0.0)) {
        throw ParameterError("lambda1_ball: radius must be > 0");
    }
    return std::pow(profile.first_zero() / radius, profile.p());
}

double lambda1_ball(double p, int n, double radius) { return lambda1_ball(cached_psi_profile(p, n), radius); }

double lambda1_sharp(const RadialProfile& profile, double area) {
    if (!(area > 0.0)) {
        throw ParameterError("lambda1_sharp: area must be > 0");
    }
    const double p = profile.p();
    const int n = profile.n();
    return std::pow(profile.first_zero(), p) * std::pow(unit_ball_volume(n) / area, p / n);
}

double lambda1_sharp(double p, int n, double area) { return lambda1_sharp(cached_psi_profile(p, n), area); }

double f_power_mean(const RadialProfile& profile, double s) {
    if (!(s > 0.0)) {
        throw ParameterError("f_power_mean: exponent must be > 0");
    }
    return std::exp(profile.log_normalized_moment(s) / s);
}

double sup_ratio(const RadialProfile& profile, double r, double q) {
    if (!(r > 0.0) || !(r < q)) {
        throw ParameterError("sup_ratio requires 0 < r < q");
    }
    const double fr = profile.log_normalized_moment(r);
    const double fq = profile.log_normalized_moment(q);
    // log of (f(r)/f(q))^{pqr/(n(q-r))} = p/(n(q-r)) * (q log I(r) - r log I(q))
    const double exponent = profile.p() / (profile.n() * (q - r)) * (q * fr - r * fq);
    return std::exp(exponent);
}

} // namespace spectral
