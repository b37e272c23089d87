#include "spectral/bounds.hpp"

#include "spectral/errors.hpp"
#include "spectral/fem.hpp"
#include "spectral/special.hpp"

#include <cmath>
#include <future>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

namespace spectral {

namespace {

bool in_class_g(const DomainSpec& spec) { return spec.centrally_symmetric && spec.convex; }

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ParameterError(std::string(what) + " must be > 0");
    }
}

std::pair<double, double> solve_pair(const DomainSpec& spec, int level,
                                     double (*solve)(const DomainSpec&, int)) {
    auto coarse = std::async(std::launch::async, solve, spec, level - 1);
    const double fine = solve(spec, level);
    return {coarse.get(), fine};
}

double neumann_at(const DomainSpec& spec, int level) {
    return solve_neumann_mu1(triangulate(spec, level)).eigenvalue;
}

double half_rhombus_at(const DomainSpec& spec, int level) {
    return solve_mixed_dn(rhombus_half(triangulate(spec, level))).eigenvalue;
}

} // namespace

KnEntry kn_lookup(const DomainSpec& spec) {
    KnEntry entry;
    entry.domain = spec;
    if (spec.kind == DomainKind::rhombus) {
        entry.value = std::sqrt(2.0 * std::sin(spec.rhombus_angle()));
        entry.provenance = "rhombus: sqrt(2 sin beta)";
    } else if (in_class_g(spec)) {
        entry.value = std::sqrt(2.0 * spec.width * spec.width / spec.area);
        entry.provenance = "centrally symmetric convex: sqrt(2 w^2 / area)";
    } else {
        throw ParameterError("no known constant for domain " + spec.name());
    }
    return entry;
}

double kn_whole_space(int n) {
    if (n < 1) {
        throw ParameterError("dimension must be >= 1");
    }
    return n * std::pow(unit_ball_volume(n), 1.0 / n);
}

double main_bound(double p, int n, double k_const, double area) {
    require_positive(k_const, "K");
    require_positive(area, "area");
    return std::pow(2.0, p / n) * std::pow(k_const / kn_whole_space(n), p) * lambda1_sharp(p, n, area);
}

double payne_weinberger(double diameter) {
    require_positive(diameter, "diameter");
    return std::numbers::pi * std::numbers::pi / (diameter * diameter);
}

double ashbaugh_mercado(double p, int n, double k_const, double area) {
    if (!(p >= 2.0)) {
        throw ParameterError("ashbaugh_mercado requires p >= 2");
    }
    if (n < 2) {
        throw ParameterError("ashbaugh_mercado requires n >= 2");
    }
    require_positive(k_const, "K");
    require_positive(area, "area");
    return std::pow(2.0, p / n) * std::pow(n / (p * (n - 1.0)), p) * std::pow(k_const, p) / std::pow(area, p / n);
}

static SupResult compute_bct_supremum(int n) {
    const RadialProfile& profile = cached_psi_profile(2.0, n);
    auto eval = [&](double log_excess) { return sup_ratio(profile, 1.0, 1.0 + std::exp(log_excess)); };

    constexpr int points = 200;
    const double lo = std::log(1e-6);
    const double hi = std::log(49.0);
    const double step = (hi - lo) / (points - 1);
    int best = 0;
    double best_value = -HUGE_VAL;
    for (int i = 0; i < points; ++i) {
        const double v = eval(lo + i * step);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }

    double a = lo + std::max(0, best - 1) * step;
    double b = lo + std::min(points - 1, best + 1) * step;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = eval(x1);
    double f2 = eval(x2);
    for (int it = 0; it < 60 && b - a > 1e-10; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval(x1);
        }
    }
    SupResult result{best_value, 1.0 + std::exp(lo + best * step)};
    for (const auto& [x, f] : {std::pair{x1, f1}, std::pair{x2, f2}}) {
        if (f > result.value) {
            result = {f, 1.0 + std::exp(x)};
        }
    }
    return result;
}

SupResult bct_supremum(int n) {
    static std::mutex mutex;
    static std::map<int, SupResult> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, compute_bct_supremum(n)).first;
    }
    return it->second;
}

double bct_corollary(int n, double k_const, double area) {
    require_positive(k_const, "K");
    require_positive(area, "area");
    const double alpha = std::pow(k_const / kn_whole_space(n), 2.0);
    const double j = bessel_first_zero(0.5 * n - 1.0);
    return std::pow(2.0, 2.0 / n) * alpha * bct_supremum(n).value * j * j /
           std::pow(area / unit_ball_volume(n), 2.0 / n);
}

double symmetric_planar_bound(double width, double area) {
    require_positive(width, "width");
    require_positive(area, "area");
    const double j = bessel_first_zero(0.0);
    return j * j * width * width / (area * area);
}

PwImprovementReport pw_improvement_check(const DomainSpec& spec, double c) {
    const double j = bessel_first_zero(0.0);
    if (!(c > 0.0) || !(c < j / std::numbers::pi)) {
        throw ParameterError("C must lie in (0, j01/pi)");
    }
    if (!in_class_g(spec)) {
        throw ParameterError("pw_improvement_check requires a centrally symmetric convex domain");
    }
    PwImprovementReport report;
    report.c = c;
    report.area = spec.area;
    report.width = spec.width;
    report.diameter = spec.diameter;
    report.hypothesis = spec.area < c * spec.width * spec.diameter;
    report.bound_d2 = symmetric_planar_bound(spec.width, spec.area) * spec.diameter * spec.diameter;
    report.threshold = j * j / (c * c);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    report.conclusion = report.hypothesis && report.bound_d2 >= report.threshold && report.threshold > pi2;
    return report;
}

std::vector<BoundEntry> bound_entries(const DomainSpec& spec, double p) {
    if (!(p >= 2.0)) {
        throw ParameterError("bounds require p >= 2");
    }
    const double k = kn_lookup(spec).value;
    std::vector<BoundEntry> entries;
    entries.push_back({"main", main_bound(p, 2, k, spec.area), true, std::nullopt});
    if (p == 2.0) {
        entries.push_back({"payne_weinberger", payne_weinberger(spec.diameter), spec.convex, std::nullopt});
    }
    entries.push_back({"ashbaugh_mercado", ashbaugh_mercado(p, 2, k, spec.area), true, std::nullopt});
    if (p == 2.0) {
        entries.push_back({"bct_corollary", bct_corollary(2, k, spec.area), true, std::nullopt});
        entries.push_back({"symmetric_planar", symmetric_planar_bound(spec.width, spec.area), in_class_g(spec),
                           std::nullopt});
    }
    return entries;
}

BoundReport compare_report(const DomainSpec& spec, double p, int level) {
    BoundReport report;
    report.domain = spec.name();
    report.p = p;
    report.n = 2;
    report.level = level;
    report.entries = bound_entries(spec, p);
    if (p != 2.0) {
        return report;
    }
    if (level < 1) {
        throw ParameterError("compare_report requires level >= 1");
    }
    const auto [coarse, fine] = solve_pair(spec, level, &neumann_at);
    report.mu1_coarse = coarse;
    report.mu1 = fine;
    report.mu1_richardson = richardson(coarse, fine);
    for (auto& entry : report.entries) {
        entry.ratio = entry.value / fine;
        if (entry.applicable) {
            report.valid = report.valid && entry.value <= fine * (1.0 + 1e-2) &&
                           entry.value <= *report.mu1_richardson * (1.0 + 5e-3);
        }
    }
    return report;
}

RhombusStudy verify_rhombus(const std::vector<int>& ms, int level, double sandwich_tolerance) {
    if (level < 1) {
        throw ParameterError("verify_rhombus requires level >= 1");
    }
    const double j = bessel_first_zero(0.0);
    RhombusStudy study;
    for (int m : ms) {
        const DomainSpec spec = make_rhombus(m);
        RhombusRow row;
        row.m = m;
        row.beta = spec.rhombus_angle();
        row.alpha = std::pow(kn_lookup(spec).value / kn_whole_space(2), 2.0);
        row.lambda_sharp = lambda1_sharp(2.0, 2, spec.area);

        auto neumann = std::async(std::launch::async, [&] { return solve_pair(spec, level, &neumann_at); });
        const auto [dn_coarse, dn_fine] = solve_pair(spec, level, &half_rhombus_at);
        const auto [mu_coarse, mu_fine] = neumann.get();

        row.mu1 = mu_fine;
        row.mu1_richardson = richardson(mu_coarse, mu_fine);
        row.r_m = row.mu1_richardson / (row.alpha * row.lambda_sharp);
        row.lambda_dn = dn_fine;
        row.lambda_dn_richardson = richardson(dn_coarse, dn_fine);
        row.sandwich_low = j * j;
        const double c = std::cos(0.5 * row.beta);
        row.sandwich_high = j * j / (c * c);
        row.sandwich_ok = row.lambda_dn_richardson >= row.sandwich_low * (1.0 - sandwich_tolerance) &&
                          row.lambda_dn_richardson <= row.sandwich_high * (1.0 + sandwich_tolerance);
        if (!study.rows.empty() && !(row.r_m < study.rows.back().r_m)) {
            study.decreasing = false;
        }
        study.rows.push_back(row);
    }
    return study;
}

} // namespace spectral
