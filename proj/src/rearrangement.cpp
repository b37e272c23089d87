#include "spectral/rearrangement.hpp"

#include "spectral/errors.hpp"

#include <algorithm>
#include <cmath>
#include <array>

namespace spectral {

namespace {

// Measure between the top of a segment piece and level top - x.
double segment_mass(const RearrangedProfile::Piece& pc, double x) {
    const double span = pc.top - pc.bottom;
    const double c = (pc.density_bottom - pc.density_top) / (2.0 * span);
    return pc.density_top * x + c * x * x;
}

} // namespace

RearrangedProfile::RearrangedProfile(double measure, std::vector<Piece> pieces)
    : measure_(measure), pieces_(std::move(pieces)) {
    if (pieces_.empty()) {
        throw ParameterError("RearrangedProfile: no pieces");
    }
}

std::size_t RearrangedProfile::locate(double s) const {
    const auto it = std::upper_bound(pieces_.begin(), pieces_.end(), s,
                                     [](double value, const Piece& pc) { return value < pc.s_begin; });
    return it == pieces_.begin() ? 0 : static_cast<std::size_t>(it - pieces_.begin() - 1);
}

double RearrangedProfile::piece_level(std::size_t k, double sigma) const {
    const Piece& pc = pieces_[k];
    if (pc.atom || sigma <= 0.0) {
        return pc.top;
    }
    const double span = pc.top - pc.bottom;
    const double c = (pc.density_bottom - pc.density_top) / (2.0 * span);
    const double disc = std::max(0.0, pc.density_top * pc.density_top + 4.0 * c * sigma);
    const double denom = pc.density_top + std::sqrt(disc);
    if (!(denom > 0.0)) {
        return pc.top;
    }
    const double x = std::clamp(2.0 * sigma / denom, 0.0, span);
    return pc.top - x;
}

double RearrangedProfile::value(double s) const {
    if (s >= pieces_.back().s_end) {
        return pieces_.back().bottom;
    }
    const std::size_t k = locate(std::max(s, 0.0));
    return piece_level(k, s - pieces_[k].s_begin);
}

double RearrangedProfile::distribution(double t) const {
    const auto it = std::partition_point(pieces_.begin(), pieces_.end(), [t](const Piece& pc) {
        return pc.atom ? pc.top > t : pc.bottom >= t;
    });
    if (it == pieces_.end()) {
        return pieces_.back().s_end;
    }
    if (it->atom || it->top <= t) {
        return it->s_begin;
    }
    return it->s_begin + segment_mass(*it, it->top - t);
}

double RearrangedProfile::mean_integral() const {
    return integrate([](double tau) { return tau; }, measure_);
}

double RearrangedProfile::absolute_power_integral(double q) const {
    return integrate([q](double tau) { return std::pow(std::abs(tau), q); }, measure_);
}

std::vector<std::pair<double, double>> RearrangedProfile::samples(int grid_points) const {
    std::vector<double> s;
    s.reserve(grid_points + 2 * pieces_.size());
    for (int i = 0; i < grid_points; ++i) {
        s.push_back(measure_ * i / std::max(1, grid_points - 1));
    }
    for (const auto& pc : pieces_) {
        s.push_back(pc.s_begin);
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    std::vector<std::pair<double, double>> out;
    out.reserve(s.size());
    for (double v : s) {
        out.emplace_back(v, value(v));
    }
    return out;
}

RearrangedProfile rearrange(const Mesh& mesh, std::span<const double> nodal) {
    if (mesh.elements.empty()) {
        throw ParameterError("rearrange: empty mesh");
    }
    if (nodal.size() != mesh.nodes.size()) {
        throw ParameterError("rearrange: nodal value count does not match node count");
    }
    for (double v : nodal) {
        if (!std::isfinite(v)) {
            throw ParameterError("rearrange: nodal values must be finite");
        }
    }

    std::vector<double> levels(nodal.begin(), nodal.end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    const std::size_t count = levels.size();
    auto index_of = [&](double v) {
        return static_cast<std::size_t>(std::lower_bound(levels.begin(), levels.end(), v) - levels.begin());
    };

    // Density -m'(t) on interval j = (levels[j], levels[j+1]), at both ends.
    std::vector<double> density_low(count, 0.0);
    std::vector<double> density_high(count, 0.0);
    std::vector<double> atoms(count, 0.0);
    double measure = 0.0;

    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
        const double area = signed_area(mesh, e);
        measure += area;
        std::array<double, 3> u{nodal[mesh.elements[e][0]], nodal[mesh.elements[e][1]], nodal[mesh.elements[e][2]]};
        std::sort(u.begin(), u.end());
        const double u0 = u[0];
        const double u1 = u[1];
        const double u2 = u[2];
        if (u2 == u0) {
            atoms[index_of(u0)] += area;
            continue;
        }
        const std::size_t i0 = index_of(u0);
        const std::size_t i1 = index_of(u1);
        const std::size_t i2 = index_of(u2);
        if (u1 > u0) {
            const double scale = 2.0 * area / ((u2 - u0) * (u1 - u0));
            for (std::size_t j = i0; j < i1; ++j) {
                density_low[j] += scale * (levels[j] - u0);
                density_high[j] += scale * (levels[j + 1] - u0);
            }
        }
        if (u2 > u1) {
            const double scale = 2.0 * area / ((u2 - u0) * (u2 - u1));
            for (std::size_t j = i1; j < i2; ++j) {
                density_low[j] += scale * (u2 - levels[j]);
                density_high[j] += scale * (u2 - levels[j + 1]);
            }
        }
    }

    std::vector<RearrangedProfile::Piece> pieces;
    pieces.reserve(2 * count);
    double s = 0.0;
    for (std::size_t jj = count; jj-- > 0;) {
        if (atoms[jj] > 0.0) {
            RearrangedProfile::Piece atom;
            atom.atom = true;
            atom.top = atom.bottom = levels[jj];
            atom.s_begin = s;
            s += atoms[jj];
            atom.s_end = s;
            pieces.push_back(atom);
        }
        if (jj == 0) {
            break;
        }
        const std::size_t j = jj - 1;
        RearrangedProfile::Piece seg;
        seg.top = levels[jj];
        seg.bottom = levels[j];
        seg.density_top = density_high[j];
        seg.density_bottom = density_low[j];
        const double mass = 0.5 * (seg.density_top + seg.density_bottom) * (seg.top - seg.bottom);
        if (!(mass > 0.0)) {
            continue;
        }
        seg.s_begin = s;
        s += mass;
        seg.s_end = s;
        pieces.push_back(seg);
    }
    return RearrangedProfile(measure, std::move(pieces));
}

RearrangedProfile rearrange_eigenfunction(const Mesh& mesh, std::span<const double> nodal) {
    RearrangedProfile profile = rearrange(mesh, nodal);
    if (profile.positive_measure() <= 0.5 * profile.measure()) {
        return profile;
    }
    std::vector<double> flipped(nodal.begin(), nodal.end());
    for (double& v : flipped) {
        v = -v;
    }
    return rearrange(mesh, flipped);
}

CumulativePower::CumulativePower(const RearrangedProfile& profile, double q)
    : profile_(&profile), q_(q), prefix_(profile.pieces().size() + 1, 0.0) {
    if (!(q > 0.0)) {
        throw ParameterError("cumulative_power: exponent must be > 0");
    }
    const auto& pieces = profile.pieces();
    auto g = [q](double tau) { return tau > 0.0 ? std::pow(tau, q) : 0.0; };
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        prefix_[k + 1] = prefix_[k] + profile.piece_integral(k, pieces[k].bottom, pieces[k].top, g);
    }
}

double CumulativePower::operator()(double s) const {
    const auto& pieces = profile_->pieces();
    if (s <= 0.0) {
        return 0.0;
    }
    if (s >= pieces.back().s_end) {
        return prefix_.back();
    }
    const auto it = std::upper_bound(pieces.begin(), pieces.end(), s,
                                     [](double value, const RearrangedProfile::Piece& pc) { return value < pc.s_begin; });
    const std::size_t k = static_cast<std::size_t>(it - pieces.begin() - 1);
    const auto& pc = pieces[k];
    auto g = [q = q_](double tau) { return tau > 0.0 ? std::pow(tau, q) : 0.0; };
    if (pc.atom) {
        return prefix_[k] + g(pc.top) * (s - pc.s_begin);
    }
    const double level = profile_->piece_level(k, s - pc.s_begin);
    return prefix_[k] + profile_->piece_integral(k, level, pc.top, g);
}

CumulativePower cumulative_power(const RearrangedProfile& profile, double q) { return CumulativePower(profile, q); }

double lq_norm_positive(const RearrangedProfile& profile, double q) {
    if (!(q > 0.0)) {
        throw ParameterError("lq_norm_positive: exponent must be > 0");
    }
    return std::pow(CumulativePower(profile, q).total(), 1.0 / q);
}

ChitiReport chiti_check(const RearrangedProfile& u_profile, const RadialProfile& ball, double q, double length,
                        int grid, double tolerance) {
    if (!(length > 0.0)) {
        throw ParameterError("chiti_check: L must be > 0");
    }
    if (grid < 1) {
        throw ParameterError("chiti_check: grid must be >= 1");
    }
    const CumulativePower u_power(u_profile, q);
    const RadialMoments v_power(ball, q);
    const double u_total = u_power.total();
    if (!(u_total > 0.0)) {
        throw ParameterError("chiti_check: eigenfunction has no positive part");
    }
    const double v_total = v_power.total();
    const double psi = ball.first_zero();
    const double n = ball.n();

    ChitiReport report;
    report.length = length;
    report.s_tilde = u_profile.positive_measure();
    report.length_violation = length - report.s_tilde > tolerance * u_profile.measure();
    report.max_violation = -HUGE_VAL;
    for (int j = 1; j <= grid; ++j) {
        const double s = length * j / grid;
        const double u = u_power(s) / u_total;
        // Radial ball of measure L: v*(s) = c Psi(psi (s/L)^{1/n}).
        const double v = v_power(psi * std::pow(s / length, 1.0 / n)) / v_total;
        if (u - v > report.max_violation) {
            report.max_violation = u - v;
            report.s_at_max = s;
            report.u_at_max = u;
            report.v_at_max = v;
        }
    }
    return report;
}

ReverseHolderReport reverse_holder_check(const RearrangedProfile& u_profile, const RadialProfile& ball, double k_const,
                                         double mu1, double q, double r, double tolerance) {
    if (!(r > 0.0) || !(r < q)) {
        throw ParameterError("reverse_holder_check requires 0 < r < q");
    }
    if (!(k_const > 0.0) || !(mu1 > 0.0)) {
        throw ParameterError("reverse_holder_check requires K > 0 and mu1 > 0");
    }
    const double p = ball.p();
    const int n = ball.n();
    const double omega = unit_ball_volume(n);
    const double alpha = std::pow(k_const / (n * std::pow(omega, 1.0 / n)), p);
    const double scale = std::pow(mu1 / alpha, 1.0 / p);

    // ||v1||_s^s = n omega_n scale^{-n} int_0^psi t^{n-1} Psi(t)^s dt
    auto ball_norm = [&](double s) {
        const RadialMoments moments(ball, s);
        return std::pow(n * omega * std::pow(scale, -n) * moments.total(), 1.0 / s);
    };

    ReverseHolderReport report;
    report.radius = ball.first_zero() / scale;
    report.norm_q = lq_norm_positive(u_profile, q);
    report.norm_r = lq_norm_positive(u_profile, r);
    report.lhs = report.norm_q / report.norm_r;
    report.rhs = ball_norm(q) / ball_norm(r);
    report.ok = report.lhs <= report.rhs + tolerance;
    return report;
}

} // namespace spectral
