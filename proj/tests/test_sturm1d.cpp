#include "spectral/bounds.hpp"
#include "spectral/errors.hpp"
#include "spectral/fem.hpp"
#include "spectral/rearrangement.hpp"
#include "spectral/special.hpp"
#include "spectral/sturm1d.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace spectral;

namespace {
constexpr double j01 = 2.404825557695773;
constexpr double j11_prime = 1.841183781340659;
} // namespace

TEST_CASE("disk oracle") {
    const double sigma = sigma1({2.0, 1.0, std::numbers::pi, 4096});
    CHECK(sigma == doctest::Approx(j01 * j01 / (4 * std::numbers::pi)).epsilon(1e-4));
}

TEST_CASE("homogeneity in A") {
    for (const auto& [gamma, beta] : {std::pair{2.0, 1.0}, std::pair{1.5, 0.75}, std::pair{3.0, 0.5}}) {
        CAPTURE(gamma);
        const double base = sigma1({gamma, beta, 0.7, 2048});
        const double scaled = sigma1({gamma, beta, 1.4, 2048});
        CHECK(scaled / base == doctest::Approx(std::pow(2.0, beta - gamma)).epsilon(1e-6));
    }
    const double a = sigma1({2.0, 1.0, 2.0, 1024});
    const double b = sigma1({2.0, 1.0, 1.0, 1024});
    CHECK(b == doctest::Approx(2 * a).epsilon(1e-10));
}

TEST_CASE("grid refinement") {
    const SturmProblem base{1.5, 0.75, 1.3, 128};
    std::vector<double> sigmas;
    for (int n : {128, 256, 512, 1024, 2048}) {
        SturmProblem pb = base;
        pb.intervals = n;
        sigmas.push_back(sigma1(pb));
    }
    for (std::size_t i = 1; i < sigmas.size(); ++i) {
        CHECK(sigmas[i] <= sigmas[i - 1] * (1 + 1e-12));
    }
    for (std::size_t i = 2; i < sigmas.size(); ++i) {
        CHECK(std::abs(sigmas[i] - sigmas[i - 1]) <= 0.5 * std::abs(sigmas[i - 1] - sigmas[i - 2]));
    }
}

TEST_CASE("minimizer shape and Hardy bound") {
    for (const auto& pb : {SturmProblem{2.0, 1.0, 1.0, 1024}, SturmProblem{1.5, 0.75, 2.0, 1024},
                           SturmProblem{4.0, 2.0, 0.3, 1024}, SturmProblem{1.2, 0.1, 5.0, 1024}}) {
        CAPTURE(pb.gamma);
        const SturmSolution sol = sturm_solve(pb);
        CHECK(sol.phi.front() == 0.0);
        for (std::size_t i = 1; i < sol.phi.size(); ++i) {
            REQUIRE(sol.phi[i] > 0.0);
            REQUIRE(sol.phi[i] >= sol.phi[i - 1]);
        }
        CHECK(sturm_quotient(pb, sol.grid, sol.phi) == doctest::Approx(sol.sigma).epsilon(1e-9));
        CHECK(sol.sigma >= hardy_lower_bound(pb));
        CHECK(sol.grid.back() == pb.length);
    }
}

TEST_CASE("consistency with the square and the disk") {
    const auto square = sturm_consistency(2, 2, std::sqrt(2.0), std::numbers::pi * std::numbers::pi);
    CHECK(square.rel_err <= 1e-3);
    CHECK(square.sigma_target == doctest::Approx(std::numbers::pi * std::numbers::pi / 2));
    CHECK(square.sigma_computed >= square.hardy_bound);

    const auto disk = sturm_consistency(2, 2, 2 * std::sqrt(std::numbers::pi), j11_prime * j11_prime);
    CHECK(disk.rel_err <= 1e-3);
    CHECK(disk.length == doctest::Approx(std::numbers::pi * j01 * j01 / (j11_prime * j11_prime)).epsilon(1e-10));
}

TEST_CASE("p = 3 round trip with L = 1") {
    const double k = std::sqrt(2.0);
    const double psi = cached_psi_profile(3, 2).first_zero();
    // L = (K/2)^2 (psi^3/mu1)^{2/3} = 1
    const double mu1 = std::pow(psi, 3) * std::pow(k / 2, 3);
    const auto report = sturm_consistency(3, 2, k, mu1);
    CHECK(report.length == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.rel_err <= 1e-3);
    CHECK(report.sigma_target == doctest::Approx(std::sqrt(mu1 / std::pow(k, 3))).epsilon(1e-14));
}

TEST_CASE("L bound") {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const auto square = check_L_bound(2, 2, std::sqrt(2.0), pi2, 0.5, 1.0);
    CHECK(square.ok);
    CHECK(square.margin_half >= 0.0);
    CHECK(square.length == doctest::Approx(j01 * j01 / (2 * pi2)).epsilon(1e-8));

    const DomainSpec r8 = make_rhombus(8);
    const Mesh mesh = triangulate(r8, 5);
    const EigenPair pair = solve_neumann_mu1(mesh);
    const RearrangedProfile profile = rearrange_eigenfunction(mesh, pair.eigenvector);
    const auto rhombus = check_L_bound(2, 2, kn_lookup(r8).value, pair.eigenvalue, profile.positive_measure(),
                                       profile.measure());
    CHECK(rhombus.ok);
    CHECK(rhombus.s_tilde == doctest::Approx(r8.area / 2).epsilon(1e-3));
    CHECK(rhombus.margin_positive >= -1e-3);
    CHECK(rhombus.margin_negative >= -1e-3);
    CHECK(rhombus.margin_half >= -1e-3);

    const auto degenerate = check_L_bound(2, 2, std::sqrt(2.0), pi2, 1e-6, 1.0);
    CHECK_FALSE(degenerate.ok);
    CHECK(degenerate.margin_positive < 0.0);
}

TEST_CASE("invalid problems") {
    CHECK_THROWS_AS(sigma1({1.0, 0.5, 1.0, 100}), ParameterError);
    CHECK_THROWS_AS(sigma1({2.0, 2.0, 1.0, 100}), ParameterError);
    CHECK_THROWS_AS(sigma1({2.0, 0.0, 1.0, 100}), ParameterError);
    CHECK_THROWS_AS(sigma1({2.0, 1.0, -1.0, 100}), ParameterError);
    CHECK_THROWS_AS(sigma1({2.0, 1.0, 1.0, 1}), ParameterError);
    CHECK_THROWS_AS(isoperimetric_length(2, 2, 0.0, 1.0), ParameterError);
    const auto grid = sturm_grid(1.0, 8);
    CHECK_THROWS_AS(sturm_quotient({2.0, 1.0, 1.0, 8}, grid, std::vector<double>(9, 0.0)), ParameterError);
    CHECK_THROWS_AS(sturm_quotient({2.0, 1.0, 1.0, 8}, grid, std::vector<double>(4, 1.0)), ParameterError);
}

TEST_CASE("iteration cap") {
    try {
        sigma1({2.0, 1.0, 1.0, 256}, {1e-10, 2});
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.last_residual() > 0.0);
        CHECK(std::isfinite(e.last_residual()));
    }
}
