#include "spectral/bounds.hpp"
#include "spectral/errors.hpp"
#include "spectral/special.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace spectral;

namespace {
constexpr double j01 = 2.404825557695773;
constexpr double pi2 = std::numbers::pi * std::numbers::pi;

const BoundEntry& entry(const std::vector<BoundEntry>& entries, const std::string& name) {
    for (const auto& e : entries) {
        if (e.name == name) {
            return e;
        }
    }
    FAIL("missing entry " << name);
    throw;
}
} // namespace

TEST_CASE("relative isoperimetric constants") {
    CHECK(kn_lookup(make_rhombus(8)).value == doctest::Approx(std::sqrt(std::sqrt(2.0))).epsilon(1e-14));
    CHECK(kn_lookup(make_rectangle(1, 1)).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(kn_lookup(make_regular_polygon(4, std::sqrt(0.5))).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    for (int m : {5, 8, 16, 64}) {
        DomainSpec spec = make_rhombus(m);
        const double via_rule = kn_lookup(spec).value;
        spec.kind = DomainKind::regular_polygon;
        CHECK(kn_lookup(spec).value == doctest::Approx(via_rule).epsilon(1e-13));
    }
    CHECK_THROWS_WITH_AS(kn_lookup(make_regular_polygon(5, 1)), doctest::Contains("no known constant"),
                         ParameterError);
    CHECK(kn_whole_space(2) == doctest::Approx(2 * std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(kn_whole_space(3) == doctest::Approx(3 * std::cbrt(4 * std::numbers::pi / 3)).epsilon(1e-14));
}

TEST_CASE("main bound") {
    for (int m : {5, 8, 16, 64}) {
        const DomainSpec spec = make_rhombus(m);
        CHECK(main_bound(2, 2, kn_lookup(spec).value, spec.area) == doctest::Approx(j01 * j01).epsilon(1e-9));
        const double alpha = std::pow(kn_lookup(spec).value / kn_whole_space(2), 2);
        CHECK(alpha == doctest::Approx(std::sin(spec.rhombus_angle()) / (2 * std::numbers::pi)).epsilon(1e-13));
    }
    CHECK(main_bound(2, 2, std::sqrt(2.0), 1.0) == doctest::Approx(j01 * j01).epsilon(1e-9));
    for (int n : {2, 3, 4}) {
        const double area = unit_ball_volume(n);
        CHECK(main_bound(2, n, kn_whole_space(n), area) ==
              doctest::Approx(std::pow(2.0, 2.0 / n) * lambda1_ball(2, n, 1.0)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(main_bound(2, 2, -1, 1), ParameterError);
}

TEST_CASE("Payne-Weinberger") {
    CHECK(payne_weinberger(std::sqrt(2.0)) == doctest::Approx(pi2 / 2).epsilon(1e-15));
    const DomainSpec r8 = make_rhombus(8);
    const double c = std::cos(std::numbers::pi / 8);
    CHECK(payne_weinberger(r8.diameter) == doctest::Approx(pi2 / (4 * c * c)).epsilon(1e-13));
    for (double b : {1e-1, 1e-2, 1e-3}) {
        const DomainSpec thin = make_rectangle(1, b);
        CHECK(payne_weinberger(thin.diameter) <= pi2);
        CHECK(payne_weinberger(thin.diameter) / pi2 == doctest::Approx(1.0).epsilon(b * b));
    }
    CHECK_THROWS_AS(payne_weinberger(0), ParameterError);
}

TEST_CASE("Ashbaugh-Mercado") {
    CHECK(ashbaugh_mercado(2, 2, std::sqrt(2.0), 1.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(main_bound(2, 2, 1.3, 2.1) / ashbaugh_mercado(2, 2, 1.3, 2.1) ==
          doctest::Approx(j01 * j01 / 4).epsilon(1e-9));
    for (int p = 2; p <= 10; ++p) {
        for (int n = 2; n <= 10; ++n) {
            const double psi = cached_psi_profile(p, n).first_zero();
            const double ratio = main_bound(p, n, 1.1, 0.9) / ashbaugh_mercado(p, n, 1.1, 0.9);
            CHECK(ratio == doctest::Approx(std::pow(psi * p * (n - 1.0) / (n * n), p)).epsilon(1e-10));
            CHECK(ratio > 1.0);
        }
    }
    CHECK_THROWS_AS(ashbaugh_mercado(1.5, 2, 1, 1), ParameterError);
    CHECK_THROWS_AS(ashbaugh_mercado(2, 1, 1, 1), ParameterError);
}

TEST_CASE("p = 2 corollary") {
    const SupResult sup = bct_supremum(2);
    const RadialProfile& profile = cached_psi_profile(2, 2);
    const double near_one = sup_ratio(profile, 1.0, 1.0 + 1e-6);
    CHECK(sup.value > 0.0);
    CHECK(sup.value <= 1.0 + 1e-6);
    CHECK(sup.value >= near_one);
    CHECK(sup.q > 1.0);
    CHECK(sup.q <= 50.0);
    for (double q : {1.5, 2.0, 5.0, 20.0, 50.0}) {
        CHECK(sup_ratio(profile, 1.0, q) <= sup.value * (1 + 1e-12));
    }
    CHECK(std::isfinite(near_one));
    CHECK(near_one == doctest::Approx(sup_ratio(profile, 1.0, 1.0 + 2e-6)).epsilon(1e-5));

    for (const DomainSpec& spec : {make_rectangle(1, 1), make_rectangle(2, 1), make_rhombus(8), make_rhombus(16)}) {
        const double k = kn_lookup(spec).value;
        const double corollary = bct_corollary(2, k, spec.area);
        CHECK(main_bound(2, 2, k, spec.area) / corollary >= 1.0 - 1e-12);
    }
    CHECK(bct_corollary(2, std::sqrt(2.0), 1.0) <= j01 * j01 * (1 + 1e-12));
}

TEST_CASE("symmetric planar bound") {
    CHECK(symmetric_planar_bound(1, 1) == doctest::Approx(j01 * j01).epsilon(1e-14));
    CHECK(symmetric_planar_bound(1, 2) == doctest::Approx(j01 * j01 / 4).epsilon(1e-14));
    for (const DomainSpec& spec : {make_rectangle(1, 1), make_rectangle(3, 1), make_rhombus(8),
                                   make_regular_polygon(6, 1)}) {
        CHECK(symmetric_planar_bound(spec.width, spec.area) ==
              doctest::Approx(main_bound(2, 2, kn_lookup(spec).value, spec.area)).epsilon(1e-9));
    }
    CHECK(symmetric_planar_bound(make_rhombus(16).width, make_rhombus(16).area) ==
          doctest::Approx(j01 * j01).epsilon(1e-13));
}

TEST_CASE("improvement over Payne-Weinberger") {
    const auto square = pw_improvement_check(make_rectangle(1, 1), 0.75);
    CHECK(square.hypothesis);
    CHECK(square.conclusion);
    CHECK(square.threshold > pi2);
    CHECK(square.bound_d2 >= square.threshold);

    for (int m : {5, 8, 16, 64}) {
        const DomainSpec spec = make_rhombus(m);
        const double c = 0.75;
        const bool predicate = std::cos(0.5 * spec.rhombus_angle()) > 1 / (2 * c);
        CHECK(pw_improvement_check(spec, c).hypothesis == predicate);
    }
    CHECK_THROWS_AS(pw_improvement_check(make_rectangle(1, 1), j01 / std::numbers::pi), ParameterError);
    CHECK_THROWS_AS(pw_improvement_check(make_rectangle(1, 1), 0.77), ParameterError);
    CHECK_THROWS_AS(pw_improvement_check(make_rectangle(1, 1), 0.0), ParameterError);
    CHECK_THROWS_AS(pw_improvement_check(make_regular_polygon(5, 1), 0.5), ParameterError);
}

TEST_CASE("compare report on the unit square") {
    const BoundReport report = compare_report(make_rectangle(1, 1), 2, 5);
    REQUIRE(report.mu1);
    CHECK(*report.mu1 == doctest::Approx(pi2).epsilon(2e-3));
    CHECK(*report.mu1_richardson == doctest::Approx(pi2).epsilon(1e-4));
    CHECK(entry(report.entries, "main").value == doctest::Approx(j01 * j01).epsilon(1e-9));
    CHECK(entry(report.entries, "payne_weinberger").value == doctest::Approx(pi2 / 2).epsilon(1e-14));
    CHECK(entry(report.entries, "ashbaugh_mercado").value == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(entry(report.entries, "symmetric_planar").value == doctest::Approx(j01 * j01).epsilon(1e-14));
    for (const auto& e : report.entries) {
        CHECK(e.value <= *report.mu1);
        REQUIRE(e.ratio);
        CHECK(*e.ratio == doctest::Approx(e.value / *report.mu1));
    }
    CHECK(report.valid);
}

TEST_CASE("compare report sharpness and p = 3") {
    const BoundReport r64 = compare_report(make_rhombus(64), 2, 5);
    REQUIRE(r64.mu1);
    CHECK(entry(r64.entries, "main").value / *r64.mu1 >= 0.95);
    CHECK(r64.valid);

    const BoundReport r8 = compare_report(make_rhombus(8), 3, 5);
    CHECK_FALSE(r8.mu1);
    REQUIRE(r8.entries.size() == 2);
    CHECK(r8.entries[0].name == "main");
    CHECK(r8.entries[1].name == "ashbaugh_mercado");
    CHECK(r8.entries[0].value > r8.entries[1].value);
    CHECK_THROWS_AS(compare_report(make_rhombus(8), 1.5, 5), ParameterError);
}

TEST_CASE("rhombus study") {
    const RhombusStudy study = verify_rhombus({8, 16}, 4);
    REQUIRE(study.rows.size() == 2);
    CHECK(study.decreasing);
    for (const auto& row : study.rows) {
        CHECK(row.r_m > 2.0);
        CHECK(row.sandwich_ok);
        CHECK(row.sandwich_low == doctest::Approx(j01 * j01));
    }
    CHECK_THROWS_AS(verify_rhombus({8}, 0), ParameterError);
}
