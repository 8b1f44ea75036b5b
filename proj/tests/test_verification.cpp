#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "skln/errors.hpp"
#include "skln/solver.hpp"
#include "skln/verification.hpp"

using namespace skln;

namespace {

struct Built {
    ProblemSpec spec;
    CylinderProfile profile;
};

Built build(const ProblemSpec& spec) {
    return {spec, build_profile(spec, classify(spec))};
}

bool check_passed(const VerificationReport& rep, const std::string& name) {
    const auto* c = rep.find(name);
    REQUIRE(c != nullptr);
    return c->passed;
}

std::vector<ProblemSpec> regime_specs(int n, int k) {
    return {ProblemSpec::infinite(n, k, 1.0, 10.0),
            fixture::relative_to_frontier(n, k, 0.5, -1.0, 0.5),
            fixture::frontier(n, k, 0.5, -1.0),
            fixture::frontier(n, k, -1.0, 0.5),
            fixture::relative_to_frontier(n, k, 0.5, -1.0, 1.5),
            fixture::from_ordinates(n, k, 1.0, 3.0, 0.2, 0.2)};
}

}  // namespace

TEST_CASE("audit passes on every regime") {
    const std::vector<std::pair<int, int>> orders{{3, 2}, {4, 2}, {7, 2}, {5, 3}, {6, 4}, {6, 6}};
    for (const auto& [n, k] : orders) {
        for (const auto& spec : regime_specs(n, k)) {
            CAPTURE(n);
            CAPTURE(k);
            CAPTURE(spec.log_ratio());
            const auto b = build(spec);
            const auto rep = audit(b.profile, spec);
            CAPTURE(to_string(rep.regime));
            for (const auto& c : rep.checks) {
                CAPTURE(c.name);
                CAPTURE(c.detail);
                CAPTURE(c.value);
                CHECK(c.passed);
            }
            CHECK(rep.passed);
            CHECK(rep.cone_ok);
            CHECK(rep.H_drift < 1e-8);
            CHECK(rep.pde_residual_rel < 1e-6);
            const bool smooth = rep.regime == RegimeTag::Case1Smooth;
            CHECK(rep.holder_exponent_fit.has_value() == !smooth);
            CHECK(rep.jump_left.has_value() == b.profile.has_jump());
            CHECK(rep.boundary_slope_fit.has_value() == spec.is_infinite());
        }
    }
}

TEST_CASE("symmetric jump values") {
    const auto b = build(ProblemSpec::infinite(7, 2, 1.0, 10.0));
    const auto rep = audit(b.profile, b.spec);
    REQUIRE(rep.jump_left);
    CHECK(std::abs(*rep.jump_left + 5.0 / std::sqrt(10.0)) < 1e-6 * 5.0 / std::sqrt(10.0));
    CHECK(std::abs(*rep.jump_right) < 1e-6 * 5.0 / std::sqrt(10.0));
    REQUIRE(rep.boundary_slope_fit);
    CHECK(*rep.boundary_slope_fit == doctest::Approx(-2.5).epsilon(0.01));
    REQUIRE(rep.certificate);
    CHECK(rep.certificate->passed);
}

TEST_CASE("fault injection") {
    const auto base = build(ProblemSpec::infinite(7, 2, 1.0, 10.0));
    REQUIRE(audit(base.profile, base.spec).passed);
    const std::size_t j = *base.profile.jump_index();
    // A left-branch row well inside the exclusion bands.
    std::size_t mid = 0;
    for (std::size_t i = 0; i < j; ++i) {
        if (std::abs(base.profile.t()[i] + 0.5 * base.spec.half_width()) <
            std::abs(base.profile.t()[mid] + 0.5 * base.spec.half_width())) {
            mid = i;
        }
    }

    SUBCASE("slope clamped inside the cone boundary") {
        auto p = base.profile;
        p.mutable_xi_p()[mid] = -0.5;
        const auto rep = audit(p, base.spec);
        CHECK_FALSE(rep.passed);
        CHECK_FALSE(check_passed(rep, "cone"));
    }
    SUBCASE("one branch on a different level") {
        auto p = base.profile;
        const LevelSet other(p.level().H() * (1.0 - 1e-3), 7, 2);
        for (std::size_t i = j + 2; i < p.size(); ++i) {
            p.mutable_xi_p()[i] = -other.speed(p.xi()[i]);
        }
        const auto rep = audit(p, base.spec);
        CHECK_FALSE(rep.passed);
        CHECK_FALSE(check_passed(rep, "first_integral"));
        CHECK(rep.H_drift > 1e-8);
    }
    SUBCASE("flipped slope sign") {
        auto p = base.profile;
        p.mutable_xi_p()[mid] = -p.xi_p()[mid];
        const auto rep = audit(p, base.spec);
        CHECK_FALSE(check_passed(rep, "cone"));
        CHECK(check_passed(rep, "first_integral"));
    }
    SUBCASE("displaced sample") {
        auto p = base.profile;
        p.mutable_xi()[mid] += 1e-3;
        const auto rep = audit(p, base.spec);
        CHECK_FALSE(check_passed(rep, "pde_residual"));
        CHECK_FALSE(check_passed(rep, "slope_consistency"));
    }
    SUBCASE("scaled slope") {
        auto p = base.profile;
        p.mutable_xi_p()[mid] *= 1.001;
        const auto rep = audit(p, base.spec);
        CHECK_FALSE(check_passed(rep, "slope_consistency"));
    }
    SUBCASE("wrong one-sided limit") {
        auto p = base.profile;
        for (std::size_t i = j + 1; i < j + 5; ++i) p.mutable_xi_p()[i] -= 1e-3;
        const auto rep = audit(p, base.spec);
        CHECK_FALSE(check_passed(rep, "jump_values"));
    }
    SUBCASE("linear approach to the fold") {
        auto p = base.profile;
        for (std::size_t i = j + 2; i < p.size(); ++i) {
            p.mutable_xi_p()[i] = -1.0 - 3.0 * (p.t()[i] - p.t()[j + 1]);
        }
        const auto rep = audit(p, base.spec);
        CHECK_FALSE(check_passed(rep, "holder_exponent"));
        REQUIRE(rep.holder_exponent_fit);
        CHECK(*rep.holder_exponent_fit == doctest::Approx(1.0).epsilon(0.01));
    }
}

TEST_CASE("Hoelder exponent is 1/k") {
    for (int k : {2, 3, 4}) {
        const auto b = build(ProblemSpec::infinite(7, k, 1.0, 10.0));
        const auto fit = fit_holder_exponent(b.profile);
        CHECK(fit.samples >= 10);
        CHECK(std::abs(fit.exponent * k - 1.0) < 0.05);
        CHECK(fit.stderr_ < 0.01);

        // Both sides of the jump agree.
        const std::size_t j = *b.profile.jump_index();
        const auto left = fit_holder_exponent(b.profile, {b.profile.t()[j], Anchor::Side::Left, j});
        CHECK(left.exponent == doctest::Approx(fit.exponent).epsilon(1e-6));

        // Reflection t -> -t exchanges the singular endpoints of the frontier cases.
        const auto c3 = build(fixture::frontier(7, k, 0.3, -1.5));
        const auto c2 = build(fixture::frontier(7, k, -1.5, 0.3));
        const double e3 = fit_holder_exponent(c3.profile).exponent;
        const double e2 = fit_holder_exponent(c2.profile).exponent;
        CHECK(std::abs(e3 * k - 1.0) < 0.05);
        CHECK(e2 == doctest::Approx(e3).epsilon(1e-9));
    }
}

TEST_CASE("sharpness witness") {
    for (int k : {2, 3}) {
        const auto b = build(ProblemSpec::infinite(7, k, 1.0, 10.0));
        const double g = 1.0 / k;
        const auto at = sharpness_witness(b.profile, g);
        CHECK_FALSE(at.found);
        const auto above = sharpness_witness(b.profile, g + 0.2);
        CHECK(above.found);
        CHECK(above.required_ratio == doctest::Approx(std::pow(2.0, 0.2 - 0.02)));
        for (double r : above.ratios) CHECK(r >= above.required_ratio);
        for (std::size_t i = 1; i < 4; ++i) CHECK(above.quotients[i] > above.quotients[i - 1]);
        CHECK(std::abs(above.t2[1] - above.t1) == doctest::Approx(0.5 * std::abs(above.t2[0] - above.t1)));
    }
    const auto k2 = build(ProblemSpec::infinite(7, 2, 1.0, 10.0));
    CHECK(sharpness_witness(k2.profile, 1.0).found);

    const auto smooth = build(fixture::relative_to_frontier(7, 2, 0.5, -1.0, 0.5));
    CHECK_THROWS_AS(sharpness_witness(smooth.profile, 0.7), NoWitnessError);
    CHECK_THROWS_AS(fit_holder_exponent(smooth.profile), ArgumentError);
    CHECK_THROWS_AS(fit_holder_exponent(k2.profile, HolderWindow{1e-12, 2e-12}), ResolutionError);
}

TEST_CASE("slope extrapolation") {
    const auto b = build(fixture::frontier(5, 3, 0.5, -1.0));
    const auto anchor = b.profile.singular_anchor();
    REQUIRE(anchor);
    CHECK(anchor->side == Anchor::Side::Right);
    CHECK(std::abs(extrapolate_slope(b.profile, *anchor) + 1.0) < 1e-6);
}

TEST_CASE("smooth profile report") {
    const auto b = build(fixture::relative_to_frontier(5, 2, 0.5, -1.0, 0.5));
    const auto rep = audit(b.profile, b.spec);
    CHECK(rep.passed);
    CHECK_FALSE(rep.find("jump_values")->enabled);
    CHECK_FALSE(rep.find("holder_exponent")->enabled);
    CHECK_FALSE(rep.find("boundary_slope")->enabled);
    CHECK(rep.find("touching_certificate")->detail == "no jump; certificate vacuous");
    CHECK(rep.find("no_such_check") == nullptr);
}
