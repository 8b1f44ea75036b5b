#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "skln/errors.hpp"
#include "skln/quadrature.hpp"
#include "skln/rootfind.hpp"

using namespace skln;

TEST_CASE("bracketed solvers") {
    auto f = [](double x) { return x * x * x - 2.0; };
    const Bracket b{0.0, 2.0, f(0.0), f(2.0)};
    CHECK(solve_bracketed(f, b) == doctest::Approx(std::cbrt(2.0)).epsilon(1e-12));
    CHECK(bisect(f, b) == doctest::Approx(std::cbrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(solve_bracketed(f, {2.0, 3.0, f(2.0), f(3.0)}), ArgumentError);
    // Never evaluates outside the bracket.
    auto guarded = [](double x) {
        REQUIRE(x >= 1.0);
        REQUIRE(x <= 5.0);
        return std::log(x) - 1.0;
    };
    CHECK(solve_bracketed(guarded, {1.0, 5.0, guarded(1.0), guarded(5.0)}) ==
          doctest::Approx(std::exp(1.0)).epsilon(1e-12));
}

TEST_CASE("p for a given T") {
    for (double T : {0.1, 1.0, 5.0}) {
        const double p = solve_p_for_T(T, 7, 2);
        CHECK(std::abs(T_of_p(p, 7, 2, 1e-13).value - T) < 1e-9);
    }
    CHECK(solve_p_for_T(0.3, 7, 2) < solve_p_for_T(0.31, 7, 2));
    CHECK_THROWS_AS(solve_p_for_T(0.0, 7, 2), ArgumentError);
    CHECK_THROWS_AS(solve_p_for_T(1e-60, 7, 2), UnboundedBracketError);

    // Tabulate T_p on a fine grid and invert linearly.
    std::vector<double> ps, ts;
    for (int i = 0; i < 2000; ++i) {
        ps.push_back(-1.5 + 1.5 * i / 1999.0);
        ts.push_back(oracle::T_of_p(ps.back(), 7, 2, 2000, 100));
    }
    const double target = 0.5;
    double tab = 0.0;
    for (std::size_t i = 1; i < ts.size(); ++i) {
        if (ts[i - 1] <= target && target <= ts[i]) {
            tab = ps[i - 1] + (ps[i] - ps[i - 1]) * (target - ts[i - 1]) / (ts[i] - ts[i - 1]);
        }
    }
    CHECK(std::abs(solve_p_for_T(target, 7, 2) - tab) < 1e-6);
}

TEST_CASE("smooth-case slope") {
    // Strongly unequal data on a thin annulus.
    const auto spec = ProblemSpec::finite(7, 2, 1.0, 1.1, 1.0, 30.0);
    REQUIRE(spec.p_a() > spec.p_b());
    REQUIRE(spec.log_ratio() < 2.0 * T_bc(spec).quad.value);
    const auto sol = solve_qa(spec);
    CHECK(sol.q_a < -1.0);
    CHECK(sol.H == doctest::Approx(first_integral(spec.p_a(), sol.q_a, 7, 2)).epsilon(1e-9));
    const double resub = oracle::xi_transit(spec.p_b(), spec.p_a(), sol.s, 7, 2);
    CHECK(std::abs(resub - spec.log_ratio()) < 1e-8);

    // Orientation and regime errors.
    CHECK_THROWS_AS(solve_qa(spec.inverted()), RegimeError);
    CHECK_THROWS_AS(solve_qa(ProblemSpec::finite(7, 2, 1.0, 10.0, 1.0, 1.0)), RegimeError);
    CHECK_THROWS_AS(solve_p_case4(spec), RegimeError);
}

TEST_CASE("equal constants give an interior jump, not the smooth case") {
    for (auto spec : {ProblemSpec::finite(7, 2, 1.0, 1.1, 10.0, 10.0),
                      ProblemSpec::finite(7, 2, 1.0, 1.05, 100.0, 100.0),
                      ProblemSpec::finite(7, 2, 1.0, 1.2, 5.0, 5.0)}) {
        CHECK(spec.log_ratio() > 2.0 * T_bc(spec).quad.value);
        CHECK_THROWS_AS(solve_qa(spec), RegimeError);
    }
}

TEST_CASE("smooth-case slope near the frontier") {
    // As ln(b/a) approaches 2 T_bc from below, q_a tends to -1.
    const auto edge = fixture::frontier(7, 2, 0.5, -1.0);
    double prev = -1e300;
    for (double shrink : {0.9, 0.99, 0.999, 0.99999}) {
        const double b = std::exp(shrink * edge.log_ratio());
        const auto spec = fixture::from_ordinates(7, 2, 1.0, b, 0.5, -1.0);
        const auto sol = solve_qa(spec);
        CHECK(sol.q_a > prev);
        prev = sol.q_a;
    }
    CHECK(prev > -1.01);
}

TEST_CASE("fold level of the jump solution") {
    const double L = std::log(10.0);
    const auto spec = ProblemSpec::finite(7, 2, 1.0, 10.0, 1.0, 1.0);
    const double p = solve_p_case4(spec);
    CHECK(p >= std::max(spec.p_a(), spec.p_b()));
    const double resid =
        oracle::kernel_integral(spec.p_b() - p, p, 7, 2) + oracle::kernel_integral(spec.p_a() - p, p, 7, 2) - L;
    CHECK(std::abs(resid) < 1e-8);

    // p_a = p_b: symmetric and centred.
    const auto sym = fixture::from_ordinates(7, 2, 1.0, 10.0, -0.5, -0.5);
    const double ps = solve_p_case4(sym);
    CHECK(std::abs(matching_radius(ps, sym) - std::sqrt(10.0)) < 1e-10);

    // The right-hand side increases with p.
    double prev = -1.0;
    for (int i = 0; i < 100; ++i) {
        const double q = std::max(spec.p_a(), spec.p_b()) + 0.05 * i;
        const auto g = glue_times(q, spec);
        CHECK(g.t_plus + g.t_minus > prev);
        prev = g.t_plus + g.t_minus;
    }

    // Infinite data reduces to the symmetric construction.
    const auto inf = ProblemSpec::infinite(7, 2, 1.0, 10.0);
    CHECK(solve_p_case4(inf) == solve_p_for_T(0.5 * L, 7, 2));
    CHECK(matching_radius(solve_p_case4(inf), inf) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-15));
}

TEST_CASE("the fold sits nearer the sphere with the larger ordinate") {
    // p_a > p_b: the inner branch is shorter, so m < sqrt(ab).
    const auto spec = fixture::from_ordinates(7, 2, 1.0, 10.0, 0.2, -1.5);
    const double p = solve_p_case4(spec);
    const double m = matching_radius(p, spec);
    CHECK(m < std::sqrt(10.0));
    CHECK(m > 1.0);
    const auto flipped = fixture::from_ordinates(7, 2, 1.0, 10.0, -1.5, 0.2);
    CHECK(matching_radius(solve_p_case4(flipped), flipped) == doctest::Approx(10.0 / m).epsilon(1e-9));
}
