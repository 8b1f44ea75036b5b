#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "skln/cylinder.hpp"
#include "skln/errors.hpp"
#include "skln/symfuncs.hpp"

using namespace skln;

namespace {

// Radial u whose cylinder profile (centre radius 1) is the quadratic through
// the given state at t0 = ln r0.
std::function<double(double)> quadratic_profile(double r0, double xi, double xp, double xpp, int n) {
    return [=](double r) {
        const double dt = std::log(r) - std::log(r0);
        const double x = xi + xp * dt + 0.5 * xpp * dt * dt;
        return std::exp(-0.5 * (n - 2) * (x + std::log(r)));
    };
}

}  // namespace

TEST_CASE("cylinder change of variables") {
    const auto spec = ProblemSpec::infinite(5, 2, 1.0, 4.0);
    const double c = std::sqrt(4.0);
    const auto p = to_cylinder(c, std::pow(4.0, -(5 - 2) / 4.0), spec);
    CHECK(p.t == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std::abs(p.xi) < 1e-15);
    for (double r : {1.1, 2.0, 3.7}) {
        CHECK(std::abs(to_cylinder(r, std::pow(r, -1.5), spec).xi) < 1e-14);
    }
    CHECK_THROWS_AS(to_cylinder(0.5, 1.0, spec), DomainError);
    CHECK_THROWS_AS(to_cylinder(4.0, 1.0, spec), DomainError);
    CHECK_THROWS_AS(to_cylinder(2.0, 0.0, spec), DomainError);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ur(1.0001, 3.999), uu(0.01, 100.0);
    for (int i = 0; i < 100; ++i) {
        const double r = ur(rng), u = uu(rng);
        const auto cp = to_cylinder(r, u, spec);
        const auto rp = from_cylinder(cp.t, cp.xi, spec);
        CHECK(std::abs(rp.r - r) <= 1e-14 * r);
        CHECK(std::abs(rp.u - u) <= 1e-14 * u);
    }
}

TEST_CASE("radial log-derivative from the slope") {
    const int n = 7;
    const double r = std::sqrt(10.0);
    CHECK(dlnu_dr_from_slope(-1.0, r, n) == 0.0);
    CHECK(dlnu_dr_from_slope(1.0, r, n) == doctest::Approx(-(n - 2) / r).epsilon(1e-15));
    CHECK(dlnu_dr_from_slope(-1.5, r, n) > 0.0);
    CHECK(slope_from_dlnu_dr(-(n - 2) / r, r, n) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(slope_from_dlnu_dr(0.0, r, n) == -1.0);
}

TEST_CASE("sigma_k in cylinder variables") {
    for (int k = 2; k <= 5; ++k) {
        CHECK(sigma_k_radial({0.0, 0.3, 1.0, 5.0}, 7, k) == 0.0);
        CHECK(sigma_k_radial({0.0, -0.7, -1.0, -2.0}, 7, k) == 0.0);
    }
    CHECK_THROWS_AS(sigma_k_radial({0.0, 0.0, 2.0, std::nullopt}, 7, 2), ArgumentError);

    // Choose xi'' so that the bracket matches the equation; sigma_k is then the target.
    for (int n : {3, 5, 7, 9}) {
        for (int k = 2; k <= n; ++k) {
            const double xi = 0.2, xp = -1.8;
            const double w = 1.0 - xp * xp;
            const double bracket =
                (k % 2 == 0 ? 1.0 : -1.0) * n / (2.0 * k) * std::exp(-2.0 * k * xi) * std::pow(w, 1 - k);
            const double xpp = bracket - (n - 2.0 * k) / (2.0 * k) * w;
            const double target = oracle::binomial(n, k) / std::pow(2.0, k);
            CHECK(sigma_k_radial({0.0, xi, xp, xpp}, n, k) == doctest::Approx(target).epsilon(1e-12));
        }
    }
}

TEST_CASE("first integral") {
    CHECK(first_integral(0.4, 1.0, 7, 2) == doctest::Approx(-std::exp(-7 * 0.4)).epsilon(1e-15));
    CHECK(first_integral(0.4, -1.0, 7, 3) == doctest::Approx(std::exp(-7 * 0.4)).epsilon(1e-15));
    CHECK(std::abs(first_integral(0.0, std::sqrt(2.0), 7, 2)) < 1e-15);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 100; ++i) {
        const double x = u(rng), q = u(rng);
        CHECK(first_integral(x, q, 6, 3) == first_integral(x, -q, 6, 3));
    }
}

TEST_CASE("level set") {
    const int n = 7, k = 2;
    const auto lv = LevelSet::from_peak(0.3, n, k);
    CHECK(lv.has_peak());
    CHECK(lv.peak_xi() == 0.3);
    CHECK(lv.bracket(0.3) == 0.0);
    CHECK(lv.speed(0.3) == 1.0);
    CHECK_THROWS_AS(lv.speed(0.31), DomainError);
    CHECK(lv.xi_pp(0.3) == -std::numeric_limits<double>::infinity());
    // The level through a state contains it.
    const double xi = -0.4, q = -2.3;
    const auto through = LevelSet::from_state(xi, q, n, k);
    CHECK(through.speed(xi) == doctest::Approx(2.3).epsilon(1e-14));
    // H > 0 for even k has no fold.
    const LevelSet up(1.5, n, k);
    CHECK_FALSE(up.has_peak());
    CHECK_THROWS_AS(up.peak_xi(), DomainError);

    // xi'' from the first integral matches d/dt of the speed law.
    const double h = 1e-6;
    const double dq = (through.speed(xi + h) - through.speed(xi - h)) / (2 * h);
    CHECK(through.xi_pp(xi) == doctest::Approx(dq * through.speed(xi)).epsilon(1e-8));
}

TEST_CASE("ambient oracle matches the cylinder formula") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ux(-1.0, 1.0), uq(-3.0, 3.0), ur(0.5, 2.0);
    int compared = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 3 + trial % 6;
        const int k = 2 + trial % (n - 1);
        const double xi = ux(rng), xp = uq(rng), xpp = uq(rng), r0 = ur(rng);
        if (std::abs(std::abs(xp) - 1.0) < 0.1) continue;
        const double s = sigma_k_radial({0.0, xi, xp, xpp}, n, k);
        AmbientSample sample;
        sample.r = r0;
        sample.u = quadratic_profile(r0, xi, xp, xpp, n);
        const auto res = ambient_oracle_sigma_k(sample, n, k);
        CHECK_FALSE(res.precision_warning);
        const double scale = std::abs(sigma_k_radial({0.0, xi, xp, std::abs(xpp) + std::abs(1 - xp * xp)}, n, k));
        CHECK(std::abs(res.sigma_k - s) <= 1e-6 * std::max(scale, std::abs(s)));
        ++compared;
    }
    CHECK(compared > 40);
}

TEST_CASE("ambient oracle cone membership matches the cylinder test") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ux(-1.0, 1.0), uq(-3.0, 3.0), ur(0.5, 2.0);
    int agree = 0, total = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 3 + trial % 6;
        const int k = 2 + trial % (n - 1);
        const double xi = ux(rng), xp = uq(rng), xpp = uq(rng), r0 = ur(rng);
        if (std::abs(std::abs(xp) - 1.0) < 0.05) continue;
        const double s = sigma_k_radial({0.0, xi, xp, xpp}, n, k);
        const double scale = std::abs(sigma_k_radial({0.0, xi, xp, std::abs(xpp) + std::abs(1 - xp * xp)}, n, k));
        if (std::abs(s) < 1e-3 * scale) continue;
        AmbientSample sample;
        sample.r = r0;
        sample.u = quadratic_profile(r0, xi, xp, xpp, n);
        const auto res = ambient_oracle_sigma_k(sample, n, k);
        const bool cylinder_says = s > 0.0 && std::abs(xp) > 1.0;
        ++total;
        if (res.in_cone == cylinder_says) ++agree;
    }
    CHECK(total > 200);
    CHECK(agree == total);
}

TEST_CASE("ambient oracle flags coarse steps") {
    AmbientSample sample;
    sample.r = 1.0;
    sample.h = 0.05;
    sample.u = quadratic_profile(1.0, 0.0, 0.0, 0.0, 5);
    const auto res = ambient_oracle_sigma_k(sample, 5, 2);
    CHECK(res.precision_warning);
    // xi constant: the cylinder formula with xi' = xi'' = 0.
    sample.h = 0.0;
    const auto fine = ambient_oracle_sigma_k(sample, 5, 2);
    const double ref = sigma_k_radial({0.0, 0.0, 0.0, 0.0}, 5, 2);
    CHECK(fine.sigma_k == doctest::Approx(ref).epsilon(1e-7));
}
