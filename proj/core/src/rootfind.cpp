#include "skln/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "skln/errors.hpp"
#include "skln/quadrature.hpp"

namespace skln {

namespace {

constexpr double kMaxAbsP = 100.0;

bool narrow(double lo, double hi, double xtol) {
    const double scale = std::max(std::abs(lo), std::abs(hi));
    return hi - lo <= xtol + 4.0 * std::numeric_limits<double>::epsilon() * scale;
}

void check_bracket(const Bracket& b) {
    if (!(b.lo < b.hi)) {
        throw ArgumentError("bracket requires lo < hi");
    }
    if (b.f_lo * b.f_hi > 0.0) {
        throw ArgumentError("bracket endpoints do not change sign");
    }
}

double quad_tol_for(double tol) {
    return std::max(1e-3 * tol, 1e-14);
}

}  // namespace

double solve_bracketed(const std::function<double(double)>& f, Bracket b,
                       const RootOptions& options) {
    check_bracket(b);
    if (b.f_lo == 0.0) return b.lo;
    if (b.f_hi == 0.0) return b.hi;
    int side = 0;
    for (int it = 0; it < options.max_iterations; ++it) {
        double x = (b.lo * b.f_hi - b.hi * b.f_lo) / (b.f_hi - b.f_lo);
        // Bisect if false position lands on (or outside) an endpoint.
        if (!(x > b.lo && x < b.hi)) {
            x = 0.5 * (b.lo + b.hi);
        }
        const double fx = f(x);
        if (std::abs(fx) <= options.ftol) return x;
        if ((fx < 0.0) == (b.f_lo < 0.0)) {
            b.lo = x;
            b.f_lo = fx;
            if (side == -1) b.f_hi *= 0.5;
            side = -1;
        } else {
            b.hi = x;
            b.f_hi = fx;
            if (side == 1) b.f_lo *= 0.5;
            side = 1;
        }
        if (narrow(b.lo, b.hi, options.xtol)) break;
    }
    return std::abs(b.f_lo) < std::abs(b.f_hi) ? b.lo : b.hi;
}

double bisect(const std::function<double(double)>& f, Bracket b, const RootOptions& options) {
    check_bracket(b);
    if (b.f_lo == 0.0) return b.lo;
    if (b.f_hi == 0.0) return b.hi;
    for (int it = 0; it < options.max_iterations; ++it) {
        const double x = 0.5 * (b.lo + b.hi);
        const double fx = f(x);
        if (std::abs(fx) <= options.ftol) return x;
        if ((fx < 0.0) == (b.f_lo < 0.0)) {
            b.lo = x;
            b.f_lo = fx;
        } else {
            b.hi = x;
            b.f_hi = fx;
        }
        if (narrow(b.lo, b.hi, options.xtol)) break;
    }
    return std::abs(b.f_lo) < std::abs(b.f_hi) ? b.lo : b.hi;
}

double solve_p_for_T(double target, int n, int k, double tol) {
    if (!(target > 0.0) || !std::isfinite(target)) {
        throw ArgumentError("solve_p_for_T: target time must be positive and finite");
    }
    if (!(tol > 0.0)) {
        throw ArgumentError("solve_p_for_T: tolerance must be positive");
    }
    const double qtol = quad_tol_for(tol);
    auto f = [&](double p) { return T_of_p(p, n, k, qtol).value - target; };

    Bracket b{0.0, 0.0, f(0.0), 0.0};
    if (b.f_lo == 0.0) return 0.0;
    const bool go_up = b.f_lo < 0.0;
    double step = 1.0;
    double x = 0.0;
    double fx = b.f_lo;
    while ((fx < 0.0) == go_up) {
        const double next = go_up ? x + step : x - step;
        if (std::abs(next) > kMaxAbsP) {
            throw UnboundedBracketError("solve_p_for_T: bracket expansion exceeded |p| > 100");
        }
        const double fn = f(next);
        if ((fn < 0.0) != go_up || fn == 0.0) {
            if (go_up) {
                b = {x, next, fx, fn};
            } else {
                b = {next, x, fn, fx};
            }
            break;
        }
        x = next;
        fx = fn;
        step *= 2.0;
    }
    RootOptions opts;
    opts.ftol = 0.1 * tol;
    return solve_bracketed(f, b, opts);
}

QaSolution solve_qa(const ProblemSpec& spec, double tol) {
    if (spec.is_infinite()) {
        throw ArgumentError("solve_qa: requires finite boundary data");
    }
    const int n = spec.n();
    const int k = spec.k();
    const double pa = spec.p_a();
    const double pb = spec.p_b();
    if (pa < pb) {
        throw RegimeError("solve_qa: requires p_a >= p_b; invert the data first");
    }
    const double L = spec.log_ratio();
    const double Tbc = T_bc(spec, 1e-14).quad.value;
    if (!(0.5 * L < Tbc)) {
        throw RegimeError("solve_qa: ln(b/a) >= 2 T_bc, the smooth case does not apply");
    }
    const double qtol = quad_tol_for(tol);
    const double s0 = -std::exp(-n * pa);
    // Time spent crossing [p_b, p_a]: decreasing in s, equal to 2 T_bc at s0.
    auto f = [&](double s) {
        if (s == s0 && pa == pb) return -L;
        return transit_time(pb, pa, s, n, k, qtol).value - L;
    };
    Bracket b{s0, 0.0, 2.0 * Tbc - L, 0.0};
    double step = std::max(std::abs(s0), 1e-300);
    for (;;) {
        const double hi = s0 + step;
        const double fh = f(hi);
        if (fh <= 0.0) {
            b.hi = hi;
            b.f_hi = fh;
            break;
        }
        b.lo = hi;
        b.f_lo = fh;
        if (!std::isfinite(step * 4.0)) {
            throw UnboundedBracketError("solve_qa: bracket expansion overflowed");
        }
        step *= 4.0;
    }
    RootOptions opts;
    opts.ftol = 0.1 * tol;
    const double s = solve_bracketed(f, b, opts);
    QaSolution out;
    out.s = s;
    out.H = (k % 2 == 0) ? s : -s;
    const double lift = (s - s0) * std::exp((n - 2 * k) * pa);
    out.q_a = -std::sqrt(1.0 + std::pow(std::max(lift, 0.0), 1.0 / k));
    return out;
}

GlueTimes glue_times(double p, const ProblemSpec& spec, double tol) {
    const double pa = spec.p_a();
    const double pb = spec.p_b();
    const double top = std::max(pa, pb);
    if (p < top - 1e-12 * std::max(1.0, std::abs(top))) {
        throw DomainError("glue_times: fold level lies below a boundary value");
    }
    const int n = spec.n();
    const int k = spec.k();
    GlueTimes g;
    g.t_plus = 0.5 * kernel_integral(std::min(pb - p, 0.0), 0.0, p, n, k, 2.0 * tol).value;
    g.t_minus = 0.5 * kernel_integral(std::min(pa - p, 0.0), 0.0, p, n, k, 2.0 * tol).value;
    return g;
}

double solve_p_case4(const ProblemSpec& spec, double tol) {
    const double L = spec.log_ratio();
    if (spec.is_infinite()) {
        return solve_p_for_T(0.5 * L, spec.n(), spec.k(), tol);
    }
    const double qtol = quad_tol_for(tol);
    auto f = [&](double p) {
        const GlueTimes g = glue_times(p, spec, 0.5 * qtol);
        return 2.0 * (g.t_plus + g.t_minus) - L;
    };
    const double p0 = std::max(spec.p_a(), spec.p_b());
    const double f0 = f(p0);
    if (f0 > 0.1 * tol) {
        throw RegimeError("solve_p_case4: ln(b/a) <= 2 T_bc, no interior fold exists");
    }
    if (f0 >= -0.1 * tol) {
        return p0;
    }
    // Smallest sign change: expand upward and keep the last negative point.
    double lo = p0;
    double flo = f0;
    double step = 1.0;
    for (;;) {
        const double hi = lo + step;
        if (std::abs(hi) > kMaxAbsP + std::abs(p0)) {
            throw UnboundedBracketError("solve_p_case4: bracket expansion did not close");
        }
        const double fh = f(hi);
        if (fh >= 0.0) {
            RootOptions opts;
            opts.ftol = 0.1 * tol;
            opts.max_iterations = 200;
            return bisect(f, {lo, hi, flo, fh}, opts);
        }
        lo = hi;
        flo = fh;
        step *= 2.0;
    }
}

double matching_radius(double p, const ProblemSpec& spec) {
    const double c = std::sqrt(spec.a() * spec.b());
    if (spec.is_infinite()) {
        return c;
    }
    const GlueTimes g = glue_times(p, spec);
    return c * std::exp(g.t_minus - g.t_plus);
}

}  // namespace skln
